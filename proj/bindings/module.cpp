// Python bindings for the ptsad core. Thin wrappers only: every operation is
// implemented in the C++ library and exposed here with pythonic containers.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "ptsad/classify.hpp"
#include "ptsad/cluster.hpp"
#include "ptsad/compress.hpp"
#include "ptsad/errors.hpp"
#include "ptsad/keypoints.hpp"
#include "ptsad/pipeline.hpp"
#include "ptsad/segment.hpp"
#include "ptsad/series.hpp"
#include "ptsad/stability.hpp"

namespace py = pybind11;
using namespace pybind11::literals;
using namespace ptsad;

namespace {

TimeSeries series_from_pairs(const std::vector<std::pair<double, double>>& pairs) {
    TimeSeries ts;
    ts.points.reserve(pairs.size());
    for (const auto& [t, v] : pairs) ts.points.push_back({t, v});
    validate_series(ts);
    return ts;
}

}  // namespace

PYBIND11_MODULE(_ptsad, m) {
    m.doc() = "Anomaly detection for uncertain pseudo-periodic time series";

    py::register_exception<ParseError>(m, "ParseError");
    py::register_exception<OrderingError>(m, "OrderingError");
    py::register_exception<ValueError>(m, "DataValueError");
    py::register_exception<GeometryError>(m, "GeometryError");
    py::register_exception<ContractError>(m, "ContractError");

    py::class_<Point>(m, "Point")
        .def(py::init<double, double>(), "t"_a = 0.0, "v"_a = 0.0)
        .def_readwrite("t", &Point::t)
        .def_readwrite("v", &Point::v)
        .def("__repr__", [](const Point& p) {
            std::ostringstream os;
            os << "Point(t=" << p.t << ", v=" << p.v << ")";
            return os.str();
        });

    py::enum_<Label>(m, "Label").value("N", Label::N).value("Ab", Label::Ab);
    m.def("label_name", &label_name, "label"_a);
    m.def("parse_label", &parse_label, "token"_a);

    py::class_<TimeSeries>(m, "TimeSeries")
        .def(py::init<>())
        .def(py::init(&series_from_pairs), "points"_a,
             "Build a validated series from (t, v) pairs.")
        .def_readwrite("points", &TimeSeries::points)
        .def("__len__", &TimeSeries::size)
        .def("__getitem__",
             [](const TimeSeries& ts, std::size_t i) {
                 if (i >= ts.size()) throw py::index_error();
                 return ts[i];
             });

    py::class_<LabelEvent>(m, "LabelEvent")
        .def(py::init<double, Label>(), "t"_a = 0.0, "label"_a = Label::N)
        .def_readwrite("t", &LabelEvent::t)
        .def_readwrite("label", &LabelEvent::label);

    py::class_<LabelTrack>(m, "LabelTrack")
        .def(py::init<>())
        .def(py::init([](std::vector<LabelEvent> events) {
                 LabelTrack track;
                 track.events = std::move(events);
                 validate_track(track);
                 return track;
             }),
             "events"_a)
        .def_readwrite("events", &LabelTrack::events);

    py::class_<SynthConfig>(m, "SynthConfig")
        .def(py::init<>())
        .def_readwrite("n_periods", &SynthConfig::n_periods)
        .def_readwrite("base_period_len", &SynthConfig::base_period_len)
        .def_readwrite("amplitude", &SynthConfig::amplitude)
        .def_readwrite("anomaly_rate", &SynthConfig::anomaly_rate)
        .def_readwrite("jitter", &SynthConfig::jitter)
        .def_readwrite("dropout_rate", &SynthConfig::dropout_rate)
        .def_readwrite("peak_noise", &SynthConfig::peak_noise)
        .def_readwrite("seed", &SynthConfig::seed);

    py::class_<SynthResult>(m, "SynthResult")
        .def_readonly("series", &SynthResult::series)
        .def_readonly("labels", &SynthResult::labels)
        .def_readonly("boundaries", &SynthResult::boundaries)
        .def_readonly("dropped_points", &SynthResult::dropped_points);

    m.def("synth_pts", &synth_pts, "config"_a,
          "Generate a synthetic pseudo-periodic series with ground truth.");

    m.def("save_series", &save_series, "series"_a, "path"_a);
    m.def("load_series", &load_series, "path"_a);
    m.def("save_labels", &save_labels, "track"_a, "path"_a);
    m.def("load_labels", &load_labels, "path"_a);

    py::class_<AxisScale>(m, "AxisScale")
        .def(py::init<double, double>(), "t_scale"_a = 1.0, "v_scale"_a = 1.0)
        .def_readwrite("t_scale", &AxisScale::t_scale)
        .def_readwrite("v_scale", &AxisScale::v_scale);

    py::enum_<PointOrigin>(m, "PointOrigin")
        .value("Observed", PointOrigin::Observed)
        .value("Recovered", PointOrigin::Recovered);

    py::class_<KeyPoint>(m, "KeyPoint")
        .def(py::init<double, double, PointOrigin>(), "t"_a = 0.0, "v"_a = 0.0,
             "origin"_a = PointOrigin::Observed)
        .def_readwrite("t", &KeyPoint::t)
        .def_readwrite("v", &KeyPoint::v)
        .def_readwrite("origin", &KeyPoint::origin);

    py::class_<KeyPointSeries>(m, "KeyPointSeries")
        .def(py::init<>())
        .def_readwrite("points", &KeyPointSeries::points)
        .def_readwrite("epsilon", &KeyPointSeries::epsilon)
        .def("__len__", &KeyPointSeries::size);

    m.def("turning_angle", &turning_angle, "prev"_a, "mid"_a, "next"_a,
          "scale"_a = AxisScale{});
    m.def("detect_keypoints", &detect_keypoints, "series"_a, "epsilon"_a,
          "scale"_a = AxisScale{});

    py::enum_<RecoverKind>(m, "RecoverKind")
        .value("KeepP2", RecoverKind::KeepP2)
        .value("KeepP3", RecoverKind::KeepP3)
        .value("KeepBoth", RecoverKind::KeepBoth)
        .value("Insert", RecoverKind::Insert)
        .value("KeepBothNoInsert", RecoverKind::KeepBothNoInsert);

    py::class_<RecoverDecision>(m, "RecoverDecision")
        .def_readonly("kind", &RecoverDecision::kind)
        .def_readonly("inserted", &RecoverDecision::inserted);

    m.def("recover_missing", &recover_missing, "p1"_a, "p2"_a, "p3"_a, "p4"_a,
          "epsilon"_a, "scale"_a = AxisScale{});
    m.def("correct_series", &correct_series, "series"_a, "epsilon"_a,
          "scale"_a = AxisScale{},
          "Detect inflexions and deduce missing ones from four-point windows.");
    m.def("save_keypoints", &save_keypoints, "points"_a, "path"_a, "with_origin"_a = true);
    m.def("load_keypoints", &load_keypoints, "path"_a);

    py::class_<CompressedSeries>(m, "CompressedSeries")
        .def(py::init<>())
        .def_readwrite("points", &CompressedSeries::points)
        .def_readwrite("lambda_", &CompressedSeries::lambda)
        .def("__len__", &CompressedSeries::size);

    m.def("perpendicular_distance", &perpendicular_distance, "p"_a, "a"_a, "b"_a,
          "scale"_a = AxisScale{});
    m.def("segment_distance", &segment_distance, "p"_a, "a"_a, "b"_a,
          "scale"_a = AxisScale{});
    m.def("dp_compress", &dp_compress, "keypoints"_a, "lambda_"_a, "scale"_a = AxisScale{},
          "Douglas-Peucker simplification with deterministic ties.");

    py::class_<FeatureVector>(m, "FeatureVector")
        .def_readonly("vdiff1", &FeatureVector::vdiff1)
        .def_readonly("vdiff2", &FeatureVector::vdiff2)
        .def_readonly("tdiff1", &FeatureVector::tdiff1)
        .def_readonly("tdiff2", &FeatureVector::tdiff2);

    m.def("feature_vectors", &feature_vectors, "cts"_a);
    m.def("feature_matrix", &feature_matrix, "cts"_a);

    py::class_<Clustering>(m, "Clustering")
        .def_readonly("k", &Clustering::k)
        .def_readonly("assignments", &Clustering::assignments)
        .def_readonly("centers", &Clustering::centers)
        .def_readonly("objective", &Clustering::objective)
        .def_readonly("per_point_sil", &Clustering::per_point_sil)
        .def_readonly("per_cluster_msil", &Clustering::per_cluster_msil)
        .def_readonly("overall_msil", &Clustering::overall_msil);

    py::class_<PeriodSelection>(m, "PeriodSelection")
        .def_readonly("eta", &PeriodSelection::eta)
        .def_readonly("xi", &PeriodSelection::xi)
        .def_readonly("chosen_cluster", &PeriodSelection::chosen_cluster)
        .def_readonly("period_point_indices", &PeriodSelection::period_point_indices)
        .def("selected", &PeriodSelection::selected);

    py::class_<SweepResultK>(m, "SweepResultK")
        .def_readonly("k", &SweepResultK::k)
        .def_readonly("clustering", &SweepResultK::clustering)
        .def_readonly("selection", &SweepResultK::selection);

    m.def("silhouette", &silhouette, "i"_a, "assignments"_a, "points"_a, "k"_a);
    m.def("select_period_cluster", &select_period_cluster, "clustering"_a, "eta"_a, "xi"_a);
    m.def("sweep_k", &sweep_k, "points"_a, "k_min"_a, "k_max"_a, "eta"_a, "xi"_a,
          "seed"_a, "restarts"_a = 8,
          "k-means++ over a k range, validated by mean silhouette.");

    py::class_<Period>(m, "Period")
        .def_readonly("points", &Period::points)
        .def_readonly("index", &Period::index);

    py::class_<PeriodSummary>(m, "PeriodSummary")
        .def_readonly("h_min", &PeriodSummary::h_min)
        .def_readonly("t_min", &PeriodSummary::t_min)
        .def_readonly("h_max", &PeriodSummary::h_max)
        .def_readonly("t_max", &PeriodSummary::t_max)
        .def_readonly("h_mean", &PeriodSummary::h_mean)
        .def_readonly("p_minmax", &PeriodSummary::p_minmax)
        .def_readonly("p_l", &PeriodSummary::p_l);

    py::class_<AnnotatedPeriod>(m, "AnnotatedPeriod")
        .def_readonly("summary", &AnnotatedPeriod::summary)
        .def_readonly("annotation", &AnnotatedPeriod::annotation)
        .def_readonly("t_start", &AnnotatedPeriod::t_start)
        .def_readonly("t_end", &AnnotatedPeriod::t_end);

    m.def("split_periods", &split_periods, "cts"_a, "period_point_indices"_a);
    m.def("summarize_period", &summarize_period, "period"_a);
    m.def("logical_multiply", &logical_multiply, "labels"_a);
    m.def("annotate_period", &annotate_period, "period"_a, "track"_a);
    m.def("summarize_and_annotate", &summarize_and_annotate, "periods"_a, "track"_a);
    m.def("save_periods", &save_periods, "periods"_a, "path"_a);
    m.def("load_periods", &load_periods, "path"_a);

    py::class_<ConfusionCounts>(m, "ConfusionCounts")
        .def(py::init([](std::size_t tp, std::size_t tn, std::size_t fp, std::size_t fn) {
                 return ConfusionCounts{tp, tn, fp, fn};
             }),
             "tp"_a = 0, "tn"_a = 0, "fp"_a = 0, "fn"_a = 0)
        .def_readwrite("tp", &ConfusionCounts::tp)
        .def_readwrite("tn", &ConfusionCounts::tn)
        .def_readwrite("fp", &ConfusionCounts::fp)
        .def_readwrite("fn", &ConfusionCounts::fn)
        .def("total", &ConfusionCounts::total);

    py::class_<Metrics>(m, "Metrics")
        .def_readonly("acc", &Metrics::acc)
        .def_readonly("sen", &Metrics::sen)
        .def_readonly("spe", &Metrics::spe)
        .def_readonly("pre", &Metrics::pre)
        .def_readonly("fmea", &Metrics::fmea);

    m.def("compute_metrics", &compute_metrics, "counts"_a);

    py::enum_<ClassifierKind>(m, "ClassifierKind")
        .value("Gnb", ClassifierKind::Gnb)
        .value("Lda", ClassifierKind::Lda)
        .value("Tree", ClassifierKind::Tree)
        .value("Forest", ClassifierKind::Forest);
    m.def("parse_classifier", &parse_classifier, "name"_a);
    m.def("classifier_name", &classifier_name, "kind"_a);

    py::class_<Sample>(m, "Sample")
        .def(py::init([](std::vector<double> features, Label label) {
                 return Sample{std::move(features), label};
             }),
             "features"_a, "label"_a = Label::N)
        .def_readwrite("features", &Sample::features)
        .def_readwrite("label", &Sample::label);

    py::class_<ClassifierParams>(m, "ClassifierParams")
        .def(py::init<>())
        .def_readwrite("n_trees", &ClassifierParams::n_trees)
        .def_readwrite("max_depth", &ClassifierParams::max_depth)
        .def_readwrite("min_leaf", &ClassifierParams::min_leaf)
        .def_readwrite("bootstrap", &ClassifierParams::bootstrap)
        .def_readwrite("mtry", &ClassifierParams::mtry)
        .def_readwrite("standardize", &ClassifierParams::standardize)
        .def_readwrite("seed", &ClassifierParams::seed);

    py::class_<CvResult>(m, "CvResult")
        .def_readonly("pooled", &CvResult::pooled)
        .def_readonly("pooled_counts", &CvResult::pooled_counts)
        .def_readonly("folds", &CvResult::folds)
        .def_readonly("skipped_folds", &CvResult::skipped_folds);

    m.def("kfold_cv", &kfold_cv, "dataset"_a, "k"_a, "kind"_a,
          "params"_a = ClassifierParams{},
          "Stratified k-fold cross validation with pooled confusion counts.");

    py::class_<SweepResult>(m, "SweepResult")
        .def_readonly("parameter_values", &SweepResult::parameter_values)
        .def_readonly("counts", &SweepResult::counts);

    py::enum_<MonotoneDirection>(m, "MonotoneDirection")
        .value("Decreasing", MonotoneDirection::Decreasing)
        .value("Increasing", MonotoneDirection::Increasing);

    m.def("monotonicity_index", &monotonicity_index, "sweep"_a, "direction"_a);
    m.def("sweep_epsilon", &sweep_epsilon, "series"_a, "epsilons"_a, "scale"_a = AxisScale{});
    m.def("sweep_lambda", &sweep_lambda, "series"_a, "epsilon"_a, "lambdas"_a,
          "scale"_a = AxisScale{});

    py::class_<StabilityRun>(m, "StabilityRun")
        .def_readonly("deletion_step", &StabilityRun::deletion_step)
        .def_readonly("levels", &StabilityRun::levels)
        .def_readonly("level_shift_terms", &StabilityRun::level_shift_terms)
        .def_readonly("breakpoint_counts", &StabilityRun::breakpoint_counts)
        .def_readonly("remaining_lengths", &StabilityRun::remaining_lengths)
        .def_readonly("skipped_levels", &StabilityRun::skipped_levels)
        .def_readonly("score", &StabilityRun::score);

    m.def("endpoint_stability", &endpoint_stability, "series"_a, "epsilon"_a, "lambda_"_a,
          "deletion_step"_a, "levels"_a, "scale"_a = AxisScale{});
    m.def("angle_features", &angle_features, "cts"_a, "scale"_a = AxisScale{});
    m.def("angle_baseline", &angle_baseline, "cts"_a, "k_min"_a, "k_max"_a, "eta"_a,
          "xi"_a, "seed"_a, "restarts"_a = 8, "scale"_a = AxisScale{});
    m.def("valley_baseline", &valley_baseline, "series"_a, "u0"_a, "alpha"_a);

    py::enum_<BaselineKind>(m, "BaselineKind")
        .value("Fv", BaselineKind::Fv)
        .value("Angle", BaselineKind::Angle)
        .value("Valley", BaselineKind::Valley);

    py::enum_<SilhouetteSpace>(m, "SilhouetteSpace")
        .value("Feature", SilhouetteSpace::Feature)
        .value("Raw", SilhouetteSpace::Raw);

    py::class_<PipelineConfig>(m, "PipelineConfig")
        .def(py::init<>())
        .def_readwrite("epsilon", &PipelineConfig::epsilon)
        .def_readwrite("lambda_", &PipelineConfig::lambda)
        .def_readwrite("t_scale", &PipelineConfig::t_scale)
        .def_readwrite("v_scale", &PipelineConfig::v_scale)
        .def_readwrite("k_min", &PipelineConfig::k_min)
        .def_readwrite("k_max", &PipelineConfig::k_max)
        .def_readwrite("eta", &PipelineConfig::eta)
        .def_readwrite("xi", &PipelineConfig::xi)
        .def_readwrite("restarts", &PipelineConfig::restarts)
        .def_readwrite("classifier", &PipelineConfig::classifier)
        .def_readwrite("cv_folds", &PipelineConfig::cv_folds)
        .def_readwrite("seed", &PipelineConfig::seed)
        .def_readwrite("baseline", &PipelineConfig::baseline)
        .def_readwrite("valley_u0", &PipelineConfig::valley_u0)
        .def_readwrite("valley_alpha", &PipelineConfig::valley_alpha)
        .def_readwrite("sil_space", &PipelineConfig::sil_space);

    m.def("validate_config", &validate_config, "config"_a);
    m.def("load_config", &load_config, "path"_a);
    m.def("config_canonical", &config_canonical, "config"_a);
    m.def("config_hash", &config_hash, "config"_a);

    py::class_<PipelineReport>(m, "PipelineReport")
        .def_readonly("raw_count", &PipelineReport::raw_count)
        .def_readonly("keypoint_count", &PipelineReport::keypoint_count)
        .def_readonly("recovered_count", &PipelineReport::recovered_count)
        .def_readonly("cts_count", &PipelineReport::cts_count)
        .def_readonly("period_count", &PipelineReport::period_count)
        .def_readonly("chosen_k", &PipelineReport::chosen_k)
        .def_readonly("overall_msil", &PipelineReport::overall_msil)
        .def_readonly("chosen_cluster_msil", &PipelineReport::chosen_cluster_msil)
        .def_readonly("cv", &PipelineReport::cv);

    m.def("run_pipeline", &run_pipeline, "series_path"_a, "labels_path"_a, "config"_a,
          "out_dir"_a,
          "Correct, compress, cluster, segment, annotate and classify; writes "
          "keypoints.csv, cts.csv, periods.csv, metrics.json and manifest.json.");
    m.def("metrics_json", &metrics_json, "cv"_a, "classifier"_a, "folds"_a);
}
