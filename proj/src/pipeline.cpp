#include "ptsad/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ptsad/compress.hpp"
#include "ptsad/errors.hpp"
#include "ptsad/segment.hpp"
#include "ptsad/stability.hpp"

namespace ptsad {

using json = nlohmann::ordered_json;

BaselineKind parse_baseline(const std::string& name) {
    if (name == "fv") return BaselineKind::Fv;
    if (name == "angle") return BaselineKind::Angle;
    if (name == "valley") return BaselineKind::Valley;
    throw ValueError("unknown baseline '" + name + "'");
}

const char* baseline_name(BaselineKind kind) {
    switch (kind) {
        case BaselineKind::Fv: return "fv";
        case BaselineKind::Angle: return "angle";
        case BaselineKind::Valley: return "valley";
    }
    return "?";
}

void validate_config(const PipelineConfig& cfg) {
    if (!(cfg.epsilon > 0.0)) throw ContractError("epsilon must be positive");
    if (!(cfg.lambda >= 0.0)) throw ContractError("lambda must be >= 0");
    if (!(cfg.t_scale > 0.0 && cfg.v_scale > 0.0)) throw ContractError("axis scales must be positive");
    if (cfg.k_min < 2 || cfg.k_max < cfg.k_min) throw ContractError("bad k range");
    if (!(cfg.eta >= 0.0 && cfg.eta <= 1.0)) throw ContractError("eta must be in [0,1]");
    if (!(cfg.xi >= 0.0 && cfg.xi <= 1.0)) throw ContractError("xi must be in [0,1]");
    if (cfg.restarts < 1) throw ContractError("restarts must be >= 1");
    if (cfg.cv_folds < 2) throw ContractError("cv_folds must be >= 2");
}

namespace {

double parse_double(const std::string& value, const std::string& key) {
    double x = 0.0;
    auto res = std::from_chars(value.data(), value.data() + value.size(), x);
    if (res.ec != std::errc{} || res.ptr != value.data() + value.size())
        throw ParseError("bad numeric value for '" + key + "': '" + value + "'");
    return x;
}

long parse_long(const std::string& value, const std::string& key) {
    long x = 0;
    auto res = std::from_chars(value.data(), value.data() + value.size(), x);
    if (res.ec != std::errc{} || res.ptr != value.data() + value.size())
        throw ParseError("bad integer value for '" + key + "': '" + value + "'");
    return x;
}

}  // namespace

PipelineConfig apply_config_entries(PipelineConfig cfg,
                                    const std::map<std::string, std::string>& entries) {
    for (const auto& [key, value] : entries) {
        if (key == "epsilon") cfg.epsilon = parse_double(value, key);
        else if (key == "lambda") cfg.lambda = parse_double(value, key);
        else if (key == "t_scale") cfg.t_scale = parse_double(value, key);
        else if (key == "v_scale") cfg.v_scale = parse_double(value, key);
        else if (key == "k_min") cfg.k_min = static_cast<int>(parse_long(value, key));
        else if (key == "k_max") cfg.k_max = static_cast<int>(parse_long(value, key));
        else if (key == "eta") cfg.eta = parse_double(value, key);
        else if (key == "xi") cfg.xi = parse_double(value, key);
        else if (key == "restarts") cfg.restarts = static_cast<int>(parse_long(value, key));
        else if (key == "classifier") cfg.classifier = parse_classifier(value);
        else if (key == "cv_folds") cfg.cv_folds = static_cast<int>(parse_long(value, key));
        else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(parse_long(value, key));
        else if (key == "baseline") cfg.baseline = parse_baseline(value);
        else if (key == "valley_u0") cfg.valley_u0 = parse_double(value, key);
        else if (key == "valley_alpha") cfg.valley_alpha = parse_double(value, key);
        else if (key == "sil_space") {
            if (value == "feature") cfg.sil_space = SilhouetteSpace::Feature;
            else if (value == "raw") cfg.sil_space = SilhouetteSpace::Raw;
            else throw ValueError("sil_space must be 'feature' or 'raw'");
        } else {
            throw ParseError("unknown config key '" + key + "'");
        }
    }
    validate_config(cfg);
    return cfg;
}

PipelineConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValueError("cannot open config '" + path + "'");
    std::map<std::string, std::string> entries;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line[0] == '#') continue;
        const std::size_t eq = line.find('=');
        if (eq == std::string::npos)
            throw ParseError("config line " + std::to_string(line_no) + ": expected key=value");
        entries[line.substr(0, eq)] = line.substr(eq + 1);
    }
    return apply_config_entries(PipelineConfig{}, entries);
}

std::string config_canonical(const PipelineConfig& cfg) {
    std::map<std::string, std::string> kv;
    kv["epsilon"] = format_value(cfg.epsilon);
    kv["lambda"] = format_value(cfg.lambda);
    kv["t_scale"] = format_value(cfg.t_scale);
    kv["v_scale"] = format_value(cfg.v_scale);
    kv["k_min"] = std::to_string(cfg.k_min);
    kv["k_max"] = std::to_string(cfg.k_max);
    kv["eta"] = format_value(cfg.eta);
    kv["xi"] = format_value(cfg.xi);
    kv["restarts"] = std::to_string(cfg.restarts);
    kv["classifier"] = classifier_name(cfg.classifier);
    kv["cv_folds"] = std::to_string(cfg.cv_folds);
    kv["seed"] = std::to_string(cfg.seed);
    kv["baseline"] = baseline_name(cfg.baseline);
    kv["valley_u0"] = format_value(cfg.valley_u0);
    kv["valley_alpha"] = format_value(cfg.valley_alpha);
    kv["sil_space"] = cfg.sil_space == SilhouetteSpace::Feature ? "feature" : "raw";
    std::string out;
    for (const auto& [k, v] : kv) {
        out += k;
        out += '=';
        out += v;
        out += '\n';
    }
    return out;
}

std::string config_hash(const PipelineConfig& cfg) {
    const std::string text = config_canonical(cfg);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

namespace {

double round6(double x) { return std::round(x * 1e6) / 1e6; }

json metrics_obj(const Metrics& m) {
    return json{{"acc", round6(m.acc)},
                {"sen", round6(m.sen)},
                {"spe", round6(m.spe)},
                {"pre", round6(m.pre)},
                {"fmea", round6(m.fmea)}};
}

std::vector<std::size_t> valley_cts_indices(const TimeSeries& ts, const CompressedSeries& cts,
                                            double u0, double alpha) {
    const std::vector<std::size_t> raw_idx = valley_baseline(ts, u0, alpha);
    std::vector<std::size_t> cts_idx;
    for (std::size_t ri : raw_idx) {
        const double t = ts[ri].t;
        std::size_t best = 0;
        double best_d = std::abs(cts.points[0].t - t);
        for (std::size_t i = 1; i < cts.size(); ++i) {
            const double d = std::abs(cts.points[i].t - t);
            if (d < best_d) {
                best_d = d;
                best = i;
            }
        }
        if (cts_idx.empty() || best > cts_idx.back()) cts_idx.push_back(best);
    }
    return cts_idx;
}

}  // namespace

std::string metrics_json(const CvResult& cv, ClassifierKind classifier, int folds) {
    json j;
    j["classifier"] = classifier_name(classifier);
    j["k"] = folds;
    j["pooled"] = metrics_obj(cv.pooled);
    j["counts"] = json{{"tp", cv.pooled_counts.tp},
                       {"tn", cv.pooled_counts.tn},
                       {"fp", cv.pooled_counts.fp},
                       {"fn", cv.pooled_counts.fn}};
    j["folds"] = json::array();
    for (const Metrics& m : cv.folds) j["folds"].push_back(metrics_obj(m));
    j["skipped_folds"] = cv.skipped_folds;
    return j.dump(2) + "\n";
}

PipelineReport run_pipeline(const std::string& series_path, const std::string& labels_path,
                            const PipelineConfig& cfg, const std::string& out_dir) {
    validate_config(cfg);
    std::filesystem::create_directories(out_dir);
    const AxisScale scale = cfg.scale();

    auto stage = [](const char* name, auto&& fn) {
        try {
            return fn();
        } catch (const std::exception& e) {
            throw std::runtime_error(std::string("stage ") + name + ": " + e.what());
        }
    };

    const TimeSeries ts = stage("load", [&] { return load_series(series_path); });
    const LabelTrack labels = stage("load", [&] { return load_labels(labels_path); });

    const KeyPointSeries kps =
        stage("keypoints", [&] { return correct_series(ts, cfg.epsilon, scale); });
    const CompressedSeries cts =
        stage("compress", [&] { return dp_compress(kps, cfg.lambda, scale); });

    std::optional<SweepResultK> sweep;
    std::vector<std::size_t> period_indices;
    if (cfg.baseline == BaselineKind::Valley) {
        period_indices = stage("cluster", [&] {
            return valley_cts_indices(ts, cts, cfg.valley_u0, cfg.valley_alpha);
        });
    } else {
        sweep = stage("cluster", [&] {
            auto points = cfg.baseline == BaselineKind::Fv ? feature_matrix(cts)
                                                           : angle_features(cts, scale);
            auto result =
                sweep_k(points, cfg.k_min, cfg.k_max, cfg.eta, cfg.xi, cfg.seed, cfg.restarts);
            if (result && cfg.sil_space == SilhouetteSpace::Raw) {
                std::vector<std::vector<double>> raw;
                for (std::size_t i = 1; i + 1 < cts.size(); ++i)
                    raw.push_back({cts.points[i].t, cts.points[i].v});
                rescore_silhouettes(result->clustering, raw);
            }
            return result;
        });
        if (!sweep)
            throw std::runtime_error(
                "stage cluster: no k in range produced a period cluster (Algorithm-1 "
                "validation failed for every clustering)");
        period_indices = sweep->selection.period_point_indices;
    }

    const std::vector<Period> periods =
        stage("segment", [&] { return split_periods(cts, period_indices); });
    const std::vector<AnnotatedPeriod> annotated =
        stage("annotate", [&] { return summarize_and_annotate(periods, labels); });

    Dataset ds;
    for (const AnnotatedPeriod& ap : annotated) {
        const PeriodSummary& s = ap.summary;
        ds.push_back({{s.h_min, s.t_min, s.h_max, s.t_max, s.h_mean, s.p_minmax, s.p_l},
                      ap.annotation});
    }
    ClassifierParams params;
    params.seed = cfg.seed;
    const int folds = std::min<int>(cfg.cv_folds, static_cast<int>(ds.size()));
    const CvResult cv = stage("classify", [&] {
        return kfold_cv(ds, folds, cfg.classifier, params);
    });

    // artifacts
    namespace fs = std::filesystem;
    const auto path = [&](const char* name) { return (fs::path(out_dir) / name).string(); };
    save_keypoints(kps.points, path("keypoints.csv"), true);
    save_keypoints(cts.points, path("cts.csv"), false);
    save_periods(annotated, path("periods.csv"));
    atomic_write(path("metrics.json"), metrics_json(cv, cfg.classifier, folds));

    PipelineReport report;
    report.raw_count = ts.size();
    report.keypoint_count = kps.size();
    report.recovered_count = static_cast<std::size_t>(
        std::count_if(kps.points.begin(), kps.points.end(),
                      [](const KeyPoint& p) { return p.origin == PointOrigin::Recovered; }));
    report.cts_count = cts.size();
    report.period_count = periods.size();
    if (sweep) {
        report.chosen_k = sweep->k;
        report.overall_msil = sweep->clustering.overall_msil;
        report.chosen_cluster_msil =
            sweep->clustering.per_cluster_msil[static_cast<std::size_t>(
                sweep->selection.chosen_cluster)];
    }
    report.cv = cv;

    json manifest;
    // file names only, so identical runs from different directories stay
    // byte-identical
    manifest["inputs"] =
        json{{"series", std::filesystem::path(series_path).filename().string()},
             {"labels", std::filesystem::path(labels_path).filename().string()}};
    manifest["outputs"] =
        json::array({"keypoints.csv", "cts.csv", "periods.csv", "metrics.json"});
    json cfg_json;
    {
        std::istringstream canon(config_canonical(cfg));
        std::string line;
        while (std::getline(canon, line)) {
            const auto eq = line.find('=');
            cfg_json[line.substr(0, eq)] = line.substr(eq + 1);
        }
    }
    manifest["config"] = cfg_json;
    manifest["config_hash"] = config_hash(cfg);
    manifest["seed"] = cfg.seed;
    manifest["counts"] = json{{"raw", report.raw_count},
                              {"keypoints", report.keypoint_count},
                              {"recovered", report.recovered_count},
                              {"cts", report.cts_count},
                              {"periods", report.period_count}};
    manifest["clustering"] = json{{"chosen_k", report.chosen_k},
                                  {"overall_msil", round6(report.overall_msil)},
                                  {"chosen_cluster_msil", round6(report.chosen_cluster_msil)}};
    atomic_write(path("manifest.json"), manifest.dump(2) + "\n");
    return report;
}

}  // namespace ptsad
