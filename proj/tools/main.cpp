#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ptsad/compress.hpp"
#include "ptsad/errors.hpp"
#include "ptsad/pipeline.hpp"
#include "ptsad/segment.hpp"
#include "ptsad/stability.hpp"

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

std::string default_out_dir() {
    if (const char* env = std::getenv("PTSAD_OUT_DIR")) return env;
    return ".";
}

std::string join(const std::string& dir, const std::string& name) {
    return (fs::path(dir) / name).string();
}

std::vector<double> parse_values(const std::string& csv) {
    std::vector<double> out;
    std::stringstream ss(csv);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(std::stod(cell));
    return out;
}

// Config resolution order: defaults, then --config file, then CLI overrides.
struct ConfigArgs {
    std::string config_path;
    std::map<std::string, std::string> overrides;

    void add_override_option(CLI::App* cmd, const std::string& key, const std::string& desc) {
        cmd->add_option_function<std::string>(
            "--" + key, [this, key](const std::string& v) { overrides[key] = v; }, desc);
    }

    ptsad::PipelineConfig resolve() const {
        ptsad::PipelineConfig cfg;
        if (!config_path.empty()) cfg = ptsad::load_config(config_path);
        return ptsad::apply_config_entries(cfg, overrides);
    }
};

void add_common_config(CLI::App* cmd, ConfigArgs& args) {
    cmd->add_option("--config", args.config_path, "flat key=value config file");
    for (const auto& [key, desc] :
         std::vector<std::pair<std::string, std::string>>{
             {"epsilon", "key-point angle threshold (radians)"},
             {"lambda", "DP distance tolerance"},
             {"t_scale", "time axis scale"},
             {"v_scale", "value axis scale"},
             {"k_min", "minimum cluster count"},
             {"k_max", "maximum cluster count"},
             {"eta", "overall msil threshold"},
             {"xi", "per-cluster msil threshold"},
             {"restarts", "k-means restarts per k"},
             {"classifier", "gnb|lda|tree|forest"},
             {"cv_folds", "cross-validation folds"},
             {"seed", "RNG seed"},
             {"baseline", "fv|angle|valley"},
             {"valley_u0", "valley baseline initial upper bound"},
             {"valley_alpha", "valley baseline outlier control factor"},
             {"sil_space", "feature|raw silhouette space"}})
        args.add_override_option(cmd, key, desc);
}

int dispatch(int argc, char** argv);

}  // namespace

int main(int argc, char** argv) {
    try {
        return dispatch(argc, argv);
    } catch (const ptsad::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const ptsad::OrderingError& e) {
        std::cerr << "ordering error: " << e.what() << "\n";
        return 3;
    } catch (const ptsad::ValueError& e) {
        std::cerr << "value error: " << e.what() << "\n";
        return 4;
    } catch (const ptsad::GeometryError& e) {
        std::cerr << "geometry error: " << e.what() << "\n";
        return 5;
    } catch (const ptsad::ContractError& e) {
        std::cerr << "contract error: " << e.what() << "\n";
        return 6;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

namespace {

int dispatch(int argc, char** argv) {
    CLI::App app{"supervised anomaly detection in uncertain pseudo-periodic time series"};
    app.require_subcommand(1);

    std::string out_dir = default_out_dir();
    app.add_option("--out-dir", out_dir, "output directory (env PTSAD_OUT_DIR)")
        ->envname("PTSAD_OUT_DIR");

    // synth ------------------------------------------------------------
    auto* synth = app.add_subcommand("synth", "generate a synthetic pseudo-periodic dataset");
    ptsad::SynthConfig synth_cfg;
    synth->add_option("--n-periods", synth_cfg.n_periods, "number of periods");
    synth->add_option("--period-len", synth_cfg.base_period_len, "base period length (samples)");
    synth->add_option("--amplitude", synth_cfg.amplitude, "peak amplitude");
    synth->add_option("--anomaly-rate", synth_cfg.anomaly_rate, "fraction of abnormal periods");
    synth->add_option("--jitter", synth_cfg.jitter, "period length jitter fraction");
    synth->add_option("--dropout-rate", synth_cfg.dropout_rate, "fraction of dropped bump apexes");
    synth->add_option("--peak-noise", synth_cfg.peak_noise, "boundary peak sharpness noise");
    synth->add_option("--seed", synth_cfg.seed, "RNG seed");

    // keypoints ----------------------------------------------------------
    auto* keypoints = app.add_subcommand("keypoints", "detect and correct key-points");
    std::string kp_series;
    ConfigArgs kp_args;
    keypoints->add_option("--series", kp_series, "input series CSV")->required();
    add_common_config(keypoints, kp_args);

    // compress -----------------------------------------------------------
    auto* compress = app.add_subcommand("compress", "Douglas-Peucker compression of key-points");
    std::string cp_keypoints;
    ConfigArgs cp_args;
    compress->add_option("--keypoints", cp_keypoints,
                         "key-points CSV (from the keypoints command)")
        ->required();
    add_common_config(compress, cp_args);

    // segment ------------------------------------------------------------
    auto* segment = app.add_subcommand("segment", "cluster, select period points, segment, annotate");
    std::string sg_cts, sg_labels, sg_series;
    ConfigArgs sg_args;
    segment->add_option("--cts", sg_cts, "compressed series CSV (from the compress command)")
        ->required();
    segment->add_option("--labels", sg_labels, "label track CSV")->required();
    segment->add_option("--series", sg_series, "raw series CSV (required for baseline=valley)");
    add_common_config(segment, sg_args);

    // classify -----------------------------------------------------------
    auto* classify = app.add_subcommand("classify", "cross-validated classification of periods");
    std::string cl_periods;
    ConfigArgs cl_args;
    classify->add_option("--periods", cl_periods, "periods CSV (from the segment command)")
        ->required();
    classify->add_option("--folds", cl_args.overrides["cv_folds"], "cross-validation folds");
    add_common_config(classify, cl_args);

    // stability ----------------------------------------------------------
    auto* stability = app.add_subcommand("stability", "endpoint stability under prefix deletions");
    std::string st_series;
    long st_step = 0;
    int st_levels = 10;
    ConfigArgs st_args;
    stability->add_option("--series", st_series, "input series CSV")->required();
    stability->add_option("--step", st_step, "samples deleted per level")->required();
    stability->add_option("--levels", st_levels, "number of deletion levels");
    add_common_config(stability, st_args);

    // sweep ----------------------------------------------------------------
    auto* sweep = app.add_subcommand("sweep", "breakpoint counts over a parameter sweep");
    std::string sw_series, sw_param = "epsilon", sw_values;
    ConfigArgs sw_args;
    sweep->add_option("--series", sw_series, "input series CSV")->required();
    sweep->add_option("--param", sw_param, "epsilon|lambda")
        ->check(CLI::IsMember({"epsilon", "lambda"}));
    sweep->add_option("--values", sw_values, "comma-separated parameter values")->required();
    add_common_config(sweep, sw_args);

    // run --------------------------------------------------------------------
    auto* run = app.add_subcommand("run", "full pipeline: correct, compress, segment, classify");
    std::string rn_series, rn_labels;
    ConfigArgs rn_args;
    run->add_option("--series", rn_series, "input series CSV")->required();
    run->add_option("--labels", rn_labels, "label track CSV")->required();
    add_common_config(run, rn_args);

    CLI11_PARSE(app, argc, argv);
    fs::create_directories(out_dir);

    if (*synth) {
        const ptsad::SynthResult result = ptsad::synth_pts(synth_cfg);
        ptsad::save_series(result.series, join(out_dir, "series.csv"));
        ptsad::save_labels(result.labels, join(out_dir, "labels.csv"));
        ptsad::save_boundaries(result.boundaries, join(out_dir, "boundaries.csv"));
        std::cout << "wrote " << result.series.size() << " samples, "
                  << result.labels.events.size() << " labels to " << out_dir << "\n";
        return 0;
    }

    if (*keypoints) {
        const ptsad::PipelineConfig cfg = kp_args.resolve();
        const ptsad::TimeSeries ts = ptsad::load_series(kp_series);
        const ptsad::KeyPointSeries kps = ptsad::correct_series(ts, cfg.epsilon, cfg.scale());
        ptsad::save_keypoints(kps.points, join(out_dir, "keypoints.csv"));
        std::cout << "wrote " << kps.size() << " key-points to "
                  << join(out_dir, "keypoints.csv") << "\n";
        return 0;
    }

    if (*compress) {
        const ptsad::PipelineConfig cfg = cp_args.resolve();
        const ptsad::KeyPointSeries kps = ptsad::load_keypoints(cp_keypoints);
        const ptsad::CompressedSeries cts = ptsad::dp_compress(kps, cfg.lambda, cfg.scale());
        ptsad::save_keypoints(cts.points, join(out_dir, "cts.csv"), false);
        std::cout << "wrote " << cts.size() << " CTS points to " << join(out_dir, "cts.csv")
                  << "\n";
        return 0;
    }

    if (*segment) {
        const ptsad::PipelineConfig cfg = sg_args.resolve();
        const ptsad::KeyPointSeries kps = ptsad::load_keypoints(sg_cts);
        ptsad::CompressedSeries cts;
        cts.lambda = cfg.lambda;
        cts.points = kps.points;
        const ptsad::LabelTrack labels = ptsad::load_labels(sg_labels);

        std::vector<std::size_t> indices;
        if (cfg.baseline == ptsad::BaselineKind::Valley) {
            if (sg_series.empty())
                throw ptsad::ContractError("baseline=valley requires --series (run keypoints first)");
            const ptsad::TimeSeries ts = ptsad::load_series(sg_series);
            const auto raw_idx = ptsad::valley_baseline(ts, cfg.valley_u0, cfg.valley_alpha);
            for (std::size_t ri : raw_idx) {
                std::size_t best = 0;
                double best_d = std::abs(cts.points[0].t - ts[ri].t);
                for (std::size_t i = 1; i < cts.size(); ++i) {
                    const double d = std::abs(cts.points[i].t - ts[ri].t);
                    if (d < best_d) {
                        best_d = d;
                        best = i;
                    }
                }
                if (indices.empty() || best > indices.back()) indices.push_back(best);
            }
        } else {
            const auto points = cfg.baseline == ptsad::BaselineKind::Fv
                                    ? ptsad::feature_matrix(cts)
                                    : ptsad::angle_features(cts, cfg.scale());
            const auto result = ptsad::sweep_k(points, cfg.k_min, cfg.k_max, cfg.eta, cfg.xi,
                                               cfg.seed, cfg.restarts);
            if (!result)
                throw ptsad::ContractError("no k in range produced a period cluster");
            indices = result->selection.period_point_indices;
            std::cout << "chosen k=" << result->k
                      << " overall_msil=" << result->clustering.overall_msil << "\n";
        }
        const auto periods = ptsad::split_periods(cts, indices);
        const auto annotated = ptsad::summarize_and_annotate(periods, labels);
        ptsad::save_periods(annotated, join(out_dir, "periods.csv"));
        std::cout << "wrote " << annotated.size() << " periods to "
                  << join(out_dir, "periods.csv") << "\n";
        return 0;
    }

    if (*classify) {
        if (cl_args.overrides["cv_folds"].empty()) cl_args.overrides.erase("cv_folds");
        const ptsad::PipelineConfig cfg = cl_args.resolve();
        const auto periods = ptsad::load_periods(cl_periods);
        ptsad::Dataset ds;
        for (const auto& ap : periods) {
            const auto& s = ap.summary;
            ds.push_back({{s.h_min, s.t_min, s.h_max, s.t_max, s.h_mean, s.p_minmax, s.p_l},
                          ap.annotation});
        }
        ptsad::ClassifierParams params;
        params.seed = cfg.seed;
        const ptsad::CvResult cv = ptsad::kfold_cv(ds, cfg.cv_folds, cfg.classifier, params);
        const std::string out = join(out_dir, "metrics.json");
        ptsad::atomic_write(out, ptsad::metrics_json(cv, cfg.classifier, cfg.cv_folds));
        std::cout << "wrote " << out << " (acc=" << cv.pooled.acc << ")\n";
        return 0;
    }

    if (*stability) {
        const ptsad::PipelineConfig cfg = st_args.resolve();
        const ptsad::TimeSeries ts = ptsad::load_series(st_series);
        const ptsad::StabilityRun runres = ptsad::endpoint_stability(
            ts, cfg.epsilon, cfg.lambda, st_step, st_levels, cfg.scale());
        std::string csv = "level,shift_term,breakpoints,remaining_length\n";
        for (std::size_t i = 0; i < runres.level_shift_terms.size(); ++i) {
            csv += std::to_string(i + 1) + "," + ptsad::format_value(runres.level_shift_terms[i]) +
                   "," + std::to_string(runres.breakpoint_counts[i]) + "," +
                   ptsad::format_value(runres.remaining_lengths[i]) + "\n";
        }
        ptsad::atomic_write(join(out_dir, "stability.csv"), csv);
        json j;
        j["S"] = runres.score;
        j["deletion_step"] = runres.deletion_step;
        j["levels"] = runres.levels;
        j["skipped_levels"] = runres.skipped_levels;
        ptsad::atomic_write(join(out_dir, "stability.json"), j.dump(2) + "\n");
        std::cout << "S=" << runres.score << "\n";
        return 0;
    }

    if (*sweep) {
        const ptsad::PipelineConfig cfg = sw_args.resolve();
        const ptsad::TimeSeries ts = ptsad::load_series(sw_series);
        const std::vector<double> values = parse_values(sw_values);
        const ptsad::SweepResult result =
            sw_param == "epsilon"
                ? ptsad::sweep_epsilon(ts, values, cfg.scale())
                : ptsad::sweep_lambda(ts, cfg.epsilon, values, cfg.scale());
        std::string csv = sw_param + ",count\n";
        for (std::size_t i = 0; i < result.counts.size(); ++i)
            csv += ptsad::format_value(result.parameter_values[i]) + "," +
                   std::to_string(result.counts[i]) + "\n";
        ptsad::atomic_write(join(out_dir, "sweep.csv"), csv);
        const double md = ptsad::monotonicity_index(result, ptsad::MonotoneDirection::Decreasing);
        json j;
        j["param"] = sw_param;
        j["m_d"] = md;
        j["in_range"] = md >= 0.0 && md <= 100.0;
        ptsad::atomic_write(join(out_dir, "sweep.json"), j.dump(2) + "\n");
        std::cout << "M_D=" << md << "\n";
        return 0;
    }

    if (*run) {
        const ptsad::PipelineConfig cfg = rn_args.resolve();
        const ptsad::PipelineReport report =
            ptsad::run_pipeline(rn_series, rn_labels, cfg, out_dir);
        std::cout << "raw=" << report.raw_count << " keypoints=" << report.keypoint_count
                  << " cts=" << report.cts_count << " periods=" << report.period_count
                  << " acc=" << report.cv.pooled.acc << "\n";
        return 0;
    }

    return 0;
}

}  // namespace
