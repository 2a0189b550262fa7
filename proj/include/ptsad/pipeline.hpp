#pragma once

#include <cstdint>
#include <map>
#include <string>

#include "ptsad/classify.hpp"
#include "ptsad/cluster.hpp"
#include "ptsad/keypoints.hpp"
#include "ptsad/series.hpp"

namespace ptsad {

enum class BaselineKind { Fv, Angle, Valley };

BaselineKind parse_baseline(const std::string& name);
const char* baseline_name(BaselineKind kind);

enum class SilhouetteSpace { Feature, Raw };

struct PipelineConfig {
    double epsilon = 1.0;   ///< key-point angle threshold (radians)
    double lambda = 10.0;   ///< DP distance tolerance
    double t_scale = 1.0;
    double v_scale = 1.0;
    int k_min = 2;
    int k_max = 8;
    double eta = 0.4;
    double xi = 0.8;
    int restarts = 8;
    ClassifierKind classifier = ClassifierKind::Forest;
    int cv_folds = 10;
    std::uint64_t seed = 1;
    BaselineKind baseline = BaselineKind::Fv;
    double valley_u0 = 50.0;
    double valley_alpha = 1.1;
    SilhouetteSpace sil_space = SilhouetteSpace::Feature;

    AxisScale scale() const { return {t_scale, v_scale}; }
};

void validate_config(const PipelineConfig& cfg);

/// Flat key=value text format; unknown keys are an error.
PipelineConfig load_config(const std::string& path);
PipelineConfig apply_config_entries(PipelineConfig base,
                                    const std::map<std::string, std::string>& entries);

/// Canonical key=value serialization (sorted keys), used for the config hash.
std::string config_canonical(const PipelineConfig& cfg);

/// FNV-1a 64 over the canonical serialization, hex encoded.
std::string config_hash(const PipelineConfig& cfg);

struct PipelineReport {
    std::size_t raw_count = 0;
    std::size_t keypoint_count = 0;
    std::size_t recovered_count = 0;
    std::size_t cts_count = 0;
    std::size_t period_count = 0;
    int chosen_k = 0;
    double overall_msil = 0.0;
    double chosen_cluster_msil = 0.0;
    CvResult cv;
};

/// Full workflow: correct -> compress -> cluster/select -> segment/annotate ->
/// classify. Writes keypoints.csv, cts.csv, periods.csv, metrics.json and
/// manifest.json into out_dir.
PipelineReport run_pipeline(const std::string& series_path, const std::string& labels_path,
                            const PipelineConfig& cfg, const std::string& out_dir);

/// Metrics serialized as JSON with 6-decimal fixed values.
std::string metrics_json(const CvResult& cv, ClassifierKind classifier, int folds);

}  // namespace ptsad
