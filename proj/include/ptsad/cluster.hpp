#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ptsad/compress.hpp"
#include "ptsad/rng.hpp"

namespace ptsad {

/// Per-inflexion amplitude/time deltas to both neighbours.
struct FeatureVector {
    double vdiff1;  ///< v_i - v_{i-1}
    double vdiff2;  ///< v_{i+1} - v_i
    double tdiff1;  ///< t_i - t_{i-1}
    double tdiff2;  ///< t_{i+1} - t_i
};

/// One vector per interior CTS point; endpoints are excluded, so vector i
/// describes CTS point i + 1.
std::vector<FeatureVector> feature_vectors(const CompressedSeries& cts);

/// The same vectors as a generic point matrix for the clustering machinery.
std::vector<std::vector<double>> feature_matrix(const CompressedSeries& cts);

struct Clustering {
    int k = 0;
    std::vector<int> assignments;
    std::vector<std::vector<double>> centers;
    std::vector<double> per_point_sil;
    std::vector<double> per_cluster_msil;
    double overall_msil = 0.0;
    double objective = 0.0;  ///< sum of squared distances to assigned centers
};

double squared_distance(const std::vector<double>& a, const std::vector<double>& b);

/// k-means++ seeding: first center uniform, the rest D(x)^2-proportional.
std::vector<std::vector<double>> kmeanspp_seed(const std::vector<std::vector<double>>& points,
                                               int k, Rng& rng);

/// k-means++ seeding followed by Lloyd iterations; silhouettes populated.
/// Empty clusters are reseeded at the point farthest from its assigned center.
Clustering kmeans_cluster(const std::vector<std::vector<double>>& points, int k, Rng& rng,
                          int max_iter = 300, double tol = 1e-8);

/// Silhouette of point i given assignments; singleton clusters score 0.
double silhouette(std::size_t i, const std::vector<int>& assignments,
                  const std::vector<std::vector<double>>& points, int k);

struct PeriodSelection {
    int chosen_cluster = -1;                       ///< -1 means none
    std::vector<std::size_t> period_point_indices; ///< indices into the CTS, time order
    double eta = 0.4;
    double xi = 0.8;

    bool selected() const { return chosen_cluster >= 0; }
};

/// Cluster quality validation: reject when overall msil < eta, otherwise take
/// the argmax-msil cluster if its msil > xi. Indices are mapped to CTS
/// positions assuming the points came from feature_matrix/angle features
/// (vector i -> CTS point i + 1).
PeriodSelection select_period_cluster(const Clustering& clustering, double eta, double xi);

/// Recompute silhouettes for fixed assignments in a different point space
/// (e.g. raw (t, v) coordinates for sensitivity checks).
void rescore_silhouettes(Clustering& clustering, const std::vector<std::vector<double>>& points);

struct SweepResultK {
    int k = 0;
    Clustering clustering;
    PeriodSelection selection;
};

/// Try each k in [k_min, k_max] with `restarts` seeded restarts (best objective
/// kept per k); return the k maximizing overall msil among those that yield a
/// period cluster. nullopt when every k fails validation.
std::optional<SweepResultK> sweep_k(const std::vector<std::vector<double>>& points,
                                    int k_min, int k_max, double eta, double xi,
                                    std::uint64_t seed, int restarts = 8);

}  // namespace ptsad
