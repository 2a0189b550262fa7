#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "ptsad/cluster.hpp"
#include "ptsad/compress.hpp"
#include "ptsad/keypoints.hpp"
#include "ptsad/series.hpp"

namespace ptsad {

/// Breakpoint counts for an increasing list of parameter values.
struct SweepResult {
    std::vector<double> parameter_values;
    std::vector<std::size_t> counts;
};

enum class MonotoneDirection { Decreasing, Increasing };

/// M_D / M_I on [0,100] for perfectly monotone counts. The raw value is
/// returned unclamped; all-equal counts score 100 (no violating steps).
double monotonicity_index(const SweepResult& sweep, MonotoneDirection direction);

/// Key-point counts of correct_series over an epsilon sweep.
SweepResult sweep_epsilon(const TimeSeries& ts, const std::vector<double>& epsilons,
                          const AxisScale& scale = {});

/// CTS counts of dp_compress over a lambda sweep, inflexions detected at a
/// fixed epsilon first.
SweepResult sweep_lambda(const TimeSeries& ts, double epsilon,
                         const std::vector<double>& lambdas, const AxisScale& scale = {});

struct StabilityRun {
    long deletion_step = 0;
    int levels = 0;
    std::vector<double> level_shift_terms;      ///< sum_b s_b^d / (n_d l_d), kept levels only
    std::vector<std::size_t> breakpoint_counts; ///< n_d
    std::vector<double> remaining_lengths;      ///< l_d (time units)
    std::vector<int> skipped_levels;            ///< levels with < 2 breakpoints
    double score = 0.0;                          ///< S, scaled to [0, 100]
};

/// Break-point stability under prefix deletions: reference breakpoints from the
/// full correct+compress pipeline, then `levels` deletions of
/// `deletion_step` samples each, greedy one-to-one nearest matching in time
/// order; unmatched breakpoints are penalized with l_d / n_d.
StabilityRun endpoint_stability(const TimeSeries& ts, double epsilon, double lambda,
                                long deletion_step, int levels, const AxisScale& scale = {});

/// Interior CTS inflexions as 1-d turning-angle features.
std::vector<std::vector<double>> angle_features(const CompressedSeries& cts,
                                                const AxisScale& scale = {});

/// Angle-based baseline: the same clustering/validation machinery on the 1-d
/// angle representation.
std::optional<SweepResultK> angle_baseline(const CompressedSeries& cts, int k_min, int k_max,
                                           double eta, double xi, std::uint64_t seed,
                                           int restarts = 8, const AxisScale& scale = {});

/// Valley-point baseline: local minima below an adaptive upper bound
/// U <- alpha * mean(accepted valley values). Returns raw-series indices.
std::vector<std::size_t> valley_baseline(const TimeSeries& pts, double u0, double alpha);

}  // namespace ptsad
