#include "ptsad/stability.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ptsad/errors.hpp"

namespace ptsad {

double monotonicity_index(const SweepResult& sweep, MonotoneDirection direction) {
    const auto& counts = sweep.counts;
    if (counts.size() < 2 || counts.size() != sweep.parameter_values.size())
        throw ContractError("monotonicity_index needs >= 2 aligned counts");
    double t_minus = 0.0;
    double t_plus = 0.0;
    for (std::size_t i = 1; i < counts.size(); ++i) {
        const double dv = static_cast<double>(counts[i]) - static_cast<double>(counts[i - 1]);
        const double h = 0.5 * (static_cast<double>(counts[i]) + static_cast<double>(counts[i - 1]));
        if (h == 0.0 || dv == 0.0) continue;
        if (dv < 0.0) t_minus += -dv / h;
        else t_plus += dv / h;
    }
    const double num = direction == MonotoneDirection::Decreasing ? t_plus : t_minus;
    const double den = direction == MonotoneDirection::Decreasing ? t_minus : t_plus;
    if (den == 0.0) {
        if (num == 0.0) return 100.0;  // no steps at all: trivially monotone
        return -std::numeric_limits<double>::infinity();
    }
    return (1.0 - num / den) * 100.0;
}

SweepResult sweep_epsilon(const TimeSeries& ts, const std::vector<double>& epsilons,
                          const AxisScale& scale) {
    SweepResult r;
    for (double eps : epsilons) {
        r.parameter_values.push_back(eps);
        r.counts.push_back(correct_series(ts, eps, scale).size());
    }
    return r;
}

SweepResult sweep_lambda(const TimeSeries& ts, double epsilon, const std::vector<double>& lambdas,
                         const AxisScale& scale) {
    const KeyPointSeries kps = correct_series(ts, epsilon, scale);
    SweepResult r;
    for (double lambda : lambdas) {
        r.parameter_values.push_back(lambda);
        r.counts.push_back(dp_compress(kps, lambda, scale).size());
    }
    return r;
}

namespace {

std::vector<double> pipeline_breakpoints(const TimeSeries& ts, double epsilon, double lambda,
                                         const AxisScale& scale) {
    const CompressedSeries cts = dp_compress(correct_series(ts, epsilon, scale), lambda, scale);
    std::vector<double> times;
    times.reserve(cts.size());
    for (const KeyPoint& p : cts.points) times.push_back(p.t);
    return times;
}

}  // namespace

StabilityRun endpoint_stability(const TimeSeries& ts, double epsilon, double lambda,
                                long deletion_step, int levels, const AxisScale& scale) {
    if (levels < 1) throw ContractError("levels must be >= 1");
    if (deletion_step < 0) throw ContractError("deletion_step must be >= 0");
    if (static_cast<std::size_t>(deletion_step) * static_cast<std::size_t>(levels) >= ts.size())
        throw ContractError("deletion exceeds the series length");

    const std::vector<double> reference = pipeline_breakpoints(ts, epsilon, lambda, scale);

    StabilityRun run;
    run.deletion_step = deletion_step;
    run.levels = levels;

    for (int d = 1; d <= levels; ++d) {
        const std::size_t cut = static_cast<std::size_t>(deletion_step) * static_cast<std::size_t>(d);
        TimeSeries sub;
        sub.points.assign(ts.points.begin() + static_cast<std::ptrdiff_t>(cut), ts.points.end());
        if (sub.size() < 4) {
            run.skipped_levels.push_back(d);
            continue;
        }
        std::vector<double> bps;
        try {
            bps = pipeline_breakpoints(sub, epsilon, lambda, scale);
        } catch (const ContractError&) {
            run.skipped_levels.push_back(d);
            continue;
        }
        if (bps.size() < 2) {
            run.skipped_levels.push_back(d);
            continue;
        }
        const double cut_t = sub.points.front().t;
        std::vector<double> refs;
        for (double t : reference)
            if (t >= cut_t) refs.push_back(t);

        const double len = sub.points.back().t - sub.points.front().t;
        const auto n_d = static_cast<double>(bps.size());
        double shift_sum = 0.0;
        std::size_t j = 0;
        for (double b : bps) {
            if (j >= refs.size()) {
                shift_sum += len / n_d;  // unmatched: maximal penalty
                continue;
            }
            while (j + 1 < refs.size() && std::abs(refs[j + 1] - b) < std::abs(refs[j] - b)) ++j;
            shift_sum += std::abs(refs[j] - b);
            ++j;
        }
        run.level_shift_terms.push_back(shift_sum / (n_d * len));
        run.breakpoint_counts.push_back(bps.size());
        run.remaining_lengths.push_back(len);
    }

    if (run.level_shift_terms.empty()) {
        run.score = 0.0;
        return run;
    }
    double total = 0.0;
    for (double term : run.level_shift_terms) total += term;
    const double m = static_cast<double>(run.level_shift_terms.size());
    run.score = (1.0 - total / m) * 100.0;
    return run;
}

std::vector<std::vector<double>> angle_features(const CompressedSeries& cts,
                                                const AxisScale& scale) {
    if (cts.size() < 3) throw ContractError("angle_features requires at least 3 CTS points");
    std::vector<std::vector<double>> out;
    out.reserve(cts.size() - 2);
    for (std::size_t i = 1; i + 1 < cts.size(); ++i) {
        const Point prev{cts.points[i - 1].t, cts.points[i - 1].v};
        const Point mid{cts.points[i].t, cts.points[i].v};
        const Point next{cts.points[i + 1].t, cts.points[i + 1].v};
        out.push_back({turning_angle(prev, mid, next, scale)});
    }
    return out;
}

std::optional<SweepResultK> angle_baseline(const CompressedSeries& cts, int k_min, int k_max,
                                           double eta, double xi, std::uint64_t seed,
                                           int restarts, const AxisScale& scale) {
    return sweep_k(angle_features(cts, scale), k_min, k_max, eta, xi, seed, restarts);
}

std::vector<std::size_t> valley_baseline(const TimeSeries& pts, double u0, double alpha) {
    validate_series(pts);
    if (!(alpha > 0.0)) throw ContractError("alpha must be positive");
    std::vector<std::size_t> valleys;
    double bound = u0;
    double accepted_sum = 0.0;
    for (std::size_t i = 1; i + 1 < pts.size(); ++i) {
        const double v = pts[i].v;
        if (v < pts[i - 1].v && v <= pts[i + 1].v && v < bound) {
            valleys.push_back(i);
            accepted_sum += v;
            bound = alpha * accepted_sum / static_cast<double>(valleys.size());
        }
    }
    return valleys;
}

}  // namespace ptsad
