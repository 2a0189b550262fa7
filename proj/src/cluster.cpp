#include "ptsad/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "ptsad/errors.hpp"

namespace ptsad {

std::vector<FeatureVector> feature_vectors(const CompressedSeries& cts) {
    if (cts.size() < 3) throw ContractError("feature_vectors requires at least 3 CTS points");
    std::vector<FeatureVector> out;
    out.reserve(cts.size() - 2);
    for (std::size_t i = 1; i + 1 < cts.size(); ++i) {
        const KeyPoint& prev = cts.points[i - 1];
        const KeyPoint& cur = cts.points[i];
        const KeyPoint& next = cts.points[i + 1];
        out.push_back({cur.v - prev.v, next.v - cur.v, cur.t - prev.t, next.t - cur.t});
    }
    return out;
}

std::vector<std::vector<double>> feature_matrix(const CompressedSeries& cts) {
    std::vector<std::vector<double>> out;
    for (const FeatureVector& f : feature_vectors(cts))
        out.push_back({f.vdiff1, f.vdiff2, f.tdiff1, f.tdiff2});
    return out;
}

double squared_distance(const std::vector<double>& a, const std::vector<double>& b) {
    double s = 0.0;
    for (std::size_t d = 0; d < a.size(); ++d) {
        const double diff = a[d] - b[d];
        s += diff * diff;
    }
    return s;
}

namespace {

std::size_t count_distinct(std::vector<std::vector<double>> points) {
    std::sort(points.begin(), points.end());
    return static_cast<std::size_t>(std::unique(points.begin(), points.end()) - points.begin());
}

int nearest_center(const std::vector<double>& p, const std::vector<std::vector<double>>& centers) {
    int best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < centers.size(); ++c) {
        const double d = squared_distance(p, centers[c]);
        if (d < best_d) {
            best_d = d;
            best = static_cast<int>(c);
        }
    }
    return best;
}

}  // namespace

std::vector<std::vector<double>> kmeanspp_seed(const std::vector<std::vector<double>>& points,
                                               int k, Rng& rng) {
    if (points.empty()) throw ContractError("kmeanspp_seed on empty input");
    if (k < 1) throw ContractError("k must be >= 1");
    if (static_cast<std::size_t>(k) > count_distinct(points))
        throw ContractError("k exceeds the number of distinct points");

    const std::size_t n = points.size();
    std::vector<std::vector<double>> centers;
    centers.push_back(points[rng.below(n)]);

    std::vector<double> d2(n);
    while (centers.size() < static_cast<std::size_t>(k)) {
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            double best = std::numeric_limits<double>::infinity();
            for (const auto& c : centers) best = std::min(best, squared_distance(points[i], c));
            d2[i] = best;
            total += best;
        }
        const double r = rng.uniform() * total;
        double acc = 0.0;
        std::size_t pick = n - 1;
        for (std::size_t i = 0; i < n; ++i) {
            acc += d2[i];
            if (r < acc) {
                pick = i;
                break;
            }
        }
        // guard against landing on a zero-weight tail point
        while (d2[pick] == 0.0) pick = pick == 0 ? n - 1 : pick - 1;
        centers.push_back(points[pick]);
    }
    return centers;
}

double silhouette(std::size_t i, const std::vector<int>& assignments,
                  const std::vector<std::vector<double>>& points, int k) {
    if (k < 2) throw ContractError("silhouette requires at least 2 clusters");
    const int mine = assignments[i];
    std::vector<double> sum(static_cast<std::size_t>(k), 0.0);
    std::vector<std::size_t> cnt(static_cast<std::size_t>(k), 0);
    for (std::size_t j = 0; j < points.size(); ++j) {
        if (j == i) continue;
        const int c = assignments[j];
        sum[static_cast<std::size_t>(c)] += std::sqrt(squared_distance(points[i], points[j]));
        cnt[static_cast<std::size_t>(c)] += 1;
    }
    if (cnt[static_cast<std::size_t>(mine)] == 0) return 0.0;  // singleton convention
    const double a = sum[static_cast<std::size_t>(mine)] / static_cast<double>(cnt[static_cast<std::size_t>(mine)]);
    double b = std::numeric_limits<double>::infinity();
    for (int c = 0; c < k; ++c) {
        if (c == mine || cnt[static_cast<std::size_t>(c)] == 0) continue;
        b = std::min(b, sum[static_cast<std::size_t>(c)] / static_cast<double>(cnt[static_cast<std::size_t>(c)]));
    }
    if (!std::isfinite(b)) throw ContractError("silhouette with a single non-empty cluster");
    const double m = std::max(a, b);
    return m == 0.0 ? 0.0 : (b - a) / m;
}

Clustering kmeans_cluster(const std::vector<std::vector<double>>& points, int k, Rng& rng,
                          int max_iter, double tol) {
    std::vector<std::vector<double>> centers = kmeanspp_seed(points, k, rng);
    const std::size_t n = points.size();
    const std::size_t dim = points[0].size();

    Clustering result;
    result.k = k;
    result.assignments.assign(n, 0);

    for (int iter = 0; iter < max_iter; ++iter) {
        for (std::size_t i = 0; i < n; ++i)
            result.assignments[i] = nearest_center(points[i], centers);

        // reseed empty clusters at the point farthest from its assigned center
        for (int c = 0; c < k; ++c) {
            if (std::find(result.assignments.begin(), result.assignments.end(), c) !=
                result.assignments.end())
                continue;
            std::size_t far = 0;
            double far_d = -1.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double d = squared_distance(
                    points[i], centers[static_cast<std::size_t>(result.assignments[i])]);
                if (d > far_d) {
                    far_d = d;
                    far = i;
                }
            }
            centers[static_cast<std::size_t>(c)] = points[far];
            for (std::size_t i = 0; i < n; ++i)
                result.assignments[i] = nearest_center(points[i], centers);
        }

        std::vector<std::vector<double>> next(static_cast<std::size_t>(k),
                                              std::vector<double>(dim, 0.0));
        std::vector<std::size_t> cnt(static_cast<std::size_t>(k), 0);
        for (std::size_t i = 0; i < n; ++i) {
            const auto c = static_cast<std::size_t>(result.assignments[i]);
            for (std::size_t d = 0; d < dim; ++d) next[c][d] += points[i][d];
            cnt[c] += 1;
        }
        double move = 0.0;
        for (std::size_t c = 0; c < static_cast<std::size_t>(k); ++c) {
            if (cnt[c] == 0) continue;
            for (std::size_t d = 0; d < dim; ++d) next[c][d] /= static_cast<double>(cnt[c]);
            move = std::max(move, std::sqrt(squared_distance(next[c], centers[c])));
            centers[c] = next[c];
        }
        if (move < tol) break;
    }

    for (std::size_t i = 0; i < n; ++i)
        result.assignments[i] = nearest_center(points[i], centers);
    result.centers = std::move(centers);

    result.objective = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        result.objective += squared_distance(
            points[i], result.centers[static_cast<std::size_t>(result.assignments[i])]);

    result.per_point_sil.assign(n, 0.0);
    result.per_cluster_msil.assign(static_cast<std::size_t>(k), 0.0);
    if (k >= 2) {
        std::vector<std::size_t> cnt(static_cast<std::size_t>(k), 0);
        double total = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            const double s = silhouette(i, result.assignments, points, k);
            result.per_point_sil[i] = s;
            const auto c = static_cast<std::size_t>(result.assignments[i]);
            result.per_cluster_msil[c] += s;
            cnt[c] += 1;
            total += s;
        }
        for (std::size_t c = 0; c < static_cast<std::size_t>(k); ++c)
            if (cnt[c] > 0) result.per_cluster_msil[c] /= static_cast<double>(cnt[c]);
        result.overall_msil = total / static_cast<double>(n);
    }
    return result;
}

PeriodSelection select_period_cluster(const Clustering& clustering, double eta, double xi) {
    PeriodSelection sel;
    sel.eta = eta;
    sel.xi = xi;
    if (clustering.overall_msil < eta) return sel;
    int best = -1;
    double best_msil = -std::numeric_limits<double>::infinity();
    for (int c = 0; c < clustering.k; ++c) {
        const double m = clustering.per_cluster_msil[static_cast<std::size_t>(c)];
        if (m > best_msil) {
            best_msil = m;
            best = c;
        }
    }
    if (best < 0 || !(best_msil > xi)) return sel;
    sel.chosen_cluster = best;
    for (std::size_t i = 0; i < clustering.assignments.size(); ++i)
        if (clustering.assignments[i] == best)
            sel.period_point_indices.push_back(i + 1);  // vector i describes CTS point i+1
    return sel;
}

void rescore_silhouettes(Clustering& clustering, const std::vector<std::vector<double>>& points) {
    if (points.size() != clustering.assignments.size())
        throw ContractError("rescore_silhouettes size mismatch");
    if (clustering.k < 2) throw ContractError("rescore_silhouettes requires k >= 2");
    std::vector<std::size_t> cnt(static_cast<std::size_t>(clustering.k), 0);
    std::fill(clustering.per_cluster_msil.begin(), clustering.per_cluster_msil.end(), 0.0);
    double total = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        const double s = silhouette(i, clustering.assignments, points, clustering.k);
        clustering.per_point_sil[i] = s;
        const auto c = static_cast<std::size_t>(clustering.assignments[i]);
        clustering.per_cluster_msil[c] += s;
        cnt[c] += 1;
        total += s;
    }
    for (std::size_t c = 0; c < cnt.size(); ++c)
        if (cnt[c] > 0) clustering.per_cluster_msil[c] /= static_cast<double>(cnt[c]);
    clustering.overall_msil = total / static_cast<double>(points.size());
}

std::optional<SweepResultK> sweep_k(const std::vector<std::vector<double>>& points,
                                    int k_min, int k_max, double eta, double xi,
                                    std::uint64_t seed, int restarts) {
    if (k_min < 2) k_min = 2;
    std::optional<SweepResultK> best;
    for (int k = k_min; k <= k_max; ++k) {
        if (static_cast<std::size_t>(k) + 1 > points.size()) break;
        Clustering best_run;
        bool have_run = false;
        for (int r = 0; r < restarts; ++r) {
            Rng rng(Rng::derive(seed, static_cast<std::uint64_t>(k), static_cast<std::uint64_t>(r)));
            Clustering run;
            try {
                run = kmeans_cluster(points, k, rng);
            } catch (const ContractError&) {
                break;  // k exceeds distinct points; larger k will too
            }
            if (!have_run || run.objective < best_run.objective) {
                best_run = std::move(run);
                have_run = true;
            }
        }
        if (!have_run) continue;
        PeriodSelection sel = select_period_cluster(best_run, eta, xi);
        if (!sel.selected()) continue;
        if (!best || best_run.overall_msil > best->clustering.overall_msil)
            best = SweepResultK{k, std::move(best_run), std::move(sel)};
    }
    return best;
}

}  // namespace ptsad
