#include "ptsad/compress.hpp"

#include <cmath>
#include <utility>

#include "ptsad/errors.hpp"

namespace ptsad {

namespace {

struct Vec2 {
    double x;
    double y;
};

Vec2 scaled(const Point& p, const AxisScale& s) { return {p.t * s.t_scale, p.v * s.v_scale}; }
Vec2 scaled(const KeyPoint& p, const AxisScale& s) { return {p.t * s.t_scale, p.v * s.v_scale}; }

double seg_dist(const Vec2& p, const Vec2& a, const Vec2& b) {
    const double dx = b.x - a.x;
    const double dy = b.y - a.y;
    const double len2 = dx * dx + dy * dy;
    if (len2 == 0.0) return std::hypot(p.x - a.x, p.y - a.y);
    double s = ((p.x - a.x) * dx + (p.y - a.y) * dy) / len2;
    if (s < 0.0) s = 0.0;
    if (s > 1.0) s = 1.0;
    return std::hypot(p.x - (a.x + s * dx), p.y - (a.y + s * dy));
}

}  // namespace

double perpendicular_distance(const Point& p, const Point& a, const Point& b,
                              const AxisScale& scale) {
    const Vec2 pa = scaled(a, scale);
    const Vec2 pb = scaled(b, scale);
    const double dx = pb.x - pa.x;
    const double dy = pb.y - pa.y;
    const double len = std::hypot(dx, dy);
    if (len == 0.0) throw GeometryError("perpendicular_distance with a == b");
    const Vec2 pp = scaled(p, scale);
    return std::abs(dx * (pp.y - pa.y) - dy * (pp.x - pa.x)) / len;
}

double segment_distance(const Point& p, const Point& a, const Point& b, const AxisScale& scale) {
    return seg_dist(scaled(p, scale), scaled(a, scale), scaled(b, scale));
}

CompressedSeries dp_compress(const KeyPointSeries& kps, double lambda, const AxisScale& scale) {
    if (kps.size() < 2) throw ContractError("dp_compress requires at least 2 points");
    if (!(lambda >= 0.0)) throw ContractError("lambda must be >= 0");

    const std::size_t n = kps.size();
    std::vector<bool> keep(n, false);
    keep[0] = keep[n - 1] = true;

    std::vector<std::pair<std::size_t, std::size_t>> stack;
    stack.emplace_back(0, n - 1);
    while (!stack.empty()) {
        const auto [lo, hi] = stack.back();
        stack.pop_back();
        if (hi <= lo + 1) continue;
        const Vec2 a = scaled(kps.points[lo], scale);
        const Vec2 b = scaled(kps.points[hi], scale);
        double best = -1.0;
        std::size_t split = lo;
        for (std::size_t i = lo + 1; i < hi; ++i) {
            const double d = seg_dist(scaled(kps.points[i], scale), a, b);
            if (d > best) {  // strict: ties go to the smallest index
                best = d;
                split = i;
            }
        }
        if (best <= lambda) continue;
        keep[split] = true;
        stack.emplace_back(split, hi);
        stack.emplace_back(lo, split);
    }

    CompressedSeries cts;
    cts.lambda = lambda;
    for (std::size_t i = 0; i < n; ++i)
        if (keep[i]) cts.points.push_back(kps.points[i]);
    return cts;
}

}  // namespace ptsad
