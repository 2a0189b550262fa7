#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "ptsad/compress.hpp"
#include "ptsad/errors.hpp"
#include "ptsad/rng.hpp"

using namespace ptsad;

namespace {

KeyPointSeries make_kps(const std::vector<Point>& pts) {
    KeyPointSeries kps;
    for (const Point& p : pts) kps.points.push_back({p.t, p.v, PointOrigin::Observed});
    return kps;
}

// Reference recursive Douglas-Peucker, written independently of the
// production implementation (recursion instead of an explicit stack).
void dp_reference(const std::vector<Point>& pts, std::size_t lo, std::size_t hi, double lambda,
                  std::vector<bool>& keep) {
    if (hi <= lo + 1) return;
    double best = -1.0;
    std::size_t split = lo;
    for (std::size_t i = lo + 1; i < hi; ++i) {
        const double d = segment_distance(pts[i], pts[lo], pts[hi]);
        if (d > best) {
            best = d;
            split = i;
        }
    }
    if (best <= lambda) return;
    keep[split] = true;
    dp_reference(pts, lo, split, lambda, keep);
    dp_reference(pts, split, hi, lambda, keep);
}

double min_polyline_distance(const Point& p, const std::vector<KeyPoint>& line) {
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i + 1 < line.size(); ++i) {
        best = std::min(best, segment_distance(p, {line[i].t, line[i].v},
                                               {line[i + 1].t, line[i + 1].v}));
    }
    return best;
}

}  // namespace

TEST_CASE("perpendicular_distance known values") {
    CHECK(perpendicular_distance({1, 1}, {0, 0}, {2, 0}) == doctest::Approx(1.0));
    CHECK(perpendicular_distance({0, 0}, {0, 1}, {1, 0}) == doctest::Approx(std::sqrt(0.5)));
    // the infinite line extends beyond its defining points
    CHECK(perpendicular_distance({5, 0}, {0, 0}, {1, 0}) == doctest::Approx(0.0));
    CHECK_THROWS_AS(perpendicular_distance({1, 1}, {0, 0}, {0, 0}), GeometryError);
}

TEST_CASE("segment_distance clamps to the endpoints") {
    CHECK(segment_distance({5, 0}, {0, 0}, {1, 0}) == doctest::Approx(4.0));
    CHECK(segment_distance({-3, 4}, {0, 0}, {1, 0}) == doctest::Approx(5.0));
    CHECK(segment_distance({0.5, 2}, {0, 0}, {1, 0}) == doctest::Approx(2.0));
    // degenerate segment behaves like a point
    CHECK(segment_distance({3, 4}, {0, 0}, {0, 0}) == doctest::Approx(5.0));
}

TEST_CASE("distances honour axis scaling") {
    const AxisScale s{1.0, 10.0};
    CHECK(perpendicular_distance({1, 1}, {0, 0}, {2, 0}, s) == doctest::Approx(10.0));
    CHECK(segment_distance({1, 1}, {0, 0}, {2, 0}, s) == doctest::Approx(10.0));
}

TEST_CASE("dp_compress hand-checked case") {
    // spike at t=1 survives, the shallow bump at t=3 does not
    const KeyPointSeries kps =
        make_kps({{0, 0}, {1, 5}, {2, 0}, {3, 0.4}, {4, 0}});
    // recursion: (1,5) splits first, then (2,0) against the chord (1,5)-(4,0)
    // at distance 10/sqrt(34) > 1; the bump at (3,0.4) falls within tolerance
    const CompressedSeries cts = dp_compress(kps, 1.0);
    REQUIRE(cts.size() == 4);
    CHECK(cts.points[0].t == 0);
    CHECK(cts.points[1].t == 1);
    CHECK(cts.points[2].t == 2);
    CHECK(cts.points[3].t == 4);
    CHECK(cts.lambda == 1.0);
}

TEST_CASE("dp_compress breaks distance ties toward the smaller index") {
    const KeyPointSeries kps = make_kps({{0, 0}, {1, 1}, {2, 1}, {3, 0}});
    const CompressedSeries cts = dp_compress(kps, 0.99);
    REQUIRE(cts.size() >= 3);
    CHECK(cts.points[1].t == 1);  // both interior points are 1.0 away
}

TEST_CASE("dp_compress matches the recursive reference") {
    Rng rng(7);
    for (int trial = 0; trial < 200; ++trial) {
        const std::size_t n = 3 + rng.below(60);
        std::vector<Point> pts;
        double v = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            v += rng.uniform(-2.0, 2.0);
            pts.push_back({double(i), v});
        }
        const double lambda = rng.uniform(0.0, 3.0);
        std::vector<bool> keep(n, false);
        keep[0] = keep[n - 1] = true;
        dp_reference(pts, 0, n - 1, lambda, keep);

        const CompressedSeries cts = dp_compress(make_kps(pts), lambda);
        std::size_t j = 0;
        for (std::size_t i = 0; i < n; ++i) {
            if (!keep[i]) continue;
            REQUIRE(j < cts.size());
            CHECK(cts.points[j].t == pts[i].t);
            ++j;
        }
        CHECK(j == cts.size());
    }
}

TEST_CASE("dp_compress error bound holds for dropped points") {
    Rng rng(15);
    for (int trial = 0; trial < 100; ++trial) {
        const std::size_t n = 4 + rng.below(80);
        std::vector<Point> pts;
        double v = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
            v += rng.uniform(-3.0, 3.0);
            pts.push_back({double(i) + rng.uniform(0.0, 0.5), v});
        }
        const double lambda = rng.uniform(0.1, 5.0);
        const CompressedSeries cts = dp_compress(make_kps(pts), lambda);
        std::size_t j = 0;
        for (const Point& p : pts) {
            if (j < cts.size() && cts.points[j].t == p.t) {
                ++j;
                continue;
            }
            CHECK(min_polyline_distance(p, cts.points) <= lambda + 1e-12);
        }
    }
}

TEST_CASE("dp_compress keeps endpoints and preserves order") {
    const KeyPointSeries kps = make_kps({{0, 0}, {1, 9}, {2, -4}, {3, 7}, {4, 1}});
    const CompressedSeries big = dp_compress(kps, 100.0);
    REQUIRE(big.size() == 2);
    CHECK(big.points[0].t == 0);
    CHECK(big.points[1].t == 4);

    const CompressedSeries none = dp_compress(kps, 0.0);
    CHECK(none.size() == 5);
}

TEST_CASE("dp_compress contract") {
    const KeyPointSeries one = make_kps({{0, 0}});
    CHECK_THROWS_AS(dp_compress(one, 1.0), ContractError);
    const KeyPointSeries two = make_kps({{0, 0}, {1, 1}});
    CHECK_THROWS_AS(dp_compress(two, -0.5), ContractError);
}
