#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "ptsad/errors.hpp"
#include "ptsad/keypoints.hpp"
#include "ptsad/rng.hpp"
#include "ptsad/series.hpp"

using namespace ptsad;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Independent angle oracle: arccos of the normalized dot product.
double angle_oracle(const Point& a, const Point& b, const Point& c, const AxisScale& s) {
    const double d1x = (b.t - a.t) * s.t_scale;
    const double d1y = (b.v - a.v) * s.v_scale;
    const double d2x = (c.t - b.t) * s.t_scale;
    const double d2y = (c.v - b.v) * s.v_scale;
    const double cosv =
        (d1x * d2x + d1y * d2y) / (std::hypot(d1x, d1y) * std::hypot(d2x, d2y));
    return std::acos(std::clamp(cosv, -1.0, 1.0));
}

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

}  // namespace

TEST_CASE("turning_angle matches known geometry") {
    CHECK(turning_angle({0, 0}, {1, 0}, {2, 0}) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(turning_angle({0, 0}, {1, 1}, {2, 2}) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(turning_angle({0, 0}, {1, 1}, {2, 0}) == doctest::Approx(kPi / 2));
    CHECK(turning_angle({0, 0}, {1, 0}, {2, 1}) == doctest::Approx(std::atan(1.0)));
    // near reversal
    CHECK(turning_angle({0, 0}, {1, 100}, {2, -100}) > 3.1);
}

TEST_CASE("turning_angle agrees with the arccos oracle") {
    Rng rng(99);
    for (int trial = 0; trial < 500; ++trial) {
        const Point a{rng.uniform(0.0, 1.0), rng.uniform(-5.0, 5.0)};
        const Point b{a.t + rng.uniform(0.1, 2.0), rng.uniform(-5.0, 5.0)};
        const Point c{b.t + rng.uniform(0.1, 2.0), rng.uniform(-5.0, 5.0)};
        const AxisScale s{rng.uniform(0.5, 2.0), rng.uniform(0.5, 2.0)};
        CHECK(turning_angle(a, b, c, s) == doctest::Approx(angle_oracle(a, b, c, s)).epsilon(1e-9));
    }
}

TEST_CASE("turning_angle is scale dependent") {
    const double flat = turning_angle({0, 0}, {1, 1}, {2, 0}, {1.0, 0.01});
    const double steep = turning_angle({0, 0}, {1, 1}, {2, 0}, {1.0, 100.0});
    CHECK(flat < 0.1);
    CHECK(steep > 3.0);
}

TEST_CASE("turning_angle contract") {
    CHECK_THROWS_AS(turning_angle({1, 0}, {0, 0}, {2, 0}), ContractError);
    CHECK_THROWS_AS(turning_angle({0, 0}, {0, 0}, {2, 0}), ContractError);
    // collapsing the time axis makes equal-valued neighbours coincident
    CHECK_THROWS_AS(turning_angle({0, 1}, {1, 1}, {2, 0}, {0.0, 1.0}), GeometryError);
}

TEST_CASE("detect_keypoints keeps endpoints and sharp turns only") {
    TimeSeries line;
    for (int i = 0; i < 20; ++i) line.points.push_back({double(i), 2.0 * i});
    const KeyPointSeries flat = detect_keypoints(line, 0.1);
    CHECK(flat.size() == 2);
    CHECK(flat.points.front().t == 0.0);
    CHECK(flat.points.back().t == 19.0);

    TimeSeries tri;  // triangle wave with vertices every 5 samples
    for (int i = 0; i <= 30; ++i) {
        const int phase = i % 10;
        tri.points.push_back({double(i), double(phase <= 5 ? phase : 10 - phase)});
    }
    const KeyPointSeries kps = detect_keypoints(tri, 0.5);
    for (std::size_t i = 1; i + 1 < kps.size(); ++i)
        CHECK(std::lround(kps.points[i].t) % 5 == 0);
    CHECK(kps.size() == 2 + 5);  // interior vertices at t = 5, 10, 15, 20, 25
}

TEST_CASE("detect_keypoints contract") {
    TimeSeries ts;
    ts.points = {{0, 0}};
    CHECK_THROWS_AS(detect_keypoints(ts, 0.5), ContractError);
    ts.points = {{0, 0}, {1, 1}, {2, 0}};
    CHECK_THROWS_AS(detect_keypoints(ts, 0.0), ContractError);
}

TEST_CASE("recover_missing single-turn cases keep the turning point") {
    // p2 turns, p3 collinear with p2 -> p4
    const RecoverDecision d1 =
        recover_missing({0, 0}, {1, 1}, {2, 1}, {3, 1}, 0.3, {});
    CHECK(d1.kind == RecoverKind::KeepP2);
    CHECK_FALSE(d1.inserted.has_value());

    const RecoverDecision d2 =
        recover_missing({0, 0}, {1, 0}, {2, 0}, {3, 1}, 0.3, {});
    CHECK(d2.kind == RecoverKind::KeepP3);
}

TEST_CASE("recover_missing rejects windows without a turn") {
    CHECK_THROWS_AS(recover_missing({0, 0}, {1, 0}, {2, 0}, {3, 0}, 0.3, {}), ContractError);
    CHECK_THROWS_AS(recover_missing({0, 0}, {2, 1}, {1, 2}, {3, 3}, 0.3, {}), ContractError);
}

TEST_CASE("recover_missing keeps both points when the angle sum exceeds pi") {
    // sharp zigzag: both turns near pi/2 plus, sum > pi
    const RecoverDecision d =
        recover_missing({0, 0}, {1, 10}, {2, -10}, {3, 10}, 0.3, {});
    CHECK(d.kind == RecoverKind::KeepBothNoInsert);
}

TEST_CASE("recover_missing reconstructs a deleted apex exactly") {
    // construct-delete-recover: the apex sits on the extension of p1 -> p2
    Rng rng(2024);
    int recovered = 0;
    const int trials = 300;
    for (int trial = 0; trial < trials; ++trial) {
        const double theta = rng.uniform(0.15, kPi / 2);  // total turn at the apex
        const double phi1 = rng.uniform(-1.2, 1.2 - theta);
        const double phi2 = phi1 + theta;
        const Point m{rng.uniform(-3.0, 3.0), rng.uniform(-3.0, 3.0)};
        const double s = rng.uniform(0.2, 2.0);
        const double a = rng.uniform(0.2, 2.0);
        const double u = rng.uniform(0.2, 2.0);
        const double b = rng.uniform(0.2, 2.0);
        const Point p2{m.t - s * std::cos(phi1), m.v - s * std::sin(phi1)};
        const Point p1{p2.t - a * std::cos(phi1), p2.v - a * std::sin(phi1)};
        const Point p3{m.t + u * std::cos(phi2), m.v + u * std::sin(phi2)};
        const Point p4{p3.t + b * std::cos(phi2), p3.v + b * std::sin(phi2)};
        const double eps = 1e-4;
        if (turning_angle(p1, p2, p3) <= eps || turning_angle(p2, p3, p4) <= eps) continue;
        const RecoverDecision d = recover_missing(p1, p2, p3, p4, eps, {});
        REQUIRE(d.kind == RecoverKind::Insert);
        CHECK(std::abs(d.inserted->t - m.t) < 1e-9);
        CHECK(std::abs(d.inserted->v - m.v) < 1e-9);
        ++recovered;
    }
    CHECK(recovered > trials / 2);
}

TEST_CASE("correct_series restores dropped synthetic samples") {
    SynthConfig cfg;
    cfg.n_periods = 30;
    cfg.base_period_len = 150;
    cfg.dropout_rate = 1.0;
    cfg.seed = 21;
    const SynthResult r = synth_pts(cfg);
    REQUIRE(r.dropped_points.size() == 30);

    const KeyPointSeries kps = correct_series(r.series, 0.2);
    std::size_t matched = 0;
    for (const Point& gone : r.dropped_points) {
        for (const KeyPoint& p : kps.points) {
            if (p.origin == PointOrigin::Recovered && std::abs(p.t - gone.t) < 1e-6 &&
                std::abs(p.v - gone.v) < 1e-6) {
                ++matched;
                break;
            }
        }
    }
    CHECK(matched == r.dropped_points.size());
}

TEST_CASE("correct_series equals detection when nothing is missing") {
    SynthConfig cfg;
    cfg.n_periods = 10;
    cfg.base_period_len = 120;
    cfg.seed = 9;
    const SynthResult r = synth_pts(cfg);
    const KeyPointSeries corrected = correct_series(r.series, 0.2);
    for (const KeyPoint& p : corrected.points) CHECK(p.origin == PointOrigin::Observed);
    const KeyPointSeries detected = detect_keypoints(r.series, 0.2);
    REQUIRE(corrected.size() == detected.size());
    for (std::size_t i = 0; i < corrected.size(); ++i)
        CHECK(corrected.points[i].t == detected.points[i].t);
}

TEST_CASE("correct_series is idempotent on its own output") {
    SynthConfig cfg;
    cfg.n_periods = 25;
    cfg.base_period_len = 150;
    cfg.dropout_rate = 0.5;
    cfg.seed = 33;
    const SynthResult r = synth_pts(cfg);
    const KeyPointSeries once = correct_series(r.series, 0.2);

    TimeSeries as_series;
    for (const KeyPoint& p : once.points) as_series.points.push_back({p.t, p.v});
    const KeyPointSeries twice = correct_series(as_series, 0.2);
    // a second pass finds no new inflexions and invents no points
    CHECK(twice.size() <= once.size());
    for (const KeyPoint& p : twice.points) {
        bool known = false;
        for (const KeyPoint& q : once.points)
            if (q.t == p.t && q.v == p.v) known = true;
        CHECK(known);
    }
}

TEST_CASE("correct_series contract") {
    TimeSeries ts;
    ts.points = {{0, 0}, {1, 1}, {2, 0}};
    CHECK_THROWS_AS(correct_series(ts, 0.5), ContractError);
    ts.points.push_back({3, 1});
    CHECK_THROWS_AS(correct_series(ts, -1.0), ContractError);
}

TEST_CASE("keypoint csv round trip with origin column") {
    std::vector<KeyPoint> pts = {{0.0, 1.0, PointOrigin::Observed},
                                 {1.5, -2.25, PointOrigin::Recovered},
                                 {3.0, 0.125, PointOrigin::Observed}};
    const std::string path = temp_path("ptsad_kps_rt.csv");
    save_keypoints(pts, path, true);
    const KeyPointSeries back = load_keypoints(path);
    REQUIRE(back.size() == 3);
    CHECK(back.points[1].origin == PointOrigin::Recovered);
    CHECK(back.points[1].t == 1.5);
    CHECK(back.points[1].v == -2.25);

    save_keypoints(pts, path, false);
    const KeyPointSeries plain = load_keypoints(path);
    REQUIRE(plain.size() == 3);
    CHECK(plain.points[1].origin == PointOrigin::Observed);
}
