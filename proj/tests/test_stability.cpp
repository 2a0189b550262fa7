#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "ptsad/errors.hpp"
#include "ptsad/series.hpp"
#include "ptsad/stability.hpp"

using namespace ptsad;

namespace {

SweepResult make_sweep(std::vector<std::size_t> counts) {
    SweepResult r;
    for (std::size_t i = 0; i < counts.size(); ++i)
        r.parameter_values.push_back(double(i + 1));
    r.counts = std::move(counts);
    return r;
}

TimeSeries clean_series(int periods, int len, std::uint64_t seed) {
    SynthConfig cfg;
    cfg.n_periods = periods;
    cfg.base_period_len = len;
    cfg.seed = seed;
    return synth_pts(cfg).series;
}

}  // namespace

TEST_CASE("monotonicity_index hand cases") {
    CHECK(monotonicity_index(make_sweep({50, 30, 20, 10}), MonotoneDirection::Decreasing) ==
          100.0);
    CHECK(monotonicity_index(make_sweep({10, 10, 10}), MonotoneDirection::Decreasing) == 100.0);
    CHECK(monotonicity_index(make_sweep({10, 20, 40}), MonotoneDirection::Increasing) == 100.0);

    // one violation: 30 -> 40 against a decreasing trend
    // T+ = 10/35, T- = 20/40 + 30/25 = 1.7, M_D = (1 - (10/35)/1.7) * 100
    const double md =
        monotonicity_index(make_sweep({50, 30, 40, 10}), MonotoneDirection::Decreasing);
    CHECK(md == doctest::Approx((1.0 - (10.0 / 35.0) / (20.0 / 40.0 + 30.0 / 25.0)) * 100.0));
    CHECK(md < 100.0);

    // pure violation with no conforming step dives to -infinity
    const double bad =
        monotonicity_index(make_sweep({10, 20}), MonotoneDirection::Decreasing);
    CHECK(std::isinf(bad));
    CHECK(bad < 0.0);

    CHECK_THROWS_AS(monotonicity_index(make_sweep({5}), MonotoneDirection::Decreasing),
                    ContractError);
}

TEST_CASE("epsilon sweep counts shrink on synthetic data") {
    const TimeSeries ts = clean_series(20, 150, 31);
    const SweepResult r = sweep_epsilon(ts, {0.2, 0.5, 1.0, 2.0, 3.0});
    REQUIRE(r.counts.size() == 5);
    for (std::size_t i = 1; i < r.counts.size(); ++i) CHECK(r.counts[i] <= r.counts[i - 1]);
    CHECK(r.counts.front() > r.counts.back());
    CHECK(monotonicity_index(r, MonotoneDirection::Decreasing) == 100.0);
}

TEST_CASE("lambda sweep counts shrink as the tolerance grows") {
    const TimeSeries ts = clean_series(20, 150, 32);
    const SweepResult r = sweep_lambda(ts, 0.2, {0.5, 2.0, 8.0, 20.0, 45.0});
    REQUIRE(r.counts.size() == 5);
    for (std::size_t i = 1; i < r.counts.size(); ++i) CHECK(r.counts[i] <= r.counts[i - 1]);
    CHECK(r.counts.back() >= 2);
    CHECK(monotonicity_index(r, MonotoneDirection::Decreasing) == 100.0);
}

TEST_CASE("endpoint_stability scores a periodic series near 100") {
    const TimeSeries ts = clean_series(30, 150, 33);
    const StabilityRun run = endpoint_stability(ts, 0.2, 0.5, 131, 10);
    CHECK(run.skipped_levels.empty());
    REQUIRE(run.level_shift_terms.size() == 10);
    CHECK(run.score > 95.0);
    CHECK(run.score <= 100.0);
    for (double term : run.level_shift_terms) CHECK(term >= 0.0);
    for (std::size_t n : run.breakpoint_counts) CHECK(n >= 2);

    // deterministic
    const StabilityRun again = endpoint_stability(ts, 0.2, 0.5, 131, 10);
    CHECK(again.score == run.score);
}

TEST_CASE("endpoint_stability contract") {
    const TimeSeries ts = clean_series(3, 100, 34);
    CHECK_THROWS_AS(endpoint_stability(ts, 0.2, 0.5, 10, 0), ContractError);
    CHECK_THROWS_AS(endpoint_stability(ts, 0.2, 0.5, -1, 5), ContractError);
    CHECK_THROWS_AS(endpoint_stability(ts, 0.2, 0.5, 200, 10), ContractError);
}

TEST_CASE("angle_features one value per interior point") {
    const TimeSeries ts = clean_series(10, 120, 35);
    const CompressedSeries cts = dp_compress(correct_series(ts, 0.2), 0.5);
    const auto feats = angle_features(cts);
    REQUIRE(feats.size() == cts.size() - 2);
    for (const auto& f : feats) {
        REQUIRE(f.size() == 1);
        CHECK(f[0] >= 0.0);
        CHECK(f[0] <= 3.15);
    }
    CompressedSeries tiny;
    tiny.points = {{0, 0, PointOrigin::Observed}, {1, 1, PointOrigin::Observed}};
    CHECK_THROWS_AS(angle_features(tiny), ContractError);
}

TEST_CASE("valley_baseline tracks an adaptive bound") {
    TimeSeries ts;
    // minima at t = 2 (v=2), t = 6 (v=1), t = 10 (v=40)
    const double vals[] = {10, 5, 2, 5, 10, 6, 1, 6, 50, 45, 40, 45, 50};
    for (int i = 0; i < 13; ++i) ts.points.push_back({double(i), vals[i]});
    const auto idx = valley_baseline(ts, 50.0, 1.1);
    REQUIRE(idx.size() == 2);
    CHECK(idx[0] == 2);
    CHECK(idx[1] == 6);
    // bound: 50 -> 1.1*2 = 2.2 -> 1.1*(2+1)/2 = 1.65, so the 40 is rejected

    CHECK_THROWS_AS(valley_baseline(ts, 50.0, 0.0), ContractError);
}

TEST_CASE("valley_baseline finds synthetic dips") {
    SynthConfig cfg;
    cfg.n_periods = 15;
    cfg.base_period_len = 120;
    cfg.amplitude = 40.0;
    cfg.seed = 36;
    SynthResult r = synth_pts(cfg);
    // the adaptive bound is multiplicative, so shift the signal positive first
    for (Point& p : r.series.points) p.v += 15.0;
    const auto idx = valley_baseline(r.series, 50.0, 1.1);
    CHECK(idx.size() >= 10);
    for (std::size_t i : idx) CHECK(r.series[i].v < 10.0);  // dips, not bumps
}
