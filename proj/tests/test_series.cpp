#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <string>

#include "ptsad/errors.hpp"
#include "ptsad/rng.hpp"
#include "ptsad/series.hpp"

using namespace ptsad;

namespace {

std::string temp_path(const std::string& name) {
    return (std::filesystem::temp_directory_path() / name).string();
}

void write_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    out << content;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    std::string s((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return s;
}

}  // namespace

TEST_CASE("format_value round trips") {
    for (double x : {0.1, -0.1, 1.0, 1e-300, 123456.789, 0.0, 1.0 / 3.0, 2e22}) {
        CHECK(std::stod(format_value(x)) == x);
    }
    CHECK(format_value(1.0) == "1");
    CHECK(format_value(0.5) == "0.5");
}

TEST_CASE("rng basics") {
    Rng rng(42);
    for (int i = 0; i < 1000; ++i) {
        const double u = rng.uniform();
        CHECK(u >= 0.0);
        CHECK(u < 1.0);
    }
    for (int i = 0; i < 1000; ++i) CHECK(rng.below(7) < 7);
    double mean = 0.0;
    for (int i = 0; i < 4000; ++i) mean += rng.normal();
    mean /= 4000.0;
    CHECK(std::abs(mean) < 0.1);

    // derive gives distinct child seeds and is pure
    std::set<std::uint64_t> seen;
    for (std::uint64_t a = 0; a < 20; ++a)
        for (std::uint64_t b = 0; b < 20; ++b) seen.insert(Rng::derive(1, a, b));
    CHECK(seen.size() == 400);
    CHECK(Rng::derive(1, 2, 3) == Rng::derive(1, 2, 3));
}

TEST_CASE("series save and load round trip") {
    TimeSeries ts;
    ts.points = {{0.0, 1.5}, {1.0, -0.25}, {2.5, 1.0 / 3.0}};
    const std::string path = temp_path("ptsad_series_rt.csv");
    save_series(ts, path);
    const TimeSeries back = load_series(path);
    REQUIRE(back.size() == 3);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(back[i].t == ts[i].t);
        CHECK(back[i].v == ts[i].v);
    }
}

TEST_CASE("series loader rejects malformed input") {
    const std::string path = temp_path("ptsad_series_bad.csv");

    write_file(path, "time,value\n0,1\n");
    CHECK_THROWS_AS(load_series(path), ParseError);

    write_file(path, "t,v\n0,1\nnope,2\n");
    CHECK_THROWS_AS(load_series(path), ParseError);

    write_file(path, "t,v\n0,1\n2\n");
    CHECK_THROWS_AS(load_series(path), ParseError);

    write_file(path, "t,v\n0,1\n0,2\n");
    CHECK_THROWS_AS(load_series(path), OrderingError);

    write_file(path, "t,v\n2,1\n1,2\n");
    try {
        load_series(path);
        FAIL("expected OrderingError");
    } catch (const OrderingError& e) {
        CHECK(std::string(e.what()).find("line 3") != std::string::npos);
    }

    write_file(path, "t,v\n0,inf\n1,2\n");
    CHECK_THROWS(load_series(path));

    CHECK_THROWS_AS(load_series(temp_path("ptsad_no_such_file.csv")), ValueError);
}

TEST_CASE("label track round trip and validation") {
    LabelTrack track;
    track.events = {{10.0, Label::N}, {55.5, Label::Ab}, {90.0, Label::N}};
    const std::string path = temp_path("ptsad_labels_rt.csv");
    save_labels(track, path);
    const LabelTrack back = load_labels(path);
    REQUIRE(back.events.size() == 3);
    CHECK(back.events[1].t == 55.5);
    CHECK(back.events[1].label == Label::Ab);

    write_file(path, "t,label\n1,N\n2,Maybe\n");
    CHECK_THROWS_AS(load_labels(path), ValueError);
    write_file(path, "t,label\n2,N\n1,Ab\n");
    CHECK_THROWS_AS(load_labels(path), OrderingError);
}

TEST_CASE("validate_series catches bad invariants") {
    TimeSeries ts;
    ts.points = {{0.0, 0.0}};
    CHECK_THROWS_AS(validate_series(ts), ContractError);
    ts.points = {{0.0, 0.0}, {0.0, 1.0}};
    CHECK_THROWS_AS(validate_series(ts), OrderingError);
    ts.points = {{0.0, 0.0}, {1.0, std::nan("")}};
    CHECK_THROWS_AS(validate_series(ts), ValueError);
}

TEST_CASE("synth produces a valid labelled series") {
    SynthConfig cfg;
    cfg.n_periods = 12;
    cfg.base_period_len = 120;
    cfg.seed = 7;
    const SynthResult r = synth_pts(cfg);
    validate_series(r.series);
    validate_track(r.labels);
    CHECK(r.boundaries.size() == 13);
    CHECK(r.labels.events.size() == 12);
    CHECK(r.dropped_points.empty());
    CHECK(r.series.points.front().t == 0.0);
    // integer sampling: one point per time unit when nothing is dropped
    CHECK(static_cast<double>(r.series.size() - 1) == r.series.points.back().t);
    for (const LabelEvent& ev : r.labels.events) CHECK(ev.label == Label::N);
}

TEST_CASE("synth is deterministic in the seed") {
    SynthConfig cfg;
    cfg.n_periods = 8;
    cfg.base_period_len = 100;
    cfg.anomaly_rate = 0.2;
    cfg.dropout_rate = 0.2;
    cfg.peak_noise = 0.5;
    cfg.seed = 3;
    const SynthResult a = synth_pts(cfg);
    const SynthResult b = synth_pts(cfg);
    REQUIRE(a.series.size() == b.series.size());
    for (std::size_t i = 0; i < a.series.size(); ++i) {
        CHECK(a.series[i].t == b.series[i].t);
        CHECK(a.series[i].v == b.series[i].v);
    }
    cfg.seed = 4;
    const SynthResult c = synth_pts(cfg);
    bool differs = c.series.size() != a.series.size();
    for (std::size_t i = 0; !differs && i < a.series.size(); ++i)
        differs = c.series[i].v != a.series[i].v;
    CHECK(differs);
}

TEST_CASE("synth dropout removes exactly the reported samples") {
    SynthConfig cfg;
    cfg.n_periods = 20;
    cfg.base_period_len = 100;
    cfg.dropout_rate = 1.0;
    cfg.seed = 11;
    const SynthResult r = synth_pts(cfg);
    CHECK(r.dropped_points.size() == 20);
    const double last_t = r.series.points.back().t;
    CHECK(static_cast<double>(r.series.size() - 1 + r.dropped_points.size()) == last_t);
    std::set<double> times;
    for (const Point& p : r.series.points) times.insert(p.t);
    for (const Point& p : r.dropped_points) CHECK(times.count(p.t) == 0);

    // same seed with dropout off keeps those samples, with the dropped values
    cfg.dropout_rate = 0.0;
    const SynthResult full = synth_pts(cfg);
    for (const Point& p : r.dropped_points) {
        bool found = false;
        for (const Point& q : full.series.points)
            if (q.t == p.t && q.v == p.v) found = true;
        CHECK(found);
    }
}

TEST_CASE("synth anomalies shorten periods and are labelled Ab") {
    SynthConfig cfg;
    cfg.n_periods = 40;
    cfg.base_period_len = 150;
    cfg.anomaly_rate = 0.3;
    cfg.seed = 5;
    const SynthResult r = synth_pts(cfg);
    std::size_t ab = 0;
    for (std::size_t i = 0; i < r.labels.events.size(); ++i) {
        const double len = r.boundaries[i + 1] - r.boundaries[i];
        if (r.labels.events[i].label == Label::Ab) {
            ++ab;
            CHECK(len < 0.75 * cfg.base_period_len);
        }
    }
    CHECK(ab > 0);
    CHECK(ab < r.labels.events.size());
}

TEST_CASE("synth rejects bad configuration") {
    SynthConfig cfg;
    cfg.n_periods = 1;
    CHECK_THROWS_AS(synth_pts(cfg), ContractError);
    cfg = {};
    cfg.base_period_len = 50;
    CHECK_THROWS_AS(synth_pts(cfg), ContractError);
    cfg = {};
    cfg.anomaly_rate = 1.5;
    CHECK_THROWS_AS(synth_pts(cfg), ContractError);
    cfg = {};
    cfg.amplitude = -1.0;
    CHECK_THROWS_AS(synth_pts(cfg), ContractError);
}

TEST_CASE("atomic_write replaces content completely") {
    const std::string path = temp_path("ptsad_atomic.txt");
    atomic_write(path, "first version that is long\n");
    atomic_write(path, "short\n");
    CHECK(read_file(path) == "short\n");
    CHECK_FALSE(std::filesystem::exists(path + ".tmp"));
}
