#include "ptsad/series.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "ptsad/errors.hpp"
#include "ptsad/rng.hpp"

namespace ptsad {

const char* label_name(Label lb) { return lb == Label::N ? "N" : "Ab"; }

Label parse_label(const std::string& token) {
    if (token == "N") return Label::N;
    if (token == "Ab") return Label::Ab;
    throw ValueError("unknown label token '" + token + "' (expected N or Ab)");
}

std::string format_value(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), x);
    return std::string(buf, res.ptr);
}

void atomic_write(const std::string& path, const std::string& content) {
    const std::string tmp = path + ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw ValueError("cannot open '" + tmp + "' for writing");
        out.write(content.data(), static_cast<std::streamsize>(content.size()));
        if (!out) throw ValueError("write failed for '" + tmp + "'");
    }
    std::filesystem::rename(tmp, path);
}

void validate_series(const TimeSeries& ts) {
    if (ts.size() < 2) throw ContractError("time series must have at least 2 points");
    for (std::size_t i = 0; i < ts.size(); ++i) {
        const Point& p = ts[i];
        if (!std::isfinite(p.t) || !std::isfinite(p.v))
            throw ValueError("non-finite value at index " + std::to_string(i));
        if (i > 0 && !(p.t > ts[i - 1].t))
            throw OrderingError("t not strictly increasing at index " + std::to_string(i));
    }
}

void validate_track(const LabelTrack& track) {
    for (std::size_t i = 1; i < track.events.size(); ++i) {
        if (!(track.events[i].t > track.events[i - 1].t))
            throw OrderingError("label t not strictly increasing at index " + std::to_string(i));
    }
}

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ValueError("cannot open '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

double parse_number(std::string_view sv, std::size_t line_no) {
    double x = 0.0;
    auto res = std::from_chars(sv.data(), sv.data() + sv.size(), x);
    if (res.ec != std::errc{} || res.ptr != sv.data() + sv.size())
        throw ParseError("line " + std::to_string(line_no) + ": bad number '" + std::string(sv) + "'");
    if (!std::isfinite(x))
        throw ValueError("line " + std::to_string(line_no) + ": non-finite value");
    return x;
}

// Splits into lines, dropping a trailing \r and a final empty line.
std::vector<std::string_view> split_lines(const std::string& text) {
    std::vector<std::string_view> lines;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t end = text.find('\n', start);
        if (end == std::string::npos) {
            if (start < text.size()) lines.push_back(std::string_view(text).substr(start));
            break;
        }
        std::string_view line = std::string_view(text).substr(start, end - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        lines.push_back(line);
        start = end + 1;
    }
    return lines;
}

}  // namespace

TimeSeries load_series(const std::string& path) {
    const std::string text = read_file(path);
    const auto lines = split_lines(text);
    if (lines.empty() || lines[0] != "t,v")
        throw ParseError("line 1: expected header 't,v'");
    TimeSeries ts;
    ts.points.reserve(lines.size() - 1);
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::string_view line = lines[i];
        if (line.empty()) continue;
        const std::size_t comma = line.find(',');
        if (comma == std::string_view::npos)
            throw ParseError("line " + std::to_string(i + 1) + ": expected 't,v' row");
        Point p;
        p.t = parse_number(line.substr(0, comma), i + 1);
        p.v = parse_number(line.substr(comma + 1), i + 1);
        if (!ts.points.empty() && !(p.t > ts.points.back().t))
            throw OrderingError("line " + std::to_string(i + 1) + ": t not strictly increasing");
        ts.points.push_back(p);
    }
    validate_series(ts);
    return ts;
}

void save_series(const TimeSeries& ts, const std::string& path) {
    std::string out = "t,v\n";
    for (const Point& p : ts.points) {
        out += format_value(p.t);
        out += ',';
        out += format_value(p.v);
        out += '\n';
    }
    atomic_write(path, out);
}

LabelTrack load_labels(const std::string& path) {
    const std::string text = read_file(path);
    const auto lines = split_lines(text);
    if (lines.empty() || lines[0] != "t,label")
        throw ParseError("line 1: expected header 't,label'");
    LabelTrack track;
    for (std::size_t i = 1; i < lines.size(); ++i) {
        const std::string_view line = lines[i];
        if (line.empty()) continue;
        const std::size_t comma = line.find(',');
        if (comma == std::string_view::npos)
            throw ParseError("line " + std::to_string(i + 1) + ": expected 't,label' row");
        LabelEvent ev;
        ev.t = parse_number(line.substr(0, comma), i + 1);
        ev.label = parse_label(std::string(line.substr(comma + 1)));
        if (!track.events.empty() && !(ev.t > track.events.back().t))
            throw OrderingError("line " + std::to_string(i + 1) + ": t not strictly increasing");
        track.events.push_back(ev);
    }
    return track;
}

void save_labels(const LabelTrack& track, const std::string& path) {
    std::string out = "t,label\n";
    for (const LabelEvent& ev : track.events) {
        out += format_value(ev.t);
        out += ',';
        out += label_name(ev.label);
        out += '\n';
    }
    atomic_write(path, out);
}

void save_boundaries(const std::vector<double>& boundaries, const std::string& path) {
    std::string out;
    for (double b : boundaries) {
        out += format_value(b);
        out += '\n';
    }
    atomic_write(path, out);
}

namespace {

void check_fraction(double x, const char* name) {
    if (!(x >= 0.0 && x <= 1.0))
        throw ContractError(std::string(name) + " must be in [0,1]");
}

struct Vertex {
    long t;
    double v;
};

}  // namespace

SynthResult synth_pts(const SynthConfig& cfg) {
    if (cfg.n_periods < 2) throw ContractError("n_periods must be >= 2");
    if (cfg.base_period_len < 80) throw ContractError("base_period_len must be >= 80");
    if (!(cfg.amplitude > 0.0)) throw ContractError("amplitude must be positive");
    check_fraction(cfg.anomaly_rate, "anomaly_rate");
    check_fraction(cfg.jitter, "jitter");
    check_fraction(cfg.dropout_rate, "dropout_rate");
    check_fraction(cfg.peak_noise, "peak_noise");

    Rng rng(cfg.seed);
    const double A = cfg.amplitude;
    const long base = cfg.base_period_len;

    std::vector<Vertex> vertices;
    std::vector<double> boundaries;
    std::vector<Point> dropped;
    LabelTrack labels;

    long period_len = base;  // un-shortened chain, keeps the jitter condition across anomalies
    long t0 = 0;
    double start_peak_amp = A;
    long pre_width = 6;  // rise width of the very first peak is unused (it is an endpoint)

    for (int i = 0; i < cfg.n_periods; ++i) {
        // fixed draw count per period so streams align across config variations
        const double u_len = rng.uniform();
        const double u_dipw = rng.uniform();
        const double u_bumppos = rng.uniform();
        const double u_bumpamp = rng.uniform();
        const double u_pk_width = rng.uniform();
        const double u_pk_amp = rng.uniform();
        const double u_anom = rng.uniform();
        const double u_drop = rng.uniform();

        if (i > 0) {
            const long delta = std::lround(cfg.jitter * static_cast<double>(base) * (2.0 * u_len - 1.0));
            long next = period_len + delta;
            const long lo = std::max<long>(40, std::lround((1.0 - 3.0 * cfg.jitter) * base));
            const long hi = std::lround((1.0 + 3.0 * cfg.jitter) * base);
            period_len = std::clamp(next, lo, hi);
        }

        const bool anomalous = u_anom < cfg.anomaly_rate;
        const bool drop_bump = u_drop < cfg.dropout_rate;
        const long len = anomalous ? std::max<long>(48, std::lround(0.6 * period_len)) : period_len;

        long post_width = 6 + std::lround(30.0 * cfg.peak_noise * u_pk_width);
        post_width = std::max<long>(3, post_width);

        boundaries.push_back(static_cast<double>(t0));
        vertices.push_back({t0, start_peak_amp});                       // boundary peak
        vertices.push_back({t0 + post_width, -0.25 * A});               // dip bottom
        const long dip_end =
            t0 + post_width + 4 + std::lround((4.0 + 20.0 * cfg.peak_noise) * u_dipw);
        vertices.push_back({dip_end, 0.0});
        long bump_start = t0 + std::lround(len * (0.5 + 0.02 * (2.0 * u_bumppos - 1.0)));
        bump_start = std::max(bump_start, dip_end + 3);
        const double bump_amp = 0.3 * A * (1.0 + 0.1 * (2.0 * u_bumpamp - 1.0));
        const long bump_width = 8 + std::lround(22.0 * cfg.peak_noise * u_pk_amp);
        vertices.push_back({bump_start, 0.0});
        vertices.push_back({bump_start + bump_width, bump_amp});        // bump apex
        vertices.push_back({bump_start + 2 * bump_width, 0.0});
        if (drop_bump)
            dropped.push_back({static_cast<double>(bump_start + bump_width), bump_amp});

        pre_width = 6 + std::lround(30.0 * cfg.peak_noise * rng.uniform());
        pre_width = std::max<long>(3, pre_width);
        const long bump_end = bump_start + 2 * bump_width;
        if (t0 + len - 3 < bump_end + 2)
            throw ContractError("period too short for the beat template");
        long rise_start = t0 + len - pre_width;
        rise_start = std::clamp(rise_start, bump_end + 2, t0 + len - 3);
        vertices.push_back({rise_start, 0.0});

        labels.events.push_back({static_cast<double>(t0 + std::lround(0.45 * len)),
                                 anomalous ? Label::Ab : Label::N});

        double next_peak_amp = A;
        if (anomalous) next_peak_amp *= 0.5;  // deformed terminal peak
        start_peak_amp = next_peak_amp;
        t0 += len;
    }
    boundaries.push_back(static_cast<double>(t0));
    vertices.push_back({t0, start_peak_amp});  // terminal peak, series endpoint

    // Sample the piecewise-linear template at every integer t, skipping dropped vertices.
    SynthResult result;
    result.boundaries = std::move(boundaries);
    result.labels = std::move(labels);
    result.dropped_points = dropped;
    result.series.points.reserve(static_cast<std::size_t>(t0 + 1));

    std::size_t seg = 0;
    std::size_t next_drop = 0;
    for (long t = 0; t <= t0; ++t) {
        while (seg + 1 < vertices.size() && vertices[seg + 1].t <= t) ++seg;
        double v;
        if (vertices[seg].t == t) {
            v = vertices[seg].v;
        } else {
            const Vertex& a = vertices[seg];
            const Vertex& b = vertices[seg + 1];
            v = a.v + (b.v - a.v) * static_cast<double>(t - a.t) / static_cast<double>(b.t - a.t);
        }
        if (next_drop < dropped.size() && dropped[next_drop].t == static_cast<double>(t)) {
            ++next_drop;
            continue;
        }
        result.series.points.push_back({static_cast<double>(t), v});
    }
    validate_series(result.series);
    validate_track(result.labels);
    return result;
}

}  // namespace ptsad
