#include "ptsad/segment.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <sstream>

#include "ptsad/errors.hpp"

namespace ptsad {

std::vector<Period> split_periods(const CompressedSeries& cts,
                                  const std::vector<std::size_t>& period_point_indices) {
    if (period_point_indices.size() < 2)
        throw ContractError("split_periods requires at least 2 period points");
    for (std::size_t i = 0; i < period_point_indices.size(); ++i) {
        if (period_point_indices[i] >= cts.size())
            throw ContractError("period point index out of range");
        if (i > 0 && !(period_point_indices[i] > period_point_indices[i - 1]))
            throw OrderingError("period point indices must be strictly increasing");
    }
    std::vector<Period> periods;
    for (std::size_t i = 0; i + 1 < period_point_indices.size(); ++i) {
        Period pd;
        pd.index = i;
        for (std::size_t j = period_point_indices[i]; j <= period_point_indices[i + 1]; ++j)
            pd.points.push_back({cts.points[j].t, cts.points[j].v});
        periods.push_back(std::move(pd));
    }
    return periods;
}

PeriodSummary summarize_period(const Period& pd) {
    if (pd.points.size() < 2) throw ContractError("a period needs at least 2 points");
    PeriodSummary s;
    s.h_min = pd.points[0].v;
    s.t_min = pd.points[0].t;
    s.h_max = pd.points[0].v;
    s.t_max = pd.points[0].t;
    double sum = 0.0;
    for (const Point& p : pd.points) {
        sum += p.v;
        if (p.v < s.h_min) {  // strict: ties keep the first point
            s.h_min = p.v;
            s.t_min = p.t;
        }
        if (p.v > s.h_max) {
            s.h_max = p.v;
            s.t_max = p.t;
        }
    }
    s.h_mean = sum / static_cast<double>(pd.points.size());
    s.p_minmax = std::abs(s.t_max - s.t_min);
    s.p_l = pd.points.back().t - pd.points.front().t;
    return s;
}

Label logical_multiply(const std::vector<Label>& labels) {
    if (labels.empty()) throw ContractError("logical_multiply on empty label list");
    for (Label lb : labels)
        if (lb == Label::Ab) return Label::Ab;
    return Label::N;
}

Label annotate_period(const Period& pd, const LabelTrack& track) {
    if (track.events.empty()) throw ContractError("annotate_period with an empty label track");
    const double t0 = pd.points.front().t;
    const double t1 = pd.points.back().t;

    std::vector<Label> inside;
    for (const LabelEvent& ev : track.events)
        if (ev.t >= t0 && ev.t <= t1) inside.push_back(ev.label);
    if (!inside.empty()) return logical_multiply(inside);

    // label state in force at the period start
    const LabelEvent* prior = nullptr;
    for (const LabelEvent& ev : track.events) {
        if (ev.t <= t0) prior = &ev;
        else break;
    }
    if (prior) return prior->label;

    // no prior state: fall back to the first event after the period
    for (const LabelEvent& ev : track.events)
        if (ev.t > t1) return ev.label;
    return track.events.front().label;
}

std::vector<AnnotatedPeriod> summarize_and_annotate(const std::vector<Period>& periods,
                                                    const LabelTrack& track) {
    std::vector<AnnotatedPeriod> out;
    out.reserve(periods.size());
    for (const Period& pd : periods) {
        AnnotatedPeriod ap;
        ap.summary = summarize_period(pd);
        ap.annotation = annotate_period(pd, track);
        ap.t_start = pd.points.front().t;
        ap.t_end = pd.points.back().t;
        out.push_back(ap);
    }
    return out;
}

void save_periods(const std::vector<AnnotatedPeriod>& periods, const std::string& path) {
    std::string out = "h_min,t_min,h_max,t_max,h_mean,p_minmax,p_l,annotation,t_start,t_end\n";
    for (const AnnotatedPeriod& ap : periods) {
        const PeriodSummary& s = ap.summary;
        for (double x : {s.h_min, s.t_min, s.h_max, s.t_max, s.h_mean, s.p_minmax, s.p_l}) {
            out += format_value(x);
            out += ',';
        }
        out += label_name(ap.annotation);
        out += ',';
        out += format_value(ap.t_start);
        out += ',';
        out += format_value(ap.t_end);
        out += '\n';
    }
    atomic_write(path, out);
}

std::vector<AnnotatedPeriod> load_periods(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValueError("cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line) ||
        line != "h_min,t_min,h_max,t_max,h_mean,p_minmax,p_l,annotation,t_start,t_end")
        throw ParseError("line 1: bad periods header");
    std::vector<AnnotatedPeriod> out;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (cells.size() != 10)
            throw ParseError("line " + std::to_string(line_no) + ": expected 10 columns");
        auto num = [&](const std::string& c) {
            double x = 0.0;
            auto res = std::from_chars(c.data(), c.data() + c.size(), x);
            if (res.ec != std::errc{} || res.ptr != c.data() + c.size())
                throw ParseError("line " + std::to_string(line_no) + ": bad number '" + c + "'");
            return x;
        };
        AnnotatedPeriod ap;
        ap.summary.h_min = num(cells[0]);
        ap.summary.t_min = num(cells[1]);
        ap.summary.h_max = num(cells[2]);
        ap.summary.t_max = num(cells[3]);
        ap.summary.h_mean = num(cells[4]);
        ap.summary.p_minmax = num(cells[5]);
        ap.summary.p_l = num(cells[6]);
        ap.annotation = parse_label(cells[7]);
        ap.t_start = num(cells[8]);
        ap.t_end = num(cells[9]);
        out.push_back(ap);
    }
    return out;
}

}  // namespace ptsad
