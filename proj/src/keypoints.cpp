#include "ptsad/keypoints.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "ptsad/errors.hpp"

namespace ptsad {

namespace {

struct Vec2 {
    double x;
    double y;
};

Vec2 scaled(const Point& p, const AxisScale& s) { return {p.t * s.t_scale, p.v * s.v_scale}; }

double norm(const Vec2& a) { return std::hypot(a.x, a.y); }

Vec2 sub(const Vec2& a, const Vec2& b) { return {a.x - b.x, a.y - b.y}; }

constexpr double kPi = 3.14159265358979323846;
constexpr double kDegenerateSin = 1e-12;

}  // namespace

double turning_angle(const Point& prev, const Point& mid, const Point& next,
                     const AxisScale& scale) {
    if (!(prev.t < mid.t && mid.t < next.t))
        throw ContractError("turning_angle requires strictly increasing t");
    const Vec2 d1 = sub(scaled(mid, scale), scaled(prev, scale));
    const Vec2 d2 = sub(scaled(next, scale), scaled(mid, scale));
    if (norm(d1) == 0.0 || norm(d2) == 0.0)
        throw GeometryError("turning_angle on coincident points");
    const double cross = d1.x * d2.y - d1.y * d2.x;
    const double dot = d1.x * d2.x + d1.y * d2.y;
    return std::atan2(std::abs(cross), dot);
}

KeyPointSeries detect_keypoints(const TimeSeries& ts, double epsilon, const AxisScale& scale) {
    if (ts.size() < 2) throw ContractError("detect_keypoints requires at least 2 points");
    if (!(epsilon > 0.0)) throw ContractError("epsilon must be positive");
    KeyPointSeries kps;
    kps.epsilon = epsilon;
    kps.points.push_back({ts[0].t, ts[0].v, PointOrigin::Observed});
    for (std::size_t i = 1; i + 1 < ts.size(); ++i) {
        const KeyPoint& anchor = kps.points.back();
        const double a = turning_angle({anchor.t, anchor.v}, ts[i], ts[i + 1], scale);
        if (a > epsilon)
            kps.points.push_back({ts[i].t, ts[i].v, PointOrigin::Observed});
    }
    kps.points.push_back({ts.points.back().t, ts.points.back().v, PointOrigin::Observed});
    return kps;
}

namespace {

// Both circle-circle intersection points, in scaled coordinates.
std::vector<Vec2> circle_intersections(const Vec2& c2, double r2, const Vec2& c3, double r3) {
    const Vec2 d = sub(c3, c2);
    const double dist = norm(d);
    if (dist == 0.0) return {};
    const double along = (dist * dist + r2 * r2 - r3 * r3) / (2.0 * dist);
    double h2 = r2 * r2 - along * along;
    if (h2 < 0.0) {
        // tangent within rounding noise still counts as one solution
        if (h2 > -1e-9 * r2 * r2) h2 = 0.0;
        else return {};
    }
    const double h = std::sqrt(h2);
    const Vec2 unit{d.x / dist, d.y / dist};
    const Vec2 base{c2.x + along * unit.x, c2.y + along * unit.y};
    if (h == 0.0) return {base};
    return {{base.x - h * unit.y, base.y + h * unit.x},
            {base.x + h * unit.y, base.y - h * unit.x}};
}

double line_distance(const Vec2& p, const Vec2& a, const Vec2& b) {
    const Vec2 d = sub(b, a);
    const double len = norm(d);
    const Vec2 ap = sub(p, a);
    return std::abs(d.x * ap.y - d.y * ap.x) / len;
}

}  // namespace

RecoverDecision recover_missing(const Point& p1, const Point& p2, const Point& p3,
                                const Point& p4, double epsilon, const AxisScale& scale) {
    if (!(p1.t < p2.t && p2.t < p3.t && p3.t < p4.t))
        throw ContractError("recover_missing requires strictly increasing t");
    const double a2 = turning_angle(p1, p2, p3, scale);
    const double a3 = turning_angle(p2, p3, p4, scale);

    if (a2 > epsilon && a3 <= epsilon) return {RecoverKind::KeepP2, std::nullopt};
    if (a2 <= epsilon && a3 > epsilon) return {RecoverKind::KeepP3, std::nullopt};
    if (a2 <= epsilon && a3 <= epsilon)
        throw ContractError("recover_missing requires a turning angle above epsilon");

    if (a2 + a3 > kPi) return {RecoverKind::KeepBothNoInsert, std::nullopt};
    const double s = std::sin(kPi - a2 - a3);
    if (std::abs(s) < kDegenerateSin) return {RecoverKind::KeepBoth, std::nullopt};

    const Vec2 c2 = scaled(p2, scale);
    const Vec2 c3 = scaled(p3, scale);
    const double q = norm(sub(c3, c2)) / s;
    const double r2 = q * std::sin(a3);
    const double r3 = q * std::sin(a2);

    std::vector<Vec2> candidates;
    for (const Vec2& sol : circle_intersections(c2, r2, c3, r3)) {
        const double t = sol.x / scale.t_scale;
        if (t > p2.t && t < p3.t) candidates.push_back(sol);
    }
    if (candidates.empty()) return {RecoverKind::KeepBoth, std::nullopt};

    Vec2 chosen = candidates[0];
    const Vec2 c1 = scaled(p1, scale);
    const Vec2 c4 = scaled(p4, scale);
    if (candidates.size() == 2) {
        // the true missing point sits on the extension of line p1p2
        const double d0 = line_distance(candidates[0], c1, c2);
        const double d1 = line_distance(candidates[1], c1, c2);
        chosen = d1 < d0 ? candidates[1] : candidates[0];
    }
    // a genuine missing point continues both surrounding trends; one circle
    // solution always reproduces the angles mirrored across p2p3, so demand
    // collinearity with both lines
    const double tol = 1e-6 * norm(sub(c3, c2));
    if (line_distance(chosen, c1, c2) > tol || line_distance(chosen, c3, c4) > tol)
        return {RecoverKind::KeepBoth, std::nullopt};
    return {RecoverKind::Insert, Point{chosen.x / scale.t_scale, chosen.y / scale.v_scale}};
}

KeyPointSeries correct_series(const TimeSeries& ts, double epsilon, const AxisScale& scale) {
    if (ts.size() < 4) throw ContractError("correct_series requires at least 4 points");
    if (!(epsilon > 0.0)) throw ContractError("epsilon must be positive");

    // A missing point clips one sharp corner into two moderate turns, so the
    // four-point check runs over detected inflexions, not raw samples.
    const KeyPointSeries detected = detect_keypoints(ts, epsilon, scale);
    const auto& kp = detected.points;
    const std::size_t n = kp.size();

    KeyPointSeries out;
    out.epsilon = epsilon;
    out.points.push_back(kp[0]);

    std::size_t i = 1;
    while (i + 2 < n) {
        const KeyPoint& anchor = out.points.back();
        const Point p1{anchor.t, anchor.v};
        const Point p2{kp[i].t, kp[i].v};
        const Point p3{kp[i + 1].t, kp[i + 1].v};
        const Point p4{kp[i + 2].t, kp[i + 2].v};
        const double a2 = turning_angle(p1, p2, p3, scale);
        const double a3 = turning_angle(p2, p3, p4, scale);
        if (a2 <= epsilon && a3 <= epsilon) {
            // no turn left in this context, p2 is redundant here
            i += 1;
            continue;
        }
        RecoverDecision dec = recover_missing(p1, p2, p3, p4, epsilon, scale);
        if (dec.kind == RecoverKind::Insert) {
            // a single lost sample leaves no observed samples inside the gap
            // and a gap of about two sampling steps; anything wider is just a
            // sparse stretch of the signal, not a hole
            const auto less_t = [](const Point& q, double t) { return q.t < t; };
            const auto at_p2 = std::lower_bound(ts.points.begin(), ts.points.end(),
                                                p2.t, less_t);
            const auto at_p3 = std::lower_bound(ts.points.begin(), ts.points.end(),
                                                p3.t, less_t);
            bool plausible = at_p3 == at_p2 + 1;
            if (plausible) {
                double steps = 0.0;
                int sides = 0;
                if (at_p2 != ts.points.begin()) {
                    steps += p2.t - (at_p2 - 1)->t;
                    ++sides;
                }
                if (at_p3 + 1 != ts.points.end()) {
                    steps += (at_p3 + 1)->t - p3.t;
                    ++sides;
                }
                plausible = sides > 0 &&
                            p3.t - p2.t <= 1.5 * steps * 2.0 / sides;
            }
            if (!plausible) dec = {RecoverKind::KeepBoth, std::nullopt};
        }
        switch (dec.kind) {
            case RecoverKind::KeepP2:
                out.points.push_back(kp[i]);
                i += 1;
                break;
            case RecoverKind::KeepP3:
                out.points.push_back(kp[i + 1]);
                i += 2;
                break;
            case RecoverKind::Insert:
                out.points.push_back(kp[i]);
                out.points.push_back({dec.inserted->t, dec.inserted->v, PointOrigin::Recovered});
                out.points.push_back(kp[i + 1]);
                i += 2;
                break;
            case RecoverKind::KeepBoth:
            case RecoverKind::KeepBothNoInsert:
                out.points.push_back(kp[i]);
                i += 1;
                break;
        }
    }
    while (i < n) {
        out.points.push_back(kp[i]);
        ++i;
    }
    return out;
}

void save_keypoints(const std::vector<KeyPoint>& points, const std::string& path,
                    bool with_origin) {
    std::string out = with_origin ? "t,v,origin\n" : "t,v\n";
    for (const KeyPoint& p : points) {
        out += format_value(p.t);
        out += ',';
        out += format_value(p.v);
        if (with_origin) {
            out += ',';
            out += p.origin == PointOrigin::Recovered ? "recovered" : "observed";
        }
        out += '\n';
    }
    atomic_write(path, out);
}

KeyPointSeries load_keypoints(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValueError("cannot open '" + path + "'");
    std::string line;
    if (!std::getline(in, line)) throw ParseError("empty key-point file");
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const bool with_origin = line == "t,v,origin";
    if (!with_origin && line != "t,v")
        throw ParseError("line 1: expected header 't,v' or 't,v,origin'");

    KeyPointSeries kps;
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty()) continue;
        std::stringstream ss(line);
        std::string cell;
        std::vector<std::string> cells;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        if (cells.size() != (with_origin ? 3u : 2u))
            throw ParseError("line " + std::to_string(line_no) + ": wrong column count");
        KeyPoint p;
        try {
            p.t = std::stod(cells[0]);
            p.v = std::stod(cells[1]);
        } catch (const std::exception&) {
            throw ParseError("line " + std::to_string(line_no) + ": bad number");
        }
        if (with_origin) {
            if (cells[2] == "recovered") p.origin = PointOrigin::Recovered;
            else if (cells[2] == "observed") p.origin = PointOrigin::Observed;
            else throw ParseError("line " + std::to_string(line_no) + ": bad origin");
        }
        if (!kps.points.empty() && !(p.t > kps.points.back().t))
            throw OrderingError("line " + std::to_string(line_no) + ": t not strictly increasing");
        kps.points.push_back(p);
    }
    return kps;
}

}  // namespace ptsad
