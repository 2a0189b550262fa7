#pragma once

#include <optional>
#include <vector>

#include "ptsad/series.hpp"

namespace ptsad {

/// Angles and distances are aspect-ratio dependent; both axes can be rescaled
/// before any geometry is computed. Default is raw (t, v) coordinates.
struct AxisScale {
    double t_scale = 1.0;
    double v_scale = 1.0;
};

enum class PointOrigin { Observed, Recovered };

struct KeyPoint {
    double t = 0.0;
    double v = 0.0;
    PointOrigin origin = PointOrigin::Observed;
};

struct KeyPointSeries {
    std::vector<KeyPoint> points;
    double epsilon = 0.0;  ///< angle threshold (radians) used to produce it

    std::size_t size() const { return points.size(); }
};

/// Turning angle at `mid`: the angle in [0, pi] between the incoming direction
/// (mid - prev) and the outgoing direction (next - mid). 0 for collinear points.
double turning_angle(const Point& prev, const Point& mid, const Point& next,
                     const AxisScale& scale = {});

/// Keep endpoints plus every point whose turning angle against the last kept
/// key-point and the next raw point exceeds epsilon (left-to-right scan).
KeyPointSeries detect_keypoints(const TimeSeries& ts, double epsilon,
                                const AxisScale& scale = {});

enum class RecoverKind {
    KeepP2,             ///< only p2 turns
    KeepP3,             ///< only p3 turns
    KeepBoth,           ///< both turn, missing-point equation has no usable solution
    Insert,             ///< both turn, a missing key-point was deduced between them
    KeepBothNoInsert,   ///< both turn, angle sum > pi rules out a missing point
};

struct RecoverDecision {
    RecoverKind kind;
    std::optional<Point> inserted;  ///< set iff kind == Insert
};

/// Four-point window check. p1 and p4 are established key-points; requires at
/// least one of the interior turning angles to exceed epsilon.
RecoverDecision recover_missing(const Point& p1, const Point& p2, const Point& p3,
                                const Point& p4, double epsilon,
                                const AxisScale& scale = {});

/// Detection followed by a left-to-right pass over four-point windows of
/// inflexions, anchored at the latest confirmed key-point; deduced points are
/// flagged Recovered.
KeyPointSeries correct_series(const TimeSeries& ts, double epsilon,
                              const AxisScale& scale = {});

/// CSV with header `t,v` or `t,v,origin`.
void save_keypoints(const std::vector<KeyPoint>& points, const std::string& path,
                    bool with_origin = true);
KeyPointSeries load_keypoints(const std::string& path);

}  // namespace ptsad
