#pragma once

#include <vector>

#include "ptsad/keypoints.hpp"
#include "ptsad/series.hpp"

namespace ptsad {

/// Douglas-Peucker output: ordered subset of the input key-points, endpoints
/// always retained.
struct CompressedSeries {
    std::vector<KeyPoint> points;
    double lambda = 0.0;

    std::size_t size() const { return points.size(); }
};

/// Distance from p to the infinite line through a and b.
double perpendicular_distance(const Point& p, const Point& a, const Point& b,
                              const AxisScale& scale = {});

/// Distance from p to the segment [a, b].
double segment_distance(const Point& p, const Point& a, const Point& b,
                        const AxisScale& scale = {});

/// Iterative Douglas-Peucker with deterministic ties (farthest point by
/// smallest index). Every dropped point lies within lambda of the simplified
/// polyline.
CompressedSeries dp_compress(const KeyPointSeries& kps, double lambda,
                             const AxisScale& scale = {});

}  // namespace ptsad
