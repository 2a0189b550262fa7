#pragma once

#include <vector>

#include "ptsad/compress.hpp"
#include "ptsad/series.hpp"

namespace ptsad {

/// Contiguous CTS slice between two period points, closed on both ends.
struct Period {
    std::vector<Point> points;
    std::size_t index = 0;
};

/// The seven-feature summary of a period.
struct PeriodSummary {
    double h_min = 0.0;
    double t_min = 0.0;   ///< time of the first minimum
    double h_max = 0.0;
    double t_max = 0.0;   ///< time of the first maximum
    double h_mean = 0.0;
    double p_minmax = 0.0;  ///< |t_max - t_min|
    double p_l = 0.0;       ///< period duration
};

struct AnnotatedPeriod {
    PeriodSummary summary;
    Label annotation = Label::N;
    double t_start = 0.0;
    double t_end = 0.0;
};

/// n period points yield n-1 periods; partial segments before the first and
/// after the last period point are discarded.
std::vector<Period> split_periods(const CompressedSeries& cts,
                                  const std::vector<std::size_t>& period_point_indices);

PeriodSummary summarize_period(const Period& pd);

/// Ab iff any element is Ab. Empty input is a contract error.
Label logical_multiply(const std::vector<Label>& labels);

/// Labels inside the period span win; otherwise the label state in force at
/// the period start; otherwise the first event after the period.
Label annotate_period(const Period& pd, const LabelTrack& track);

std::vector<AnnotatedPeriod> summarize_and_annotate(const std::vector<Period>& periods,
                                                    const LabelTrack& track);

/// CSV: one row per period, seven features + annotation + start/end times.
void save_periods(const std::vector<AnnotatedPeriod>& periods, const std::string& path);
std::vector<AnnotatedPeriod> load_periods(const std::string& path);

}  // namespace ptsad
