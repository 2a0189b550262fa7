#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace ptsad {

struct Point {
    double t = 0.0;
    double v = 0.0;
};

enum class Label { N, Ab };

const char* label_name(Label lb);
Label parse_label(const std::string& token);

/// Ordered (t, v) samples with strictly increasing t and finite values.
struct TimeSeries {
    std::vector<Point> points;

    std::size_t size() const { return points.size(); }
    bool empty() const { return points.empty(); }
    const Point& operator[](std::size_t i) const { return points[i]; }
};

struct LabelEvent {
    double t = 0.0;
    Label label = Label::N;
};

/// Point-event label track, strictly increasing in t.
struct LabelTrack {
    std::vector<LabelEvent> events;
};

/// Configuration of the synthetic pseudo-periodic generator. The template is a
/// piecewise-linear beat: sharp boundary peak, dip, flat, mid-period bump,
/// flat, rise into the next peak. All vertices sit on integer sample times so
/// inflexions are unambiguous.
struct SynthConfig {
    int n_periods = 50;
    int base_period_len = 200;   ///< samples per period before jitter
    double amplitude = 40.0;
    double anomaly_rate = 0.0;   ///< fraction of periods shortened + peak-deformed
    double jitter = 0.05;        ///< consecutive period lengths differ by <= jitter*base_period_len
    double dropout_rate = 0.0;   ///< fraction of periods whose bump apex sample is deleted
    double peak_noise = 0.0;     ///< sharpness (flank width) noise on boundary peaks
    std::uint64_t seed = 1;
};

struct SynthResult {
    TimeSeries series;
    LabelTrack labels;
    std::vector<double> boundaries;      ///< ground-truth period boundary times (peak vertices)
    std::vector<Point> dropped_points;   ///< vertices removed by dropout, in time order
};

/// Throws OrderingError/ValueError/ContractError if invariants do not hold.
void validate_series(const TimeSeries& ts);
void validate_track(const LabelTrack& track);

/// CSV with header `t,v`. Rows must already be sorted; out-of-order input is an
/// error, not silently re-sorted.
TimeSeries load_series(const std::string& path);
void save_series(const TimeSeries& ts, const std::string& path);

/// CSV with header `t,label`, label in {N, Ab}.
LabelTrack load_labels(const std::string& path);
void save_labels(const LabelTrack& track, const std::string& path);

/// One boundary time per line, no header.
void save_boundaries(const std::vector<double>& boundaries, const std::string& path);

SynthResult synth_pts(const SynthConfig& cfg);

/// Canonical shortest round-trip decimal formatting used by every CSV writer.
std::string format_value(double x);

/// Write-temp-then-rename.
void atomic_write(const std::string& path, const std::string& content);

}  // namespace ptsad
