#pragma once

#include "saedge/stack.hpp"
#include "saedge/threshold.hpp"

#include <cstddef>
#include <deque>
#include <memory>
#include <optional>
#include <span>
#include <variant>
#include <vector>

namespace saedge {

// Alarm persistence: K consecutive Red windows, or M consecutive windows at
// Amber or worse. Resting windows are skipped when counting runs.
struct AlarmConfig {
    std::size_t red_run = 3;
    std::size_t amber_run = 12;
};

enum class AlarmKind { None, RedRun, AmberRun };

// Evaluates the trailing runs of `band_history` (oldest first). Only an
// Amber or Red window can complete a run.
AlarmKind alarm_kind(std::span<const TrafficLight> band_history, const AlarmConfig& config);
bool raise_alarm(std::span<const TrafficLight> band_history, const AlarmConfig& config);

struct DetectorConfig {
    std::size_t window_size = 500;
    double sample_rate_hz = kDefaultSampleRateHz;
    double t_pre_min = 2.0;
    double t_post_min = 2.0;
    AlarmConfig alarm;

    std::size_t pre_samples() const;
    std::size_t post_samples() const;
    // Pre-anomaly history kept by the detector: the T_pre span plus the
    // longest alarm run that can precede an alarm.
    std::size_t ring_capacity() const;
    void validate() const;
};

struct WindowResult {
    std::size_t origin = 0;
    double error = 0.0; // kRestingSentinel for resting windows
    TrafficLight band = TrafficLight::Green;
    AlarmKind alarm = AlarmKind::None;
};

struct AnomalyEvent {
    std::size_t window_origin = 0;
    double error = 0.0;
    TrafficLight band = TrafficLight::Amber;
    double timestamp = 0.0;
};

// Raw samples [start_index, end_index) forwarded around an alarm.
struct TransmissionSegment {
    std::size_t start_index = 0;
    std::size_t end_index = 0;
    std::vector<double> samples;
    std::vector<AnomalyEvent> trigger_events;

    std::size_t length() const { return end_index - start_index; }
};

enum class DetectorMode { Quiet, Transmitting };

using DetectorOutput = std::variant<AnomalyEvent, TransmissionSegment>;

// Streaming edge detector. Samples are assembled into tiled windows; each
// complete window is classified (resting windows get the sentinel). An alarm
// while Quiet opens a segment reaching T_pre before the first window of the
// alarm run (bounded by the history ring and the end of the previous
// segment). Every further Amber/Red window pushes the deadline to T_post past
// its end; the segment is emitted once the deadline passes.
class Detector {
public:
    Detector(std::shared_ptr<const StackedModel> model, ThresholdSet thresholds, DetectorConfig config,
             double start_time = 0.0);

    // Throws DataError("corrupt sample") for NaN/inf and leaves the state unchanged.
    std::optional<DetectorOutput> push_sample(double sample);

    // Ends the stream; returns the open segment truncated at the last sample.
    std::optional<TransmissionSegment> finish();

    // Classification of the window completed by the most recent push, if any.
    const std::optional<WindowResult>& last_window() const { return last_window_; }

    DetectorMode mode() const { return mode_; }
    std::size_t samples_seen() const { return seen_; }
    std::size_t buffered() const { return assembly_.size(); }
    std::size_t history_size() const { return ring_.size(); }
    std::size_t transmit_deadline() const { return deadline_; }
    const DetectorConfig& config() const { return config_; }

private:
    WindowResult classify_window(std::size_t origin) const;
    void open_segment(std::size_t origin);
    TransmissionSegment close_segment();

    std::shared_ptr<const StackedModel> model_;
    ThresholdSet thresholds_;
    DetectorConfig config_;
    double start_time_;

    std::vector<double> assembly_;
    std::deque<double> ring_;
    std::deque<AnomalyEvent> run_events_;
    std::size_t red_run_ = 0;
    std::size_t amber_run_ = 0;

    DetectorMode mode_ = DetectorMode::Quiet;
    std::size_t deadline_ = 0;
    std::size_t last_segment_end_ = 0;
    TransmissionSegment open_;

    std::size_t seen_ = 0;
    std::optional<WindowResult> last_window_;
};

struct BandwidthReport {
    double transmitted_fraction = 0.0;
    std::size_t segment_count = 0;
};

// Throws DataError if segments overlap or run past the stream.
BandwidthReport bandwidth_report(std::size_t stream_length, std::span<const TransmissionSegment> segments);

} // namespace saedge
