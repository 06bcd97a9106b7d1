#include "saedge/edge_stream.hpp"

#include "saedge/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace saedge {

AlarmKind alarm_kind(std::span<const TrafficLight> band_history, const AlarmConfig& config) {
    if (band_history.empty() || !is_anomalous(band_history.back())) {
        return AlarmKind::None;
    }
    std::size_t red = 0;
    std::size_t amber = 0;
    bool red_open = true;
    for (auto it = band_history.rbegin(); it != band_history.rend(); ++it) {
        if (*it == TrafficLight::Resting) {
            continue;
        }
        if (!is_anomalous(*it)) {
            break;
        }
        ++amber;
        if (red_open && *it == TrafficLight::Red) {
            ++red;
        } else {
            red_open = false;
        }
    }
    if (config.red_run > 0 && red >= config.red_run) {
        return AlarmKind::RedRun;
    }
    if (config.amber_run > 0 && amber >= config.amber_run) {
        return AlarmKind::AmberRun;
    }
    return AlarmKind::None;
}

bool raise_alarm(std::span<const TrafficLight> band_history, const AlarmConfig& config) {
    return alarm_kind(band_history, config) != AlarmKind::None;
}

std::size_t DetectorConfig::pre_samples() const {
    return static_cast<std::size_t>(std::llround(t_pre_min * 60.0 * sample_rate_hz));
}

std::size_t DetectorConfig::post_samples() const {
    return static_cast<std::size_t>(std::llround(t_post_min * 60.0 * sample_rate_hz));
}

std::size_t DetectorConfig::ring_capacity() const {
    const std::size_t longest_run = std::max<std::size_t>({alarm.red_run, alarm.amber_run, 1});
    return pre_samples() + (longest_run - 1) * window_size;
}

void DetectorConfig::validate() const {
    if (window_size == 0) {
        throw DataError("window size must be positive");
    }
    if (!(sample_rate_hz > 0.0)) {
        throw DataError("sample rate must be positive");
    }
    if (!(t_pre_min >= 0.0) || !(t_post_min >= 0.0)) {
        throw DataError("T_pre and T_post must be non-negative");
    }
    if (alarm.red_run == 0 && alarm.amber_run == 0) {
        throw DataError("at least one alarm run length must be positive");
    }
}

Detector::Detector(std::shared_ptr<const StackedModel> model, ThresholdSet thresholds, DetectorConfig config,
                   double start_time)
    : model_(std::move(model)), thresholds_(thresholds), config_(config), start_time_(start_time) {
    if (!model_) {
        throw DataError("detector needs a model");
    }
    config_.validate();
    if (config_.window_size != model_->spec.window_size) {
        throw DataError("window size mismatch: detector uses " + std::to_string(config_.window_size) +
                        ", model expects " + std::to_string(model_->spec.window_size));
    }
    assembly_.reserve(config_.window_size);
}

WindowResult Detector::classify_window(std::size_t origin) const {
    WindowResult r;
    r.origin = origin;
    if (detect_resting(std::span<const double>(assembly_), model_->rest)) {
        r.error = kRestingSentinel;
    } else {
        const auto normalized = normalize(std::span<const double>(assembly_), model_->norm_stats);
        r.error = reconstruction_error(*model_, normalized);
    }
    r.band = classify(r.error, thresholds_);
    return r;
}

void Detector::open_segment(std::size_t origin) {
    const std::size_t pre = config_.pre_samples();
    const std::size_t run_first = run_events_.front().window_origin;
    const std::size_t wanted = run_first > pre ? run_first - pre : 0;
    const std::size_t available = origin - ring_.size();
    const std::size_t start = std::max({wanted, available, last_segment_end_});

    open_ = TransmissionSegment{};
    open_.start_index = start;
    if (start <= origin) {
        open_.samples.assign(ring_.end() - static_cast<std::ptrdiff_t>(origin - start), ring_.end());
        open_.samples.insert(open_.samples.end(), assembly_.begin(), assembly_.end());
    } else {
        // The previous segment closed inside the current window.
        open_.samples.assign(assembly_.begin() + static_cast<std::ptrdiff_t>(start - origin), assembly_.end());
    }
    for (const auto& ev : run_events_) {
        if (ev.window_origin + config_.window_size > start) {
            open_.trigger_events.push_back(ev);
        }
    }
    deadline_ = origin + config_.window_size + config_.post_samples();
    mode_ = DetectorMode::Transmitting;
}

TransmissionSegment Detector::close_segment() {
    open_.end_index = seen_;
    last_segment_end_ = seen_;
    mode_ = DetectorMode::Quiet;
    TransmissionSegment done = std::move(open_);
    open_ = TransmissionSegment{};
    return done;
}

std::optional<DetectorOutput> Detector::push_sample(double sample) {
    if (!std::isfinite(sample)) {
        throw DataError("corrupt sample at index " + std::to_string(seen_));
    }
    last_window_.reset();
    if (mode_ == DetectorMode::Transmitting) {
        open_.samples.push_back(sample);
    }
    assembly_.push_back(sample);
    ++seen_;

    std::optional<DetectorOutput> output;
    if (assembly_.size() == config_.window_size) {
        const std::size_t origin = seen_ - config_.window_size;
        WindowResult r = classify_window(origin);
        const AnomalyEvent event{origin, r.error, r.band,
                                 start_time_ + static_cast<double>(origin) / config_.sample_rate_hz};
        const std::size_t longest_run = std::max(config_.alarm.red_run, config_.alarm.amber_run);

        switch (r.band) {
        case TrafficLight::Resting:
            break;
        case TrafficLight::Green:
            red_run_ = 0;
            amber_run_ = 0;
            run_events_.clear();
            break;
        case TrafficLight::Amber:
        case TrafficLight::Red:
            red_run_ = r.band == TrafficLight::Red ? red_run_ + 1 : 0;
            ++amber_run_;
            run_events_.push_back(event);
            while (run_events_.size() > longest_run) {
                run_events_.pop_front();
            }
            break;
        }
        if (is_anomalous(r.band)) {
            if (config_.alarm.red_run > 0 && red_run_ >= config_.alarm.red_run) {
                r.alarm = AlarmKind::RedRun;
            } else if (config_.alarm.amber_run > 0 && amber_run_ >= config_.alarm.amber_run) {
                r.alarm = AlarmKind::AmberRun;
            }
        }

        if (mode_ == DetectorMode::Quiet && r.alarm != AlarmKind::None) {
            open_segment(origin);
        } else if (mode_ == DetectorMode::Transmitting && is_anomalous(r.band)) {
            deadline_ = std::max(deadline_, origin + config_.window_size + config_.post_samples());
            open_.trigger_events.push_back(event);
        }

        for (double v : assembly_) {
            ring_.push_back(v);
        }
        while (ring_.size() > config_.ring_capacity()) {
            ring_.pop_front();
        }
        assembly_.clear();
        last_window_ = r;
        if (is_anomalous(r.band)) {
            output = event;
        }
    }

    if (mode_ == DetectorMode::Transmitting && seen_ >= deadline_) {
        output = close_segment();
    }
    return output;
}

std::optional<TransmissionSegment> Detector::finish() {
    last_window_.reset();
    if (mode_ != DetectorMode::Transmitting) {
        return std::nullopt;
    }
    return close_segment();
}

BandwidthReport bandwidth_report(std::size_t stream_length, std::span<const TransmissionSegment> segments) {
    std::vector<std::pair<std::size_t, std::size_t>> spans;
    for (const auto& s : segments) {
        if (s.end_index < s.start_index || s.end_index > stream_length) {
            throw DataError("segment [" + std::to_string(s.start_index) + ", " + std::to_string(s.end_index) +
                            ") lies outside the stream");
        }
        spans.emplace_back(s.start_index, s.end_index);
    }
    std::sort(spans.begin(), spans.end());
    std::size_t total = 0;
    for (std::size_t i = 0; i < spans.size(); ++i) {
        if (i > 0 && spans[i].first < spans[i - 1].second) {
            throw DataError("overlapping segments at sample " + std::to_string(spans[i].first));
        }
        total += spans[i].second - spans[i].first;
    }
    BandwidthReport report;
    report.segment_count = spans.size();
    report.transmitted_fraction =
        stream_length == 0 ? 0.0 : static_cast<double>(total) / static_cast<double>(stream_length);
    return report;
}

} // namespace saedge
