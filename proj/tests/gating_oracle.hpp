#pragma once

// Interval-union model of transmission gating, written independently of the
// streaming detector. Every anomalous window contributes an interval reaching
// T_post past its end; windows that complete an alarm run additionally pull
// the interval start back to T_pre before the run. Intervals are merged in
// time order. A non-alarm interval only survives if it touches an open one.

#include "saedge/edge_stream.hpp"

#include <algorithm>
#include <utility>
#include <vector>

namespace saedge::testing {

struct OracleWindow {
    std::size_t origin = 0;
    TrafficLight band = TrafficLight::Green;
};

using Interval = std::pair<std::size_t, std::size_t>; // [start, end)

inline std::vector<Interval> gating_oracle(const std::vector<OracleWindow>& windows, std::size_t stream_length,
                                           const DetectorConfig& cfg) {
    const std::size_t w = cfg.window_size;
    const std::size_t pre = cfg.pre_samples();
    const std::size_t post = cfg.post_samples();
    const std::size_t k = cfg.alarm.red_run;
    const std::size_t m = cfg.alarm.amber_run;
    const std::size_t longest = std::max(k, m);
    const std::size_t history = pre + (std::max<std::size_t>(longest, 1) - 1) * w;

    std::vector<Interval> merged;
    bool open = false;
    std::vector<std::size_t> run; // origins of the trailing anomalous run
    std::size_t reds = 0;
    for (const auto& win : windows) {
        if (win.band == TrafficLight::Resting) {
            continue;
        }
        if (win.band == TrafficLight::Green) {
            run.clear();
            reds = 0;
            continue;
        }
        run.push_back(win.origin);
        reds = win.band == TrafficLight::Red ? reds + 1 : 0;
        const bool alarm = (k > 0 && reds >= k) || (m > 0 && run.size() >= m);
        const std::size_t end = win.origin + w;

        if (open && end <= merged.back().second) {
            merged.back().second = std::max(merged.back().second, end + post);
            continue;
        }
        open = false;
        if (!alarm) {
            continue;
        }
        const std::size_t first = run[run.size() - std::min(run.size(), longest)];
        std::size_t start = first > pre ? first - pre : 0;
        start = std::max(start, win.origin > history ? win.origin - history : 0);
        if (!merged.empty()) {
            start = std::max(start, std::min(merged.back().second, stream_length));
        }
        merged.emplace_back(start, end + post);
        open = true;
    }
    for (auto& iv : merged) {
        iv.second = std::min(iv.second, stream_length);
    }
    return merged;
}

inline double oracle_fraction(const std::vector<Interval>& intervals, std::size_t stream_length) {
    std::size_t total = 0;
    for (const auto& iv : intervals) total += iv.second - iv.first;
    return static_cast<double>(total) / static_cast<double>(stream_length);
}

} // namespace saedge::testing
