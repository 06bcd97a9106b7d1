#include "saedge/threshold.hpp"

#include "saedge/errors.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace saedge {
namespace {

// ceil(p/100 * n), snapping values within rounding noise of an integer so
// that e.g. 99.95% of 10000 gives rank 9995 rather than 9996.
std::size_t nearest_rank(double percentile, std::size_t n) {
    const double x = percentile * static_cast<double>(n) / 100.0;
    const double nearest = std::round(x);
    double rank = std::abs(x - nearest) <= 1e-9 * std::max(1.0, x) ? nearest : std::ceil(x);
    rank = std::clamp(rank, 1.0, static_cast<double>(n));
    return static_cast<std::size_t>(rank);
}

} // namespace

ThresholdSet fit_thresholds(std::span<const double> healthy_errors, double percentile) {
    if (healthy_errors.empty()) {
        throw DataError("cannot fit thresholds on an empty error set");
    }
    if (!(percentile > 0.0 && percentile <= 100.0)) {
        throw DataError("percentile must lie in (0, 100]");
    }
    std::vector<double> sorted(healthy_errors.begin(), healthy_errors.end());
    for (double e : sorted) {
        if (std::isnan(e) || e < 0.0) {
            throw DataError("healthy errors must be non-negative (filter resting sentinels first)");
        }
    }
    std::sort(sorted.begin(), sorted.end());
    const std::size_t rank = nearest_rank(percentile, sorted.size());
    return ThresholdSet{sorted[rank - 1], sorted.back(), percentile, kRestingSentinel};
}

TrafficLight classify(double error, const ThresholdSet& thresholds) {
    if (std::isnan(error)) {
        throw DataError("invalid reconstruction: error is NaN");
    }
    if (error == thresholds.resting_sentinel) {
        return TrafficLight::Resting;
    }
    if (error <= thresholds.green) {
        return TrafficLight::Green;
    }
    if (error <= thresholds.red) {
        return TrafficLight::Amber;
    }
    return TrafficLight::Red;
}

int severity(TrafficLight band) {
    switch (band) {
    case TrafficLight::Resting: return 0;
    case TrafficLight::Green: return 1;
    case TrafficLight::Amber: return 2;
    case TrafficLight::Red: return 3;
    }
    return 0;
}

bool is_anomalous(TrafficLight band) {
    return band == TrafficLight::Amber || band == TrafficLight::Red;
}

std::string_view to_string(TrafficLight band) {
    switch (band) {
    case TrafficLight::Green: return "green";
    case TrafficLight::Amber: return "amber";
    case TrafficLight::Red: return "red";
    case TrafficLight::Resting: return "resting";
    }
    return "unknown";
}

std::optional<TrafficLight> parse_traffic_light(std::string_view text) {
    for (auto band : {TrafficLight::Green, TrafficLight::Amber, TrafficLight::Red, TrafficLight::Resting}) {
        if (text == to_string(band)) {
            return band;
        }
    }
    return std::nullopt;
}

} // namespace saedge
