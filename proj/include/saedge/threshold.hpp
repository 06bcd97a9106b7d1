#pragma once

#include <optional>
#include <span>
#include <string_view>

namespace saedge {

// Error value recorded for windows taken while the machine is stopped.
// Produced verbatim by the pipeline and compared by exact equality.
inline constexpr double kRestingSentinel = -0.001;
inline constexpr double kDefaultPercentile = 99.95;

enum class TrafficLight { Green, Amber, Red, Resting };

struct ThresholdSet {
    double green = 0.0; // nearest-rank percentile of healthy errors
    double red = 0.0;   // maximum healthy error
    double percentile = kDefaultPercentile;
    double resting_sentinel = kRestingSentinel;
};

// green = ascending-sorted errors at rank ceil(p/100 * N) (1-based), red = max.
ThresholdSet fit_thresholds(std::span<const double> healthy_errors, double percentile = kDefaultPercentile);

// Resting if error is the sentinel; Green if <= green; Amber if <= red; else Red.
TrafficLight classify(double error, const ThresholdSet& thresholds);

// Severity rank used for monotonicity: Resting < Green < Amber < Red.
int severity(TrafficLight band);
bool is_anomalous(TrafficLight band);

std::string_view to_string(TrafficLight band);
std::optional<TrafficLight> parse_traffic_light(std::string_view text);

} // namespace saedge
