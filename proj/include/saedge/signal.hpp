#pragma once

#include <Eigen/Core>

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace saedge {

inline constexpr double kDefaultSampleRateHz = 100.0;

// One named sensor channel, uniformly sampled.
struct ChannelSeries {
    std::string name;
    double sample_rate_hz = kDefaultSampleRateHz;
    std::vector<double> samples;
    double start_time = 0.0; // seconds since the Unix epoch

    std::size_t size() const { return samples.size(); }
};

// A fixed-length contiguous slice of a parent series.
struct Window {
    std::vector<double> values;
    std::size_t origin_index = 0;
    bool is_resting = false;

    std::size_t size() const { return values.size(); }
};

// Band describing a stopped machine: every sample within `tolerance` of `rest_level`.
struct RestParams {
    double rest_level = 0.0;
    double tolerance = 0.0;
};

// Min/max of the healthy training data, used for the affine map into [0, 1].
struct NormStats {
    double min = 0.0;
    double max = 1.0;
};

struct CorrelationMatrix {
    std::vector<std::string> channel_names;
    Eigen::MatrixXd values;
};

// Tiles `series` into windows of `window_size` samples advancing by `stride`.
// Trailing samples that do not fill a window are dropped.
std::vector<Window> segment(const ChannelSeries& series, std::size_t window_size, std::size_t stride);
std::vector<Window> segment(const ChannelSeries& series, std::size_t window_size);

bool detect_resting(std::span<const double> values, const RestParams& params);
bool detect_resting(const Window& window, const RestParams& params);

// Longest run of consecutive samples inside the rest band.
std::size_t longest_rest_run(std::span<const double> values, const RestParams& params);

// rest_level = 0, tolerance = 1% of the (max - min) range of `healthy`.
RestParams default_rest_params(std::span<const double> healthy);

NormStats fit_norm_stats(std::span<const double> values);

std::vector<double> normalize(std::span<const double> values, const NormStats& stats);
Window normalize(const Window& window, const NormStats& stats);
std::vector<double> denormalize(std::span<const double> values, const NormStats& stats);

// Pairwise Pearson coefficients. Requires at least two channels of equal
// length (>= 2) and nonzero variance.
CorrelationMatrix correlation_matrix(std::span<const ChannelSeries> channels);

} // namespace saedge
