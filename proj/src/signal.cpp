#include "saedge/signal.hpp"

#include "saedge/errors.hpp"

#include <algorithm>
#include <cmath>

namespace saedge {

std::vector<Window> segment(const ChannelSeries& series, std::size_t window_size, std::size_t stride) {
    if (window_size == 0 || stride == 0) {
        throw DataError("window size and stride must be positive");
    }
    const std::size_t len = series.samples.size();
    if (len == 0 || window_size > len) {
        throw DataError("insufficient samples: series '" + series.name + "' has " + std::to_string(len) +
                        " samples, window needs " + std::to_string(window_size));
    }
    const std::size_t count = (len - window_size) / stride + 1;
    std::vector<Window> windows;
    windows.reserve(count);
    for (std::size_t k = 0; k < count; ++k) {
        const std::size_t origin = k * stride;
        auto first = series.samples.begin() + static_cast<std::ptrdiff_t>(origin);
        windows.push_back(Window{{first, first + static_cast<std::ptrdiff_t>(window_size)}, origin, false});
    }
    return windows;
}

std::vector<Window> segment(const ChannelSeries& series, std::size_t window_size) {
    return segment(series, window_size, window_size);
}

bool detect_resting(std::span<const double> values, const RestParams& params) {
    return std::all_of(values.begin(), values.end(),
                       [&](double v) { return std::abs(v - params.rest_level) <= params.tolerance; });
}

bool detect_resting(const Window& window, const RestParams& params) {
    return detect_resting(std::span<const double>(window.values), params);
}

std::size_t longest_rest_run(std::span<const double> values, const RestParams& params) {
    std::size_t best = 0;
    std::size_t run = 0;
    for (double v : values) {
        run = std::abs(v - params.rest_level) <= params.tolerance ? run + 1 : 0;
        best = std::max(best, run);
    }
    return best;
}

RestParams default_rest_params(std::span<const double> healthy) {
    if (healthy.empty()) {
        throw DataError("insufficient samples: cannot derive resting tolerance from an empty series");
    }
    const auto [lo, hi] = std::minmax_element(healthy.begin(), healthy.end());
    return RestParams{0.0, 0.01 * (*hi - *lo)};
}

NormStats fit_norm_stats(std::span<const double> values) {
    if (values.empty()) {
        throw DataError("insufficient samples: cannot fit normalization on an empty set");
    }
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    if (!(*hi > *lo)) {
        throw DataError("degenerate scale: healthy data has max == min");
    }
    return NormStats{*lo, *hi};
}

std::vector<double> normalize(std::span<const double> values, const NormStats& stats) {
    if (!(stats.max > stats.min)) {
        throw DataError("degenerate scale: max must exceed min");
    }
    const double range = stats.max - stats.min;
    std::vector<double> out(values.size());
    std::transform(values.begin(), values.end(), out.begin(), [&](double v) { return (v - stats.min) / range; });
    return out;
}

Window normalize(const Window& window, const NormStats& stats) {
    return Window{normalize(std::span<const double>(window.values), stats), window.origin_index, window.is_resting};
}

std::vector<double> denormalize(std::span<const double> values, const NormStats& stats) {
    const double range = stats.max - stats.min;
    std::vector<double> out(values.size());
    std::transform(values.begin(), values.end(), out.begin(), [&](double v) { return v * range + stats.min; });
    return out;
}

CorrelationMatrix correlation_matrix(std::span<const ChannelSeries> channels) {
    if (channels.size() < 2) {
        throw DataError("correlation needs at least two channels");
    }
    const std::size_t n = channels.front().samples.size();
    if (n < 2) {
        throw DataError("correlation needs at least two samples per channel");
    }
    const auto k = static_cast<Eigen::Index>(channels.size());
    Eigen::MatrixXd centered(static_cast<Eigen::Index>(n), k);
    CorrelationMatrix result;
    for (Eigen::Index c = 0; c < k; ++c) {
        const auto& ch = channels[static_cast<std::size_t>(c)];
        if (ch.samples.size() != n) {
            throw DataError("channel '" + ch.name + "' has " + std::to_string(ch.samples.size()) +
                            " samples, expected " + std::to_string(n));
        }
        const Eigen::Map<const Eigen::VectorXd> x(ch.samples.data(), static_cast<Eigen::Index>(n));
        centered.col(c) = x.array() - x.mean();
        const double norm = centered.col(c).norm();
        if (!(norm > 0.0)) {
            throw DataError("channel '" + ch.name + "' has zero variance");
        }
        centered.col(c) /= norm;
        result.channel_names.push_back(ch.name);
    }
    result.values = centered.transpose() * centered;
    for (Eigen::Index i = 0; i < k; ++i) {
        result.values(i, i) = 1.0;
        for (Eigen::Index j = 0; j < i; ++j) {
            const double v = std::clamp(0.5 * (result.values(i, j) + result.values(j, i)), -1.0, 1.0);
            result.values(i, j) = v;
            result.values(j, i) = v;
        }
    }
    return result;
}

} // namespace saedge
