#pragma once

#include "saedge/neural.hpp"
#include "saedge/rng.hpp"
#include "saedge/signal.hpp"

#include <unistd.h>

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <string>
#include <vector>

namespace saedge::testing {

// Fresh directory under the system temp dir (or $SAEDGE_TEST_TMP).
inline std::filesystem::path temp_dir(const std::string& tag) {
    static std::atomic<int> counter{0};
    std::filesystem::path base = std::getenv("SAEDGE_TEST_TMP") ? std::getenv("SAEDGE_TEST_TMP")
                                                                : std::filesystem::temp_directory_path();
    auto dir = base / ("saedge_" + tag + "_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

inline ChannelSeries make_series(std::vector<double> samples, std::string name = "afc") {
    return ChannelSeries{std::move(name), 100.0, std::move(samples), 0.0};
}

inline Eigen::MatrixXd random_matrix(Eigen::Index rows, Eigen::Index cols, Rng& rng, double lo = 0.0, double hi = 1.0) {
    Eigen::MatrixXd m(rows, cols);
    for (Eigen::Index c = 0; c < cols; ++c) {
        for (Eigen::Index r = 0; r < rows; ++r) {
            m(r, c) = rng.uniform(lo, hi);
        }
    }
    return m;
}

inline std::vector<double> column(const Eigen::MatrixXd& m, Eigen::Index c) {
    return {m.col(c).data(), m.col(c).data() + m.rows()};
}

} // namespace saedge::testing
