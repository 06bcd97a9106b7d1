#include "saedge/errors.hpp"
#include "saedge/rng.hpp"
#include "saedge/threshold.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

using namespace saedge;

namespace {

// Nearest-rank percentile computed with integer arithmetic on p expressed in
// hundredths of a percent.
double nearest_rank_oracle(std::vector<double> v, long hundredths) {
    std::sort(v.begin(), v.end());
    const long n = static_cast<long>(v.size());
    const long rank = (hundredths * n + 9999) / 10000;
    return v[static_cast<std::size_t>(std::max(rank, 1L) - 1)];
}

} // namespace

TEST_CASE("nearest-rank thresholds on 1..10000") {
    std::vector<double> errors;
    for (int i = 1; i <= 10000; ++i) errors.push_back(static_cast<double>(i));
    const auto t = fit_thresholds(errors, 99.95);
    CHECK(t.green == 9995.0);
    CHECK(t.red == 10000.0);
    CHECK(t.percentile == 99.95);
    CHECK(t.resting_sentinel == kRestingSentinel);
}

TEST_CASE("small threshold examples") {
    CHECK(fit_thresholds(std::vector<double>{0.3}).green == 0.3);
    CHECK(fit_thresholds(std::vector<double>{0.3}).red == 0.3);
    const std::vector<double> four{4.0, 1.0, 3.0, 2.0};
    CHECK(fit_thresholds(four, 50.0).green == 2.0);
    CHECK(fit_thresholds(four, 75.0).green == 3.0);
    CHECK(fit_thresholds(four, 100.0).green == 4.0);
    CHECK(fit_thresholds(four, 1.0).green == 1.0);
}

TEST_CASE("thresholds match an integer nearest-rank oracle") {
    Rng rng(31);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 1 + rng.below(3000);
        std::vector<double> errors(n);
        for (auto& e : errors) e = rng.uniform(0.0, 0.1);
        const long hundredths = 1 + static_cast<long>(rng.below(10000));
        const auto t = fit_thresholds(errors, static_cast<double>(hundredths) / 100.0);
        CHECK(t.green == nearest_rank_oracle(errors, hundredths));
        CHECK(t.red == *std::max_element(errors.begin(), errors.end()));
    }
}

TEST_CASE("threshold invariants") {
    Rng rng(5);
    std::vector<double> errors(777);
    for (auto& e : errors) e = rng.uniform(0.0, 2.0);
    const auto base = fit_thresholds(errors);
    CHECK(base.green <= base.red);

    SUBCASE("order invariance") {
        for (int k = 0; k < 5; ++k) {
            for (std::size_t i = errors.size(); i > 1; --i) std::swap(errors[i - 1], errors[rng.below(i)]);
            const auto t = fit_thresholds(errors);
            CHECK(t.green == base.green);
            CHECK(t.red == base.red);
        }
    }
    SUBCASE("power-of-two scaling commutes") {
        std::vector<double> scaled = errors;
        for (auto& e : scaled) e *= 4.0;
        const auto t = fit_thresholds(scaled);
        CHECK(t.green == 4.0 * base.green);
        CHECK(t.red == 4.0 * base.red);
    }
    SUBCASE("green is monotone in the percentile") {
        double prev = -1.0;
        for (double p = 1.0; p <= 100.0; p += 0.5) {
            const double g = fit_thresholds(errors, p).green;
            CHECK(g >= prev);
            prev = g;
        }
    }
}

TEST_CASE("threshold fitting errors") {
    CHECK_THROWS_AS(fit_thresholds(std::vector<double>{}), DataError);
    CHECK_THROWS_AS(fit_thresholds(std::vector<double>{0.1, std::nan("")}), DataError);
    CHECK_THROWS_AS(fit_thresholds(std::vector<double>{0.1, -0.2}), DataError);
    CHECK_THROWS_AS(fit_thresholds(std::vector<double>{0.1}, 0.0), DataError);
    CHECK_THROWS_AS(fit_thresholds(std::vector<double>{0.1}, 100.5), DataError);
}

TEST_CASE("classify bands") {
    const ThresholdSet t{0.01, 0.02, 99.95, kRestingSentinel};
    CHECK(classify(0.0, t) == TrafficLight::Green);
    CHECK(classify(0.01, t) == TrafficLight::Green);
    CHECK(classify(std::nextafter(0.01, 1.0), t) == TrafficLight::Amber);
    CHECK(classify(0.02, t) == TrafficLight::Amber);
    CHECK(classify(0.0201, t) == TrafficLight::Red);
    CHECK(classify(kRestingSentinel, t) == TrafficLight::Resting);
    CHECK(classify(std::numeric_limits<double>::infinity(), t) == TrafficLight::Red);
    CHECK_THROWS_WITH_AS(classify(std::nan(""), t), doctest::Contains("invalid reconstruction"), DataError);
}

TEST_CASE("classify is monotone in the error") {
    const ThresholdSet t{0.3, 0.7, 99.95, kRestingSentinel};
    int prev = severity(TrafficLight::Green);
    for (double e = 0.0; e < 1.5; e += 0.001) {
        const int s = severity(classify(e, t));
        CHECK(s >= prev);
        prev = s;
    }
}

TEST_CASE("band names round-trip") {
    for (auto b : {TrafficLight::Green, TrafficLight::Amber, TrafficLight::Red, TrafficLight::Resting}) {
        CHECK(parse_traffic_light(to_string(b)) == b);
    }
    CHECK(to_string(TrafficLight::Amber) == "amber");
    CHECK_FALSE(parse_traffic_light("purple").has_value());
    CHECK(is_anomalous(TrafficLight::Red));
    CHECK(is_anomalous(TrafficLight::Amber));
    CHECK_FALSE(is_anomalous(TrafficLight::Green));
    CHECK_FALSE(is_anomalous(TrafficLight::Resting));
}
