#pragma once

#include "saedge/signal.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace saedge {

struct PeriodicComponent {
    double amplitude = 0.0;
    double frequency_hz = 0.0;
    double phase = 0.0;
};

struct Interval {
    double start_s = 0.0;
    double end_s = 0.0;
};

// Degradation ramp between onset and failure: linear drift, a growing
// frequency-modulated oscillation, and randomly timed spikes. Severity holds at
// its full value after failure_s.
struct FaultSpec {
    double onset_s = 0.0;
    double failure_s = 0.0;
    double drift_rate = 0.0;       // signal units per second of ramp
    double oscillation_gain = 0.0; // amplitude reached at failure
    double oscillation_hz = 1.7;
    double spike_rate_hz = 0.0;    // spike rate reached at failure
    double spike_amplitude = 0.0;
};

// Additional channel = offset + gain * primary + N(0, noise_sigma).
struct CorrelatedChannel {
    std::string name;
    double gain = 1.0;
    double offset = 0.0;
    double noise_sigma = 0.0;
};

struct ScenarioSpec {
    std::string channel_name = "Actual Field Current";
    double duration_s = 600.0;
    double sample_rate_hz = kDefaultSampleRateHz;
    double start_time = 0.0;
    double baseline = 10.0;
    std::vector<PeriodicComponent> periodic_components;
    double noise_sigma = 0.0;
    double rest_level = 0.0;
    std::vector<Interval> rest_intervals;
    std::optional<FaultSpec> fault;
    std::vector<CorrelatedChannel> correlated_channels;
    std::uint64_t rng_seed = 0;

    std::size_t sample_count() const;
    void validate() const;
};

// Primary channel only. Deterministic for a fixed seed:
//   noise   Rng(derive_seed(seed, 0)), one normal draw per sample
//   spikes  Rng(derive_seed(seed, 1)), one uniform per fault-region sample,
//           plus one more for the sign when a spike fires
//   extras  Rng(derive_seed(seed, 10 + k)) for correlated channel k
// Rest intervals output rest_level exactly.
ChannelSeries generate(const ScenarioSpec& spec);

// Primary channel followed by every correlated channel.
std::vector<ChannelSeries> generate_channels(const ScenarioSpec& spec);

// Healthy operation of the reference machine; phases vary with the seed.
ScenarioSpec healthy_scenario(std::uint64_t seed, double duration_s = 600.0);
// Healthy scenario plus a degradation ramp whose severity varies with the seed.
ScenarioSpec fault_scenario(std::uint64_t seed, double duration_s = 600.0);

enum class CorpusRole { Healthy, Fault };

struct CorpusEntry {
    std::string file;
    CorpusRole role = CorpusRole::Healthy;
    ScenarioSpec spec;
};

struct CorpusManifest {
    std::string prng_algorithm;
    std::vector<CorpusEntry> entries;
};

// Writes healthy_NNN.csv / fault_NNN.csv plus manifest.json into `dir`.
CorpusManifest generate_corpus(std::span<const ScenarioSpec> healthy, std::span<const ScenarioSpec> faults,
                               const std::filesystem::path& dir);

} // namespace saedge
