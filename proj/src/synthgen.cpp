#include "saedge/synthgen.hpp"

#include "saedge/errors.hpp"
#include "saedge/io.hpp"
#include "saedge/rng.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numbers>

namespace saedge {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

bool in_rest(double t, const std::vector<Interval>& rests) {
    return std::any_of(rests.begin(), rests.end(), [t](const Interval& r) { return t >= r.start_s && t < r.end_s; });
}

std::string numbered(const char* stem, std::size_t k) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%s_%03zu.csv", stem, k);
    return buf;
}

} // namespace

std::size_t ScenarioSpec::sample_count() const {
    return static_cast<std::size_t>(std::llround(duration_s * sample_rate_hz));
}

void ScenarioSpec::validate() const {
    if (!(duration_s > 0.0) || !(sample_rate_hz > 0.0)) {
        throw DataError("scenario duration and sample rate must be positive");
    }
    if (!(noise_sigma >= 0.0)) {
        throw DataError("noise_sigma must be >= 0");
    }
    std::vector<Interval> sorted = rest_intervals;
    std::sort(sorted.begin(), sorted.end(), [](const Interval& a, const Interval& b) { return a.start_s < b.start_s; });
    for (std::size_t i = 0; i < sorted.size(); ++i) {
        const auto& r = sorted[i];
        if (!(r.start_s >= 0.0 && r.start_s < r.end_s && r.end_s <= duration_s)) {
            throw DataError("invalid rest interval: must satisfy 0 <= start < end <= duration");
        }
        if (i > 0 && r.start_s < sorted[i - 1].end_s) {
            throw DataError("invalid rest interval: intervals overlap");
        }
    }
    if (fault) {
        if (!(fault->onset_s >= 0.0 && fault->onset_s < fault->failure_s && fault->failure_s <= duration_s)) {
            throw DataError("invalid fault interval: must satisfy 0 <= onset < failure <= duration");
        }
        if (!(fault->spike_rate_hz >= 0.0)) {
            throw DataError("spike rate must be >= 0");
        }
    }
}

ChannelSeries generate(const ScenarioSpec& spec) {
    spec.validate();
    const std::size_t n = spec.sample_count();
    ChannelSeries out{spec.channel_name, spec.sample_rate_hz, std::vector<double>(n), spec.start_time};

    Rng noise(derive_seed(spec.rng_seed, 0));
    Rng spikes(derive_seed(spec.rng_seed, 1));
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / spec.sample_rate_hz;
        double v = spec.baseline;
        for (const auto& c : spec.periodic_components) {
            v += c.amplitude * std::sin(kTwoPi * c.frequency_hz * t + c.phase);
        }
        v += spec.noise_sigma * noise.normal();

        if (spec.fault && t >= spec.fault->onset_s) {
            const auto& f = *spec.fault;
            const double elapsed = std::min(t, f.failure_s) - f.onset_s;
            const double ramp = elapsed / (f.failure_s - f.onset_s);
            v += f.drift_rate * elapsed;
            v += f.oscillation_gain * ramp *
                 std::sin(kTwoPi * f.oscillation_hz * t + 0.8 * std::sin(kTwoPi * 0.11 * t));
            if (spikes.uniform() < f.spike_rate_hz * ramp / spec.sample_rate_hz) {
                v += spikes.uniform() < 0.5 ? -f.spike_amplitude : f.spike_amplitude;
            }
        }
        if (in_rest(t, spec.rest_intervals)) {
            v = spec.rest_level;
        }
        out.samples[i] = v;
    }
    return out;
}

std::vector<ChannelSeries> generate_channels(const ScenarioSpec& spec) {
    std::vector<ChannelSeries> channels{generate(spec)};
    const auto& primary = channels.front().samples;
    for (std::size_t k = 0; k < spec.correlated_channels.size(); ++k) {
        const auto& cc = spec.correlated_channels[k];
        Rng rng(derive_seed(spec.rng_seed, 10 + k));
        ChannelSeries ch{cc.name, spec.sample_rate_hz, std::vector<double>(primary.size()), spec.start_time};
        for (std::size_t i = 0; i < primary.size(); ++i) {
            ch.samples[i] = cc.offset + cc.gain * primary[i] + cc.noise_sigma * rng.normal();
        }
        channels.push_back(std::move(ch));
    }
    return channels;
}

ScenarioSpec healthy_scenario(std::uint64_t seed, double duration_s) {
    Rng rng(derive_seed(seed, 100));
    ScenarioSpec s;
    s.duration_s = duration_s;
    s.rng_seed = seed;
    s.baseline = 10.0;
    s.noise_sigma = 0.08;
    s.periodic_components = {
        {1.0, 0.4711, rng.uniform(0.0, kTwoPi)},
        {0.5, 1.3183, rng.uniform(0.0, kTwoPi)},
        {0.25, 3.0917, rng.uniform(0.0, kTwoPi)},
    };
    return s;
}

ScenarioSpec fault_scenario(std::uint64_t seed, double duration_s) {
    ScenarioSpec s = healthy_scenario(seed, duration_s);
    Rng rng(derive_seed(seed, 101));
    FaultSpec f;
    f.onset_s = 0.3 * duration_s;
    f.failure_s = 0.9 * duration_s;
    const double sign = rng.uniform() < 0.5 ? -1.0 : 1.0;
    f.drift_rate = sign * rng.uniform(0.002, 0.006) * 600.0 / duration_s;
    f.oscillation_gain = rng.uniform(0.4, 0.8);
    f.spike_rate_hz = rng.uniform(0.2, 0.6);
    f.spike_amplitude = 1.5;
    s.fault = f;
    return s;
}

CorpusManifest generate_corpus(std::span<const ScenarioSpec> healthy, std::span<const ScenarioSpec> faults,
                               const std::filesystem::path& dir) {
    if (healthy.empty()) {
        throw DataError("corpus needs at least one healthy scenario");
    }
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
        throw DataError("cannot create corpus directory '" + dir.string() + "': " + ec.message());
    }
    CorpusManifest manifest{Rng::kAlgorithm, {}};
    auto emit = [&](const ScenarioSpec& spec, CorpusRole role, std::size_t k) {
        CorpusEntry entry{numbered(role == CorpusRole::Healthy ? "healthy" : "fault", k), role, spec};
        write_csv(dir / entry.file, generate_channels(spec));
        manifest.entries.push_back(std::move(entry));
    };
    for (std::size_t k = 0; k < healthy.size(); ++k) {
        emit(healthy[k], CorpusRole::Healthy, k);
    }
    for (std::size_t k = 0; k < faults.size(); ++k) {
        emit(faults[k], CorpusRole::Fault, k);
    }
    write_manifest(dir / "manifest.json", manifest);
    return manifest;
}

} // namespace saedge
