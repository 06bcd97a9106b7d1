#pragma once

#include "saedge/edge_stream.hpp"
#include "saedge/neural.hpp"
#include "saedge/signal.hpp"
#include "saedge/stack.hpp"
#include "saedge/synthgen.hpp"
#include "saedge/threshold.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace saedge {

// ---------------------------------------------------------------------------
// CSV time series
//
//   timestamp,<channel 1>,<channel 2>,...
//   <epoch seconds | ISO-8601 | empty>,<number>,<number>,...
//
// Timestamps are either present on every row (and must then be uniform within
// `jitter` of 1/expected_rate_hz) or empty on every row, in which case the
// sample index is the clock.
// ---------------------------------------------------------------------------

struct CsvReadOptions {
    double expected_rate_hz = kDefaultSampleRateHz;
    double jitter = 0.01;
};

// `channel` empty selects the first column whose name contains "field current"
// (case-insensitive, '_' treated as a space).
ChannelSeries read_csv(const std::filesystem::path& path, std::string_view channel,
                       const CsvReadOptions& options = {});
std::vector<ChannelSeries> read_csv_channels(const std::filesystem::path& path, const CsvReadOptions& options = {});

void write_csv(const std::filesystem::path& path, std::span<const ChannelSeries> channels);

std::optional<std::string> default_channel(std::span<const std::string> names);

// Seconds since the Unix epoch from "1600000000.25" or "2020-09-13T12:26:40.25Z".
std::optional<double> parse_timestamp(std::string_view text);

// Shortest decimal text that parses back to the same double.
std::string format_double(double value);

// ---------------------------------------------------------------------------
// Model file (JSON, "saedge-model", format_version 1). Weights are stored
// row-major per layer; numbers use shortest round-trip decimals so a
// save/load cycle is bit-exact.
// ---------------------------------------------------------------------------

inline constexpr int kModelFormatVersion = 1;

struct TrainingMetadata {
    nn::TrainConfig config;
    std::string data_fingerprint; // FNV-1a 64 over the training samples, hex
    std::size_t training_windows = 0;
};

struct ModelFile {
    StackedModel model;
    std::optional<ThresholdSet> thresholds;
    TrainingMetadata metadata;
};

std::string serialize_model(const ModelFile& file);
ModelFile parse_model(std::string_view text);
void save_model(const ModelFile& file, const std::filesystem::path& path);
ModelFile load_model(const std::filesystem::path& path);

std::string fingerprint(std::span<const double> samples);

// ---------------------------------------------------------------------------
// Line-delimited detector output (one JSON object per line).
// ---------------------------------------------------------------------------

std::string window_record(std::string_view stream_id, const WindowResult& window, double timestamp);
std::string segment_record(std::string_view stream_id, const TransmissionSegment& segment,
                           double sample_rate_hz, double start_time);

// Columns: window_index,error,band,green_threshold,red_threshold.
void export_plot_data(std::span<const double> errors, const ThresholdSet& thresholds,
                      const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Scenario and corpus manifest JSON
// ---------------------------------------------------------------------------

std::string scenario_to_json(const ScenarioSpec& spec);
ScenarioSpec scenario_from_json(std::string_view text);

void write_manifest(const std::filesystem::path& path, const CorpusManifest& manifest);
CorpusManifest read_manifest(const std::filesystem::path& path);

} // namespace saedge
