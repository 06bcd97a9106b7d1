#pragma once

#include "saedge/edge_stream.hpp"
#include "saedge/io.hpp"
#include "saedge/stack.hpp"

#include <filesystem>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace saedge {

struct TrainOptions {
    std::size_t window_size = 500;
    nn::TrainConfig config;
    double percentile = kDefaultPercentile;
    // Defaults to default_rest_params over all healthy samples.
    std::optional<RestParams> rest;
};

struct TrainedPipeline {
    ModelFile file;
    std::vector<StageReport> stages;
    nn::TrainResult decoder_training;
    std::vector<double> healthy_errors; // one per training window, in order
};

// Tiles every healthy series, drops resting windows and windows holding a
// stoppage edge, fits normalization on what is left, trains the stack and
// final decoder, and fits thresholds on the training windows' reconstruction
// errors.
TrainedPipeline train_model(std::span<const ChannelSeries> healthy, const TrainOptions& options);

// Per-window reconstruction errors of a raw series (tiled windows; resting
// windows get the sentinel).
std::vector<double> window_errors(const ChannelSeries& series, const StackedModel& model);

// Offline counterpart of the detector: tiled windows, errors, bands and the
// alarm state after each window.
std::vector<WindowResult> batch_window_results(const ChannelSeries& series, const StackedModel& model,
                                               const ThresholdSet& thresholds, const AlarmConfig& alarm);

struct StreamRun {
    std::vector<WindowResult> windows;
    std::vector<AnomalyEvent> events;
    std::vector<TransmissionSegment> segments;
    std::size_t stream_length = 0;
};

// Feeds every sample of `series` through a fresh Detector and finishes it.
StreamRun run_stream(const ChannelSeries& series, std::shared_ptr<const StackedModel> model,
                     const ThresholdSet& thresholds, const DetectorConfig& config);

// Seconds from stream start to the end of the first window whose alarm matches
// `kind` (AlarmKind::None matches any alarm).
std::optional<double> first_alarm_time(const StreamRun& run, std::size_t window_size, double sample_rate_hz,
                                       AlarmKind kind = AlarmKind::None);

struct StreamReport {
    std::string file;
    CorpusRole role = CorpusRole::Healthy;
    std::size_t windows = 0;
    std::size_t amber_windows = 0;
    std::size_t red_windows = 0;
    std::size_t resting_windows = 0;
    std::size_t segments = 0;
    double transmitted_fraction = 0.0;
    std::optional<double> red_alarm_s;
    std::optional<double> onset_s;
    std::optional<double> failure_s;
    std::optional<double> lead_time_s; // failure_s - red_alarm_s
};

struct SimulationOptions {
    TrainOptions train;
    DetectorConfig detector; // window_size is taken from train
    // Healthy corpus files used for training (the rest are held out).
    std::size_t training_files = 0; // 0 = half of the healthy files, at least one
};

struct SimulationReport {
    std::size_t training_files = 0;
    ThresholdSet thresholds;
    std::vector<StreamReport> streams;
    std::size_t healthy_segments = 0;
    std::size_t faults_detected_before_failure = 0;
    std::optional<double> median_lead_fraction; // lead time / fault ramp duration
};

SimulationReport simulate_corpus(const std::filesystem::path& corpus_dir, const SimulationOptions& options);

std::string simulation_report_json(const SimulationReport& report);

} // namespace saedge
