#pragma once

#include "saedge/neural.hpp"
#include "saedge/signal.hpp"

#include <Eigen/Core>

#include <cstddef>
#include <functional>
#include <span>
#include <vector>

namespace saedge {

// Geometry of a stacked autoencoder: window -> encoder_dims... -> final
// decoder hidden -> window.
struct StackSpec {
    std::size_t window_size = 500;
    std::vector<std::size_t> encoder_dims;
    std::size_t final_decoder_hidden = 50;

    // Encoder dims strictly decreasing, first below window_size, all >= 1.
    void validate() const;
    std::size_t bottleneck() const { return encoder_dims.back(); }
};

// 500 -> 300-200-120-70 (hidden 50), 250 -> 150-100-75 (hidden 50); any other
// size >= 50 scales the 500 geometry (~40% reduction per layer) with hidden W/10.
StackSpec default_spec(std::size_t window_size);

// The trained artifact: frozen encoder halves of every stage plus the final
// expansion decoder (bottleneck -> hidden tanh -> window identity).
struct StackedModel {
    StackSpec spec;
    nn::Network encoders;
    nn::Network final_decoder;
    NormStats norm_stats;
    RestParams rest;

    void validate() const;
    std::size_t feature_count() const;
    Eigen::VectorXd encode(std::span<const double> normalized_window) const;
    Eigen::VectorXd reconstruct(std::span<const double> normalized_window) const;
};

struct StageReport {
    std::size_t stage = 0;
    Eigen::Index input_dim = 0;
    Eigen::Index hidden_dim = 0;
    nn::TrainResult training;
};

// Called after stage `stage` finishes with the encoders trained so far.
using StageObserver = std::function<void(std::size_t stage, const nn::Network& encoders)>;

struct StackTraining {
    nn::Network encoders;
    std::vector<StageReport> stages;
};

struct DecoderTraining {
    nn::Network decoder;
    nn::TrainResult training;
};

// Seeding contract: stage k initializes from derive_seed(seed, 2k) and
// shuffles with derive_seed(seed, 2k + 1); the final decoder uses streams
// 1000 and 1001.
inline constexpr std::uint64_t kDecoderSeedStream = 1000;

// Greedy layer-wise training. Stage k is an autoencoder d_{k-1} -> d_k ->
// d_{k-1} (tanh/tanh) trained to reproduce the codes of stage k-1; only its
// encoder half is kept. `windows` holds one normalized window per column.
StackTraining train_stack(const Eigen::MatrixXd& windows, const StackSpec& spec, const nn::TrainConfig& config,
                          const StageObserver& observer = {});

// Bottleneck codes of every column through the frozen encoders.
Eigen::MatrixXd encode_all(const nn::Network& encoders, const Eigen::MatrixXd& windows);

// Trains bottleneck -> hidden -> window on (codes, original windows) with the
// squared-distance loss against the original window.
DecoderTraining train_final_decoder(const nn::Network& encoders, const Eigen::MatrixXd& windows,
                                    const StackSpec& spec, const nn::TrainConfig& config,
                                    const nn::BatchObserver& observer = {});

// squared_distance(window, decode(encode(window))) for a normalized window.
double reconstruction_error(const StackedModel& model, std::span<const double> normalized_window);

} // namespace saedge
