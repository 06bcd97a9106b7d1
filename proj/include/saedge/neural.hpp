#pragma once

#include "saedge/rng.hpp"

#include <Eigen/Core>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

// Dense layers, reconstruction losses, backpropagation and SGD with momentum.
//
// Batches are stored one sample per column so that a window maps onto a
// contiguous column of a column-major matrix.
namespace saedge::nn {

enum class Activation { Tanh, Identity };

struct LayerParams {
    Eigen::MatrixXd weights; // out_dim x in_dim
    Eigen::VectorXd biases;  // out_dim
    Activation activation = Activation::Tanh;

    Eigen::Index in_dim() const { return weights.cols(); }
    Eigen::Index out_dim() const { return weights.rows(); }
};

using Network = std::vector<LayerParams>;

struct TrainConfig {
    double learning_rate = 0.01;
    double momentum = 0.9;
    std::size_t epochs = 200;
    std::size_t batch_size = 32;
    std::uint64_t rng_seed = 0;
    // Stop once the epoch loss has improved by less than `early_stop_delta`
    // for `early_stop_patience` consecutive epochs. Patience 0 disables it.
    double early_stop_delta = 1e-7;
    std::size_t early_stop_patience = 10;

    void validate() const;
};

// One entry per parameter tensor, shaped like the network.
struct Gradients {
    std::vector<Eigen::MatrixXd> weights;
    std::vector<Eigen::VectorXd> biases;

    static Gradients zeros_like(const Network& net);
};

struct TrainState {
    Gradients velocity;
    std::vector<double> epoch_losses;

    static TrainState for_network(const Network& net);
};

// Uniform in [-r, r], r = sqrt(6 / (fan_in + fan_out)); biases start at zero.
LayerParams init_layer(Eigen::Index in_dim, Eigen::Index out_dim, Activation activation, Rng& rng);

// Throws DataError if consecutive layers do not chain or a layer is malformed.
void validate_network(const Network& net);

std::vector<double> dense_forward(const LayerParams& layer, std::span<const double> input);
// f(W x + b) for a single sample; the caller guarantees matching sizes.
Eigen::VectorXd apply_layer(const LayerParams& layer, const Eigen::VectorXd& input);

// Single-sample forward pass through every layer.
Eigen::VectorXd forward(const Network& net, std::span<const double> input);
// Batched forward pass; `inputs` holds one sample per column.
Eigen::MatrixXd forward(const Network& net, const Eigen::MatrixXd& inputs);

double mse(std::span<const double> predicted, std::span<const double> target);
// Mean((A - B)^2); the loss of the final expansion decoder. Same arithmetic as mse.
double squared_distance(std::span<const double> a, std::span<const double> b);

// Mean over columns of mse(output column, target column).
double batch_loss(const Eigen::MatrixXd& outputs, const Eigen::MatrixXd& targets);

struct Backprop {
    Gradients grads;
    double loss = 0.0;
    Eigen::MatrixXd outputs;
};

// Exact gradients of batch_loss(forward(net, inputs), targets).
Backprop backward(const Network& net, const Eigen::MatrixXd& inputs, const Eigen::MatrixXd& targets);
Backprop backward(const Network& net, std::span<const double> input, std::span<const double> target);

// velocity <- -lr * grad + momentum * velocity; param <- param + velocity.
void sgd_step(Network& net, const Gradients& grads, TrainState& state, const TrainConfig& config);

struct BatchRecord {
    std::size_t epoch = 0;
    const Eigen::MatrixXd& inputs;
    const Eigen::MatrixXd& targets;
    const Eigen::MatrixXd& outputs;
    double loss = 0.0;
};
using BatchObserver = std::function<void(const BatchRecord&)>;

struct TrainResult {
    double initial_loss = 0.0;       // full-set loss before the first update
    std::vector<double> epoch_losses; // mean per-sample loss seen during each epoch
    bool early_stopped = false;
};

double evaluate_loss(const Network& net, const Eigen::MatrixXd& inputs, const Eigen::MatrixXd& targets);

// Mini-batch SGD with momentum. Samples are reshuffled every epoch from a
// generator seeded once with config.rng_seed, so a fixed seed reproduces the
// loss history bit for bit.
TrainResult train_epochs(Network& net, const Eigen::MatrixXd& inputs, const Eigen::MatrixXd& targets,
                         const TrainConfig& config, const BatchObserver& observer = {});

} // namespace saedge::nn
