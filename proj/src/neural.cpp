#include "saedge/neural.hpp"

#include "saedge/errors.hpp"

#include <cmath>
#include <numeric>
#include <string>

namespace saedge::nn {
namespace {

std::string mismatch(const char* what, Eigen::Index expected, Eigen::Index actual) {
    return std::string("dimension mismatch: ") + what + " expected " + std::to_string(expected) + ", got " +
           std::to_string(actual);
}

void activate(Activation act, Eigen::MatrixXd& z) {
    if (act == Activation::Tanh) {
        z = z.array().tanh();
    }
}

// f'(z) expressed through the activation output a = f(z).
Eigen::ArrayXXd derivative_from_output(Activation act, const Eigen::MatrixXd& a) {
    if (act == Activation::Tanh) {
        return 1.0 - a.array().square();
    }
    return Eigen::ArrayXXd::Ones(a.rows(), a.cols());
}

Eigen::MatrixXd gather_columns(const Eigen::MatrixXd& src, std::span<const Eigen::Index> cols) {
    Eigen::MatrixXd out(src.rows(), static_cast<Eigen::Index>(cols.size()));
    for (std::size_t j = 0; j < cols.size(); ++j) {
        out.col(static_cast<Eigen::Index>(j)) = src.col(cols[j]);
    }
    return out;
}

} // namespace

void TrainConfig::validate() const {
    if (!(learning_rate > 0.0) || !std::isfinite(learning_rate)) {
        throw DataError("learning_rate must be positive");
    }
    if (!(momentum >= 0.0 && momentum < 1.0)) {
        throw DataError("momentum must lie in [0, 1)");
    }
    if (batch_size == 0) {
        throw DataError("batch_size must be positive");
    }
}

Gradients Gradients::zeros_like(const Network& net) {
    Gradients g;
    for (const auto& layer : net) {
        g.weights.push_back(Eigen::MatrixXd::Zero(layer.out_dim(), layer.in_dim()));
        g.biases.push_back(Eigen::VectorXd::Zero(layer.out_dim()));
    }
    return g;
}

TrainState TrainState::for_network(const Network& net) {
    return TrainState{Gradients::zeros_like(net), {}};
}

LayerParams init_layer(Eigen::Index in_dim, Eigen::Index out_dim, Activation activation, Rng& rng) {
    if (in_dim < 1 || out_dim < 1) {
        throw DataError("layer dimensions must be >= 1");
    }
    const double r = std::sqrt(6.0 / static_cast<double>(in_dim + out_dim));
    LayerParams layer{Eigen::MatrixXd(out_dim, in_dim), Eigen::VectorXd::Zero(out_dim), activation};
    // Column-major fill order is part of the seeded contract.
    for (Eigen::Index c = 0; c < in_dim; ++c) {
        for (Eigen::Index row = 0; row < out_dim; ++row) {
            layer.weights(row, c) = rng.uniform(-r, r);
        }
    }
    return layer;
}

void validate_network(const Network& net) {
    if (net.empty()) {
        throw DataError("network has no layers");
    }
    for (std::size_t l = 0; l < net.size(); ++l) {
        const auto& layer = net[l];
        if (layer.biases.size() != layer.out_dim()) {
            throw DataError(mismatch("bias length", layer.out_dim(), layer.biases.size()));
        }
        if (l > 0 && layer.in_dim() != net[l - 1].out_dim()) {
            throw DataError(mismatch("layer input", net[l - 1].out_dim(), layer.in_dim()));
        }
    }
}

std::vector<double> dense_forward(const LayerParams& layer, std::span<const double> input) {
    const auto n = static_cast<Eigen::Index>(input.size());
    if (n != layer.in_dim()) {
        throw DataError(mismatch("input length", layer.in_dim(), n));
    }
    const Eigen::VectorXd z = apply_layer(layer, Eigen::Map<const Eigen::VectorXd>(input.data(), n));
    return {z.data(), z.data() + z.size()};
}

Eigen::VectorXd apply_layer(const LayerParams& layer, const Eigen::VectorXd& input) {
    Eigen::VectorXd z = layer.weights * input + layer.biases;
    if (layer.activation == Activation::Tanh) {
        z = z.array().tanh();
    }
    return z;
}

Eigen::VectorXd forward(const Network& net, std::span<const double> input) {
    validate_network(net);
    const auto n = static_cast<Eigen::Index>(input.size());
    if (n != net.front().in_dim()) {
        throw DataError(mismatch("input length", net.front().in_dim(), n));
    }
    Eigen::VectorXd a = Eigen::Map<const Eigen::VectorXd>(input.data(), n);
    for (const auto& layer : net) {
        a = apply_layer(layer, a);
    }
    return a;
}

Eigen::MatrixXd forward(const Network& net, const Eigen::MatrixXd& inputs) {
    validate_network(net);
    if (inputs.rows() != net.front().in_dim()) {
        throw DataError(mismatch("input rows", net.front().in_dim(), inputs.rows()));
    }
    Eigen::MatrixXd a = inputs;
    for (const auto& layer : net) {
        Eigen::MatrixXd z = layer.weights * a;
        z.colwise() += layer.biases;
        activate(layer.activation, z);
        a = std::move(z);
    }
    return a;
}

double mse(std::span<const double> predicted, std::span<const double> target) {
    if (predicted.size() != target.size()) {
        throw DataError(mismatch("vector length", static_cast<Eigen::Index>(target.size()),
                                 static_cast<Eigen::Index>(predicted.size())));
    }
    if (predicted.empty()) {
        throw DataError("mse of empty vectors");
    }
    double sum = 0.0;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        const double d = target[i] - predicted[i];
        sum += d * d;
    }
    return sum / static_cast<double>(predicted.size());
}

double squared_distance(std::span<const double> a, std::span<const double> b) {
    return mse(b, a);
}

double batch_loss(const Eigen::MatrixXd& outputs, const Eigen::MatrixXd& targets) {
    if (outputs.rows() != targets.rows() || outputs.cols() != targets.cols()) {
        throw DataError(mismatch("target rows", outputs.rows(), targets.rows()));
    }
    if (outputs.cols() == 0) {
        throw DataError("empty batch");
    }
    const auto rows = static_cast<std::size_t>(outputs.rows());
    double sum = 0.0;
    for (Eigen::Index c = 0; c < outputs.cols(); ++c) {
        sum += squared_distance({targets.col(c).data(), rows}, {outputs.col(c).data(), rows});
    }
    return sum / static_cast<double>(outputs.cols());
}

Backprop backward(const Network& net, const Eigen::MatrixXd& inputs, const Eigen::MatrixXd& targets) {
    validate_network(net);
    if (inputs.rows() != net.front().in_dim()) {
        throw DataError(mismatch("input rows", net.front().in_dim(), inputs.rows()));
    }
    if (targets.rows() != net.back().out_dim() || targets.cols() != inputs.cols()) {
        throw DataError(mismatch("target rows", net.back().out_dim(), targets.rows()));
    }
    const std::size_t depth = net.size();
    std::vector<Eigen::MatrixXd> acts;
    acts.reserve(depth + 1);
    acts.push_back(inputs);
    for (const auto& layer : net) {
        Eigen::MatrixXd z = layer.weights * acts.back();
        z.colwise() += layer.biases;
        activate(layer.activation, z);
        acts.push_back(std::move(z));
    }

    Backprop out;
    out.outputs = acts.back();
    out.loss = batch_loss(out.outputs, targets);
    out.grads = Gradients::zeros_like(net);

    const double scale = 2.0 / static_cast<double>(targets.rows() * targets.cols());
    Eigen::MatrixXd delta =
        (scale * (out.outputs - targets)).array() * derivative_from_output(net.back().activation, out.outputs);
    for (std::size_t l = depth; l-- > 0;) {
        out.grads.weights[l].noalias() = delta * acts[l].transpose();
        out.grads.biases[l] = delta.rowwise().sum();
        if (l > 0) {
            Eigen::MatrixXd back = net[l].weights.transpose() * delta;
            delta = back.array() * derivative_from_output(net[l - 1].activation, acts[l]);
        }
    }
    return out;
}

Backprop backward(const Network& net, std::span<const double> input, std::span<const double> target) {
    const Eigen::MatrixXd x = Eigen::Map<const Eigen::VectorXd>(input.data(), static_cast<Eigen::Index>(input.size()));
    const Eigen::MatrixXd t =
        Eigen::Map<const Eigen::VectorXd>(target.data(), static_cast<Eigen::Index>(target.size()));
    return backward(net, x, t);
}

void sgd_step(Network& net, const Gradients& grads, TrainState& state, const TrainConfig& config) {
    if (grads.weights.size() != net.size() || grads.biases.size() != net.size()) {
        throw DataError(mismatch("gradient tensors", static_cast<Eigen::Index>(net.size()),
                                 static_cast<Eigen::Index>(grads.weights.size())));
    }
    if (state.velocity.weights.empty()) {
        state.velocity = Gradients::zeros_like(net);
    }
    const double lr = config.learning_rate;
    const double mu = config.momentum;
    for (std::size_t l = 0; l < net.size(); ++l) {
        auto& vw = state.velocity.weights[l];
        auto& vb = state.velocity.biases[l];
        if (grads.weights[l].rows() != net[l].out_dim() || grads.weights[l].cols() != net[l].in_dim() ||
            vw.rows() != net[l].out_dim() || vw.cols() != net[l].in_dim()) {
            throw DataError(mismatch("gradient rows", net[l].out_dim(), grads.weights[l].rows()));
        }
        vw = -lr * grads.weights[l] + mu * vw;
        vb = -lr * grads.biases[l] + mu * vb;
        net[l].weights += vw;
        net[l].biases += vb;
    }
}

double evaluate_loss(const Network& net, const Eigen::MatrixXd& inputs, const Eigen::MatrixXd& targets) {
    return batch_loss(forward(net, inputs), targets);
}

TrainResult train_epochs(Network& net, const Eigen::MatrixXd& inputs, const Eigen::MatrixXd& targets,
                         const TrainConfig& config, const BatchObserver& observer) {
    config.validate();
    validate_network(net);
    const Eigen::Index n = inputs.cols();
    if (n == 0) {
        throw DataError("empty training set");
    }
    if (targets.cols() != n) {
        throw DataError(mismatch("target count", n, targets.cols()));
    }

    TrainResult result;
    result.initial_loss = evaluate_loss(net, inputs, targets);

    TrainState state = TrainState::for_network(net);
    Rng rng(config.rng_seed);
    std::vector<Eigen::Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    const std::size_t batch = config.batch_size;

    double previous = result.initial_loss;
    std::size_t stalled = 0;
    for (std::size_t epoch = 0; epoch < config.epochs; ++epoch) {
        for (std::size_t i = order.size(); i > 1; --i) {
            std::swap(order[i - 1], order[rng.below(i)]);
        }
        double weighted = 0.0;
        for (std::size_t start = 0; start < order.size(); start += batch) {
            const std::size_t count = std::min(batch, order.size() - start);
            const std::span<const Eigen::Index> idx(order.data() + start, count);
            const Eigen::MatrixXd x = gather_columns(inputs, idx);
            const Eigen::MatrixXd t = gather_columns(targets, idx);
            Backprop bp = backward(net, x, t);
            if (observer) {
                observer(BatchRecord{epoch, x, t, bp.outputs, bp.loss});
            }
            weighted += bp.loss * static_cast<double>(count);
            sgd_step(net, bp.grads, state, config);
        }
        const double epoch_loss = weighted / static_cast<double>(n);
        result.epoch_losses.push_back(epoch_loss);

        if (config.early_stop_patience > 0) {
            stalled = (previous - epoch_loss < config.early_stop_delta) ? stalled + 1 : 0;
            previous = epoch_loss;
            if (stalled >= config.early_stop_patience) {
                result.early_stopped = true;
                break;
            }
        }
    }
    return result;
}

} // namespace saedge::nn
