#include "saedge/stack.hpp"

#include "saedge/errors.hpp"

#include <cmath>
#include <string>

namespace saedge {
namespace {

using nn::Activation;

Eigen::Index as_index(std::size_t v) { return static_cast<Eigen::Index>(v); }

void check_windows(const Eigen::MatrixXd& windows, const StackSpec& spec) {
    if (windows.cols() == 0) {
        throw DataError("empty training set");
    }
    if (windows.rows() != as_index(spec.window_size)) {
        throw DataError("dimension mismatch: window length expected " + std::to_string(spec.window_size) + ", got " +
                        std::to_string(windows.rows()));
    }
}

nn::TrainConfig reseeded(const nn::TrainConfig& config, std::uint64_t stream) {
    nn::TrainConfig c = config;
    c.rng_seed = derive_seed(config.rng_seed, stream);
    return c;
}

} // namespace

void StackSpec::validate() const {
    if (encoder_dims.empty()) {
        throw DataError("stack spec needs at least one encoder layer");
    }
    if (final_decoder_hidden < 1) {
        throw DataError("final decoder hidden width must be >= 1");
    }
    std::size_t prev = window_size;
    for (std::size_t d : encoder_dims) {
        if (d < 1 || d >= prev) {
            throw DataError("encoder dims must be >= 1 and strictly decreasing from the window size");
        }
        prev = d;
    }
}

StackSpec default_spec(std::size_t window_size) {
    if (window_size < 50) {
        throw DataError("window too small to stack: " + std::to_string(window_size) + " < 50");
    }
    if (window_size == 500) {
        return StackSpec{500, {300, 200, 120, 70}, 50};
    }
    if (window_size == 250) {
        return StackSpec{250, {150, 100, 75}, 50};
    }
    const double w = static_cast<double>(window_size);
    StackSpec spec{window_size, {}, static_cast<std::size_t>(std::lround(w / 10.0))};
    for (double ratio : {300.0, 200.0, 120.0, 70.0}) {
        spec.encoder_dims.push_back(static_cast<std::size_t>(std::lround(w * ratio / 500.0)));
    }
    spec.validate();
    return spec;
}

void StackedModel::validate() const {
    spec.validate();
    if (encoders.size() != spec.encoder_dims.size()) {
        throw DataError("model has " + std::to_string(encoders.size()) + " encoders, spec declares " +
                        std::to_string(spec.encoder_dims.size()));
    }
    nn::validate_network(encoders);
    nn::validate_network(final_decoder);
    Eigen::Index prev = as_index(spec.window_size);
    for (std::size_t k = 0; k < encoders.size(); ++k) {
        if (encoders[k].in_dim() != prev || encoders[k].out_dim() != as_index(spec.encoder_dims[k])) {
            throw DataError("encoder " + std::to_string(k) + " does not match the stack spec");
        }
        prev = encoders[k].out_dim();
    }
    if (final_decoder.size() != 2 || final_decoder.front().in_dim() != prev ||
        final_decoder.front().out_dim() != as_index(spec.final_decoder_hidden) ||
        final_decoder.back().out_dim() != as_index(spec.window_size)) {
        throw DataError("final decoder does not match the stack spec");
    }
    if (!(norm_stats.max > norm_stats.min)) {
        throw DataError("degenerate scale in model normalization stats");
    }
}

std::size_t StackedModel::feature_count() const {
    return encoders.empty() ? 0 : static_cast<std::size_t>(encoders.back().out_dim());
}

Eigen::VectorXd StackedModel::encode(std::span<const double> normalized_window) const {
    if (normalized_window.size() != spec.window_size) {
        throw DataError("dimension mismatch: window length expected " + std::to_string(spec.window_size) + ", got " +
                        std::to_string(normalized_window.size()));
    }
    Eigen::VectorXd a = Eigen::Map<const Eigen::VectorXd>(normalized_window.data(), as_index(spec.window_size));
    for (const auto& layer : encoders) {
        a = nn::apply_layer(layer, a);
    }
    return a;
}

Eigen::VectorXd StackedModel::reconstruct(std::span<const double> normalized_window) const {
    Eigen::VectorXd a = encode(normalized_window);
    for (const auto& layer : final_decoder) {
        a = nn::apply_layer(layer, a);
    }
    return a;
}

StackTraining train_stack(const Eigen::MatrixXd& windows, const StackSpec& spec, const nn::TrainConfig& config,
                          const StageObserver& observer) {
    spec.validate();
    check_windows(windows, spec);

    StackTraining out;
    Eigen::MatrixXd inputs = windows;
    for (std::size_t k = 0; k < spec.encoder_dims.size(); ++k) {
        const Eigen::Index in_dim = inputs.rows();
        const Eigen::Index hidden = as_index(spec.encoder_dims[k]);
        Rng init(derive_seed(config.rng_seed, 2 * k));
        nn::Network ae;
        ae.push_back(nn::init_layer(in_dim, hidden, Activation::Tanh, init));
        ae.push_back(nn::init_layer(hidden, in_dim, Activation::Tanh, init));

        nn::TrainResult result = nn::train_epochs(ae, inputs, inputs, reseeded(config, 2 * k + 1));
        out.stages.push_back(StageReport{k, in_dim, hidden, std::move(result)});
        out.encoders.push_back(std::move(ae.front()));

        // Codes are computed once, after the stage has finished.
        inputs = nn::forward(nn::Network{out.encoders.back()}, inputs);
        if (observer) {
            observer(k, out.encoders);
        }
    }
    return out;
}

Eigen::MatrixXd encode_all(const nn::Network& encoders, const Eigen::MatrixXd& windows) {
    return nn::forward(encoders, windows);
}

DecoderTraining train_final_decoder(const nn::Network& encoders, const Eigen::MatrixXd& windows,
                                    const StackSpec& spec, const nn::TrainConfig& config,
                                    const nn::BatchObserver& observer) {
    spec.validate();
    check_windows(windows, spec);
    if (encoders.size() != spec.encoder_dims.size() ||
        encoders.back().out_dim() != as_index(spec.bottleneck())) {
        throw DataError("encoders do not match the stack spec");
    }
    const Eigen::MatrixXd codes = encode_all(encoders, windows);

    Rng init(derive_seed(config.rng_seed, kDecoderSeedStream));
    DecoderTraining out;
    out.decoder.push_back(nn::init_layer(codes.rows(), as_index(spec.final_decoder_hidden), Activation::Tanh, init));
    out.decoder.push_back(
        nn::init_layer(as_index(spec.final_decoder_hidden), as_index(spec.window_size), Activation::Identity, init));
    out.training = nn::train_epochs(out.decoder, codes, windows, reseeded(config, kDecoderSeedStream + 1), observer);
    return out;
}

double reconstruction_error(const StackedModel& model, std::span<const double> normalized_window) {
    const Eigen::VectorXd out = model.reconstruct(normalized_window);
    return nn::squared_distance(normalized_window, {out.data(), static_cast<std::size_t>(out.size())});
}

} // namespace saedge
