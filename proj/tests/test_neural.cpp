#include "saedge/errors.hpp"
#include "saedge/neural.hpp"

#include "gradient_oracle.hpp"
#include "test_support.hpp"

#include <doctest.h>

#include <cmath>

using namespace saedge;
using namespace saedge::nn;
using saedge::testing::column;
using saedge::testing::random_matrix;

namespace {

Network small_network(Rng& rng) {
    return {init_layer(6, 4, Activation::Tanh, rng), init_layer(4, 3, Activation::Tanh, rng),
            init_layer(3, 6, Activation::Identity, rng)};
}

} // namespace

TEST_CASE("dense_forward examples") {
    LayerParams zero{Eigen::MatrixXd::Zero(3, 2), Eigen::Vector3d(0.5, -1.0, 2.0), Activation::Tanh};
    const auto y = dense_forward(zero, std::vector<double>{7.0, -3.0});
    REQUIRE(y.size() == 3);
    CHECK(y[0] == std::tanh(0.5));
    CHECK(y[1] == std::tanh(-1.0));
    CHECK(y[2] == std::tanh(2.0));

    LayerParams id{Eigen::MatrixXd::Ones(1, 1), Eigen::VectorXd::Zero(1), Activation::Identity};
    CHECK(dense_forward(id, std::vector<double>{0.5}) == std::vector<double>{0.5});
}

TEST_CASE("dense_forward matches a scalar double-loop oracle") {
    Rng rng(42);
    for (auto act : {Activation::Tanh, Activation::Identity}) {
        LayerParams layer = init_layer(3, 2, act, rng);
        layer.biases = Eigen::Vector2d(rng.uniform(-0.1, 0.1), rng.uniform(-0.1, 0.1));
        const std::vector<double> x{rng.uniform(), rng.uniform(), rng.uniform()};
        const auto y = dense_forward(layer, x);
        for (Eigen::Index r = 0; r < 2; ++r) {
            double acc = layer.biases(r);
            for (Eigen::Index c = 0; c < 3; ++c) acc += layer.weights(r, c) * x[static_cast<std::size_t>(c)];
            const double expect = act == Activation::Tanh ? std::tanh(acc) : acc;
            CHECK(std::abs(y[static_cast<std::size_t>(r)] - expect) <= 1e-12);
        }
    }
}

TEST_CASE("dense_forward reports expected and actual sizes") {
    Rng rng(1);
    const auto layer = init_layer(4, 2, Activation::Tanh, rng);
    CHECK_THROWS_WITH_AS(dense_forward(layer, std::vector<double>{1, 2, 3}), doctest::Contains("expected 4, got 3"),
                         DataError);
}

TEST_CASE("tanh layers produce outputs strictly inside (-1, 1)") {
    Rng rng(9);
    for (int trial = 0; trial < 20; ++trial) {
        const auto layer = init_layer(50, 20, Activation::Tanh, rng);
        std::vector<double> x(50);
        for (auto& v : x) v = rng.uniform(-1, 1);
        for (double v : dense_forward(layer, x)) {
            CHECK(v > -1.0);
            CHECK(v < 1.0);
        }
    }
}

TEST_CASE("init_layer uses the symmetric fan-based range") {
    Rng rng(3);
    const auto layer = init_layer(500, 300, Activation::Tanh, rng);
    const double r = std::sqrt(6.0 / 800.0);
    CHECK(layer.weights.maxCoeff() <= r);
    CHECK(layer.weights.minCoeff() >= -r);
    CHECK(layer.weights.maxCoeff() > 0.95 * r);
    CHECK(layer.biases.isZero());
}

TEST_CASE("mse and squared_distance") {
    const std::vector<double> a{1.0, 0.0, -1.0};
    CHECK(mse(a, a) == 0.0);
    CHECK(mse(std::vector<double>{0, 0}, std::vector<double>{2, 2}) == 4.0);
    CHECK(mse(a, std::vector<double>{0, 0, 0}) == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
    CHECK(squared_distance(std::vector<double>{1, 3}, std::vector<double>{0, 0}) == 5.0);
    CHECK_THROWS_AS(mse(a, std::vector<double>{1.0}), DataError);
    CHECK_THROWS_AS(mse(std::vector<double>{}, std::vector<double>{}), DataError);

    Rng rng(17);
    for (int trial = 0; trial < 10; ++trial) {
        std::vector<double> x(500), y(500);
        for (auto& v : x) v = rng.normal();
        for (auto& v : y) v = rng.normal();
        CHECK(squared_distance(x, y) == mse(x, y));
        CHECK(mse(x, y) > 0.0);
    }
}

TEST_CASE("backward: zero error gives zero gradients") {
    Rng rng(4);
    const Network net = small_network(rng);
    const Eigen::MatrixXd x = random_matrix(6, 3, rng);
    const Eigen::MatrixXd t = forward(net, x);
    const auto bp = backward(net, x, t);
    CHECK(bp.loss == 0.0);
    for (std::size_t l = 0; l < net.size(); ++l) {
        CHECK(bp.grads.weights[l].isZero(0.0));
        CHECK(bp.grads.biases[l].isZero(0.0));
    }
}

TEST_CASE("backward: 1-1-1 identity network matches the closed form") {
    const double w1 = 0.7, b1 = -0.2, w2 = 1.3, b2 = 0.1, x = 0.4, t = 0.9;
    Network net{{Eigen::MatrixXd::Constant(1, 1, w1), Eigen::VectorXd::Constant(1, b1), Activation::Identity},
                {Eigen::MatrixXd::Constant(1, 1, w2), Eigen::VectorXd::Constant(1, b2), Activation::Identity}};
    const auto bp = backward(net, std::vector<double>{x}, std::vector<double>{t});
    const double h = w1 * x + b1;
    const double y = w2 * h + b2;
    const double dy = 2.0 * (y - t);
    CHECK(bp.loss == doctest::Approx((y - t) * (y - t)));
    CHECK(bp.grads.weights[0](0, 0) == doctest::Approx(dy * w2 * x).epsilon(1e-14));
    CHECK(bp.grads.biases[0](0) == doctest::Approx(dy * w2).epsilon(1e-14));
    CHECK(bp.grads.weights[1](0, 0) == doctest::Approx(dy * h).epsilon(1e-14));
    CHECK(bp.grads.biases[1](0) == doctest::Approx(dy).epsilon(1e-14));
}

TEST_CASE("backward matches central finite differences on a random network") {
    Rng rng(21);
    Network net = small_network(rng);
    for (auto& layer : net) {
        for (Eigen::Index i = 0; i < layer.biases.size(); ++i) layer.biases(i) = rng.uniform(-0.2, 0.2);
    }
    const Eigen::MatrixXd x = random_matrix(6, 4, rng);
    const Eigen::MatrixXd t = random_matrix(6, 4, rng);
    const auto bp = backward(net, x, t);
    double worst = 0.0;
    for (std::size_t l = 0; l < net.size(); ++l) {
        for (Eigen::Index r = 0; r < net[l].out_dim(); ++r) {
            for (Eigen::Index c = 0; c < net[l].in_dim(); ++c) {
                const double num = saedge::testing::fd_gradient(net, l, false, r, c, x, t);
                CHECK(saedge::testing::gradients_agree(bp.grads.weights[l](r, c), num));
                worst = std::max(worst, saedge::testing::relative_error(bp.grads.weights[l](r, c), num));
            }
            const double num = saedge::testing::fd_gradient(net, l, true, r, 0, x, t);
            CHECK(saedge::testing::gradients_agree(bp.grads.biases[l](r), num));
        }
    }
    MESSAGE("max relative error " << worst);
}

TEST_CASE("backward rejects inconsistent shapes") {
    Rng rng(2);
    const Network net = small_network(rng);
    CHECK_THROWS_AS(backward(net, random_matrix(5, 2, rng), random_matrix(6, 2, rng)), DataError);
    CHECK_THROWS_AS(backward(net, random_matrix(6, 2, rng), random_matrix(5, 2, rng)), DataError);
    Network broken = net;
    broken[1] = init_layer(5, 3, Activation::Tanh, rng);
    CHECK_THROWS_AS(backward(broken, random_matrix(6, 2, rng), random_matrix(6, 2, rng)), DataError);
}

TEST_CASE("sgd_step examples") {
    auto scalar = [](double v) {
        return Network{{Eigen::MatrixXd::Constant(1, 1, v), Eigen::VectorXd::Zero(1), Activation::Identity}};
    };
    TrainConfig cfg;

    SUBCASE("zero gradient and zero velocity leave parameters unchanged") {
        Network net = scalar(1.0);
        TrainState st = TrainState::for_network(net);
        sgd_step(net, Gradients::zeros_like(net), st, cfg);
        CHECK(net[0].weights(0, 0) == 1.0);
        CHECK(net[0].biases(0) == 0.0);
    }
    SUBCASE("momentum 0 is plain SGD") {
        cfg.momentum = 0.0;
        cfg.learning_rate = 0.1;
        Network net = scalar(1.0);
        TrainState st = TrainState::for_network(net);
        Gradients g = Gradients::zeros_like(net);
        g.weights[0](0, 0) = 2.0;
        sgd_step(net, g, st, cfg);
        CHECK(net[0].weights(0, 0) == doctest::Approx(0.8).epsilon(1e-15));
    }
    SUBCASE("two momentum steps with a constant gradient") {
        cfg.momentum = 0.9;
        cfg.learning_rate = 0.1;
        Network net = scalar(1.0);
        TrainState st = TrainState::for_network(net);
        Gradients g = Gradients::zeros_like(net);
        g.weights[0](0, 0) = 2.0;
        sgd_step(net, g, st, cfg);
        const double after_first = net[0].weights(0, 0);
        sgd_step(net, g, st, cfg);
        const double second_delta = net[0].weights(0, 0) - after_first;
        CHECK(second_delta == doctest::Approx(-0.1 * 2.0 * 1.9).epsilon(1e-14));
    }
}

TEST_CASE("sgd_step with momentum 0 satisfies theta' = theta - lr * grad exactly") {
    Rng rng(8);
    Network net = small_network(rng);
    const Network before = net;
    TrainConfig cfg;
    cfg.momentum = 0.0;
    cfg.learning_rate = 0.037;
    TrainState st = TrainState::for_network(net);
    st.velocity.weights[0].setConstant(5.0); // ignored when momentum is zero
    const auto bp = backward(net, random_matrix(6, 3, rng), random_matrix(6, 3, rng));
    sgd_step(net, bp.grads, st, cfg);
    for (std::size_t l = 0; l < net.size(); ++l) {
        // materialized so -march=native cannot fuse the product into the sum
        const Eigen::MatrixXd step = -cfg.learning_rate * bp.grads.weights[l];
        const Eigen::MatrixXd expect = before[l].weights + step;
        CHECK((net[l].weights.array() == expect.array()).all());
        const Eigen::VectorXd step_b = -cfg.learning_rate * bp.grads.biases[l];
        const Eigen::VectorXd expect_b = before[l].biases + step_b;
        CHECK((net[l].biases.array() == expect_b.array()).all());
    }
}

TEST_CASE("train_epochs contracts") {
    Rng rng(12);
    const Eigen::MatrixXd x = random_matrix(6, 40, rng);
    TrainConfig cfg;
    cfg.batch_size = 8;
    cfg.rng_seed = 99;

    SUBCASE("zero epochs leave the network unchanged") {
        Network net = small_network(rng);
        const Network before = net;
        cfg.epochs = 0;
        const auto res = train_epochs(net, x, x, cfg);
        CHECK(res.epoch_losses.empty());
        for (std::size_t l = 0; l < net.size(); ++l) {
            CHECK((net[l].weights.array() == before[l].weights.array()).all());
        }
    }
    SUBCASE("a single constant window converges") {
        Network net = small_network(rng);
        const Eigen::MatrixXd one = Eigen::MatrixXd::Constant(6, 1, 0.3);
        cfg.epochs = 300;
        const auto res = train_epochs(net, one, one, cfg);
        REQUIRE(!res.epoch_losses.empty());
        CHECK(res.epoch_losses.back() < res.initial_loss);
        CHECK(evaluate_loss(net, one, one) < 1e-4);
    }
    SUBCASE("fixed seed reproduces the loss history bit for bit") {
        const Network init = small_network(rng);
        cfg.epochs = 25;
        Network a = init;
        Network b = init;
        const auto ra = train_epochs(a, x, x, cfg);
        const auto rb = train_epochs(b, x, x, cfg);
        CHECK(ra.epoch_losses == rb.epoch_losses);
        CHECK((a[0].weights.array() == b[0].weights.array()).all());
    }
    SUBCASE("observer sees the batch loss as squared distance") {
        Network net = small_network(rng);
        cfg.epochs = 2;
        std::size_t batches = 0;
        train_epochs(net, x, x, cfg, [&](const BatchRecord& rec) {
            double sum = 0.0;
            for (Eigen::Index c = 0; c < rec.outputs.cols(); ++c) {
                sum += squared_distance(column(rec.targets, c), column(rec.outputs, c));
            }
            CHECK(rec.loss == sum / static_cast<double>(rec.outputs.cols()));
            ++batches;
        });
        CHECK(batches == 2 * 5);
    }
    SUBCASE("empty training set is an error") {
        Network net = small_network(rng);
        CHECK_THROWS_WITH_AS(train_epochs(net, Eigen::MatrixXd(6, 0), Eigen::MatrixXd(6, 0), cfg),
                             doctest::Contains("empty"), DataError);
    }
    SUBCASE("early stop fires on a flat loss") {
        Network net = small_network(rng);
        cfg.epochs = 500;
        cfg.learning_rate = 1e-12;
        const auto res = train_epochs(net, x, x, cfg);
        CHECK(res.early_stopped);
        CHECK(res.epoch_losses.size() == cfg.early_stop_patience);
    }
}

TEST_CASE("TrainConfig validation") {
    TrainConfig cfg;
    cfg.learning_rate = 0.0;
    CHECK_THROWS_AS(cfg.validate(), DataError);
    cfg.learning_rate = 0.01;
    cfg.momentum = 1.0;
    CHECK_THROWS_AS(cfg.validate(), DataError);
    cfg.momentum = 0.0;
    cfg.batch_size = 0;
    CHECK_THROWS_AS(cfg.validate(), DataError);
}
