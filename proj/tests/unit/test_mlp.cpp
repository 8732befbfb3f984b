#include "oracles.hpp"

#include "nns/mlp.hpp"
#include "nns/rng.hpp"

#include <doctest.h>

#include <algorithm>
#include <sstream>

using nns::Activation;

namespace {

std::vector<nns::LayerSpec> random_layers(nns::Rng& rng) {
    const std::size_t hidden = rng.index(4);  // 0..3 hidden layers
    std::vector<std::size_t> sizes{1 + rng.index(4)};
    for (std::size_t h = 0; h < hidden; ++h) sizes.push_back(1 + rng.index(16));
    sizes.push_back(1 + rng.index(3));
    const Activation kinds[] = {Activation::tanh, Activation::logistic, Activation::linear};
    auto layers = nns::make_topology(sizes);
    for (auto& l : layers) l.activation = kinds[rng.index(3)];
    return layers;
}

std::vector<double> to_std(const Eigen::VectorXd& v) { return {v.data(), v.data() + v.size()}; }

}  // namespace

TEST_CASE("activation values") {
    CHECK(nns::activate(Activation::tanh, 1.0) == doctest::Approx(0.7615941559557649).epsilon(1e-15));
    CHECK(nns::activate(Activation::logistic, 0.0) == 0.5);
    CHECK(nns::activate(Activation::linear, -3.25) == -3.25);
    CHECK(nns::activate_derivative(Activation::tanh, 0.5) == doctest::Approx(0.75));
    CHECK(nns::activate_derivative(Activation::logistic, 0.5) == doctest::Approx(0.25));
    CHECK(nns::activate_derivative(Activation::linear, 42.0) == 1.0);
    CHECK(nns::parse_activation("purelin") == Activation::linear);
    CHECK(nns::parse_activation("sigmoid") == Activation::logistic);
    CHECK_THROWS_AS(nns::parse_activation("relu"), std::invalid_argument);
}

TEST_CASE("single tanh neuron") {
    nns::Network net(nns::make_topology({1, 1}, Activation::tanh, Activation::tanh));
    net.weights(0)(0, 0) = 0.5;
    Eigen::VectorXd x(1);
    x << 2.0;
    CHECK(nns::forward(net, x)(0) == doctest::Approx(0.7615941559557649).epsilon(1e-15));
}

TEST_CASE("topology and parameter layout") {
    const auto layers = nns::make_topology({2, 10, 10, 1});
    REQUIRE(layers.size() == 3);
    CHECK(layers[0].activation == Activation::tanh);
    CHECK(layers[2].activation == Activation::linear);
    nns::Network net(layers);
    CHECK(net.parameter_count() == 2 * 10 + 10 + 10 * 10 + 10 + 10 + 1);

    Eigen::VectorXd theta = Eigen::VectorXd::LinSpaced(static_cast<Eigen::Index>(net.parameter_count()), 0, 150);
    net.assign(theta);
    CHECK(net.weights(0)(0, 1) == 1.0);  // row-major inside a layer
    CHECK(net.biases(0)(0) == 20.0);     // biases after the 20 weights
    CHECK(net.flatten() == theta);
    CHECK(nns::Network::unflatten(layers, theta) == net);

    CHECK_THROWS_AS(nns::Network({}), std::invalid_argument);
    CHECK_THROWS_AS(nns::Network({{2, 3, Activation::tanh}, {4, 1, Activation::linear}}), std::invalid_argument);
    CHECK_THROWS_AS(net.assign(Eigen::VectorXd::Zero(3)), std::invalid_argument);
}

TEST_CASE("zero network outputs its output biases") {
    nns::Network net(nns::make_topology({3, 4, 2}));
    net.biases(1) << 0.25, -1.5;
    const Eigen::VectorXd y = nns::forward(net, Eigen::VectorXd::Constant(3, 7.0));
    CHECK(y(0) == 0.25);
    CHECK(y(1) == -1.5);
    CHECK_THROWS_AS(nns::forward(net, Eigen::VectorXd::Zero(2)), std::invalid_argument);
}

TEST_CASE("initialisation respects bounds and seeds") {
    const auto layers = nns::make_topology({2, 16, 8, 1});
    const auto a = nns::init_network(layers, {nns::UniformRange{-0.3, 0.2}, 11});
    for (double v : to_std(a.flatten())) {
        CHECK(v >= -0.3);
        CHECK(v <= 0.2);
    }
    CHECK(nns::init_network(layers, {nns::UniformRange{-0.3, 0.2}, 11}) == a);
    CHECK_FALSE(nns::init_network(layers, {nns::UniformRange{-0.3, 0.2}, 12}) == a);

    const auto b = nns::init_network(layers, {nns::FanInScaled{2.0}, 5});
    for (std::size_t k = 0; k < b.layer_count(); ++k) {
        const double bound = 2.0 / std::sqrt(static_cast<double>(layers[k].fan_in));
        CHECK(b.weights(k).cwiseAbs().maxCoeff() <= bound);
    }

    const auto flat = nns::init_network(layers, {nns::UniformRange{0.1, 0.1}, 3});
    CHECK(flat.flatten().isConstant(0.1));
    CHECK_THROWS_AS(nns::init_network(layers, {nns::UniformRange{1.0, -1.0}, 3}), std::invalid_argument);
}

TEST_CASE("forward_batch matches forward row by row") {
    nns::Rng rng(2024);
    for (int trial = 0; trial < 50; ++trial) {
        const auto layers = random_layers(rng);
        const auto net = nns::init_network(layers, {nns::UniformRange{-1, 1}, rng.next()});
        const Eigen::Index n = 1 + static_cast<Eigen::Index>(rng.index(12));
        Eigen::MatrixXd x(n, static_cast<Eigen::Index>(net.input_size()));
        for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = rng.uniform(-2, 2);
        const auto y = nns::forward_batch(net, x);
        REQUIRE(y.rows() == n);
        for (Eigen::Index i = 0; i < n; ++i) {
            CHECK(y.row(i).transpose() == nns::forward(net, x.row(i).transpose()));
        }
    }
    nns::Network net(nns::make_topology({2, 3, 4}));
    const auto empty = nns::forward_batch(net, Eigen::MatrixXd(0, 2));
    CHECK(empty.rows() == 0);
    CHECK(empty.cols() == 4);
}

TEST_CASE("forward agrees with the loop oracle") {
    nns::Rng rng(77);
    for (int trial = 0; trial < 100; ++trial) {
        const auto layers = random_layers(rng);
        const auto net = nns::init_network(layers, {nns::UniformRange{-1, 1}, rng.next()});
        std::vector<double> x(net.input_size());
        for (auto& v : x) v = rng.uniform(-2, 2);
        const auto expect = oracle::forward(layers, to_std(net.flatten()), x);
        const auto got = nns::forward(net, Eigen::Map<const Eigen::VectorXd>(x.data(), x.size()));
        for (std::size_t o = 0; o < expect.size(); ++o) {
            CHECK(got(o) == doctest::Approx(expect[o]).epsilon(1e-12));
        }
    }
}

TEST_CASE("jacobian matches central differences on random networks") {
    nns::Rng rng(31337);
    const int nets = 120;
    int checked = 0;
    double worst = 0.0;
    for (int trial = 0; trial < nets; ++trial) {
        const auto layers = random_layers(rng);
        const auto net = nns::init_network(layers, {nns::UniformRange{-1, 1}, rng.next()});
        std::vector<double> x(net.input_size());
        for (auto& v : x) v = rng.uniform(-1.5, 1.5);

        const auto fd = oracle::fd_jacobian(layers, to_std(net.flatten()), x);
        const auto jac = nns::jacobian(net, Eigen::Map<const Eigen::VectorXd>(x.data(), x.size()));
        REQUIRE(jac.rows() == static_cast<Eigen::Index>(fd.size()));
        REQUIRE(jac.cols() == static_cast<Eigen::Index>(net.parameter_count()));

        // Relative to the largest entry of the row, so that structurally tiny
        // entries are not held to a tolerance below the difference noise.
        for (std::size_t o = 0; o < fd.size(); ++o) {
            double scale = 0.0;
            for (double v : fd[o]) scale = std::max(scale, std::abs(v));
            scale = std::max(scale, 1e-12);
            for (std::size_t j = 0; j < fd[o].size(); ++j) {
                const double err = std::abs(jac(o, j) - fd[o][j]) / std::max(std::abs(fd[o][j]), scale);
                worst = std::max(worst, err);
            }
        }
        ++checked;
    }
    CHECK(checked >= 100);
    CHECK(worst <= 1e-5);
}

TEST_CASE("model text format round trips exactly") {
    auto layers = nns::make_topology({2, 5, 3, 1});
    layers[1].activation = Activation::logistic;
    const auto net = nns::init_network(layers, {nns::FanInScaled{1.0}, 99});
    std::stringstream ss;
    nns::write_network(ss, net);
    const auto back = nns::read_network(ss);
    CHECK(back == net);
    CHECK(back.layers() == net.layers());

    std::istringstream bad("nns-mlp 2\nlayers 1\n");
    CHECK_THROWS(nns::read_network(bad));
    std::istringstream truncated("nns-mlp 1\nlayers 1\n2 1 tanh\nweights 0\n1.0\n");
    CHECK_THROWS(nns::read_network(truncated));
}
