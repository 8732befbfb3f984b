// Point fixtures and structural properties not covered by the per-module files.

#include "oracles.hpp"

#include "nns/benchfn.hpp"
#include "nns/device.hpp"
#include "nns/experiment.hpp"
#include "nns/metrics.hpp"
#include "nns/rng.hpp"
#include "nns/trainer.hpp"

#include <doctest.h>

#include <set>
#include <sstream>

using nns::Activation;

TEST_CASE("activation shapes") {
    CHECK(nns::activate(Activation::tanh, 0.0) == 0.0);
    nns::Rng rng(1);
    for (int i = 0; i < 200; ++i) {
        const double z = rng.uniform(-10, 10);
        CHECK(nns::activate(Activation::tanh, -z) == -nns::activate(Activation::tanh, z));
        CHECK(nns::activate(Activation::linear, z) == z);
    }
}

TEST_CASE("trivial networks") {
    nns::Network zero(nns::make_topology({3, 6, 2}));
    CHECK(nns::forward(zero, Eigen::Vector3d(4, -2, 9)).isZero(0.0));

    nns::Network ident(nns::make_topology({3, 3}, Activation::linear, Activation::linear));
    ident.weights(0).setIdentity();
    const Eigen::Vector3d x(0.5, -7, 2);
    CHECK(nns::forward(ident, x) == x);

    nns::Network one(nns::make_topology({1, 1}, Activation::tanh, Activation::tanh));
    one.weights(0)(0, 0) = 1.0;
    CHECK(nns::forward(one, Eigen::VectorXd::Ones(1))(0) == doctest::Approx(0.7615941559557649).epsilon(1e-15));

    const auto fan = nns::init_network(nns::make_topology({4, 4, 1}), {nns::FanInScaled{1.0}, 2});
    CHECK(fan.weights(0).cwiseAbs().maxCoeff() <= 0.5);
    CHECK(fan.weights(1).cwiseAbs().maxCoeff() <= 0.5);
    CHECK(nns::init_network(nns::make_topology({2, 3, 1}), {nns::UniformRange{0, 0}, 5}).flatten().isZero(0.0));
}

TEST_CASE("2-8-1 jacobian against central differences") {
    const auto layers = nns::make_topology({2, 8, 1});
    const auto net = nns::init_network(layers, {nns::UniformRange{-1, 1}, 281});
    const std::vector<double> x{0.4, -0.9};
    const Eigen::VectorXd flat = net.flatten();
    const auto fd = oracle::fd_jacobian(layers, {flat.data(), flat.data() + flat.size()}, x);
    const auto jac = nns::jacobian(net, Eigen::Vector2d(0.4, -0.9));
    double scale = 0;
    for (double v : fd[0]) scale = std::max(scale, std::abs(v));
    for (std::size_t j = 0; j < fd[0].size(); ++j) {
        CHECK(std::abs(jac(0, j) - fd[0][j]) <= 1e-5 * std::max(std::abs(fd[0][j]), scale));
    }
}

TEST_CASE("mse fixtures") {
    nns::Network net(nns::make_topology({1, 1}, Activation::linear, Activation::linear));
    Eigen::MatrixXd x(2, 1), y(2, 1);
    x << 0, 0;
    y << -1, 1;
    CHECK(nns::mse(net, x, y) == 1.0);
    y.setZero();
    CHECK(nns::mse(net, x, y) == 0.0);
}

TEST_CASE("one damped step on y = 2x lands near the least-squares slope") {
    std::vector<double> xs{-1, -0.5, 0.25, 1, 2};
    std::vector<double> ys;
    for (double v : xs) ys.push_back(2 * v);
    Eigen::MatrixXd x(5, 1), y(5, 1);
    for (int i = 0; i < 5; ++i) {
        x(i, 0) = xs[i];
        y(i, 0) = ys[i];
    }
    const auto fit = oracle::least_squares_line(xs, ys);
    nns::Network net(nns::make_topology({1, 1}, Activation::linear, Activation::linear));
    const auto r = nns::lm_step(net, x, y, 1e-9);
    CHECK(r.accepted);
    CHECK(r.candidate.weights(0)(0, 0) == doctest::Approx(fit.slope).epsilon(1e-6));

    double prev = std::numeric_limits<double>::infinity();
    for (double mu = 1.0; mu <= 1e6; mu *= 10) {
        const double norm = nns::lm_step(net, x, y, mu).step.norm();
        CHECK(norm < prev);
        prev = norm;
    }
}

TEST_CASE("LM fits an affine map and a constant with a small tanh net") {
    nns::Rng rng(1);
    Eigen::MatrixXd x(20, 1), y(20, 1), c(20, 1);
    for (int i = 0; i < 20; ++i) {
        x(i, 0) = rng.uniform(-1, 1);
        y(i, 0) = 2 * x(i, 0) + 1;
        c(i, 0) = 3.0;
    }
    const auto net = nns::init_network(nns::make_topology({1, 4, 1}), {nns::UniformRange{}, 1});
    nns::LmConfig cfg;
    cfg.mse_goal = 1e-12;
    const auto affine = nns::train_lm(net, nns::Dataset(x, y, "affine"), std::nullopt, cfg);
    CHECK(affine.history.epochs.back().train_mse < 1e-8);

    cfg.mse_goal = 1e-14;
    const auto flat = nns::train_lm(net, nns::Dataset(x, c, "const"), std::nullopt, cfg);
    CHECK(nns::mse(flat.network, x, c) < 1e-10);
    CHECK(nns::forward(flat.network, Eigen::VectorXd::Constant(1, 0.3))(0) == doctest::Approx(3.0).epsilon(1e-4));
}

TEST_CASE("benchmark anchors and symmetry") {
    CHECK(nns::eval_general({1, 0, 1}, 2, 3) == 13.0);
    nns::Rng rng(11);
    for (int i = 0; i < 20; ++i) {
        const nns::GeneralFunctionParams p{rng.uniform(-5, 5), rng.uniform(-5, 5), rng.uniform(-5, 5)};
        CHECK(nns::eval_general(p, 0, 0) == 0.0);
        CHECK(nns::eval_beale(0, rng.uniform(-4.5, 4.5)) == 14.203125);
    }
    CHECK(std::abs(nns::eval_bohachevsky1(0, 0)) <= 1e-12);
    CHECK(std::abs(nns::eval_bohachevsky2(0, 0)) <= 1e-12);
    CHECK(nns::eval_booth(1, 3) == 0.0);
    CHECK(nns::eval_hump(0, 0) == 0.0);

    for (const auto& name : nns::function_names()) {
        const auto f = nns::find_function(name);
        bool finite = true;
        for (int i = 0; i < 10000; ++i) {
            finite = finite && std::isfinite(f.evaluate(rng.uniform(f.domain[0].lo, f.domain[0].hi),
                                                        rng.uniform(f.domain[1].lo, f.domain[1].hi)));
        }
        CHECK_MESSAGE(finite, name);
    }
    for (int i = 0; i < 1000; ++i) {
        const double a = rng.uniform(-50, 50), b = rng.uniform(-50, 50);
        for (auto fn : {&nns::eval_bohachevsky1, &nns::eval_bohachevsky2, &nns::eval_easom_variant}) {
            CHECK(fn(a, b) == fn(-a, b));
            CHECK(fn(a, b) == fn(a, -b));
        }
    }
}

TEST_CASE("booth grid and degenerate plans") {
    const auto f = nns::find_function("booth");
    const auto g = nns::domain_samples(f, {nns::UniformGrid{3}});
    REQUIRE(g.size() == 9);
    std::set<std::pair<double, double>> pts;
    for (Eigen::Index i = 0; i < 9; ++i) pts.insert({g.inputs()(i, 0), g.inputs()(i, 1)});
    for (double a : {-4.5, 4.5}) {
        for (double b : {-4.5, 4.5}) CHECK(pts.count({a, b}) == 1);
    }
    CHECK_THROWS_AS(nns::domain_samples(f, {nns::RandomUniform{0}}), std::invalid_argument);
    CHECK_THROWS_AS(nns::domain_samples(f, {nns::UniformGrid{0}}), std::invalid_argument);
    const auto r = nns::domain_samples(f, {nns::RandomUniform{500}, 2});
    CHECK(r.inputs().cwiseAbs().maxCoeff() <= 4.5);
}

TEST_CASE("device properties") {
    nns::MosfetParams p;
    CHECK(nns::drain_current(p, {p.v_th, 3.0}) == 0.0);
    CHECK(nns::iv_sweep(nns::SweepSpec{}).size() == 204);

    nns::SweepSpec off;
    off.v_gs_values = {0.0, 0.3, 0.7};
    for (const auto& r : nns::iv_sweep(off)) CHECK(r.i_d == 0.0);

    nns::SweepSpec small;
    small.v_ds_steps = 5;
    const auto whole = nns::circuit_dataset(small, 20, 3);
    CHECK(whole.size() == 20);
    CHECK_THROWS_AS(nns::circuit_dataset(small, 0, 3), std::invalid_argument);
    nns::SweepSpec big;
    big.v_gs_values = {1, 2, 3, 4};
    big.v_ds_steps = 200;
    std::set<std::pair<double, double>> distinct;
    const auto ds = nns::circuit_dataset(big, 500, 8);
    for (Eigen::Index i = 0; i < 500; ++i) distinct.insert({ds.inputs()(i, 0), ds.inputs()(i, 1)});
    CHECK(distinct.size() == 500);

    nns::Rng rng(13);
    for (int i = 0; i < 500; ++i) {
        nns::MosfetParams q;
        q.k_prime = rng.uniform(1e-5, 1e-3);
        q.width = rng.uniform(1e-6, 1e-4);
        q.length = rng.uniform(1e-7, 1e-5);
        q.v_th = rng.uniform(0.2, 1.5);
        q.lambda = rng.uniform(0, 0.2);
        const double vds = rng.uniform(0, 5);
        const double v1 = rng.uniform(0, 5), v2 = v1 + rng.uniform(0, 2);
        CHECK(nns::drain_current(q, {v2, vds}) >= nns::drain_current(q, {v1, vds}));

        const double base = nns::drain_current(q, {v2, vds});
        auto wide = q;
        wide.width *= 2;
        CHECK(nns::drain_current(wide, {v2, vds}) == doctest::Approx(2 * base).epsilon(1e-12));
        auto longer = q;
        longer.length *= 2;
        CHECK(nns::drain_current(longer, {v2, vds}) == doctest::Approx(base / 2).epsilon(1e-12));

        auto flat = q;
        flat.lambda = 0;
        const double i0 = nns::drain_current(flat, {v2, 0.0});
        CHECK(nns::drain_current(q, {v2, vds}) == doctest::Approx(i0 + i0 * q.lambda * vds).epsilon(1e-12));
    }
}

TEST_CASE("pipeline fixtures") {
    Eigen::MatrixXd one = Eigen::MatrixXd::Ones(1, 2);
    const nns::Dataset single(one, Eigen::MatrixXd::Ones(1, 1), "one");
    CHECK(nns::shuffle_paired(single, 5).permutation == std::vector<std::size_t>{0});
    CHECK_THROWS_AS(nns::split(single, 0.8, 0.0), std::invalid_argument);

    const nns::Dataset ten(Eigen::MatrixXd::Random(10, 2), Eigen::MatrixXd::Random(10, 1), "ten");
    const auto s = nns::split(ten, 0.8, 0.1);
    CHECK(s.train.size() == 8);
    CHECK(s.validation->size() == 1);
    CHECK(s.test.size() == 1);

    Eigen::MatrixXd col(3, 1);
    col << 1, 3, 5;
    const auto fs = nns::fit_feature_scale(col);
    CHECK(fs.min(0) == 1.0);
    CHECK(fs.max(0) == 5.0);
    const auto mapped = nns::apply_scale(fs, col);
    CHECK(mapped(0, 0) == -1.0);
    CHECK(mapped(1, 0) == 0.0);
    CHECK(mapped(2, 0) == 1.0);

    nns::ExperimentConfig cfg;
    cfg.function = "hump";
    cfg.seed = 6;
    cfg.seed_set = true;
    const auto a = nns::prepare_data(cfg, nns::generate_dataset(cfg));
    const auto b = nns::prepare_data(cfg, nns::generate_dataset(cfg));
    CHECK(a.train.inputs() == b.train.inputs());
    CHECK(a.raw.permutation == b.raw.permutation);
    CHECK(a.train.inputs().minCoeff() == -1.0);
    CHECK(a.train.inputs().maxCoeff() == 1.0);
    CHECK(a.train.targets().minCoeff() == -1.0);
    CHECK(a.train.targets().maxCoeff() == 1.0);
}

TEST_CASE("metric fixtures on networks") {
    Eigen::MatrixXd x(4, 1), y(4, 1);
    x << 1, 2, 3, 4;
    y << 2, 2, 2, 2;
    const nns::Dataset ds(x, y, "two");
    nns::ScaleParams sp;
    sp.inputs = nns::fit_feature_scale(x);
    sp.targets = nns::fit_feature_scale(y, {-1, 1, true});
    // Constant target scale maps every output to the constant itself, so use
    // an explicit unit scale for the zero-network case instead.
    sp.targets.min = Eigen::VectorXd::Constant(1, -1.0);
    sp.targets.max = Eigen::VectorXd::Constant(1, 1.0);
    sp.targets.constant = {false};
    nns::Network zero(nns::make_topology({1, 1}, Activation::linear, Activation::linear));
    const auto r = nns::evaluate_surrogate(zero, sp, ds);
    CHECK(r.e_percent == 100.0);
    CHECK(r.mse == 4.0);

    zero.biases(0)(0) = 2.0;
    const auto perfect = nns::evaluate_surrogate(zero, sp, ds);
    CHECK(perfect.e_percent == 0.0);
    CHECK(perfect.mse == 0.0);
}

TEST_CASE("experiment edge cases") {
    nns::ExperimentConfig cfg;
    cfg.function = "booth";
    cfg.seed = 1;
    cfg.seed_set = true;
    cfg.train_fraction = 1.0;
    CHECK_THROWS_AS(nns::run_experiment(cfg), nns::ExperimentError);

    const auto rows = nns::run_suite({}, "");
    CHECK(rows.empty());
    std::ostringstream os;
    nns::write_suite_table(os, rows);
    CHECK(os.str() == "function,error_percent,seconds\n");
}
