#include "nns/benchfn.hpp"
#include "nns/experiment.hpp"
#include "nns/mlp.hpp"
#include "nns/trainer.hpp"

#include <benchmark/benchmark.h>

namespace {

nns::Network make_net(std::size_t width) {
    return nns::init_network(nns::make_topology({2, width, width, 1}), {nns::UniformRange{-0.5, 0.5}, 1});
}

nns::Dataset scaled_booth(std::size_t n) {
    nns::ExperimentConfig cfg;
    cfg.function = "booth";
    cfg.seed = 1;
    cfg.seed_set = true;
    cfg.samples = n;
    return nns::prepare_data(cfg, nns::generate_dataset(cfg)).train;
}

void BM_Forward(benchmark::State& state) {
    const auto net = make_net(static_cast<std::size_t>(state.range(0)));
    const Eigen::Vector2d x(0.3, -0.7);
    for (auto _ : state) benchmark::DoNotOptimize(nns::forward(net, x));
}
BENCHMARK(BM_Forward)->Arg(5)->Arg(10)->Arg(16);

void BM_Jacobian(benchmark::State& state) {
    const auto net = make_net(static_cast<std::size_t>(state.range(0)));
    const Eigen::Vector2d x(0.3, -0.7);
    for (auto _ : state) benchmark::DoNotOptimize(nns::jacobian(net, x));
}
BENCHMARK(BM_Jacobian)->Arg(5)->Arg(10)->Arg(16);

void BM_NormalEquations(benchmark::State& state) {
    const auto net = make_net(10);
    const auto train = scaled_booth(static_cast<std::size_t>(state.range(0)));
    for (auto _ : state) {
        benchmark::DoNotOptimize(nns::normal_equations(net, train.inputs(), train.targets()));
    }
}
BENCHMARK(BM_NormalEquations)->Arg(100)->Arg(500)->Unit(benchmark::kMicrosecond);

void BM_LmEpoch(benchmark::State& state) {
    const auto net = make_net(static_cast<std::size_t>(state.range(0)));
    const auto train = scaled_booth(500);
    for (auto _ : state) {
        benchmark::DoNotOptimize(nns::lm_step(net, train.inputs(), train.targets(), 1e-3));
    }
}
BENCHMARK(BM_LmEpoch)->Arg(5)->Arg(10)->Arg(16)->Unit(benchmark::kMicrosecond);

void BM_BoothSamples(benchmark::State& state) {
    const auto f = nns::find_function("booth");
    for (auto _ : state) {
        benchmark::DoNotOptimize(nns::domain_samples(f, {nns::RandomUniform{500}, 1}));
    }
}
BENCHMARK(BM_BoothSamples)->Unit(benchmark::kMicrosecond);

}  // namespace

BENCHMARK_MAIN();
