#include "ngi/concentration.hpp"
#include "ngi/mdp.hpp"
#include "ngi/simulator.hpp"

#include <benchmark/benchmark.h>

#include <vector>

using namespace ngi;

namespace {

// alpha = 0.4 at truncation 60, about 30k states.
const mdp::CompiledMdp& compiled()
{
    static const mdp::CompiledMdp c = [] {
        ProtocolParams p;
        p.alpha = 0.4;
        return mdp::compile(mdp::build_transitions(p, 60), RewardWeights::equal());
    }();
    return c;
}

template <bool Parallel>
void BM_bellman_sweep(benchmark::State& state)
{
    const auto& m = compiled();
    std::vector<double> h(m.state_count(), 0.0);
    std::vector<double> diff(m.state_count());
    for (auto _ : state) {
        const auto b = Parallel ? mdp::bellman_sweep(m, 0.6, h, diff) : mdp::bellman_sweep_serial(m, 0.6, h, diff);
        benchmark::DoNotOptimize(b);
    }
    state.SetItemsProcessed(state.iterations() * static_cast<std::int64_t>(m.state_count()));
}

template <bool Parallel>
void BM_pair_deviation(benchmark::State& state)
{
    for (auto _ : state) {
        const auto e = Parallel ? concentration::empirical_pair_deviation(0.3, 10000, 0.1, 2000, 1)
                                : concentration::empirical_pair_deviation_serial(0.3, 10000, 0.1, 2000, 1);
        benchmark::DoNotOptimize(e);
    }
}

std::vector<sim::SimConfig> sweep_configs()
{
    std::vector<sim::SimConfig> out;
    for (double rho : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        sim::SimConfig c;
        c.params.alpha = 0.3;
        c.params.split_ratio = 0.2;
        c.strategy = sim::Inclusion{rho};
        c.horizon_keyblocks = 100'000;
        out.push_back(c);
    }
    return out;
}

template <bool Parallel>
void BM_sim_sweep(benchmark::State& state)
{
    const auto configs = sweep_configs();
    for (auto _ : state) {
        auto r = Parallel ? sim::sweep(configs) : sim::sweep_serial(configs);
        benchmark::DoNotOptimize(r);
    }
}

}  // namespace

BENCHMARK(BM_bellman_sweep<false>)->Name("bellman_sweep/serial");
BENCHMARK(BM_bellman_sweep<true>)->Name("bellman_sweep/openmp");
BENCHMARK(BM_pair_deviation<false>)->Name("pair_deviation/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_pair_deviation<true>)->Name("pair_deviation/openmp")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_sim_sweep<false>)->Name("sim_sweep/serial")->Unit(benchmark::kMillisecond);
BENCHMARK(BM_sim_sweep<true>)->Name("sim_sweep/openmp")->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
