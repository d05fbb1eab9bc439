#include "cvteleport/cvteleport.hpp"

#include <benchmark/benchmark.h>

namespace {

using cvt::GaussianState;
using cvt::ProtocolVariant;
using cvt::ResourceParams;

ResourceParams tmss_params(double r) {
    return std::get<ResourceParams>(cvt::make_tmss(r).resource);
}

void BM_DensityAt(benchmark::State& state) {
    const auto s = cvt::coherent_state({0.3, -0.2});
    Eigen::VectorXd pt(2);
    pt << 0.7, 0.1;
    for (auto _ : state) {
        benchmark::DoNotOptimize(cvt::density_at(s, pt));
    }
}
BENCHMARK(BM_DensityAt);

void BM_Overlap(benchmark::State& state) {
    const auto a = cvt::coherent_state();
    const auto b = cvt::coherent_state({1.0, -1.0});
    for (auto _ : state) {
        benchmark::DoNotOptimize(cvt::overlap(a, b));
    }
}
BENCHMARK(BM_Overlap);

void BM_RealizabilityCheck(benchmark::State& state) {
    const auto params = tmss_params(1.5);
    for (auto _ : state) {
        benchmark::DoNotOptimize(cvt::check(params));
    }
}
BENCHMARK(BM_RealizabilityCheck);

void BM_ConditionalOutput(benchmark::State& state) {
    const auto input = cvt::coherent_state({0.5, 0.5});
    const auto params = tmss_params(1.0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            cvt::conditional_output(input, params, {0.2, -0.4}, ProtocolVariant::Standard));
    }
}
BENCHMARK(BM_ConditionalOutput);

void BM_PipelineFidelity(benchmark::State& state) {
    const auto input = cvt::coherent_state();
    const auto params = tmss_params(1.0);
    for (auto _ : state) {
        const auto out = cvt::averaged_output(input, params, ProtocolVariant::Standard);
        benchmark::DoNotOptimize(cvt::fidelity(input, out));
    }
}
BENCHMARK(BM_PipelineFidelity);

void BM_McRunProtocol(benchmark::State& state) {
    const auto input = cvt::coherent_state();
    const auto params = tmss_params(1.0);
    const auto samples = static_cast<std::int64_t>(state.range(0));
    for (auto _ : state) {
        benchmark::DoNotOptimize(cvt::mc::run_protocol(input, params, ProtocolVariant::Standard,
                                                       {42u, samples, 8}));
    }
    state.SetItemsProcessed(state.iterations() * samples);
}
BENCHMARK(BM_McRunProtocol)->Arg(10000)->Arg(100000)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
