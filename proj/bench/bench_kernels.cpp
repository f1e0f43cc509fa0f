// Serial reference vs OpenMP kernels.
#include <benchmark/benchmark.h>

#include "rde/certify.hpp"
#include "rde/demos.hpp"
#include "rde/lqmc.hpp"
#include "rde/riccati.hpp"

namespace {

const rde::RiccatiSolution& solved() {
    static const rde::RiccatiSolution sol = [] {
        auto res = rde::quasilinearize(rde::demo_2d_rotation(rde::Rotation2dParams{}, 400), {});
        return std::get<rde::RiccatiSolution>(res);
    }();
    return sol;
}

void BM_paths(benchmark::State& state, rde::Execution exec) {
    const auto prob = rde::demo_2d_rotation(rde::Rotation2dParams{}, 400);
    rde::SimConfig cfg;
    cfg.n_paths = static_cast<int>(state.range(0));
    cfg.n_steps_sim = 400;
    cfg.seed = 1;
    cfg.x0 = {1.0, 1.0};
    for (auto _ : state) {
        benchmark::DoNotOptimize(rde::simulate_path_costs(prob, solved().gain, cfg, exec));
    }
}

void BM_alpha_scan(benchmark::State& state, rde::Execution exec) {
    const auto prob = rde::demo_2d_rotation(rde::Rotation2dParams{}, 400);
    for (auto _ : state) {
        benchmark::DoNotOptimize(rde::alpha_scan(prob, static_cast<int>(state.range(0)), exec));
    }
}

}  // namespace

BENCHMARK_CAPTURE(BM_paths, serial, rde::Execution::Serial)->Arg(2000);
BENCHMARK_CAPTURE(BM_paths, parallel, rde::Execution::Parallel)->Arg(2000);
BENCHMARK_CAPTURE(BM_alpha_scan, serial, rde::Execution::Serial)->Arg(64);
BENCHMARK_CAPTURE(BM_alpha_scan, parallel, rde::Execution::Parallel)->Arg(64);

BENCHMARK_MAIN();
