#include <benchmark/benchmark.h>

#include <vector>

#include "sysid/estimators.hpp"
#include "sysid/experiment.hpp"
#include "sysid/hankel.hpp"
#include "sysid/hokalman.hpp"
#include "sysid/lowrank.hpp"
#include "sysid/state_space.hpp"

namespace {
using namespace sysid;

// Reference synthetic setup: n = 5, d_u = 3, d_y = 2, tau = 6.
const StateSpaceSystem& bench_system() {
    static const StateSpaceSystem sys = random_system(5, 3, 2, RandomSeed{7});
    return sys;
}

void BM_SimulateTrajectory(benchmark::State& state) {
    const NoiseSpec noise{1.0, 0.1};
    const Eigen::Index length = state.range(0);
    for (auto _ : state) {
        benchmark::DoNotOptimize(
            simulate_trajectory(bench_system(), noise, length, RandomSeed{3}));
    }
    state.SetItemsProcessed(state.iterations() * length);
}
BENCHMARK(BM_SimulateTrajectory)->Arg(12)->Arg(1000);

void BM_TrueHankel(benchmark::State& state) {
    for (auto _ : state) {
        benchmark::DoNotOptimize(true_hankel(bench_system(), 6));
    }
}
BENCHMARK(BM_TrueHankel);

std::vector<Trajectory> bench_runs(Eigen::Index count) {
    std::vector<Trajectory> runs;
    runs.reserve(static_cast<std::size_t>(count));
    for (Eigen::Index i = 0; i < count; ++i) {
        runs.push_back(simulate_trajectory(bench_system(), NoiseSpec{1.0, 0.1}, 12,
                                           derive_seed(RandomSeed{11}, i)));
    }
    return runs;
}

void BM_LseMulti(benchmark::State& state) {
    const auto runs = bench_runs(state.range(0));
    const RegressionDesign design = build_multi_design(runs, 6);
    for (auto _ : state) {
        benchmark::DoNotOptimize(lse_multi(design));
    }
}
BENCHMARK(BM_LseMulti)->Arg(45)->Arg(909);

void BM_HardThreshold(benchmark::State& state) {
    const HankelMatrix h = lse_multi(build_multi_design(bench_runs(909), 6));
    for (auto _ : state) {
        benchmark::DoNotOptimize(hard_threshold(h.data, 0.06));
    }
}
BENCHMARK(BM_HardThreshold);

void BM_ThresholdedHoKalman(benchmark::State& state) {
    const HankelMatrix h = lse_multi(build_multi_design(bench_runs(909), 6));
    for (auto _ : state) {
        benchmark::DoNotOptimize(thresholded_ho_kalman(h, 0.06));
    }
}
BENCHMARK(BM_ThresholdedHoKalman);

void BM_RunTrial(benchmark::State& state) {
    ExperimentConfig config;  // defaults are the reference setup
    config.master_seed = 7;
    const ExperimentContext context = make_context(config);
    const long long T = state.range(0);
    int trial = 0;
    for (auto _ : state) {
        benchmark::DoNotOptimize(run_trial(context, T, trial++));
    }
    state.SetItemsProcessed(state.iterations() * T);
}
BENCHMARK(BM_RunTrial)->Arg(500)->Arg(10000);

}  // namespace
