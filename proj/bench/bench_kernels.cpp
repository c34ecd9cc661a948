// Serial reference path vs OpenMP kernels. Range argument 0 = serial, 1 = parallel.

#include <memory>
#include <vector>

#include <benchmark/benchmark.h>

#include "parasplit/analysis.hpp"
#include "parasplit/manufactured.hpp"
#include "parasplit/parareal.hpp"
#include "parasplit/region_scan.hpp"

using namespace parasplit;

namespace {

Execution mode(const benchmark::State& state) {
    return state.range(0) == 0 ? Execution::serial : Execution::parallel;
}

struct Setup {
    Mesh2D mesh{99};
    ManufacturedProblem problem = manufactured_problem(Preset::B);
    std::shared_ptr<const SemidiscreteProblem> sd =
        std::make_shared<const SemidiscreteProblem>(problem.problem, mesh);
    std::shared_ptr<const SplitOperator> split;
    SourceFunction source = [sd = sd](double t, std::span<double> out) { sd->source(t, out); };

    explicit Setup(int strips) {
        const auto pou = PartitionOfUnity::vertical_strips(mesh, {2, strips, 1.0 / 64});
        split = std::make_shared<const SplitOperator>(build_domain_decomposition(problem.problem.tensor, pou));
    }
};

void BM_StageSolve(benchmark::State& state) {
    const Setup setup(static_cast<int>(state.range(1)));
    const StageSolver solver(setup.split->terms[0], setup.split->blocks[0], 1.0 / 3200);
    std::vector<double> x(setup.mesh.size(), 1.0);
    for (auto _ : state) {
        solver.solve(x, mode(state));
        benchmark::DoNotOptimize(x.data());
    }
}
BENCHMARK(BM_StageSolve)->ArgsProduct({{0, 1}, {2, 8}})->Unit(benchmark::kMicrosecond);

void BM_SplittingStep(benchmark::State& state) {
    const Setup setup(static_cast<int>(state.range(1)));
    const SplittingPropagator p(SplittingScheme::douglas_rachford, setup.split, 1.0 / 3200, setup.source);
    std::vector<double> u(setup.mesh.size(), 1.0), out(u.size());
    for (auto _ : state) {
        p.step(u, 0.5, out, mode(state));
        benchmark::DoNotOptimize(out.data());
    }
}
BENCHMARK(BM_SplittingStep)->ArgsProduct({{0, 1}, {2, 8}})->Unit(benchmark::kMicrosecond);

void BM_PararealIteration(benchmark::State& state) {
    const Setup setup(2);
    const SplittingPropagator g(SplittingScheme::fractional_implicit_euler, setup.split, 1.0 / 16, setup.source);
    const SplittingPropagator f(SplittingScheme::fractional_implicit_euler, setup.split, 1.0 / 160, setup.source);
    const Parareal parareal(g, f, {1.0, 16, 10}, {mode(state), setup.mesh.h() * setup.mesh.h()});
    const auto initial = parareal.initial_guess(setup.sd->initial_vector());
    for (auto _ : state) {
        auto s = initial;
        parareal.iterate(s);
        benchmark::DoNotOptimize(s.U.back().data());
    }
}
BENCHMARK(BM_PararealIteration)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_RegionScan(benchmark::State& state) {
    for (auto _ : state) {
        const auto scan = scan_region(PropagatorPair::fie_dr, large_region(), 100, 100, 1000, 2, mode(state));
        benchmark::DoNotOptimize(scan.factor.data());
    }
}
BENCHMARK(BM_RegionScan)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

void BM_Certification(benchmark::State& state) {
    const std::vector<int> s{1, 20, 1000};
    for (auto _ : state) {
        const auto report = certify_bound(PropagatorPair::fie_fie, {2, 500, 1e-6, 1e6}, s, mode(state));
        benchmark::DoNotOptimize(report.max_factor);
    }
}
BENCHMARK(BM_Certification)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
