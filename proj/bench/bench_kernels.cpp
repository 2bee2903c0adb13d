#include "vtel/stats.hpp"
#include "vtel/telegraph_continuous.hpp"
#include "vtel/telegraph_discrete.hpp"
#include "vtel/walks.hpp"

#include <benchmark/benchmark.h>

#include <cmath>

using namespace vtel;

namespace {

const ModelParams P = params_from_betas(1, 2, 64);
const BoundaryData DW = BoundaryData::domain_wall(64, 64);
const std::vector<LatticePoint> PTS{{16, 32}, {32, 64}, {63, 64}};

void BM_sample_heights(benchmark::State& st) {
    for (auto _ : st) benchmark::DoNotOptimize(sample_heights(P, DW, 64, 64, PTS, 2048, 1));
}
void BM_sample_heights_serial(benchmark::State& st) {
    for (auto _ : st) benchmark::DoNotOptimize(sample_heights_serial(P, DW, 64, 64, PTS, 2048, 1));
}

DiscreteProblem discrete(int n) {
    DiscreteProblem d;
    d.b1 = 0.7;
    d.b2 = 0.4;
    d.X = d.Y = n;
    for (int x = 0; x <= n; ++x) d.chi.push_back(std::sin(0.1 * x));
    for (int y = 0; y <= n; ++y) d.psi.push_back(0.01 * y);
    d.u = Field2D(n, n);
    for (size_t k = 0; k < d.u.v.size(); ++k) d.u.v[k] = std::cos(0.01 * double(k));
    return d;
}

void BM_solve_riemann(benchmark::State& st) {
    DiscreteProblem d = discrete(int(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(solve_riemann(d));
}
void BM_solve_riemann_serial(benchmark::State& st) {
    DiscreteProblem d = discrete(int(st.range(0)));
    for (auto _ : st) benchmark::DoNotOptimize(solve_riemann_serial(d));
}

ContinuousProblem continuous() {
    ContinuousProblem c;
    c.chi = [](double x) { return std::sin(3 * x); };
    c.psi = [](double y) { return y * y; };
    c.u = [](double x, double y) { return x - 2 * y; };
    return c;
}

void BM_solve_quadrature(benchmark::State& st) {
    ContinuousProblem c = continuous();
    for (auto _ : st) benchmark::DoNotOptimize(solve_quadrature(c, int(st.range(0)), int(st.range(0))));
}
void BM_solve_quadrature_serial(benchmark::State& st) {
    ContinuousProblem c = continuous();
    for (auto _ : st) benchmark::DoNotOptimize(solve_quadrature_serial(c, int(st.range(0)), int(st.range(0))));
}

void BM_fk_discrete(benchmark::State& st) {
    DiscreteProblem d = discrete(32);
    for (auto _ : st) benchmark::DoNotOptimize(fk_discrete(d, 32, 32, 4096, 1));
}
void BM_fk_discrete_serial(benchmark::State& st) {
    DiscreteProblem d = discrete(32);
    for (auto _ : st) benchmark::DoNotOptimize(fk_discrete_serial(d, 32, 32, 4096, 1));
}

}  // namespace

BENCHMARK(BM_sample_heights)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_sample_heights_serial)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_solve_riemann)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_solve_riemann_serial)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_solve_quadrature)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_solve_quadrature_serial)->Arg(32)->Arg(64)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_fk_discrete)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_fk_discrete_serial)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
