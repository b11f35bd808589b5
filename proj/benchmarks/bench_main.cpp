#include <benchmark/benchmark.h>

#include <random>

#include "dcdiff/angular_channels.hpp"
#include "dcdiff/propagator.hpp"
#include "dcdiff/radial_dirac.hpp"

using namespace dcdiff;

namespace {

std::vector<cplx> random_vector(std::size_t n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> d;
  std::vector<cplx> v(n);
  for (auto& x : v) x = {d(rng), d(rng)};
  return v;
}

void BM_CrankNicolsonStep(benchmark::State& state) {
  auto grid = std::make_shared<const RadialGrid>(static_cast<int>(state.range(0)), 4.6, 2.0);
  PhysicalParams p;
  p.Z = 0.4;
  const auto h = build_hamiltonian(ChannelIndex(-3, 1), p, grid);
  const CrankNicolson cn(h, 0.005);
  auto x = random_vector(h.dimension(), 1);
  std::vector<cplx> scratch(x.size());
  for (auto _ : state) {
    cn.step(x, scratch);
    benchmark::DoNotOptimize(x.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(x.size()));
}
BENCHMARK(BM_CrankNicolsonStep)->Arg(512)->Arg(2048)->Arg(8192);

void BM_CrankNicolsonStepPair(benchmark::State& state) {
  auto grid = std::make_shared<const RadialGrid>(static_cast<int>(state.range(0)), 4.6, 2.0);
  PhysicalParams p;
  p.Z = 0.4;
  const auto ha = build_hamiltonian(ChannelIndex(-3, 1), p, grid);
  const auto hb = build_hamiltonian(ChannelIndex(3, 1), p, grid);
  const CrankNicolson a(ha, 0.005);
  const CrankNicolson b(hb, 0.005);
  auto xa = random_vector(ha.dimension(), 2);
  auto xb = random_vector(hb.dimension(), 3);
  std::vector<cplx> sa(xa.size()), sb(xb.size());
  for (auto _ : state) {
    CrankNicolson::step_pair(a, xa, sa, b, xb, sb);
    benchmark::DoNotOptimize(xa.data());
    benchmark::DoNotOptimize(xb.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(2 * xa.size()));
}
BENCHMARK(BM_CrankNicolsonStepPair)->Arg(512)->Arg(2048)->Arg(8192);

void BM_Projection(benchmark::State& state) {
  const int k_max = static_cast<int>(state.range(0));
  const AngularGrid grid(2 * k_max);
  std::mt19937_64 rng(4);
  std::normal_distribution<double> d;
  std::vector<Spinor4> samples(grid.size());
  for (auto& s : samples) s = Spinor4(cplx(d(rng), d(rng)), cplx(d(rng), d(rng)), cplx(d(rng), d(rng)), cplx(d(rng), d(rng)));
  for (auto _ : state) benchmark::DoNotOptimize(project(samples, grid, k_max));
}
BENCHMARK(BM_Projection)->Arg(8)->Arg(16)->Arg(32);

void BM_InitialData(benchmark::State& state) {
  SourceSpec src;
  src.h = 0.1;
  const RadialGrid grid(512, 4.6, 2.0);
  for (auto _ : state) benchmark::DoNotOptimize(build_initial_data(src, grid, static_cast<int>(state.range(0))));
}
BENCHMARK(BM_InitialData)->Arg(36)->Arg(72);

}  // namespace
