#include "g2cal/boundary.hpp"
#include "g2cal/cy_hodge.hpp"
#include "g2cal/dirac.hpp"

#include <benchmark/benchmark.h>

#include <random>

using namespace g2cal;

static void BM_Cross(benchmark::State& state) {
  std::mt19937 rng(1);
  std::normal_distribution<double> g;
  Vec7 u, v;
  for (int i = 0; i < 7; ++i) {
    u[i] = g(rng);
    v[i] = g(rng);
  }
  for (auto _ : state) {
    benchmark::DoNotOptimize(u = cross(u, v).normalized());
  }
}
BENCHMARK(BM_Cross);

static void BM_Associator(benchmark::State& state) {
  const Vec7 u = basisVector(0) + basisVector(4), v = basisVector(1) - basisVector(5), w = basisVector(3);
  for (auto _ : state) benchmark::DoNotOptimize(chi(u, v, w));
}
BENCHMARK(BM_Associator);

static void BM_BuildBall(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(buildBallMesh(roundShape(1.0), static_cast<int>(state.range(0)), "round"));
}
BENCHMARK(BM_BuildBall)->DenseRange(1, 3)->Unit(benchmark::kMillisecond);

static void BM_AssembleTorus(benchmark::State& state) {
  const Domain d = buildTorusGrid(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(assembleD(d));
}
BENCHMARK(BM_AssembleTorus)->Arg(8)->Arg(16)->Unit(benchmark::kMillisecond);

static void BM_AssembleBall(benchmark::State& state) {
  const Domain d = buildBallMesh(roundShape(1.0), static_cast<int>(state.range(0)), "round");
  for (auto _ : state) benchmark::DoNotOptimize(assembleD(d));
}
BENCHMARK(BM_AssembleBall)->DenseRange(1, 3)->Unit(benchmark::kMillisecond);

static void BM_ApplyD(benchmark::State& state) {
  const Domain d = buildBallMesh(roundShape(1.0), 3, "round");
  const AssembledOperator op = assembleD(d);
  const NormalField psi = smoothRandomField(d, 1);
  for (auto _ : state) benchmark::DoNotOptimize(applyD(op, psi));
  state.SetItemsProcessed(state.iterations() * d.nodeCount());
}
BENCHMARK(BM_ApplyD)->Unit(benchmark::kMicrosecond);

static void BM_TorusKernel(benchmark::State& state) {
  const Domain d = buildTorusGrid(static_cast<int>(state.range(0)));
  const AssembledOperator op = assembleD(d);
  for (auto _ : state) benchmark::DoNotOptimize(kernelDim(op, nullptr));
}
BENCHMARK(BM_TorusKernel)->Arg(6)->Arg(8)->Unit(benchmark::kMillisecond);

static void BM_BallKernelMu(benchmark::State& state) {
  const Domain d = buildBallMesh(roundShape(1.0), static_cast<int>(state.range(0)), "round");
  const AssembledOperator op = assembleD(d);
  const BoundaryBundles b = decomposeBoundaryBundles(d, basisVector(3));
  const BoundaryCondition bc = makeBoundaryCondition(d, b, BundleKind::MuX);
  for (auto _ : state) benchmark::DoNotOptimize(kernelDim(op, &bc));
}
BENCHMARK(BM_BallKernelMu)->Arg(1)->Arg(2)->Unit(benchmark::kMillisecond)->Iterations(1);

static void BM_AssembleDL(benchmark::State& state) {
  const Domain d = buildBallMesh(roundShape(1.0), 3, "round");
  const BoundaryBundles b = decomposeBoundaryBundles(d, basisVector(3));
  for (auto _ : state) benchmark::DoNotOptimize(assembleDL(*d.boundary, b, BundleKind::MuX));
}
BENCHMARK(BM_AssembleDL)->Unit(benchmark::kMillisecond);

static void BM_ChernNumber(benchmark::State& state) {
  const Domain d = buildBallMesh(roundShape(1.0), 3, "round");
  const BoundaryBundles b = decomposeBoundaryBundles(d, basisVector(3));
  for (auto _ : state) benchmark::DoNotOptimize(chernNumber(*d.boundary, b.mu));
}
BENCHMARK(BM_ChernNumber)->Unit(benchmark::kMicrosecond);

static void BM_CubicalTorusDec(benchmark::State& state) {
  for (auto _ : state) benchmark::DoNotOptimize(buildCubicalTorus(static_cast<int>(state.range(0))));
}
BENCHMARK(BM_CubicalTorusDec)->Arg(4)->Arg(8)->Unit(benchmark::kMillisecond);

static void BM_DveeKernel(benchmark::State& state) {
  const DECComplex dec = buildCubicalTorus(static_cast<int>(state.range(0)));
  for (auto _ : state) benchmark::DoNotOptimize(cyKernelDim(dec));
}
BENCHMARK(BM_DveeKernel)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);
BENCHMARK_MAIN();
