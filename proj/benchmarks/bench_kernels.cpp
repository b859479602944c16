// Copyright (c) 2026 the blockquad authors
// SPDX-License-Identifier: Apache-2.0

#include <benchmark/benchmark.h>

#include <cstdint>
#include <deque>

#include "blockquad/generators.hpp"
#include "blockquad/lanczos.hpp"
#include "blockquad/operators.hpp"
#include "blockquad/quadrature.hpp"
#include "blockquad/stieltjes.hpp"

namespace {

using namespace blockquad;

DiffusionProblem make_desk(Index side) {
  DiffusionSpec spec;
  spec.nx = side;
  spec.ny = side;
  spec.n_opt = 8;
  spec.contrast = ContrastRect{side / 3, side / 3, 2 * side / 3, 2 * side / 3, 5.0};
  spec.transducers = {{0.25, 0.5}, {0.5, 0.5}, {0.75, 0.5}};
  return gen_diffusion2d(spec);
}

// One recurrence per (side, m), shared across the evaluation benchmarks.
struct Prepared {
  Index side = 0;
  Index m = 0;
  DiffusionProblem prob;
  BlockTridiagonal t;
  StieltjesParams params;
};

const Prepared& prepared(Index side, Index m) {
  static std::deque<Prepared> cache;  // reference stability under growth
  for (const Prepared& p : cache) {
    if (p.side == side && p.m == m) return p;
  }
  Prepared p;
  p.side = side;
  p.m = m;
  p.prob = make_desk(side);
  LanczosOptions opts;
  opts.m_max = m;
  opts.reorth = true;
  p.t = block_lanczos(p.prob.a, p.prob.b, opts).t;
  p.params = stieltjes_extract(p.t);
  cache.push_back(std::move(p));
  return cache.back();
}

void BM_SparseApply(benchmark::State& state) {
  const Index side = state.range(0);
  const DiffusionProblem prob = make_desk(side);
  Mat x = prob.b;
  Mat y = Mat::Zero(x.rows(), x.cols());
  for (auto _ : state) {
    prob.a.apply_into(x, y);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations() * prob.a.nnz());
}
BENCHMARK(BM_SparseApply)->Arg(30)->Arg(60)->Arg(120);

void BM_BlockLanczos(benchmark::State& state) {
  const Index side = 60;
  const Index m = state.range(0);
  const DiffusionProblem prob = make_desk(side);
  LanczosOptions opts;
  opts.m_max = m;
  opts.reorth = true;
  for (auto _ : state) {
    LanczosResult res = block_lanczos(prob.a, prob.b, opts);
    benchmark::DoNotOptimize(res.t.alpha.data());
  }
  state.SetComplexityN(m);
}
BENCHMARK(BM_BlockLanczos)->Arg(16)->Arg(64)->Arg(128)->Complexity();

void BM_StieltjesExtract(benchmark::State& state) {
  const Index m = state.range(0);
  const Prepared& p = prepared(60, m);
  for (auto _ : state) {
    StieltjesParams params = stieltjes_extract(p.t);
    benchmark::DoNotOptimize(params.gamma.data());
  }
}
BENCHMARK(BM_StieltjesExtract)->Arg(64)->Arg(128);

void BM_SFractionEval(benchmark::State& state) {
  const Index m = state.range(0);
  const Prepared& p = prepared(60, 128);
  for (auto _ : state) {
    Mat f = sfraction_eval(p.params, 1e-2, m, false);
    benchmark::DoNotOptimize(f.data());
  }
}
BENCHMARK(BM_SFractionEval)->Arg(16)->Arg(64)->Arg(128);

void BM_BlockTridiagSolve(benchmark::State& state) {
  const Index m = state.range(0);
  const Prepared& p = prepared(60, 128);
  const BlockTridiagonal head = p.t.prefix(m);
  const Mat rhs = first_block_rhs(head.dim(), head.p);
  for (auto _ : state) {
    Mat x = block_tridiag_solve<double>(head, 1e-2, rhs);
    benchmark::DoNotOptimize(x.data());
  }
}
BENCHMARK(BM_BlockTridiagSolve)->Arg(16)->Arg(64)->Arg(128);

void BM_NodesWeights(benchmark::State& state) {
  const Index m = state.range(0);
  const Prepared& p = prepared(60, 128);
  for (auto _ : state) {
    NodesWeights nw = nodes_weights(p.t, m);
    benchmark::DoNotOptimize(nw.nodes.data());
  }
}
BENCHMARK(BM_NodesWeights)->Arg(16)->Arg(64);

void BM_Diffusion2d(benchmark::State& state) {
  const Index side = state.range(0);
  for (auto _ : state) {
    DiffusionProblem prob = make_desk(side);
    benchmark::DoNotOptimize(prob.a.values.data());
  }
}
BENCHMARK(BM_Diffusion2d)->Arg(30)->Arg(60)->Arg(120);

}  // namespace

BENCHMARK_MAIN();
