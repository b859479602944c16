// Copyright (c) 2026 the blockquad authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "blockquad/operators.hpp"

namespace blockquad {

// Deterministic scalar stream: mt19937_64 with explicit 53-bit uniforms and
// Box-Muller normals (standard-library distributions are not pinned across
// implementations).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // Uniform on [0, 1).
  double uniform() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  double normal();

  std::uint64_t raw() { return gen_(); }

 private:
  std::mt19937_64 gen_;
  bool have_spare_ = false;
  double spare_ = 0.0;
};

// Axis-aligned constant-value rectangle in interior index coordinates
// (inclusive bounds).
struct ContrastRect {
  Index x0 = 0, y0 = 0, x1 = 0, y1 = 0;
  double value = 1.0;
};

// 2D diffusion problem on an interior unit-step grid of nx x ny nodes,
// extended on every side by n_opt geometrically graded exterior nodes
// (ratio exp(pi/sqrt(n_opt)), first exterior step equal to the interior
// step, Dirichlet wall one further step out).  The operator is the
// mass-symmetrized 5-point Laplacian scaled by sigma^{-1/2} on both sides.
struct DiffusionSpec {
  Index nx = 1;
  Index ny = 1;
  Index n_opt = 0;
  double sigma_bg = 1.0;
  std::optional<ContrastRect> contrast;
  // Fractional interior positions in [0,1]^2; each becomes a unit-vector
  // column of B at the nearest interior node.
  std::vector<std::array<double, 2>> transducers;
};

struct DiffusionProblem {
  SparseSym a;
  Mat b;
  Index grid_nx = 0;  // free nodes per direction, nx + 2*n_opt
  Index grid_ny = 0;
  std::vector<Index> transducer_nodes;
};

DiffusionProblem gen_diffusion2d(const DiffusionSpec& spec);

// Gap list of the graded 1D grid: 1-based distances between consecutive
// free nodes plus the two closing gaps to the Dirichlet walls
// (size n_interior + 2*n_opt + 1).  Exposed for inspection.
std::vector<double> optimal_grid_steps(Index n_interior, Index n_opt);

// Normalized graph Laplacian I - D^{-1/2} W D^{-1/2} from an undirected
// edge list; self-loops dropped, duplicate edges merged, isolated vertices
// get a zero row.  Vertex count is max index + 1.  Throws EmptyGraph when
// no edge survives filtering.
SparseSym gen_graph_laplacian(
    const std::vector<std::pair<Index, Index>>& edges);

// Appends p_prime Gaussian columns to an orthonormal block and re-runs thin
// QR; the original columns come back unchanged in the leading positions.
// Redraws (up to 3 times) if the widened block is numerically rank
// deficient.  p_prime == 0 returns b unchanged.
Mat enrich_block(const Mat& b, Index p_prime, std::uint64_t seed);

}  // namespace blockquad
