// Copyright (c) 2026 the blockquad authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <optional>

#include "blockquad/blocktridiag.hpp"
#include "blockquad/operators.hpp"

namespace blockquad {

struct LanczosOptions {
  Index m_max = 1;
  // Full two-pass classical Gram-Schmidt against the stored basis after
  // every three-term update.  Implies keep_basis.
  bool reorth = false;
  bool keep_basis = false;
  // Deflation threshold for the in-loop QR; non-positive means
  // 1e-12 * norm_est(A).
  double deflation_tol = -1.0;
};

struct LanczosResult {
  BlockTridiagonal t;
  // Set when the iteration stopped early; the step (1-based) whose QR met a
  // dependent column.  t then holds the completed prefix.
  std::optional<Index> breakdown_step;
  // n x (steps*p), only when keep_basis/reorth.
  Mat basis;
  // W after the last completed step, i.e. Q_{m+1} beta_{m+1}.
  Mat next_residual;
  // R factor from orthonormalizing the input block (identity when the
  // input was already orthonormal).
  Mat b_r;
  double op_norm_est = 0.0;

  Index steps() const { return t.steps(); }
};

// Block Lanczos for a symmetric operator.  The input block is
// orthonormalized first when needed; alpha blocks are symmetrized; beta
// blocks are upper triangular with nonnegative diagonal.  Requested steps
// beyond floor(n/p) are clamped.  Breakdown is reported, not thrown,
// except at step 1 (rank-deficient input), which also reports through
// breakdown_step with an empty prefix.
LanczosResult block_lanczos(const BlockOperator& a, const Mat& b,
                            const LanczosOptions& opts);

}  // namespace blockquad
