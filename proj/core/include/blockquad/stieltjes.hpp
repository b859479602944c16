// Copyright (c) 2026 the blockquad authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "blockquad/blocktridiag.hpp"

namespace blockquad {

// Matrix Stieltjes continued-fraction parameters recovered from a block
// tridiagonal matrix: all blocks are p x p, gamma/gamma_hat symmetric
// positive definite, kappa_hat the change-of-basis factors.  Entry i of
// each vector is the 1-based quantity i+1.
struct StieltjesParams {
  Index p = 0;
  std::vector<Mat> gamma;
  std::vector<Mat> gamma_inv;
  std::vector<Mat> gamma_hat;
  std::vector<Mat> kappa_hat;
  std::vector<Mat> kappa_hat_inv;

  Index steps() const { return static_cast<Index>(gamma.size()); }
};

// Three-term recurrence:
//   kappa_hat_1 = I, gamma_1^{-1} = alpha_1,
//   kappa_hat_i^{-1} = gamma_{i-1} kappa_hat_{i-1}^T beta_i^T,
//   gamma_i^{-1} = kappa_hat_i^T alpha_i kappa_hat_i - gamma_{i-1}^{-1},
//   gamma_hat_i = kappa_hat_i^T kappa_hat_i.
// Throws NotStieltjes(i) when a gamma_i^{-1} is not positive definite or a
// kappa_hat_i^{-1} is singular.  Extraction is prefix-stable: the first m
// entries depend only on the first m steps of T.
StieltjesParams stieltjes_extract(const BlockTridiagonal& t);

// Block tridiagonal with the last diagonal block replaced by
// alpha_tilde_m = kappa_hat_m^{-T} gamma_{m-1}^{-1} kappa_hat_m^{-1}
// (zero for m = 1), which pins p spectrum points at the origin.
struct RadauMatrix {
  BlockTridiagonal t;
};

RadauMatrix radau_matrix(const BlockTridiagonal& t,
                         const StieltjesParams& params, Index m);

// Evaluates the matrix S-fraction at real s > 0, bottom-up:
//   C = (s gamma_hat_i + (gamma_i + C)^{-1})^{-1},
// starting from C = 0 (standard rule, m floors) or C = (s gamma_hat_m)^{-1}
// (origin-pinned rule, m-1 further floors).  Every intermediate C must stay
// positive definite; violations raise NotStieltjes(i).  s <= 0 raises
// NonPositiveShift.
Mat sfraction_eval(const StieltjesParams& params, double s, Index m,
                   bool radau);

// Consistency residuals tying the recovered parameters back to T:
// the value at s = 0 against sum(gamma), and the origin residue of the
// pinned rule against inv(sum(gamma_hat)).  The residue limit is taken by
// two-point Richardson extrapolation at s = 1e-6 and 1e-7 (the raw s = 1e-6
// residual is reported alongside).
struct IdentityReport {
  double gauss_zero_rel = 0.0;
  double residue_raw_rel = 0.0;
  double residue_rel = 0.0;
};

IdentityReport check_identities(const BlockTridiagonal& t,
                                const StieltjesParams& params);

}  // namespace blockquad
