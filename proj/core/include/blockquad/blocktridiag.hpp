// Copyright (c) 2026 the blockquad authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <vector>

#include "blockquad/smallmat.hpp"

namespace blockquad {

// Symmetric block tridiagonal matrix with p x p blocks:
//   diagonal alpha_1..alpha_m, subdiagonal beta_2..beta_m.
// alpha[i] holds alpha_{i+1}; beta[i] holds beta_{i+2}, coupling block
// column i with block row i+1 (all 0-based vectors of 1-based quantities).
struct BlockTridiagonal {
  Index p = 0;
  std::vector<Mat> alpha;
  std::vector<Mat> beta;

  Index steps() const { return static_cast<Index>(alpha.size()); }
  Index dim() const { return steps() * p; }

  // First m steps (m <= steps()).
  BlockTridiagonal prefix(Index m) const;

  // Dense mp x mp assembly.
  Mat dense() const;

  // Shape and symmetry checks; throws DimensionMismatch / NonSymmetric.
  void validate() const;
};

// mp x p block unit matrix E_1 (identity in the first p rows).
Mat first_block_rhs(Index dim, Index p);

template <class Scalar>
using DenseBlock = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

// Solves (T + shift*I) X = rhs by block LDL-style forward elimination and
// back substitution in O(m p^3).  Pivot blocks are factored with partial
// pivoting; a pivot whose smallest |U_jj| falls below
// pivot_rel_tol * scale(T, shift) raises SingularShift.  Instantiated for
// double and std::complex<double>.
template <class Scalar>
DenseBlock<Scalar> block_tridiag_solve(const BlockTridiagonal& t, Scalar shift,
                                       const DenseBlock<Scalar>& rhs,
                                       double pivot_rel_tol = 1e-13);

}  // namespace blockquad
