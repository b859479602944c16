// Copyright (c) 2026 the blockquad authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <vector>

#include "blockquad/smallmat.hpp"

namespace blockquad {

// Symmetric n x n operator applied to n x p blocks.
struct BlockOperator {
  virtual ~BlockOperator() = default;
  virtual Index rows() const = 0;
  // y = A x; y is resized.  x must have rows() rows.
  virtual void apply_into(const Mat& x, Mat& y) const = 0;

  Mat apply(const Mat& x) const {
    Mat y;
    apply_into(x, y);
    return y;
  }
};

struct Triplet {
  Index r;
  Index c;
  double v;
};

// Compressed sparse row storage of a symmetric matrix (both triangles
// stored).  Row-major accumulation keeps apply() deterministic.
struct SparseSym final : BlockOperator {
  Index n = 0;
  std::vector<Index> row_ptr;   // size n+1
  std::vector<Index> col_idx;   // size nnz
  std::vector<double> values;   // size nnz

  // Sorts by (row, col), sums duplicates, verifies value symmetry to
  // sym_tol relative.  Throws NonSymmetric / DimensionMismatch.
  static SparseSym from_triplets(Index n, std::vector<Triplet> entries,
                                 double sym_tol = 1e-12);

  Index rows() const override { return n; }
  void apply_into(const Mat& x, Mat& y) const override;

  Index nnz() const { return static_cast<Index>(values.size()); }
  double max_abs() const;
  Mat dense() const;
};

// Diagonal matrix as SparseSym.
SparseSym diagonal_matrix(const Vec& d);

// Power-iteration estimate of ||A||_2 on a fixed seeded start vector;
// deterministic for a given operator.
double norm_est(const BlockOperator& a, int iters = 40);

}  // namespace blockquad
