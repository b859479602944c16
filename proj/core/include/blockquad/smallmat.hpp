// Copyright (c) 2026 the blockquad authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <Eigen/Dense>
#include <complex>
#include <functional>

#include "blockquad/errors.hpp"

namespace blockquad {

using Mat = Eigen::MatrixXd;
using CMat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXd;
using Index = Eigen::Index;

// Thin QR of an n x p block (n >= p).  R is upper triangular with
// nonnegative diagonal; Q has orthonormal columns and Q*R reproduces the
// input.  Signs are pinned so the factorization is unique for full-rank
// input.
struct QrResult {
  Mat q;
  Mat r;
};

// Throws DimensionMismatch if n < p; throws RankDeficient(j) if
// |R(j,j)| <= rank_tol.
QrResult qr_thin(const Mat& w, double rank_tol = 0.0);

// Symmetric eigendecomposition, eigenvalues ascending.  Each eigenvector is
// sign-pinned: its first component larger than 1e-12 * max|entry| is made
// nonnegative.  Throws NonSymmetric when max|M - M^T| > tol * max|M|.
struct EigResult {
  Vec values;
  Mat vectors;
};

EigResult sym_eig(const Mat& m, double sym_tol = 1e-12);

// f applied to the spectrum: Q f(Lambda) Q^T, symmetrized.
Mat spd_fn(const Mat& m, const std::function<double(double)>& f);

// Matrix logarithm / exponential / inverse through the spectrum.  spd_log
// and spd_inverse throw NotPositiveDefinite when an eigenvalue is below
// 1e-14 times the largest one.
Mat spd_log(const Mat& m);
Mat spd_exp(const Mat& m);
Mat spd_inverse(const Mat& m);

// Largest singular value (0 for empty matrices).
template <class Derived>
double norm2(const Eigen::MatrixBase<Derived>& m) {
  if (m.size() == 0) return 0.0;
  using Plain = typename Derived::PlainObject;
  return Eigen::JacobiSVD<Plain>(m.eval()).singularValues()(0);
}

// True iff min eig(G1 - G2) >= -tol * max(1, ||G1||_2, ||G2||_2).
bool loewner_geq(const Mat& g1, const Mat& g2, double tol);

// Throws NonSymmetric unless max|M - M^T| <= tol * max(|M|, tiny).
void require_symmetric(const Mat& m, double tol = 1e-12);

inline Mat symmetrize(const Mat& m) { return 0.5 * (m + m.transpose()); }

}  // namespace blockquad
