// Copyright (c) 2026 the blockquad authors
// SPDX-License-Identifier: Apache-2.0

#include "blockquad/blocktridiag.hpp"

#include <Eigen/LU>
#include <algorithm>
#include <cmath>
#include <complex>

namespace blockquad {

BlockTridiagonal BlockTridiagonal::prefix(Index m) const {
  if (m < 0 || m > steps()) {
    throw DimensionMismatch("prefix: step count out of range");
  }
  BlockTridiagonal out;
  out.p = p;
  out.alpha.assign(alpha.begin(), alpha.begin() + m);
  if (m > 0) {
    out.beta.assign(beta.begin(), beta.begin() + (m - 1));
  }
  return out;
}

Mat BlockTridiagonal::dense() const {
  const Index m = steps();
  Mat t = Mat::Zero(m * p, m * p);
  for (Index i = 0; i < m; ++i) {
    t.block(i * p, i * p, p, p) = alpha[static_cast<std::size_t>(i)];
    if (i + 1 < m) {
      const Mat& b = beta[static_cast<std::size_t>(i)];
      t.block((i + 1) * p, i * p, p, p) = b;
      t.block(i * p, (i + 1) * p, p, p) = b.transpose();
    }
  }
  return t;
}

void BlockTridiagonal::validate() const {
  if (steps() > 0 && static_cast<Index>(beta.size()) != steps() - 1) {
    throw DimensionMismatch("block tridiagonal: need one fewer beta than alpha");
  }
  for (const Mat& a : alpha) {
    if (a.rows() != p || a.cols() != p) {
      throw DimensionMismatch("block tridiagonal: alpha block shape");
    }
    require_symmetric(a, 1e-10);
  }
  for (const Mat& b : beta) {
    if (b.rows() != p || b.cols() != p) {
      throw DimensionMismatch("block tridiagonal: beta block shape");
    }
  }
}

Mat first_block_rhs(Index dim, Index p) {
  Mat e = Mat::Zero(dim, p);
  e.topRows(p) = Mat::Identity(p, p);
  return e;
}

namespace {

// Magnitude scale of T + shift*I used for the singular-pivot threshold.
double pivot_scale(const BlockTridiagonal& t, double shift_mag) {
  double scale = shift_mag;
  for (const Mat& a : t.alpha) {
    if (a.size()) scale = std::max(scale, a.cwiseAbs().maxCoeff());
  }
  for (const Mat& b : t.beta) {
    if (b.size()) scale = std::max(scale, b.cwiseAbs().maxCoeff());
  }
  return std::max(scale, 1e-300);
}

template <class Scalar>
struct PivotLu {
  Eigen::PartialPivLU<DenseBlock<Scalar>> lu;

  PivotLu(const DenseBlock<Scalar>& d, double tol_abs) : lu(d) {
    const auto diag = lu.matrixLU().diagonal();
    for (Index j = 0; j < diag.size(); ++j) {
      if (std::abs(diag(j)) <= tol_abs) {
        throw SingularShift("singular pivot block in shifted solve");
      }
    }
  }
};

}  // namespace

template <class Scalar>
DenseBlock<Scalar> block_tridiag_solve(const BlockTridiagonal& t, Scalar shift,
                                       const DenseBlock<Scalar>& rhs,
                                       double pivot_rel_tol) {
  const Index m = t.steps();
  const Index p = t.p;
  if (m == 0) {
    throw DimensionMismatch("block_tridiag_solve: empty matrix");
  }
  if (rhs.rows() != m * p) {
    throw DimensionMismatch("block_tridiag_solve: rhs row count");
  }
  using M = DenseBlock<Scalar>;
  const Index k = rhs.cols();
  const double tol_abs = pivot_rel_tol * pivot_scale(t, std::abs(shift));
  const M eye = M::Identity(p, p);

  // Forward sweep: D_i = (alpha_i + shift) - beta_i D_{i-1}^{-1} beta_i^T,
  // y_i = rhs_i - beta_i D_{i-1}^{-1} y_{i-1}.
  std::vector<M> dinv_bt;  // D_{i-1}^{-1} beta_i^T, for back substitution
  dinv_bt.reserve(static_cast<std::size_t>(m) - 1);
  std::vector<M> y(static_cast<std::size_t>(m));
  std::vector<PivotLu<Scalar>> lus;
  lus.reserve(static_cast<std::size_t>(m));

  M d = t.alpha[0].template cast<Scalar>() + shift * eye;
  lus.emplace_back(d, tol_abs);
  y[0] = rhs.topRows(p);
  for (Index i = 1; i < m; ++i) {
    const M bi = t.beta[static_cast<std::size_t>(i - 1)].template cast<Scalar>();
    const M solved_bt = lus.back().lu.solve(bi.transpose().eval());
    dinv_bt.push_back(solved_bt);
    d = t.alpha[static_cast<std::size_t>(i)].template cast<Scalar>() +
        shift * eye - bi * solved_bt;
    y[static_cast<std::size_t>(i)] =
        rhs.middleRows(i * p, p) -
        bi * lus.back().lu.solve(y[static_cast<std::size_t>(i - 1)]);
    lus.emplace_back(d, tol_abs);
  }

  // Back substitution: x_m = D_m^{-1} y_m,
  // x_i = D_i^{-1} y_i - (D_i^{-1} beta_{i+1}^T) x_{i+1}.
  M x(m * p, k);
  x.bottomRows(p) = lus.back().lu.solve(y[static_cast<std::size_t>(m - 1)]);
  for (Index i = m - 2; i >= 0; --i) {
    x.middleRows(i * p, p) =
        lus[static_cast<std::size_t>(i)].lu.solve(
            y[static_cast<std::size_t>(i)]) -
        dinv_bt[static_cast<std::size_t>(i)] * x.middleRows((i + 1) * p, p);
  }
  return x;
}

template DenseBlock<double> block_tridiag_solve<double>(
    const BlockTridiagonal&, double, const DenseBlock<double>&, double);
template DenseBlock<std::complex<double>> block_tridiag_solve<std::complex<double>>(
    const BlockTridiagonal&, std::complex<double>,
    const DenseBlock<std::complex<double>>&, double);

}  // namespace blockquad
