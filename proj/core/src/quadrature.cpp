// Copyright (c) 2026 the blockquad authors
// SPDX-License-Identifier: Apache-2.0

#include "blockquad/quadrature.hpp"

#include <Eigen/Cholesky>
#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>
#include <Eigen/SparseLU>
#include <cassert>
#include <cmath>

namespace blockquad {

PhiSpec PhiSpec::resolvent(std::complex<double> s) {
  if (s.real() <= 0.0 && s.imag() == 0.0) {
    throw InvalidSpec("resolvent shift needs Re(s) > 0 or Im(s) != 0");
  }
  PhiSpec phi;
  phi.kind = Kind::resolvent;
  phi.s = s;
  return phi;
}

PhiSpec PhiSpec::exponential(double t) {
  if (t <= 0.0) throw InvalidSpec("exponential time must be positive");
  PhiSpec phi;
  phi.kind = Kind::exponential;
  phi.t = t;
  return phi;
}

namespace {

// E_1^T exp(-t T) E_1 through the dense spectrum of the prefix.
Mat exp_top_block(const BlockTridiagonal& t, double time) {
  const Index p = t.p;
  EigResult eig = sym_eig(t.dense());
  const Mat g = eig.vectors.topRows(p);  // E_1^T Z
  Vec w = (-time * eig.values.array()).exp();
  return symmetrize(g * w.asDiagonal() * g.transpose());
}

}  // namespace

Mat eval_gauss(const BlockTridiagonal& t, Index m, const PhiSpec& phi) {
  if (!phi.is_real()) {
    throw InvalidSpec("eval_gauss: complex shift needs the complex path");
  }
  if (m < 1 || m > t.steps()) {
    throw DimensionMismatch("eval_gauss: step count out of range");
  }
  const BlockTridiagonal tm = t.prefix(m);
  if (phi.kind == PhiSpec::Kind::exponential) {
    return exp_top_block(tm, phi.t);
  }
  const Mat e1 = first_block_rhs(m * t.p, t.p);
  return symmetrize(
      block_tridiag_solve<double>(tm, phi.s.real(), e1).topRows(t.p));
}

CMat eval_gauss_complex(const BlockTridiagonal& t, Index m,
                        std::complex<double> s) {
  if (m < 1 || m > t.steps()) {
    throw DimensionMismatch("eval_gauss: step count out of range");
  }
  const BlockTridiagonal tm = t.prefix(m);
  const CMat e1 = first_block_rhs(m * t.p, t.p).cast<std::complex<double>>();
  CMat f = block_tridiag_solve<std::complex<double>>(tm, s, e1).topRows(t.p);
  return 0.5 * (f + f.transpose().eval());  // complex symmetric
}

Mat eval_radau(const RadauMatrix& rt, const PhiSpec& phi) {
  return eval_gauss(rt.t, rt.t.steps(), phi);
}

CMat eval_radau_complex(const RadauMatrix& rt, std::complex<double> s) {
  return eval_gauss_complex(rt.t, rt.t.steps(), s);
}

NodesWeights nodes_weights(const BlockTridiagonal& t, Index m) {
  if (m < 1 || m > t.steps()) {
    throw DimensionMismatch("nodes_weights: step count out of range");
  }
  const Index p = t.p;
  EigResult eig = sym_eig(t.prefix(m).dense());
  NodesWeights out;
  out.nodes = eig.values;
  out.weights.reserve(static_cast<std::size_t>(eig.values.size()));
  for (Index i = 0; i < eig.values.size(); ++i) {
    const Vec top = eig.vectors.col(i).head(p);
    out.weights.push_back(top * top.transpose());
  }
  return out;
}

NodesWeights nodes_weights(const RadauMatrix& rt) {
  return nodes_weights(rt.t, rt.t.steps());
}

ExtrapolationSet extrapolate(const Mat& gauss, const Mat& radau) {
  ExtrapolationSet out;
  out.hat = symmetrize(0.5 * (gauss + radau));
  try {
    const Mat bar =
        spd_inverse(0.5 * (spd_inverse(gauss) + spd_inverse(radau)));
    out.bar = bar;
    out.check = spd_exp(0.5 * (spd_log(bar) + spd_log(out.hat)));
  } catch (const NotPositiveDefinite&) {
    out.bar.reset();
    out.check.reset();
  }
  return out;
}

QuadratureSet two_sided(const BlockTridiagonal& t, const RadauMatrix& rt,
                        const PhiSpec& phi, Index leading) {
  const Index m = rt.t.steps() - 1;
  if (m < 1) throw DimensionMismatch("two_sided: need at least two steps");
  if (t.steps() < m) {
    throw DimensionMismatch("two_sided: prefix shorter than pinned matrix");
  }
  Mat gauss = eval_gauss(t, m, phi);
  Mat radau = eval_radau(rt, phi);
  if (leading > 0) {
    if (leading > t.p) throw DimensionMismatch("two_sided: leading block size");
    gauss = Mat(gauss.topLeftCorner(leading, leading));
    radau = Mat(radau.topLeftCorner(leading, leading));
  }
  QuadratureSet out;
  out.m = m;
  out.gauss = gauss;
  out.radau = radau;
  out.bound = norm2(radau - gauss);
  if (phi.kind == PhiSpec::Kind::resolvent) {
    assert(loewner_geq(radau, gauss, 1e-9));
    ExtrapolationSet ex = extrapolate(gauss, radau);
    out.hat = ex.hat;
    out.bar = ex.bar;
    out.check = ex.check;
  } else {
    out.hat = symmetrize(0.5 * (gauss + radau));
  }
  return out;
}

ComplexQuadratureSet two_sided_complex(const BlockTridiagonal& t,
                                       const RadauMatrix& rt,
                                       std::complex<double> s, Index leading) {
  const Index m = rt.t.steps() - 1;
  if (m < 1) throw DimensionMismatch("two_sided: need at least two steps");
  if (t.steps() < m) {
    throw DimensionMismatch("two_sided: prefix shorter than pinned matrix");
  }
  CMat gauss = eval_gauss_complex(t, m, s);
  CMat radau = eval_radau_complex(rt, s);
  if (leading > 0) {
    gauss = CMat(gauss.topLeftCorner(leading, leading));
    radau = CMat(radau.topLeftCorner(leading, leading));
  }
  ComplexQuadratureSet out;
  out.m = m;
  out.gauss = gauss;
  out.radau = radau;
  out.bound = norm2(CMat(radau - gauss));
  out.hat = 0.5 * (gauss + radau);
  return out;
}

namespace {

using SpMat = Eigen::SparseMatrix<double>;
using SpMatC = Eigen::SparseMatrix<std::complex<double>>;

SpMat to_eigen(const SparseSym& a, double shift) {
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(a.nnz() + a.n));
  for (Index i = 0; i < a.n; ++i) {
    for (Index k = a.row_ptr[static_cast<std::size_t>(i)];
         k < a.row_ptr[static_cast<std::size_t>(i) + 1]; ++k) {
      trips.emplace_back(static_cast<int>(i),
                         static_cast<int>(a.col_idx[static_cast<std::size_t>(k)]),
                         a.values[static_cast<std::size_t>(k)]);
    }
    trips.emplace_back(static_cast<int>(i), static_cast<int>(i), shift);
  }
  SpMat m(a.n, a.n);
  m.setFromTriplets(trips.begin(), trips.end());
  return m;
}

}  // namespace

Mat reference_oracle(const SparseSym& a, const Mat& b, const PhiSpec& phi) {
  if (!phi.is_real()) {
    throw InvalidSpec("reference_oracle: complex shift needs the complex path");
  }
  if (b.rows() != a.n) throw DimensionMismatch("reference_oracle: block rows");
  if (phi.kind == PhiSpec::Kind::resolvent) {
    if (a.n > 200000) throw TooLarge("reference_oracle: resolvent size cap");
    const SpMat m = to_eigen(a, phi.s.real());
    Eigen::SimplicialLDLT<SpMat> solver(m);
    if (solver.info() != Eigen::Success) {
      throw Error("reference_oracle: factorization failed");
    }
    Mat x = solver.solve(b);
    // One refinement pass tightens the solve to near working precision.
    x += solver.solve(Mat(b - m * x));
    return symmetrize(b.transpose() * x);
  }
  if (a.n > 3000) throw TooLarge("reference_oracle: exponential size cap");
  EigResult eig = sym_eig(a.dense());
  const Mat g = eig.vectors.transpose() * b;
  Vec w = (-phi.t * eig.values.array()).exp();
  return symmetrize(g.transpose() * w.asDiagonal() * g);
}

CMat reference_oracle_complex(const SparseSym& a, const Mat& b,
                              std::complex<double> s) {
  if (b.rows() != a.n) throw DimensionMismatch("reference_oracle: block rows");
  if (a.n > 200000) throw TooLarge("reference_oracle: resolvent size cap");
  if (s.real() <= 0.0 && s.imag() == 0.0) {
    throw InvalidSpec("reference_oracle: invalid complex shift");
  }
  std::vector<Eigen::Triplet<std::complex<double>>> trips;
  trips.reserve(static_cast<std::size_t>(a.nnz() + a.n));
  for (Index i = 0; i < a.n; ++i) {
    for (Index k = a.row_ptr[static_cast<std::size_t>(i)];
         k < a.row_ptr[static_cast<std::size_t>(i) + 1]; ++k) {
      trips.emplace_back(
          static_cast<int>(i),
          static_cast<int>(a.col_idx[static_cast<std::size_t>(k)]),
          std::complex<double>(a.values[static_cast<std::size_t>(k)], 0.0));
    }
    trips.emplace_back(static_cast<int>(i), static_cast<int>(i), s);
  }
  SpMatC m(a.n, a.n);
  m.setFromTriplets(trips.begin(), trips.end());
  Eigen::SparseLU<SpMatC> solver;
  solver.analyzePattern(m);
  solver.factorize(m);
  if (solver.info() != Eigen::Success) {
    throw Error("reference_oracle: complex factorization failed");
  }
  const CMat bc = b.cast<std::complex<double>>();
  CMat x = solver.solve(bc);
  x += solver.solve(CMat(bc - m * x));
  CMat f = bc.transpose() * x;
  return 0.5 * (f + f.transpose().eval());
}

double potential_rate(double theta_max, double s) {
  if (theta_max <= 0.0) {
    throw InvalidSpectrum("potential_rate: spectrum top must be positive");
  }
  if (s <= 0.0) {
    throw NonPositiveShift("potential_rate: shift must be positive");
  }
  const double x = std::sqrt(s / theta_max);
  if (x <= 1.0) return 0.0;
  return std::log(x + std::sqrt(x * x - 1.0));
}

}  // namespace blockquad
