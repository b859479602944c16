// Copyright (c) 2026 the blockquad authors
// SPDX-License-Identifier: Apache-2.0

#include "blockquad/smallmat.hpp"

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>

namespace blockquad {

QrResult qr_thin(const Mat& w, double rank_tol) {
  const Index n = w.rows();
  const Index p = w.cols();
  if (n < p) {
    throw DimensionMismatch("qr_thin: block has more columns than rows");
  }
  Eigen::HouseholderQR<Mat> qr(w);
  QrResult out;
  out.q = qr.householderQ() * Mat::Identity(n, p);
  out.r = qr.matrixQR().topRows(p).triangularView<Eigen::Upper>();
  for (Index j = 0; j < p; ++j) {
    if (out.r(j, j) < 0.0) {
      out.r.row(j) = -out.r.row(j);
      out.q.col(j) = -out.q.col(j);
    }
  }
  for (Index j = 0; j < p; ++j) {
    if (std::abs(out.r(j, j)) <= rank_tol) {
      throw RankDeficient(static_cast<int>(j));
    }
  }
  return out;
}

void require_symmetric(const Mat& m, double tol) {
  if (m.rows() != m.cols()) {
    throw NonSymmetric("matrix is not square");
  }
  if (m.size() == 0) return;
  const double scale = m.cwiseAbs().maxCoeff();
  const double asym = (m - m.transpose()).cwiseAbs().maxCoeff();
  if (asym > tol * std::max(scale, 1e-300)) {
    throw NonSymmetric("matrix asymmetry " + std::to_string(asym) +
                       " exceeds tolerance");
  }
}

EigResult sym_eig(const Mat& m, double sym_tol) {
  require_symmetric(m, sym_tol);
  Eigen::SelfAdjointEigenSolver<Mat> es(symmetrize(m));
  if (es.info() != Eigen::Success) {
    throw Error("sym_eig: eigensolver failed to converge");
  }
  EigResult out;
  out.values = es.eigenvalues();
  out.vectors = es.eigenvectors();
  // Pin eigenvector signs so repeated runs produce identical factors.
  for (Index j = 0; j < out.vectors.cols(); ++j) {
    const double colmax = out.vectors.col(j).cwiseAbs().maxCoeff();
    for (Index i = 0; i < out.vectors.rows(); ++i) {
      if (std::abs(out.vectors(i, j)) > 1e-12 * colmax) {
        if (out.vectors(i, j) < 0.0) out.vectors.col(j) = -out.vectors.col(j);
        break;
      }
    }
  }
  return out;
}

Mat spd_fn(const Mat& m, const std::function<double(double)>& f) {
  EigResult eig = sym_eig(m);
  Vec fv(eig.values.size());
  for (Index i = 0; i < fv.size(); ++i) fv(i) = f(eig.values(i));
  return symmetrize(eig.vectors * fv.asDiagonal() * eig.vectors.transpose());
}

namespace {

// Shared positivity guard for log/inverse: eigenvalues must clear a relative
// floor tied to the largest magnitude.
void require_spd_spectrum(const Vec& values, const char* who) {
  const double top = values.size() ? values.cwiseAbs().maxCoeff() : 0.0;
  const double floor = 1e-14 * std::max(top, 1e-300);
  for (Index i = 0; i < values.size(); ++i) {
    if (values(i) <= floor) {
      throw NotPositiveDefinite(std::string(who) +
                                ": eigenvalue not positive");
    }
  }
}

}  // namespace

Mat spd_log(const Mat& m) {
  EigResult eig = sym_eig(m);
  require_spd_spectrum(eig.values, "spd_log");
  Vec fv = eig.values.array().log();
  return symmetrize(eig.vectors * fv.asDiagonal() * eig.vectors.transpose());
}

Mat spd_exp(const Mat& m) {
  EigResult eig = sym_eig(m);
  Vec fv = eig.values.array().exp();
  return symmetrize(eig.vectors * fv.asDiagonal() * eig.vectors.transpose());
}

Mat spd_inverse(const Mat& m) {
  EigResult eig = sym_eig(m);
  require_spd_spectrum(eig.values, "spd_inverse");
  Vec fv = eig.values.cwiseInverse();
  return symmetrize(eig.vectors * fv.asDiagonal() * eig.vectors.transpose());
}


bool loewner_geq(const Mat& g1, const Mat& g2, double tol) {
  if (g1.rows() != g2.rows() || g1.cols() != g2.cols()) {
    throw DimensionMismatch("loewner_geq: shape mismatch");
  }
  Eigen::SelfAdjointEigenSolver<Mat> es(symmetrize(g1 - g2),
                                        Eigen::EigenvaluesOnly);
  const double lo = es.eigenvalues().minCoeff();
  const double scale = std::max({1.0, norm2(g1), norm2(g2)});
  return lo >= -tol * scale;
}

}  // namespace blockquad
