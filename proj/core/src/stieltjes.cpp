// Copyright (c) 2026 the blockquad authors
// SPDX-License-Identifier: Apache-2.0

#include "blockquad/stieltjes.hpp"

#include <Eigen/Cholesky>
#include <Eigen/LU>
#include <cmath>

namespace blockquad {

namespace {

// SPD inverse via LLT; level tags the recursion depth for diagnostics.
Mat spd_inverse_or_throw(const Mat& m, Index level) {
  Eigen::LLT<Mat> llt(symmetrize(m));
  if (llt.info() != Eigen::Success) {
    throw NotStieltjes(static_cast<int>(level));
  }
  return symmetrize(llt.solve(Mat::Identity(m.rows(), m.cols())));
}

Mat general_inverse_or_throw(const Mat& m, Index level) {
  Eigen::PartialPivLU<Mat> lu(m);
  const auto diag = lu.matrixLU().diagonal().cwiseAbs();
  if (diag.minCoeff() <= 1e-300) {
    throw NotStieltjes(static_cast<int>(level));
  }
  return lu.solve(Mat::Identity(m.rows(), m.cols()));
}

}  // namespace

StieltjesParams stieltjes_extract(const BlockTridiagonal& t) {
  const Index p = t.p;
  const Index m = t.steps();
  if (m < 1) throw DimensionMismatch("extract: empty matrix");

  StieltjesParams out;
  out.p = p;
  const Mat eye = Mat::Identity(p, p);

  out.kappa_hat.push_back(eye);
  out.kappa_hat_inv.push_back(eye);
  out.gamma_hat.push_back(eye);
  out.gamma_inv.push_back(symmetrize(t.alpha[0]));
  out.gamma.push_back(spd_inverse_or_throw(out.gamma_inv.back(), 1));

  for (Index i = 2; i <= m; ++i) {
    const Mat& beta = t.beta[static_cast<std::size_t>(i - 2)];
    const Mat kinv =
        out.gamma.back() * out.kappa_hat.back().transpose() * beta.transpose();
    const Mat k = general_inverse_or_throw(kinv, i);
    Mat ginv = symmetrize(k.transpose() *
                              t.alpha[static_cast<std::size_t>(i - 1)] * k -
                          out.gamma_inv.back());
    out.kappa_hat_inv.push_back(kinv);
    out.kappa_hat.push_back(k);
    out.gamma_inv.push_back(ginv);
    out.gamma.push_back(spd_inverse_or_throw(ginv, i));
    out.gamma_hat.push_back(symmetrize(k.transpose() * k));
  }
  return out;
}

RadauMatrix radau_matrix(const BlockTridiagonal& t,
                         const StieltjesParams& params, Index m) {
  if (m < 1 || m > t.steps() || m > params.steps()) {
    throw DimensionMismatch("radau_matrix: step count out of range");
  }
  RadauMatrix out;
  out.t = t.prefix(m);
  if (m == 1) {
    out.t.alpha[0] = Mat::Zero(t.p, t.p);
  } else {
    const Mat& kinv = params.kappa_hat_inv[static_cast<std::size_t>(m - 1)];
    const Mat& ginv_prev = params.gamma_inv[static_cast<std::size_t>(m - 2)];
    out.t.alpha[static_cast<std::size_t>(m - 1)] =
        symmetrize(kinv.transpose() * ginv_prev * kinv);
  }
  return out;
}

Mat sfraction_eval(const StieltjesParams& params, double s, Index m,
                   bool radau) {
  if (s <= 0.0) {
    throw NonPositiveShift("sfraction_eval: shift must be positive");
  }
  if (m < 1 || m > params.steps()) {
    throw DimensionMismatch("sfraction_eval: step count out of range");
  }
  const Index p = params.p;
  Mat c;
  Index top;
  if (radau) {
    // Origin-pinned rule: the deepest floor is (s gamma_hat_m)^{-1}.
    c = spd_inverse_or_throw(
        s * params.gamma_hat[static_cast<std::size_t>(m - 1)], m);
    top = m - 1;
  } else {
    c = Mat::Zero(p, p);
    top = m;
  }
  for (Index i = top; i >= 1; --i) {
    const Mat inner = spd_inverse_or_throw(
        params.gamma[static_cast<std::size_t>(i - 1)] + c, i);
    c = spd_inverse_or_throw(
        s * params.gamma_hat[static_cast<std::size_t>(i - 1)] + inner, i);
  }
  return c;
}

IdentityReport check_identities(const BlockTridiagonal& t,
                                const StieltjesParams& params) {
  const Index m = params.steps();
  const Index p = params.p;
  if (m < 1 || t.steps() < m) {
    throw DimensionMismatch("check_identities: step count mismatch");
  }
  IdentityReport rep;
  const Mat e1 = first_block_rhs(m * p, p);

  // Value at the origin: top block of T^{-1} E_1 against sum(gamma).
  Mat sum_gamma = Mat::Zero(p, p);
  for (const Mat& g : params.gamma) sum_gamma += g;
  const Mat f0 = block_tridiag_solve<double>(t.prefix(m), 0.0, e1).topRows(p);
  rep.gauss_zero_rel = norm2(f0 - sum_gamma) / norm2(sum_gamma);

  // Origin residue of the pinned rule: s * Ftilde(s) -> inv(sum(gamma_hat)).
  // Richardson at s1/s2 cancels the O(s) term; the remainder is O(s1*s2)
  // plus solve roundoff, and the shifts are chosen so both stay small.
  Mat sum_ghat = Mat::Zero(p, p);
  for (const Mat& g : params.gamma_hat) sum_ghat += g;
  const Mat residue = spd_inverse_or_throw(sum_ghat, m);
  const BlockTridiagonal tt = radau_matrix(t, params, m).t;
  auto scaled_value = [&](double s) -> Mat {
    return s * block_tridiag_solve<double>(tt, s, e1).topRows(p);
  };
  const double s1 = 1e-6, s2 = 1e-7;
  const Mat v1 = scaled_value(s1);
  const Mat v2 = scaled_value(s2);
  const Mat rich = (s1 * v2 - s2 * v1) / (s1 - s2);
  const double nr = norm2(residue);
  rep.residue_raw_rel = norm2(v1 - residue) / nr;
  rep.residue_rel = norm2(rich - residue) / nr;
  return rep;
}

}  // namespace blockquad
