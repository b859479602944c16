// Copyright (c) 2026 the blockquad authors
// SPDX-License-Identifier: Apache-2.0

#include "blockquad/lanczos.hpp"

#include <algorithm>
#include <cmath>

namespace blockquad {

LanczosResult block_lanczos(const BlockOperator& a, const Mat& b,
                            const LanczosOptions& opts) {
  const Index n = a.rows();
  const Index p = b.cols();
  if (b.rows() != n) throw DimensionMismatch("lanczos: block row count");
  if (p < 1) throw DimensionMismatch("lanczos: empty block");
  if (opts.m_max < 1) throw InvalidSpec("lanczos: m_max must be positive");

  LanczosResult res;
  res.t.p = p;
  res.op_norm_est = norm_est(a);
  const double tol = opts.deflation_tol > 0.0
                         ? opts.deflation_tol
                         : 1e-12 * std::max(res.op_norm_est, 1e-300);
  const Index m_max = std::min(opts.m_max, std::max<Index>(n / p, 1));
  const bool keep = opts.keep_basis || opts.reorth;

  // Orthonormalize the input block unless it already is.
  Mat q1;
  const Mat gram = b.transpose() * b;
  if ((gram - Mat::Identity(p, p)).cwiseAbs().maxCoeff() <= 1e-10) {
    q1 = b;
    res.b_r = Mat::Identity(p, p);
  } else {
    try {
      QrResult qr = qr_thin(b, tol);
      q1 = qr.q;
      res.b_r = qr.r;
    } catch (const RankDeficient&) {
      res.breakdown_step = 1;
      res.b_r = Mat::Identity(p, p);
      res.next_residual = Mat::Zero(n, p);
      return res;
    }
  }

  Mat basis;
  if (keep) {
    basis.resize(n, m_max * p);
    basis.leftCols(p) = q1;
  }
  auto reorth_pass = [&](Mat& w, Index mdone) {
    // Two passes of classical Gram-Schmidt against all stored blocks.
    const auto q = basis.leftCols(mdone * p);
    for (int pass = 0; pass < 2; ++pass) {
      w -= q * (q.transpose() * w).eval();
    }
  };

  Mat q_prev = Mat::Zero(n, p);
  Mat q_cur = q1;
  Mat w = a.apply(q_cur);
  Mat alpha = symmetrize(q_cur.transpose() * w);
  w -= q_cur * alpha;
  if (opts.reorth) reorth_pass(w, 1);
  res.t.alpha.push_back(alpha);

  for (Index i = 2; i <= m_max; ++i) {
    QrResult qr;
    try {
      qr = qr_thin(w, tol);
    } catch (const RankDeficient&) {
      res.breakdown_step = i;
      break;
    }
    q_prev = q_cur;
    q_cur = qr.q;
    if (keep) basis.middleCols((i - 1) * p, p) = q_cur;
    w = a.apply(q_cur) - q_prev * qr.r.transpose();
    alpha = symmetrize(q_cur.transpose() * w);
    w -= q_cur * alpha;
    if (opts.reorth) reorth_pass(w, i);
    res.t.alpha.push_back(alpha);
    res.t.beta.push_back(qr.r);
  }

  res.next_residual = w;
  if (keep) res.basis = basis.leftCols(res.t.steps() * p);
  return res;
}

}  // namespace blockquad
