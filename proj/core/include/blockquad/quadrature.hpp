// Copyright (c) 2026 the blockquad authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <complex>
#include <optional>
#include <vector>

#include "blockquad/operators.hpp"
#include "blockquad/stieltjes.hpp"

namespace blockquad {

// Spectral function to integrate: phi(x) = 1/(x + s) with Re(s) > 0 or
// Im(s) != 0, or phi(x) = exp(-x t) with t > 0.
struct PhiSpec {
  enum class Kind { resolvent, exponential };

  Kind kind = Kind::resolvent;
  std::complex<double> s{1.0, 0.0};
  double t = 1.0;

  static PhiSpec resolvent(std::complex<double> s);
  static PhiSpec exponential(double t);

  // True for the exponential and for real positive resolvent shifts; only
  // these go through the real-valued evaluation path.
  bool is_real() const {
    return kind == Kind::exponential || s.imag() == 0.0;
  }
};

// Block Gauss value E_1^T phi(T_m) E_1 from the m-step prefix.  The
// resolvent goes through the shifted block-tridiagonal solve, the
// exponential through the dense eigendecomposition.
Mat eval_gauss(const BlockTridiagonal& t, Index m, const PhiSpec& phi);
CMat eval_gauss_complex(const BlockTridiagonal& t, Index m,
                        std::complex<double> s);

// Same for the origin-pinned matrix; a real resolvent evaluation at the
// origin raises SingularShift through the solve.
Mat eval_radau(const RadauMatrix& rt, const PhiSpec& phi);
CMat eval_radau_complex(const RadauMatrix& rt, std::complex<double> s);

// Spectrum points and rank-one p x p weights of the m-step prefix:
// w_i = (z_i^T E_1)^T (z_i^T E_1).  Weights sum to I_p for an orthonormal
// starting block.
struct NodesWeights {
  Vec nodes;
  std::vector<Mat> weights;
};

NodesWeights nodes_weights(const BlockTridiagonal& t, Index m);
NodesWeights nodes_weights(const RadauMatrix& rt);

// Midpoint F_hat = (gauss + radau)/2; harmonic mean F_bar with
// F_bar^{-1} = (gauss^{-1} + radau^{-1})/2; log midpoint
// F_check = exp((log F_bar + log F_hat)/2).  bar/check need both inputs
// s.p.d. and are omitted otherwise.
struct ExtrapolationSet {
  Mat hat;
  std::optional<Mat> bar;
  std::optional<Mat> check;
};

ExtrapolationSet extrapolate(const Mat& gauss, const Mat& radau);

// Paired lower/upper pass at one step count: gauss at m, the pinned value
// at m+1 (both integrate the same first 2m moments), their gap as the
// a-posteriori bound, and the extrapolations (hat only for the
// exponential).  `leading` > 0 restricts every reported block to the
// leading principal sub-block of that size first.  For real resolvent
// shifts the Loewner order radau >= gauss is asserted in debug builds.
struct QuadratureSet {
  Index m = 0;
  Mat gauss;
  Mat radau;
  double bound = 0.0;
  std::optional<Mat> hat;
  std::optional<Mat> bar;
  std::optional<Mat> check;
};

QuadratureSet two_sided(const BlockTridiagonal& t, const RadauMatrix& rt,
                        const PhiSpec& phi, Index leading = -1);

struct ComplexQuadratureSet {
  Index m = 0;
  CMat gauss;
  CMat radau;
  double bound = 0.0;
  CMat hat;
};

ComplexQuadratureSet two_sided_complex(const BlockTridiagonal& t,
                                       const RadauMatrix& rt,
                                       std::complex<double> s,
                                       Index leading = -1);

// Direct evaluation of B^T phi(A) B: sparse LDL^T (real resolvent, with one
// refinement step), sparse LU (complex resolvent), or dense
// eigendecomposition (exponential).  Size caps: n <= 200000 for the
// resolvent, n <= 3000 for the exponential; beyond them TooLarge.
Mat reference_oracle(const SparseSym& a, const Mat& b, const PhiSpec& phi);
CMat reference_oracle_complex(const SparseSym& a, const Mat& b,
                              std::complex<double> s);

// Spectral-interval convergence-rate exponent for the resolvent:
// 0 when sqrt(s) <= sqrt(theta_max), else acosh(sqrt(s/theta_max)).
// theta_max <= 0 raises InvalidSpectrum; s <= 0 raises NonPositiveShift.
double potential_rate(double theta_max, double s);

}  // namespace blockquad
