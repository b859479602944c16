// Copyright (c) 2026 the blockquad authors
// SPDX-License-Identifier: Apache-2.0

#include "blockquad/generators.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <set>

namespace blockquad {

double Rng::normal() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  // Box-Muller; u1 in (0,1] keeps the log finite.
  const double u1 = 1.0 - uniform();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double a = 2.0 * M_PI * u2;
  spare_ = r * std::sin(a);
  have_spare_ = true;
  return r * std::cos(a);
}

std::vector<double> optimal_grid_steps(Index n_interior, Index n_opt) {
  if (n_interior < 1) throw InvalidSpec("grid: need at least one interior node");
  if (n_opt < 0) throw InvalidSpec("grid: negative exterior node count");
  const double r =
      n_opt > 0 ? std::exp(M_PI / std::sqrt(static_cast<double>(n_opt))) : 1.0;
  std::vector<double> ext(static_cast<std::size_t>(n_opt) + 1);
  for (Index k = 0; k <= n_opt; ++k) {
    ext[static_cast<std::size_t>(k)] = std::pow(r, static_cast<double>(k));
  }
  std::vector<double> gaps;
  gaps.reserve(static_cast<std::size_t>(n_interior) + 2 * n_opt + 1);
  gaps.insert(gaps.end(), ext.rbegin(), ext.rend());       // wall .. innermost
  for (Index i = 0; i < n_interior - 1; ++i) gaps.push_back(1.0);
  gaps.insert(gaps.end(), ext.begin(), ext.end());         // innermost .. wall
  return gaps;
}

namespace {

// 1D mass-symmetrized stiffness D^{-1/2} K D^{-1/2} for the gap list, with
// the half-cell widths returned alongside.
struct Lap1d {
  Mat a;
  Vec d;
};

Lap1d lap_1d(const std::vector<double>& gaps) {
  const Index n = static_cast<Index>(gaps.size()) - 1;
  Mat k = Mat::Zero(n, n);
  Vec d(n);
  for (Index i = 0; i < n; ++i) {
    const double gl = gaps[static_cast<std::size_t>(i)];
    const double gr = gaps[static_cast<std::size_t>(i) + 1];
    k(i, i) = 1.0 / gl + 1.0 / gr;
    if (i + 1 < n) {
      k(i, i + 1) = -1.0 / gr;
      k(i + 1, i) = -1.0 / gr;
    }
    d(i) = 0.5 * (gl + gr);
  }
  Vec s = d.cwiseSqrt().cwiseInverse();
  Lap1d out;
  out.a = s.asDiagonal() * k * s.asDiagonal();
  out.d = d;
  return out;
}

}  // namespace

DiffusionProblem gen_diffusion2d(const DiffusionSpec& spec) {
  if (spec.nx < 1 || spec.ny < 1) {
    throw InvalidSpec("diffusion2d: interior grid must be at least 1x1");
  }
  if (spec.sigma_bg <= 0.0) {
    throw InvalidSpec("diffusion2d: background conductivity must be positive");
  }
  const Lap1d lx = lap_1d(optimal_grid_steps(spec.nx, spec.n_opt));
  const Lap1d ly = lap_1d(optimal_grid_steps(spec.ny, spec.n_opt));
  const Index gx = lx.a.rows();
  const Index gy = ly.a.rows();
  const Index n = gx * gy;

  // sigma sampled per free node: background everywhere (constant
  // continuation onto the exterior), contrast inside the interior
  // rectangle.
  Vec sigma = Vec::Constant(n, spec.sigma_bg);
  if (spec.contrast) {
    const ContrastRect& c = *spec.contrast;
    if (c.x0 < 0 || c.y0 < 0 || c.x1 >= spec.nx || c.y1 >= spec.ny ||
        c.x0 > c.x1 || c.y0 > c.y1) {
      throw InvalidSpec("diffusion2d: contrast rectangle out of range");
    }
    if (c.value <= 0.0) {
      throw InvalidSpec("diffusion2d: contrast must be positive");
    }
    for (Index ix = c.x0; ix <= c.x1; ++ix) {
      for (Index iy = c.y0; iy <= c.y1; ++iy) {
        sigma((spec.n_opt + ix) * gy + (spec.n_opt + iy)) = c.value;
      }
    }
  }

  // A = S (Ax (x) I + I (x) Ay) S with S = diag(sigma^{-1/2});
  // x-major node order, y fastest.
  Vec sinv = sigma.cwiseSqrt().cwiseInverse();
  std::vector<Triplet> trips;
  trips.reserve(static_cast<std::size_t>(5 * n));
  auto push = [&](Index i, Index j, double v) {
    if (v != 0.0) trips.push_back({i, j, v * sinv(i) * sinv(j)});
  };
  for (Index ix = 0; ix < gx; ++ix) {
    for (Index iy = 0; iy < gy; ++iy) {
      const Index node = ix * gy + iy;
      push(node, node, lx.a(ix, ix) + ly.a(iy, iy));
      if (iy + 1 < gy) {
        push(node, node + 1, ly.a(iy, iy + 1));
        push(node + 1, node, ly.a(iy + 1, iy));
      }
      if (ix + 1 < gx) {
        push(node, node + gy, lx.a(ix, ix + 1));
        push(node + gy, node, lx.a(ix + 1, ix));
      }
    }
  }

  DiffusionProblem out;
  out.a = SparseSym::from_triplets(n, std::move(trips));
  out.grid_nx = gx;
  out.grid_ny = gy;
  out.b = Mat::Zero(n, static_cast<Index>(spec.transducers.size()));
  for (std::size_t t = 0; t < spec.transducers.size(); ++t) {
    const double fx = spec.transducers[t][0];
    const double fy = spec.transducers[t][1];
    if (fx < 0.0 || fx > 1.0 || fy < 0.0 || fy > 1.0) {
      throw InvalidSpec("diffusion2d: transducer position outside [0,1]^2");
    }
    const Index ix =
        spec.n_opt +
        static_cast<Index>(std::lround(fx * static_cast<double>(spec.nx - 1)));
    const Index iy =
        spec.n_opt +
        static_cast<Index>(std::lround(fy * static_cast<double>(spec.ny - 1)));
    const Index node = ix * gy + iy;
    out.transducer_nodes.push_back(node);
    out.b(node, static_cast<Index>(t)) = 1.0;
  }
  return out;
}

SparseSym gen_graph_laplacian(
    const std::vector<std::pair<Index, Index>>& edges) {
  Index n = 0;
  std::set<std::pair<Index, Index>> undirected;
  for (const auto& [u, v] : edges) {
    if (u < 0 || v < 0) throw InvalidSpec("graph: negative vertex index");
    n = std::max(n, std::max(u, v) + 1);
    if (u == v) continue;  // self-loops dropped
    undirected.insert({std::min(u, v), std::max(u, v)});
  }
  if (undirected.empty()) {
    throw EmptyGraph("graph: no edges after removing self-loops");
  }
  std::vector<Index> degree(static_cast<std::size_t>(n), 0);
  for (const auto& [u, v] : undirected) {
    ++degree[static_cast<std::size_t>(u)];
    ++degree[static_cast<std::size_t>(v)];
  }
  std::vector<Triplet> trips;
  trips.reserve(2 * undirected.size() + static_cast<std::size_t>(n));
  for (Index i = 0; i < n; ++i) {
    // Isolated vertices keep a zero diagonal.
    if (degree[static_cast<std::size_t>(i)] > 0) trips.push_back({i, i, 1.0});
  }
  for (const auto& [u, v] : undirected) {
    const double w = -1.0 / std::sqrt(static_cast<double>(
                                degree[static_cast<std::size_t>(u)]) *
                            static_cast<double>(
                                degree[static_cast<std::size_t>(v)]));
    trips.push_back({u, v, w});
    trips.push_back({v, u, w});
  }
  return SparseSym::from_triplets(n, std::move(trips));
}

Mat enrich_block(const Mat& b, Index p_prime, std::uint64_t seed) {
  if (p_prime < 0) throw InvalidSpec("enrich: negative column count");
  if (p_prime == 0) return b;
  const Index n = b.rows();
  if (n < b.cols() + p_prime) {
    throw DimensionMismatch("enrich: not enough rows for requested columns");
  }
  Rng rng(seed);
  for (int attempt = 0; attempt < 3; ++attempt) {
    Mat wide(n, b.cols() + p_prime);
    wide.leftCols(b.cols()) = b;
    for (Index j = 0; j < p_prime; ++j) {
      for (Index i = 0; i < n; ++i) {
        wide(i, b.cols() + j) = rng.normal();
      }
    }
    try {
      // The leading columns are already orthonormal, so their R block is the
      // identity and they pass through QR unchanged up to roundoff.
      return qr_thin(wide, 1e-12).q;
    } catch (const RankDeficient&) {
      if (attempt == 2) throw;
    }
  }
  throw RankDeficient(0);  // unreachable
}

}  // namespace blockquad
