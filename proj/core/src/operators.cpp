// Copyright (c) 2026 the blockquad authors
// SPDX-License-Identifier: Apache-2.0

#include "blockquad/operators.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

namespace blockquad {

SparseSym SparseSym::from_triplets(Index n, std::vector<Triplet> entries,
                                   double sym_tol) {
  if (n < 0) throw DimensionMismatch("from_triplets: negative dimension");
  for (const Triplet& t : entries) {
    if (t.r < 0 || t.r >= n || t.c < 0 || t.c >= n) {
      throw DimensionMismatch("from_triplets: index out of range");
    }
  }
  std::sort(entries.begin(), entries.end(),
            [](const Triplet& a, const Triplet& b) {
              return a.r != b.r ? a.r < b.r : a.c < b.c;
            });

  SparseSym m;
  m.n = n;
  m.row_ptr.assign(static_cast<std::size_t>(n) + 1, 0);
  for (std::size_t i = 0; i < entries.size();) {
    std::size_t j = i + 1;
    double v = entries[i].v;
    while (j < entries.size() && entries[j].r == entries[i].r &&
           entries[j].c == entries[i].c) {
      v += entries[j].v;
      ++j;
    }
    m.col_idx.push_back(entries[i].c);
    m.values.push_back(v);
    ++m.row_ptr[static_cast<std::size_t>(entries[i].r) + 1];
    i = j;
  }
  for (Index i = 0; i < n; ++i) {
    m.row_ptr[static_cast<std::size_t>(i) + 1] +=
        m.row_ptr[static_cast<std::size_t>(i)];
  }

  // Value symmetry: every stored (i,j) needs a matching (j,i).
  const double scale = std::max(m.max_abs(), 1e-300);
  for (Index i = 0; i < n; ++i) {
    for (Index k = m.row_ptr[static_cast<std::size_t>(i)];
         k < m.row_ptr[static_cast<std::size_t>(i) + 1]; ++k) {
      const Index j = m.col_idx[static_cast<std::size_t>(k)];
      const double v = m.values[static_cast<std::size_t>(k)];
      const Index lo = m.row_ptr[static_cast<std::size_t>(j)];
      const Index hi = m.row_ptr[static_cast<std::size_t>(j) + 1];
      const auto begin = m.col_idx.begin() + lo;
      const auto end = m.col_idx.begin() + hi;
      const auto it = std::lower_bound(begin, end, i);
      const double vt = (it != end && *it == i)
                            ? m.values[static_cast<std::size_t>(
                                  lo + (it - begin))]
                            : 0.0;
      if (std::abs(v - vt) > sym_tol * scale) {
        throw NonSymmetric("from_triplets: entries not symmetric");
      }
    }
  }
  return m;
}

void SparseSym::apply_into(const Mat& x, Mat& y) const {
  if (x.rows() != n) {
    throw DimensionMismatch("SparseSym::apply: block row count");
  }
  y.setZero(n, x.cols());
  for (Index i = 0; i < n; ++i) {
    for (Index k = row_ptr[static_cast<std::size_t>(i)];
         k < row_ptr[static_cast<std::size_t>(i) + 1]; ++k) {
      y.row(i) += values[static_cast<std::size_t>(k)] *
                  x.row(col_idx[static_cast<std::size_t>(k)]);
    }
  }
}

double SparseSym::max_abs() const {
  double s = 0.0;
  for (double v : values) s = std::max(s, std::abs(v));
  return s;
}

Mat SparseSym::dense() const {
  Mat d = Mat::Zero(n, n);
  for (Index i = 0; i < n; ++i) {
    for (Index k = row_ptr[static_cast<std::size_t>(i)];
         k < row_ptr[static_cast<std::size_t>(i) + 1]; ++k) {
      d(i, col_idx[static_cast<std::size_t>(k)]) =
          values[static_cast<std::size_t>(k)];
    }
  }
  return d;
}

SparseSym diagonal_matrix(const Vec& d) {
  std::vector<Triplet> trips;
  trips.reserve(static_cast<std::size_t>(d.size()));
  for (Index i = 0; i < d.size(); ++i) trips.push_back({i, i, d(i)});
  return SparseSym::from_triplets(d.size(), std::move(trips));
}

double norm_est(const BlockOperator& a, int iters) {
  const Index n = a.rows();
  if (n == 0) return 0.0;
  // splitmix64 fill: pinned so the estimate is reproducible everywhere.
  std::uint64_t state = 0x9e3779b97f4a7c15ull;
  auto next = [&state]() {
    state += 0x9e3779b97f4a7c15ull;
    std::uint64_t z = state;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
  };
  Mat v(n, 1);
  for (Index i = 0; i < n; ++i) {
    v(i, 0) = static_cast<double>(next() >> 11) * 0x1.0p-53 - 0.5;
  }
  double nv = v.norm();
  if (nv == 0.0) return 0.0;
  v /= nv;
  double est = 0.0;
  Mat w;
  for (int it = 0; it < iters; ++it) {
    a.apply_into(v, w);
    est = w.norm();
    if (est == 0.0) return 0.0;
    v = w / est;
  }
  return est;
}

}  // namespace blockquad
