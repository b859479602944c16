// Copyright (c) 2026 the blockquad authors
// SPDX-License-Identifier: Apache-2.0

#include "blockquad/io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <limits>
#include <map>
#include <sstream>
#include <string>

#include "textutil.hpp"

namespace blockquad {

namespace {

std::ifstream open_text(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  return in;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return s;
}

}  // namespace

SparseSym load_matrix_market(const std::filesystem::path& path) {
  std::ifstream in = open_text(path);
  const std::string name = path.string();
  std::string line;
  long lineno = 0;

  if (!std::getline(in, line)) throw ParseError(name, 1, "empty file");
  ++lineno;
  std::istringstream banner(lower(line));
  std::string tag, object, format, field, symmetry;
  banner >> tag >> object >> format >> field >> symmetry;
  if (tag != "%%matrixmarket" || object != "matrix") {
    throw ParseError(name, lineno, "not a Matrix Market matrix file");
  }
  if (format != "coordinate") {
    throw ParseError(name, lineno, "only coordinate format is supported");
  }
  if (field != "real") {
    throw ParseError(name, lineno, "only real-valued matrices are supported");
  }
  const bool symmetric_banner = symmetry == "symmetric";
  if (!symmetric_banner && symmetry != "general") {
    throw ParseError(name, lineno, "unsupported symmetry '" + symmetry + "'");
  }

  Index nrows = -1, ncols = -1;
  long declared_nnz = -1;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::is_blank(line) || line[0] == '%') continue;
    std::istringstream sz(line);
    if (!(sz >> nrows >> ncols >> declared_nnz)) {
      throw ParseError(name, lineno, "malformed size line");
    }
    break;
  }
  if (nrows < 0) throw ParseError(name, lineno, "missing size line");
  if (nrows != ncols) {
    throw NonSquare("matrix in " + name + " is " + std::to_string(nrows) +
                    "x" + std::to_string(ncols));
  }

  std::vector<Triplet> raw;
  raw.reserve(static_cast<std::size_t>(std::max(declared_nnz, 0L)));
  long seen = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::is_blank(line) || line[0] == '%') continue;
    std::istringstream entry(line);
    Index i, j;
    double v;
    if (!(entry >> i >> j >> v)) {
      throw ParseError(name, lineno, "malformed entry");
    }
    if (i < 1 || i > nrows || j < 1 || j > ncols) {
      throw ParseError(name, lineno, "index out of range");
    }
    if (symmetric_banner && j > i) {
      throw ParseError(name, lineno,
                       "symmetric banner requires lower-triangle entries");
    }
    raw.push_back({i - 1, j - 1, v});
    ++seen;
  }
  if (declared_nnz >= 0 && seen != declared_nnz) {
    throw ParseError(name, lineno,
                     "entry count " + std::to_string(seen) +
                         " does not match declared " +
                         std::to_string(declared_nnz));
  }

  // Sum file-level duplicates first.
  std::map<std::pair<Index, Index>, double> acc;
  for (const Triplet& t : raw) acc[{t.r, t.c}] += t.v;

  std::vector<Triplet> trips;
  trips.reserve(2 * acc.size());
  if (symmetric_banner) {
    for (const auto& [rc, v] : acc) {
      trips.push_back({rc.first, rc.second, v});
      if (rc.first != rc.second) trips.push_back({rc.second, rc.first, v});
    }
  } else {
    // General banner: average where both orientations exist, mirror where
    // only one does.
    for (const auto& [rc, v] : acc) {
      if (rc.first == rc.second) {
        trips.push_back({rc.first, rc.second, v});
        continue;
      }
      const auto other = acc.find({rc.second, rc.first});
      const double w = other == acc.end() ? v : 0.5 * (v + other->second);
      trips.push_back({rc.first, rc.second, w});
      if (other == acc.end()) trips.push_back({rc.second, rc.first, w});
    }
  }
  return SparseSym::from_triplets(nrows, std::move(trips));
}

void save_matrix_market(const std::filesystem::path& path, const SparseSym& a) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  long nnz_lower = 0;
  for (Index i = 0; i < a.n; ++i) {
    for (Index k = a.row_ptr[static_cast<std::size_t>(i)];
         k < a.row_ptr[static_cast<std::size_t>(i) + 1]; ++k) {
      if (a.col_idx[static_cast<std::size_t>(k)] <= i) ++nnz_lower;
    }
  }
  out << "%%MatrixMarket matrix coordinate real symmetric\n";
  out << a.n << " " << a.n << " " << nnz_lower << "\n";
  for (Index i = 0; i < a.n; ++i) {
    for (Index k = a.row_ptr[static_cast<std::size_t>(i)];
         k < a.row_ptr[static_cast<std::size_t>(i) + 1]; ++k) {
      const Index j = a.col_idx[static_cast<std::size_t>(k)];
      if (j > i) continue;
      out << (i + 1) << " " << (j + 1) << " "
          << detail::fmt_full(a.values[static_cast<std::size_t>(k)]) << "\n";
    }
  }
  if (!out) throw IoError("failed writing " + path.string());
}

std::vector<std::pair<Index, Index>> load_edge_list(
    const std::filesystem::path& path) {
  std::ifstream in = open_text(path);
  const std::string name = path.string();
  std::string line;
  long lineno = 0;
  std::vector<std::pair<Index, Index>> edges;
  Index min_seen = std::numeric_limits<Index>::max();
  while (std::getline(in, line)) {
    ++lineno;
    const std::string body = detail::strip_comment(line, '#');
    if (detail::is_blank(body)) continue;
    std::istringstream ss(body);
    Index u, v;
    if (!(ss >> u >> v)) throw ParseError(name, lineno, "malformed edge");
    std::string extra;
    if (ss >> extra) throw ParseError(name, lineno, "trailing tokens");
    if (u < 0 || v < 0) throw ParseError(name, lineno, "negative vertex");
    edges.emplace_back(u, v);
    min_seen = std::min({min_seen, u, v});
  }
  // Smallest index >= 1 means the file is 1-based; shift down.
  if (!edges.empty() && min_seen >= 1) {
    for (auto& [u, v] : edges) {
      --u;
      --v;
    }
  }
  return edges;
}

Mat load_block(const std::filesystem::path& path) {
  std::ifstream in = open_text(path);
  const std::string name = path.string();
  std::string line;
  long lineno = 0;
  Index rows = -1, cols = -1;
  while (std::getline(in, line)) {
    ++lineno;
    const std::string body = detail::strip_comment(line, '#');
    if (detail::is_blank(body)) continue;
    std::istringstream ss(body);
    if (!(ss >> rows >> cols)) {
      throw ParseError(name, lineno, "malformed header (want: rows cols)");
    }
    break;
  }
  if (rows < 0 || cols < 1) throw ParseError(name, lineno, "missing header");
  Mat b(rows, cols);
  Index r = 0;
  while (r < rows && std::getline(in, line)) {
    ++lineno;
    const std::string body = detail::strip_comment(line, '#');
    if (detail::is_blank(body)) continue;
    std::istringstream ss(body);
    for (Index c = 0; c < cols; ++c) {
      if (!(ss >> b(r, c))) {
        throw ParseError(name, lineno, "malformed row");
      }
    }
    std::string extra;
    if (ss >> extra) throw ParseError(name, lineno, "trailing tokens");
    ++r;
  }
  if (r != rows) throw ParseError(name, lineno, "unexpected end of file");
  return b;
}

void save_block(const std::filesystem::path& path, const Mat& b) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << b.rows() << " " << b.cols() << "\n";
  for (Index i = 0; i < b.rows(); ++i) {
    for (Index j = 0; j < b.cols(); ++j) {
      if (j) out << " ";
      out << detail::fmt_full(b(i, j));
    }
    out << "\n";
  }
  if (!out) throw IoError("failed writing " + path.string());
}

}  // namespace blockquad
