// Copyright (c) 2026 the blockquad authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <filesystem>
#include <utility>
#include <vector>

#include "blockquad/operators.hpp"

namespace blockquad {

// Matrix Market "matrix coordinate real" reader.  Symmetric banners mirror
// the stored triangle; general banners are symmetrized by averaging each
// (i,j)/(j,i) pair, with entries missing on one side mirrored as-is.
// File-level duplicates are summed first.  Throws ParseError / NonSquare /
// NonSymmetric / IoError.
SparseSym load_matrix_market(const std::filesystem::path& path);

// Writes the lower triangle under a symmetric banner with full double
// precision; load(save(A)) reproduces A exactly.
void save_matrix_market(const std::filesystem::path& path, const SparseSym& a);

// Whitespace-separated "u v" pairs, one edge per line; '#' starts a
// comment.  Indices are auto-detected as 1-based when the smallest index
// seen is >= 1, and converted to 0-based.
std::vector<std::pair<Index, Index>> load_edge_list(
    const std::filesystem::path& path);

// Dense block file: a "rows cols" header line followed by one row of
// values per line; '#' starts a comment.
Mat load_block(const std::filesystem::path& path);
void save_block(const std::filesystem::path& path, const Mat& b);

}  // namespace blockquad
