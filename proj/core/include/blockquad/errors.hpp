// Copyright (c) 2026 the blockquad authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace blockquad {

// Base class for all library errors.
struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

struct DimensionMismatch : Error {
  using Error::Error;
};

// Thin QR met a (numerically) dependent column.  `column` is 0-based.
struct RankDeficient : Error {
  int column;
  explicit RankDeficient(int col)
      : Error("rank deficient at column " + std::to_string(col)), column(col) {}
};

struct NonSymmetric : Error {
  using Error::Error;
};

struct NotPositiveDefinite : Error {
  using Error::Error;
};

// A pivot block of T + s*I is singular at the requested shift.
struct SingularShift : Error {
  using Error::Error;
};

// Stieltjes extraction or S-fraction evaluation lost positive definiteness
// at recursion level `level` (1-based).
struct NotStieltjes : Error {
  int level;
  explicit NotStieltjes(int lvl)
      : Error("Stieltjes structure violated at level " + std::to_string(lvl)),
        level(lvl) {}
};

struct NonPositiveShift : Error {
  using Error::Error;
};

struct InvalidSpectrum : Error {
  using Error::Error;
};

// Malformed problem/run description (bad field values, out-of-range nodes).
struct InvalidSpec : Error {
  using Error::Error;
};

// Malformed input file; carries file and 1-based line when known.
struct ParseError : Error {
  ParseError(const std::string& file, long line, const std::string& msg)
      : Error(file + ":" + std::to_string(line) + ": " + msg) {}
  ParseError(const std::string& file, const std::string& msg)
      : Error(file + ": " + msg) {}
};

struct EmptyGraph : Error {
  using Error::Error;
};

struct NonSquare : Error {
  using Error::Error;
};

// Reference oracle refuses problems beyond its documented size caps.
struct TooLarge : Error {
  using Error::Error;
};

struct IoError : Error {
  using Error::Error;
};

}  // namespace blockquad
