// Copyright (c) 2026 the blockquad authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "blockquad/generators.hpp"
#include "blockquad/io.hpp"
#include "blockquad/lanczos.hpp"
#include "blockquad/quadrature.hpp"

namespace blockquad {

// Explicit diagonal matrix with an inline source block.
struct DiagonalSpec {
  Vec diag;
  Mat b;
};

// Normalized graph Laplacian from an edge-list file; B holds unit vectors
// at the listed vertices.
struct GraphSpec {
  std::filesystem::path edges;
  std::vector<Index> delta_nodes;
};

// Matrix read from a Matrix Market file; B from a block file or as unit
// vectors at the listed rows (exactly one of the two).
struct MatrixMarketSpec {
  std::filesystem::path matrix;
  std::filesystem::path b_file;
  std::vector<Index> delta_nodes;
};

using ProblemSpec =
    std::variant<DiffusionSpec, GraphSpec, DiagonalSpec, MatrixMarketSpec>;

struct Problem {
  SparseSym a;
  Mat b;
};

// Realizes the spec; relative paths resolve against base_dir.
Problem build_problem(const ProblemSpec& spec,
                      const std::filesystem::path& base_dir);

struct RunConfig {
  ProblemSpec problem;
  std::vector<PhiSpec> phis;
  Index m_max = 50;
  Index enrich = 0;
  std::uint64_t seed = 1;
  bool reorth = false;
  bool with_oracle = true;
  std::vector<Index> nodes_weights_at;
  // Directory that file references inside `problem` resolve against
  // (set to the config file's directory by load_run_config).
  std::filesystem::path base_dir = ".";
};

// JSON readers; throw ParseError on malformed JSON and InvalidSpec on
// schema violations.
RunConfig load_run_config(const std::filesystem::path& path);
ProblemSpec load_problem_spec(const std::filesystem::path& path);

// One convergence.csv line: errors against the reference value (absent
// without an oracle), the two-sided gap, all in the spectral norm.
struct CsvRow {
  std::string phi_label;
  std::string phi_param;
  Index m = 0;
  std::optional<double> err_gauss;
  std::optional<double> err_radau;
  std::optional<double> err_hat;
  std::optional<double> err_check;
  double bound = 0.0;
};

struct RunResult {
  Index n = 0;
  Index p = 0;        // reported block size
  Index p_run = 0;    // block size after enrichment
  Index m_max_used = 0;
  bool m_max_clamped = false;
  Index completed_steps = 0;
  std::optional<Index> breakdown_step;
  double op_norm_est = 0.0;
  IdentityReport identities;
  std::vector<CsvRow> rows;
  std::map<std::string, double> timings_ms;
  std::filesystem::path csv_path;
  std::filesystem::path summary_path;
};

// Full pipeline: realize problem, (optionally) enrich, block Lanczos,
// parameter extraction, identity checks, per-step paired quadratures with
// extrapolations, optional reference oracle, CSV + JSON summary output.
// Identical configs and seeds produce byte-identical convergence.csv.
RunResult run_experiment(const RunConfig& cfg,
                         const std::filesystem::path& out_dir);

// Writes the realized operator (A.mtx) and source block (B.txt).
void gen_problem(const ProblemSpec& spec, const std::filesystem::path& out_dir,
                 const std::filesystem::path& base_dir = ".");

// Column labels used in convergence.csv.
std::string phi_label(const PhiSpec& phi);
std::string phi_param(const PhiSpec& phi);

}  // namespace blockquad
