// Copyright (c) 2026 the blockquad authors
// SPDX-License-Identifier: Apache-2.0

#include <CLI11.hpp>
#include <cstdio>
#include <string>

#include "blockquad/driver.hpp"

namespace {

int cmd_run(const std::string& config, const std::string& out_dir,
            long m_max, long enrich, unsigned long long seed, bool reorth,
            bool no_oracle, bool have_m_max, bool have_enrich, bool have_seed) {
  blockquad::RunConfig cfg = blockquad::load_run_config(config);
  if (have_m_max) cfg.m_max = m_max;
  if (have_enrich) cfg.enrich = enrich;
  if (have_seed) cfg.seed = seed;
  if (reorth) cfg.reorth = true;
  if (no_oracle) cfg.with_oracle = false;

  blockquad::RunResult res = blockquad::run_experiment(cfg, out_dir);
  std::printf("n=%lld p=%lld steps=%lld", static_cast<long long>(res.n),
              static_cast<long long>(res.p),
              static_cast<long long>(res.completed_steps));
  if (res.breakdown_step) {
    std::printf(" (breakdown at step %lld)",
                static_cast<long long>(*res.breakdown_step));
  }
  if (res.m_max_clamped) {
    std::printf(" (m_max clamped to %lld)",
                static_cast<long long>(res.m_max_used));
  }
  std::printf("\nwrote %s\nwrote %s\n", res.csv_path.string().c_str(),
              res.summary_path.string().c_str());
  return 0;
}

int cmd_gen(const std::string& problem, const std::string& out_dir) {
  namespace fs = std::filesystem;
  const blockquad::ProblemSpec spec = blockquad::load_problem_spec(problem);
  fs::path base = fs::path(problem).parent_path();
  if (base.empty()) base = ".";
  blockquad::gen_problem(spec, out_dir, base);
  std::printf("wrote %s and %s\n", (fs::path(out_dir) / "A.mtx").string().c_str(),
              (fs::path(out_dir) / "B.txt").string().c_str());
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-sided block quadrature for matrix functions"};
  app.require_subcommand(1);

  std::string config, problem, out_dir = ".";
  long m_max = 0, enrich = 0;
  unsigned long long seed = 0;
  bool reorth = false, no_oracle = false;

  CLI::App* run = app.add_subcommand(
      "run", "Run an experiment from a JSON config");
  run->add_option("--config", config, "JSON run configuration")
      ->required()
      ->check(CLI::ExistingFile);
  CLI::Option* o_mmax =
      run->add_option("--m-max", m_max, "Override the step budget");
  CLI::Option* o_enrich =
      run->add_option("--enrich", enrich, "Extra random block columns");
  CLI::Option* o_seed =
      run->add_option("--seed", seed, "Seed for the enrichment columns");
  run->add_flag("--reorth", reorth, "Full reorthogonalization");
  run->add_flag("--no-oracle", no_oracle, "Skip the reference solve");
  run->add_option("--out", out_dir, "Output directory");

  CLI::App* gen = app.add_subcommand(
      "gen", "Materialize a problem as Matrix Market + block file");
  gen->add_option("--problem", problem, "JSON problem description")
      ->required()
      ->check(CLI::ExistingFile);
  gen->add_option("--out", out_dir, "Output directory");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) {
      return cmd_run(config, out_dir, m_max, enrich, seed, reorth, no_oracle,
                     o_mmax->count() > 0, o_enrich->count() > 0,
                     o_seed->count() > 0);
    }
    return cmd_gen(problem, out_dir);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
}
