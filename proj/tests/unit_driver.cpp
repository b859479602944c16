// Copyright (c) 2026 the blockquad authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <string>

#include "blockquad/driver.hpp"
#include "blockquad/errors.hpp"
#include "test_support.hpp"

using namespace blockquad;
using bqtest::read_file;
using bqtest::TempDir;
using bqtest::write_file;

namespace {

RunConfig worked_config() {
  DiagonalSpec spec;
  spec.diag = Vec(2);
  spec.diag << 1.0, 3.0;
  spec.b = bqtest::worked_b();
  RunConfig cfg;
  cfg.problem = spec;
  cfg.phis = {PhiSpec::resolvent({1.0, 0.0})};
  cfg.m_max = 2;
  return cfg;
}

}  // namespace

TEST_SUITE_BEGIN("driver");

TEST_CASE("problem building per kind") {
  SUBCASE("diagonal") {
    DiagonalSpec spec;
    spec.diag = Vec(2);
    spec.diag << 1.0, 3.0;
    spec.b = bqtest::worked_b();
    const Problem prob = build_problem(spec, ".");
    CHECK(prob.a.n == 2);
    CHECK(prob.a.dense()(1, 1) == 3.0);
    CHECK(prob.b.rows() == 2);

    spec.b = Mat::Ones(3, 1);  // rows disagree with diag length
    CHECK_THROWS_AS(build_problem(spec, "."), InvalidSpec);
  }

  SUBCASE("graph from an edge file") {
    TempDir dir("driver_graph");
    write_file(dir.path() / "edges.txt", "0 1\n1 2\n2 3\n");
    GraphSpec spec;
    spec.edges = "edges.txt";
    spec.delta_nodes = {0, 2};
    const Problem prob = build_problem(spec, dir.path());
    CHECK(prob.a.n == 4);
    CHECK(prob.b.cols() == 2);
    CHECK(prob.b(0, 0) == 1.0);
    CHECK(prob.b(2, 1) == 1.0);

    spec.delta_nodes = {4};
    CHECK_THROWS_AS(build_problem(spec, dir.path()), InvalidSpec);
  }

  SUBCASE("diffusion needs a transducer") {
    DiffusionSpec spec;
    spec.nx = 3;
    spec.ny = 3;
    CHECK_THROWS_AS(build_problem(spec, "."), InvalidSpec);
  }
}

TEST_CASE("run config parsing") {
  TempDir dir("driver_config");
  const auto path = dir.path() / "config.json";

  write_file(path, R"({
    "problem": {"kind": "diagonal-synthetic", "diag": [1.0, 3.0],
                "b": [[0.7071067811865476], [0.7071067811865476]]},
    "phi": [{"kind": "resolvent", "s": 1.0},
            {"kind": "resolvent", "s": [0.5, 2.0]},
            {"kind": "exponential", "t": 0.25}],
    "m_max": 7,
    "enrich": 1,
    "seed": 99,
    "reorth": true,
    "oracle": false,
    "nodes_weights_at": [2, 3]
  })");
  const RunConfig cfg = load_run_config(path);
  CHECK(std::holds_alternative<DiagonalSpec>(cfg.problem));
  REQUIRE(cfg.phis.size() == 3);
  CHECK(cfg.phis[0].kind == PhiSpec::Kind::resolvent);
  CHECK(cfg.phis[0].s == std::complex<double>(1.0, 0.0));
  CHECK(cfg.phis[1].s == std::complex<double>(0.5, 2.0));
  CHECK(cfg.phis[2].kind == PhiSpec::Kind::exponential);
  CHECK(cfg.phis[2].t == 0.25);
  CHECK(cfg.m_max == 7);
  CHECK(cfg.enrich == 1);
  CHECK(cfg.seed == 99);
  CHECK(cfg.reorth);
  CHECK_FALSE(cfg.with_oracle);
  CHECK(cfg.nodes_weights_at == std::vector<Index>{2, 3});
  CHECK(cfg.base_dir == dir.path());

  // Defaults.
  write_file(path, R"({
    "problem": {"kind": "diagonal-synthetic", "diag": [1.0], "b": [[1.0]]},
    "phi": [{"kind": "resolvent", "s": 1.0}]
  })");
  const RunConfig defaults = load_run_config(path);
  CHECK(defaults.m_max == 50);
  CHECK(defaults.enrich == 0);
  CHECK(defaults.seed == 1);
  CHECK_FALSE(defaults.reorth);
  CHECK(defaults.with_oracle);

  write_file(path, "{ not json");
  CHECK_THROWS_AS(load_run_config(path), ParseError);

  write_file(path, R"({"problem": {"kind": "nonsense"}, "phi": []})");
  CHECK_THROWS_AS(load_run_config(path), InvalidSpec);

  write_file(path, R"({
    "problem": {"kind": "diagonal-synthetic", "diag": [1.0], "b": [[1.0]]},
    "phi": []
  })");
  CHECK_THROWS_AS(load_run_config(path), InvalidSpec);

  write_file(path, R"({
    "problem": {"kind": "diagonal-synthetic", "diag": [1.0], "b": [[1.0]]},
    "phi": [{"kind": "resolvent", "s": 1.0}],
    "m_max": 0
  })");
  CHECK_THROWS_AS(load_run_config(path), InvalidSpec);

  write_file(path, R"({
    "problem": {"kind": "matrix-market", "matrix": "a.mtx",
                "b_file": "b.txt", "delta_nodes": [0]},
    "phi": [{"kind": "resolvent", "s": 1.0}]
  })");
  CHECK_THROWS_AS(load_run_config(path), InvalidSpec);
}

TEST_CASE("experiment on the model problem freezes every column") {
  TempDir dir("driver_worked");
  const RunResult res = run_experiment(worked_config(), dir.path());

  CHECK(res.n == 2);
  CHECK(res.p == 1);
  CHECK(res.p_run == 1);
  CHECK(res.completed_steps == 2);
  CHECK_FALSE(res.breakdown_step.has_value());
  CHECK(res.identities.gauss_zero_rel < 1e-12);
  CHECK(res.identities.residue_rel < 1e-8);

  REQUIRE(res.rows.size() == 1);
  const CsvRow& row = res.rows[0];
  CHECK(row.m == 1);
  CHECK(row.phi_label == "resolvent");
  REQUIRE(row.err_gauss.has_value());
  REQUIRE(row.err_radau.has_value());
  REQUIRE(row.err_hat.has_value());
  REQUIRE(row.err_check.has_value());
  CHECK(std::abs(*row.err_gauss - 1.0 / 24.0) < 1e-12);
  CHECK(std::abs(*row.err_radau - 3.0 / 56.0) < 1e-12);
  CHECK(std::abs(*row.err_hat - 1.0 / 168.0) < 1e-12);
  CHECK(std::abs(*row.err_check - (std::sqrt(1.0 / 7.0) - 0.375)) < 1e-12);
  CHECK(std::abs(row.bound - 2.0 / 21.0) < 1e-12);

  const std::string csv = read_file(res.csv_path);
  CHECK(csv.rfind("phi,param,m,err_gauss,err_radau,err_hat,err_check,bound\n",
                  0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 2);

  const std::string summary = read_file(res.summary_path);
  CHECK(summary.find("\"completed_steps\": 2") != std::string::npos);
  CHECK(summary.find("\"kind\": \"diagonal-synthetic\"") != std::string::npos);
}

TEST_CASE("non-orthonormal source blocks are restored by congruence") {
  RunConfig cfg = worked_config();
  DiagonalSpec spec = std::get<DiagonalSpec>(cfg.problem);
  spec.b = 2.0 * spec.b;  // same direction, scaled
  cfg.problem = spec;
  TempDir dir("driver_congruence");
  const RunResult res = run_experiment(cfg, dir.path());
  REQUIRE(res.rows.size() == 1);
  // Values scale by 4, so errors against B^T phi(A) B scale by 4 too.
  CHECK(std::abs(*res.rows[0].err_gauss - 4.0 / 24.0) < 1e-12);
  CHECK(std::abs(res.rows[0].bound - 8.0 / 21.0) < 1e-12);
}

TEST_CASE("oracle-free rows leave error cells empty") {
  RunConfig cfg = worked_config();
  cfg.with_oracle = false;
  TempDir dir("driver_nooracle");
  const RunResult res = run_experiment(cfg, dir.path());
  REQUIRE(res.rows.size() == 1);
  CHECK_FALSE(res.rows[0].err_gauss.has_value());
  CHECK_FALSE(res.rows[0].err_radau.has_value());
  CHECK(res.rows[0].bound > 0.0);
  const std::string csv = read_file(res.csv_path);
  CHECK(csv.find(",1,,,,,") != std::string::npos);
}

TEST_CASE("complex and exponential rows fill the hat column only") {
  RunConfig cfg = worked_config();
  cfg.phis = {PhiSpec::resolvent({0.0, 1.0}), PhiSpec::exponential(1.0)};
  TempDir dir("driver_mixed");
  const RunResult res = run_experiment(cfg, dir.path());
  REQUIRE(res.rows.size() == 2);
  for (const CsvRow& row : res.rows) {
    CHECK(row.err_gauss.has_value());
    CHECK(row.err_radau.has_value());
    CHECK(row.err_hat.has_value());
    CHECK_FALSE(row.err_check.has_value());
  }
  CHECK(res.rows[0].phi_label == "resolvent");
  CHECK(res.rows[1].phi_label == "exponential");
  CHECK(res.rows[0].phi_param.find('i') != std::string::npos);
}

TEST_CASE("enrichment widens the run block but not the report") {
  DiffusionSpec spec;
  spec.nx = 8;
  spec.ny = 8;
  spec.n_opt = 2;
  spec.transducers = {{0.25, 0.5}, {0.75, 0.5}};
  RunConfig cfg;
  cfg.problem = spec;
  cfg.phis = {PhiSpec::resolvent({0.1, 0.0})};
  cfg.m_max = 6;
  cfg.enrich = 2;
  cfg.seed = 5;
  cfg.reorth = true;
  TempDir dir("driver_enrich");
  const RunResult res = run_experiment(cfg, dir.path());
  CHECK(res.p == 2);
  CHECK(res.p_run == 4);
  REQUIRE(res.rows.size() == 5);
  for (const CsvRow& row : res.rows) {
    CHECK(row.err_gauss.has_value());
    CHECK(std::isfinite(*row.err_gauss));
    CHECK(row.bound >= 0.0);
  }
}

TEST_CASE("node and weight dumps are bounded by the completed steps") {
  RunConfig cfg = worked_config();
  cfg.nodes_weights_at = {2};
  TempDir dir("driver_nodes");
  run_experiment(cfg, dir.path());
  const std::string nodes = read_file(dir.path() / "nodes_weights_m2.csv");
  CHECK(nodes.rfind("node,w_1_1\n", 0) == 0);
  CHECK(std::count(nodes.begin(), nodes.end(), '\n') == 3);
  // First data line: node near 1 with weight near 1/2.
  const std::size_t start = nodes.find('\n') + 1;
  const double node0 = std::stod(nodes.substr(start));
  const double w0 = std::stod(nodes.substr(nodes.find(',', start) + 1));
  CHECK(std::abs(node0 - 1.0) < 1e-12);
  CHECK(std::abs(w0 - 0.5) < 1e-12);

  cfg.nodes_weights_at = {3};
  TempDir dir2("driver_nodes_bad");
  CHECK_THROWS_AS(run_experiment(cfg, dir2.path()), InvalidSpec);
}

TEST_CASE("identical configs give byte-identical tables") {
  DiffusionSpec spec;
  spec.nx = 6;
  spec.ny = 5;
  spec.n_opt = 2;
  spec.contrast = ContrastRect{1, 1, 4, 3, 3.0};
  spec.transducers = {{0.25, 0.5}, {0.75, 0.5}};
  RunConfig cfg;
  cfg.problem = spec;
  cfg.phis = {PhiSpec::resolvent({0.01, 0.0}), PhiSpec::exponential(0.5)};
  cfg.m_max = 8;
  cfg.enrich = 1;
  cfg.seed = 31;
  cfg.reorth = true;

  TempDir dir_a("driver_det_a");
  TempDir dir_b("driver_det_b");
  const RunResult ra = run_experiment(cfg, dir_a.path());
  const RunResult rb = run_experiment(cfg, dir_b.path());
  const std::string csv_a = read_file(ra.csv_path);
  CHECK_FALSE(csv_a.empty());
  CHECK(csv_a == read_file(rb.csv_path));
}

TEST_CASE("problem generation writes loadable files") {
  DiffusionSpec spec;
  spec.nx = 4;
  spec.ny = 3;
  spec.n_opt = 1;
  spec.transducers = {{0.5, 0.5}};
  TempDir dir("driver_gen");
  gen_problem(spec, dir.path());

  const SparseSym a = load_matrix_market(dir.path() / "A.mtx");
  const Mat b = load_block(dir.path() / "B.txt");
  const Problem direct = build_problem(ProblemSpec(spec), ".");
  CHECK(a.n == direct.a.n);
  CHECK(norm2(Mat(a.dense() - direct.a.dense())) == 0.0);
  CHECK(norm2(Mat(b - direct.b)) == 0.0);

  // Regenerated problems round trip through the matrix-market spec.
  MatrixMarketSpec mm;
  mm.matrix = "A.mtx";
  mm.b_file = "B.txt";
  const Problem loaded = build_problem(ProblemSpec(mm), dir.path());
  CHECK(norm2(Mat(loaded.a.dense() - direct.a.dense())) == 0.0);
}

TEST_SUITE_END();
