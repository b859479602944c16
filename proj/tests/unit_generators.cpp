// Copyright (c) 2026 the blockquad authors
// SPDX-License-Identifier: Apache-2.0

#include <doctest.h>

#include <cmath>

#include "blockquad/errors.hpp"
#include "blockquad/generators.hpp"
#include "blockquad/smallmat.hpp"
#include "test_support.hpp"

using namespace blockquad;

TEST_SUITE_BEGIN("generators");

TEST_CASE("rng streams are deterministic and in range") {
  Rng a(42), b(42);
  for (int i = 0; i < 100; ++i) {
    const double u = a.uniform();
    CHECK(u == b.uniform());
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
  Rng c(42), d(42);
  for (int i = 0; i < 100; ++i) CHECK(c.normal() == d.normal());
}

TEST_CASE("rng normals have unit scale") {
  Rng rng(1);
  const int k = 20000;
  double sum = 0.0, sq = 0.0;
  for (int i = 0; i < k; ++i) {
    const double x = rng.normal();
    sum += x;
    sq += x * x;
  }
  const double mean = sum / k;
  const double var = sq / k - mean * mean;
  CHECK(std::abs(mean) < 0.05);
  CHECK(std::abs(var - 1.0) < 0.05);
}

TEST_CASE("graded grid gaps: shape, symmetry, unit interior") {
  const Index nx = 5, n_opt = 2;
  const std::vector<double> gaps = optimal_grid_steps(nx, n_opt);
  REQUIRE(static_cast<Index>(gaps.size()) == nx + 2 * n_opt + 1);
  const double r = std::exp(M_PI / std::sqrt(2.0));
  CHECK(gaps.front() == doctest::Approx(r * r).epsilon(1e-14));
  CHECK(gaps[1] == doctest::Approx(r).epsilon(1e-14));
  for (std::size_t i = 0; i < gaps.size(); ++i) {
    CHECK(gaps[i] == gaps[gaps.size() - 1 - i]);
  }
  // Unit gaps between interior nodes plus the innermost step on both sides.
  for (std::size_t i = 2; i <= 7; ++i) CHECK(gaps[i] == 1.0);

  const std::vector<double> flat = optimal_grid_steps(4, 0);
  REQUIRE(flat.size() == 5);
  for (double g : flat) CHECK(g == 1.0);

  CHECK_THROWS_AS(optimal_grid_steps(0, 2), InvalidSpec);
  CHECK_THROWS_AS(optimal_grid_steps(3, -1), InvalidSpec);
}

TEST_CASE("single-node problem reduces to a scalar") {
  DiffusionSpec spec;
  spec.nx = 1;
  spec.ny = 1;
  spec.n_opt = 0;
  spec.transducers = {{0.5, 0.5}};
  const DiffusionProblem prob = gen_diffusion2d(spec);
  CHECK(prob.a.n == 1);
  CHECK(prob.grid_nx == 1);
  CHECK(prob.grid_ny == 1);
  // Unit gaps on both sides in both directions: 2 + 2.
  CHECK(prob.a.dense()(0, 0) == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(prob.b.rows() == 1);
  CHECK(prob.b(0, 0) == 1.0);
  REQUIRE(prob.transducer_nodes.size() == 1);
  CHECK(prob.transducer_nodes[0] == 0);
}

TEST_CASE("mass-weighted row sums are nonnegative") {
  DiffusionSpec spec;
  spec.nx = 5;
  spec.ny = 4;
  spec.n_opt = 2;
  spec.sigma_bg = 1.3;
  spec.contrast = ContrastRect{1, 1, 3, 2, 4.0};
  spec.transducers = {{0.5, 0.5}};
  const DiffusionProblem prob = gen_diffusion2d(spec);
  const Index gx = prob.grid_nx;
  const Index gy = prob.grid_ny;
  REQUIRE(gx == 9);
  REQUIRE(gy == 8);

  auto lumped = [](const std::vector<double>& gaps) {
    Vec d(static_cast<Index>(gaps.size()) - 1);
    for (Index i = 0; i < d.size(); ++i) {
      d(i) = 0.5 * (gaps[static_cast<std::size_t>(i)] +
                    gaps[static_cast<std::size_t>(i) + 1]);
    }
    return d;
  };
  const Vec dx = lumped(optimal_grid_steps(spec.nx, spec.n_opt));
  const Vec dy = lumped(optimal_grid_steps(spec.ny, spec.n_opt));

  Vec w(prob.a.n);
  for (Index ix = 0; ix < gx; ++ix) {
    for (Index iy = 0; iy < gy; ++iy) {
      double sigma = spec.sigma_bg;
      const Index jx = ix - spec.n_opt;
      const Index jy = iy - spec.n_opt;
      if (jx >= spec.contrast->x0 && jx <= spec.contrast->x1 &&
          jy >= spec.contrast->y0 && jy <= spec.contrast->y1) {
        sigma = spec.contrast->value;
      }
      w(ix * gy + iy) = std::sqrt(sigma * dx(ix) * dy(iy));
    }
  }
  const Mat aw = prob.a.apply(w);
  for (Index ix = 0; ix < gx; ++ix) {
    for (Index iy = 0; iy < gy; ++iy) {
      const double v = aw(ix * gy + iy, 0);
      CHECK(v >= -1e-9);
      const bool wall_adjacent =
          ix == 0 || ix == gx - 1 || iy == 0 || iy == gy - 1;
      if (wall_adjacent) {
        CHECK(v > 1e-6);  // positive outflow toward the Dirichlet wall
      } else {
        CHECK(std::abs(v) <= 1e-9);
      }
    }
  }
}

TEST_CASE("diffusion operator is symmetric positive definite") {
  DiffusionSpec spec;
  spec.nx = 5;
  spec.ny = 4;
  spec.n_opt = 2;
  spec.contrast = ContrastRect{0, 0, 4, 3, 10.0};
  spec.transducers = {{0.0, 0.0}, {1.0, 1.0}};
  const DiffusionProblem prob = gen_diffusion2d(spec);
  const EigResult eig = sym_eig(prob.a.dense());
  CHECK(eig.values.minCoeff() > 1e-8);
}

TEST_CASE("transducer positions snap to interior nodes") {
  DiffusionSpec spec;
  spec.nx = 5;
  spec.ny = 5;
  spec.n_opt = 2;
  spec.transducers = {{0.0, 0.0}, {0.5, 0.5}, {1.0, 1.0}};
  const DiffusionProblem prob = gen_diffusion2d(spec);
  const Index gy = prob.grid_ny;
  REQUIRE(gy == 9);
  REQUIRE(prob.transducer_nodes.size() == 3);
  CHECK(prob.transducer_nodes[0] == 2 * gy + 2);
  CHECK(prob.transducer_nodes[1] == 4 * gy + 4);
  CHECK(prob.transducer_nodes[2] == 6 * gy + 6);
  CHECK(prob.b.cols() == 3);
  for (Index j = 0; j < 3; ++j) {
    CHECK(prob.b.col(j).sum() == 1.0);
    CHECK(prob.b(prob.transducer_nodes[static_cast<std::size_t>(j)], j) == 1.0);
  }
}

TEST_CASE("diffusion spec validation") {
  DiffusionSpec spec;
  spec.nx = 3;
  spec.ny = 3;
  spec.transducers = {{0.5, 0.5}};

  DiffusionSpec bad = spec;
  bad.nx = 0;
  CHECK_THROWS_AS(gen_diffusion2d(bad), InvalidSpec);

  bad = spec;
  bad.sigma_bg = 0.0;
  CHECK_THROWS_AS(gen_diffusion2d(bad), InvalidSpec);

  bad = spec;
  bad.contrast = ContrastRect{0, 0, 3, 1, 2.0};  // x1 beyond nx-1
  CHECK_THROWS_AS(gen_diffusion2d(bad), InvalidSpec);

  bad = spec;
  bad.contrast = ContrastRect{0, 0, 1, 1, -2.0};
  CHECK_THROWS_AS(gen_diffusion2d(bad), InvalidSpec);

  bad = spec;
  bad.transducers = {{1.5, 0.5}};
  CHECK_THROWS_AS(gen_diffusion2d(bad), InvalidSpec);
}

TEST_CASE("graph laplacian of a path") {
  const SparseSym a = gen_graph_laplacian({{0, 1}, {1, 2}});
  Mat expect(3, 3);
  const double c = -1.0 / std::sqrt(2.0);
  expect << 1.0, c, 0.0,
            c, 1.0, c,
            0.0, c, 1.0;
  CHECK(norm2(Mat(a.dense() - expect)) < 1e-15);
  // D^{1/2} 1 spans the kernel of the normalized Laplacian.
  Vec sqd(3);
  sqd << 1.0, std::sqrt(2.0), 1.0;
  CHECK(norm2(Mat(a.apply(sqd))) < 1e-14);
}

TEST_CASE("graph laplacian merges duplicates and drops self-loops") {
  const SparseSym a = gen_graph_laplacian({{0, 1}, {0, 1}, {1, 0}, {2, 2}});
  CHECK(a.n == 3);
  Mat expect(3, 3);
  expect << 1.0, -1.0, 0.0,
            -1.0, 1.0, 0.0,
            0.0, 0.0, 0.0;  // vertex 2 is isolated after the self-loop drop
  CHECK(norm2(Mat(a.dense() - expect)) < 1e-15);

  CHECK_THROWS_AS(gen_graph_laplacian({{0, 0}}), EmptyGraph);
  CHECK_THROWS_AS(gen_graph_laplacian({{-1, 1}}), InvalidSpec);
}

TEST_CASE("enrichment keeps the original columns in front") {
  const bqtest::Instance inst = bqtest::random_instance(5);
  const Mat wide = enrich_block(inst.b, 2, 123);
  REQUIRE(wide.cols() == inst.p + 2);
  CHECK(norm2(Mat(wide.leftCols(inst.p) - inst.b)) < 1e-12);
  CHECK(norm2(Mat(wide.transpose() * wide -
                  Mat::Identity(wide.cols(), wide.cols()))) < 1e-12);
  // Same seed, same block.
  CHECK(norm2(Mat(enrich_block(inst.b, 2, 123) - wide)) == 0.0);
  // No extra columns requested: pass-through.
  CHECK(norm2(Mat(enrich_block(inst.b, 0, 123) - inst.b)) == 0.0);

  CHECK_THROWS_AS(enrich_block(Mat::Identity(2, 2), 1, 1), DimensionMismatch);
}

TEST_SUITE_END();
