// Copyright (c) 2026 the blockquad authors
// SPDX-License-Identifier: Apache-2.0

#include "blockquad/driver.hpp"

#include <chrono>
#include <cstdio>
#include <fstream>
#include <json.hpp>

#include "textutil.hpp"

namespace blockquad {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

fs::path resolve(const fs::path& p, const fs::path& base) {
  return p.is_absolute() ? p : base / p;
}

Mat delta_block(Index n, const std::vector<Index>& nodes) {
  if (nodes.empty()) throw InvalidSpec("need at least one source node");
  Mat b = Mat::Zero(n, static_cast<Index>(nodes.size()));
  for (std::size_t j = 0; j < nodes.size(); ++j) {
    if (nodes[j] < 0 || nodes[j] >= n) {
      throw InvalidSpec("source node " + std::to_string(nodes[j]) +
                        " out of range for n=" + std::to_string(n));
    }
    b(nodes[j], static_cast<Index>(j)) = 1.0;
  }
  return b;
}

// ---- JSON helpers ------------------------------------------------------

const json& need(const json& j, const char* key, const char* ctx) {
  const auto it = j.find(key);
  if (it == j.end()) {
    throw InvalidSpec(std::string(ctx) + ": missing field '" + key + "'");
  }
  return *it;
}

double get_num(const json& j, const char* ctx) {
  if (!j.is_number()) throw InvalidSpec(std::string(ctx) + ": expected number");
  return j.get<double>();
}

Index get_int(const json& j, const char* ctx) {
  if (!j.is_number_integer()) {
    throw InvalidSpec(std::string(ctx) + ": expected integer");
  }
  return j.get<Index>();
}

bool get_bool(const json& j, const char* ctx) {
  if (!j.is_boolean()) throw InvalidSpec(std::string(ctx) + ": expected bool");
  return j.get<bool>();
}

std::string get_str(const json& j, const char* ctx) {
  if (!j.is_string()) throw InvalidSpec(std::string(ctx) + ": expected string");
  return j.get<std::string>();
}

std::vector<Index> get_index_array(const json& j, const char* ctx) {
  if (!j.is_array()) throw InvalidSpec(std::string(ctx) + ": expected array");
  std::vector<Index> out;
  for (const auto& e : j) out.push_back(get_int(e, ctx));
  return out;
}

PhiSpec parse_phi(const json& j) {
  const std::string kind = get_str(need(j, "kind", "phi"), "phi.kind");
  if (kind == "resolvent") {
    const json& s = need(j, "s", "phi");
    if (s.is_number()) {
      return PhiSpec::resolvent({s.get<double>(), 0.0});
    }
    if (s.is_array() && s.size() == 2) {
      return PhiSpec::resolvent(
          {get_num(s[0], "phi.s"), get_num(s[1], "phi.s")});
    }
    throw InvalidSpec("phi.s: expected number or [re, im]");
  }
  if (kind == "exponential") {
    return PhiSpec::exponential(get_num(need(j, "t", "phi"), "phi.t"));
  }
  throw InvalidSpec("phi.kind: unknown kind '" + kind + "'");
}

ProblemSpec parse_problem(const json& j) {
  const std::string kind = get_str(need(j, "kind", "problem"), "problem.kind");
  if (kind == "diffusion2d") {
    DiffusionSpec d;
    d.nx = get_int(need(j, "nx", "diffusion2d"), "diffusion2d.nx");
    d.ny = get_int(need(j, "ny", "diffusion2d"), "diffusion2d.ny");
    if (j.contains("n_opt")) d.n_opt = get_int(j["n_opt"], "diffusion2d.n_opt");
    if (j.contains("sigma_bg")) {
      d.sigma_bg = get_num(j["sigma_bg"], "diffusion2d.sigma_bg");
    }
    if (j.contains("contrast")) {
      const json& c = j["contrast"];
      ContrastRect r;
      r.x0 = get_int(need(c, "x0", "contrast"), "contrast.x0");
      r.y0 = get_int(need(c, "y0", "contrast"), "contrast.y0");
      r.x1 = get_int(need(c, "x1", "contrast"), "contrast.x1");
      r.y1 = get_int(need(c, "y1", "contrast"), "contrast.y1");
      r.value = get_num(need(c, "value", "contrast"), "contrast.value");
      d.contrast = r;
    }
    const json& tr = need(j, "transducers", "diffusion2d");
    if (!tr.is_array()) throw InvalidSpec("transducers: expected array");
    for (const auto& e : tr) {
      if (!e.is_array() || e.size() != 2) {
        throw InvalidSpec("transducers: expected [fx, fy] pairs");
      }
      d.transducers.push_back(
          {get_num(e[0], "transducer"), get_num(e[1], "transducer")});
    }
    return d;
  }
  if (kind == "graph-laplacian") {
    GraphSpec g;
    g.edges = get_str(need(j, "edges", "graph-laplacian"), "edges");
    g.delta_nodes =
        get_index_array(need(j, "delta_nodes", "graph-laplacian"),
                        "delta_nodes");
    return g;
  }
  if (kind == "diagonal-synthetic") {
    DiagonalSpec d;
    const json& diag = need(j, "diag", "diagonal-synthetic");
    if (!diag.is_array() || diag.empty()) {
      throw InvalidSpec("diag: expected nonempty array");
    }
    d.diag.resize(static_cast<Index>(diag.size()));
    for (std::size_t i = 0; i < diag.size(); ++i) {
      d.diag(static_cast<Index>(i)) = get_num(diag[i], "diag");
    }
    const json& b = need(j, "b", "diagonal-synthetic");
    if (!b.is_array() || b.empty() || !b[0].is_array() || b[0].empty()) {
      throw InvalidSpec("b: expected array of rows");
    }
    d.b.resize(static_cast<Index>(b.size()), static_cast<Index>(b[0].size()));
    for (std::size_t i = 0; i < b.size(); ++i) {
      if (!b[i].is_array() ||
          b[i].size() != static_cast<std::size_t>(d.b.cols())) {
        throw InvalidSpec("b: ragged rows");
      }
      for (std::size_t k = 0; k < b[i].size(); ++k) {
        d.b(static_cast<Index>(i), static_cast<Index>(k)) =
            get_num(b[i][k], "b");
      }
    }
    return d;
  }
  if (kind == "matrix-market") {
    MatrixMarketSpec m;
    m.matrix = get_str(need(j, "matrix", "matrix-market"), "matrix");
    const bool has_file = j.contains("b_file");
    const bool has_nodes = j.contains("delta_nodes");
    if (has_file == has_nodes) {
      throw InvalidSpec(
          "matrix-market: need exactly one of b_file or delta_nodes");
    }
    if (has_file) m.b_file = get_str(j["b_file"], "b_file");
    if (has_nodes) {
      m.delta_nodes = get_index_array(j["delta_nodes"], "delta_nodes");
    }
    return m;
  }
  throw InvalidSpec("problem.kind: unknown kind '" + kind + "'");
}

json parse_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open " + path.string());
  try {
    return json::parse(in);
  } catch (const json::exception& e) {
    throw ParseError(path.string(), e.what());
  }
}

// ---- output writers ----------------------------------------------------

std::string opt_cell(const std::optional<double>& v) {
  return v ? detail::fmt_full(*v) : std::string();
}

void write_csv(const fs::path& path, const std::vector<CsvRow>& rows) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << "phi,param,m,err_gauss,err_radau,err_hat,err_check,bound\n";
  for (const CsvRow& r : rows) {
    out << r.phi_label << "," << r.phi_param << "," << r.m << ","
        << opt_cell(r.err_gauss) << "," << opt_cell(r.err_radau) << ","
        << opt_cell(r.err_hat) << "," << opt_cell(r.err_check) << ","
        << detail::fmt_full(r.bound) << "\n";
  }
  if (!out) throw IoError("failed writing " + path.string());
}

void write_nodes_weights(const fs::path& path, const NodesWeights& nw,
                         Index p) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << "node";
  for (Index i = 0; i < p; ++i) {
    for (Index j = 0; j < p; ++j) {
      out << ",w_" << (i + 1) << "_" << (j + 1);
    }
  }
  out << "\n";
  for (Index k = 0; k < nw.nodes.size(); ++k) {
    out << detail::fmt_full(nw.nodes(k));
    const Mat& w = nw.weights[static_cast<std::size_t>(k)];
    for (Index i = 0; i < p; ++i) {
      for (Index j = 0; j < p; ++j) {
        out << "," << detail::fmt_full(w(i, j));
      }
    }
    out << "\n";
  }
  if (!out) throw IoError("failed writing " + path.string());
}

struct StopWatch {
  std::chrono::steady_clock::time_point start =
      std::chrono::steady_clock::now();
  double lap_ms() {
    const auto now = std::chrono::steady_clock::now();
    const double ms =
        std::chrono::duration<double, std::milli>(now - start).count();
    start = now;
    return ms;
  }
};

const char* problem_kind_name(const ProblemSpec& spec) {
  struct Visitor {
    const char* operator()(const DiffusionSpec&) const { return "diffusion2d"; }
    const char* operator()(const GraphSpec&) const { return "graph-laplacian"; }
    const char* operator()(const DiagonalSpec&) const {
      return "diagonal-synthetic";
    }
    const char* operator()(const MatrixMarketSpec&) const {
      return "matrix-market";
    }
  };
  return std::visit(Visitor{}, spec);
}

}  // namespace

std::string phi_label(const PhiSpec& phi) {
  return phi.kind == PhiSpec::Kind::resolvent ? "resolvent" : "exponential";
}

std::string phi_param(const PhiSpec& phi) {
  if (phi.kind == PhiSpec::Kind::exponential) return detail::fmt_full(phi.t);
  if (phi.s.imag() == 0.0) return detail::fmt_full(phi.s.real());
  char buf[96];
  std::snprintf(buf, sizeof(buf), "%.16e%+.16ei", phi.s.real(), phi.s.imag());
  return buf;
}

Problem build_problem(const ProblemSpec& spec, const fs::path& base_dir) {
  struct Visitor {
    const fs::path& base;

    Problem operator()(const DiffusionSpec& d) const {
      if (d.transducers.empty()) {
        throw InvalidSpec("diffusion2d: need at least one transducer");
      }
      DiffusionProblem dp = gen_diffusion2d(d);
      return {std::move(dp.a), std::move(dp.b)};
    }
    Problem operator()(const GraphSpec& g) const {
      SparseSym a = gen_graph_laplacian(load_edge_list(resolve(g.edges, base)));
      Mat b = delta_block(a.n, g.delta_nodes);
      return {std::move(a), std::move(b)};
    }
    Problem operator()(const DiagonalSpec& d) const {
      if (d.b.rows() != d.diag.size()) {
        throw InvalidSpec("diagonal-synthetic: b rows must match diag length");
      }
      if (d.b.cols() < 1) throw InvalidSpec("diagonal-synthetic: empty block");
      return {diagonal_matrix(d.diag), d.b};
    }
    Problem operator()(const MatrixMarketSpec& m) const {
      SparseSym a = load_matrix_market(resolve(m.matrix, base));
      Mat b;
      if (!m.b_file.empty()) {
        b = load_block(resolve(m.b_file, base));
        if (b.rows() != a.n) {
          throw InvalidSpec("matrix-market: block rows do not match matrix");
        }
      } else {
        b = delta_block(a.n, m.delta_nodes);
      }
      return {std::move(a), std::move(b)};
    }
  };
  return std::visit(Visitor{base_dir}, spec);
}

ProblemSpec load_problem_spec(const fs::path& path) {
  return parse_problem(parse_file(path));
}

RunConfig load_run_config(const fs::path& path) {
  const json j = parse_file(path);
  RunConfig cfg;
  cfg.problem = parse_problem(need(j, "problem", "config"));
  const json& phis = need(j, "phi", "config");
  if (!phis.is_array() || phis.empty()) {
    throw InvalidSpec("config.phi: expected nonempty array");
  }
  for (const auto& e : phis) cfg.phis.push_back(parse_phi(e));
  if (j.contains("m_max")) cfg.m_max = get_int(j["m_max"], "config.m_max");
  if (j.contains("enrich")) cfg.enrich = get_int(j["enrich"], "config.enrich");
  if (j.contains("seed")) {
    const json& s = j["seed"];
    if (!s.is_number_unsigned() && !s.is_number_integer()) {
      throw InvalidSpec("config.seed: expected integer");
    }
    cfg.seed = s.get<std::uint64_t>();
  }
  if (j.contains("reorth")) cfg.reorth = get_bool(j["reorth"], "config.reorth");
  if (j.contains("oracle")) {
    cfg.with_oracle = get_bool(j["oracle"], "config.oracle");
  }
  if (j.contains("nodes_weights_at")) {
    cfg.nodes_weights_at =
        get_index_array(j["nodes_weights_at"], "config.nodes_weights_at");
  }
  if (cfg.m_max < 1) throw InvalidSpec("config.m_max: must be positive");
  if (cfg.enrich < 0) throw InvalidSpec("config.enrich: must be nonnegative");
  cfg.base_dir = path.parent_path();
  if (cfg.base_dir.empty()) cfg.base_dir = ".";
  return cfg;
}

RunResult run_experiment(const RunConfig& cfg, const fs::path& out_dir) {
  StopWatch total;
  StopWatch lap;
  fs::create_directories(out_dir);

  RunResult res;
  Problem prob = build_problem(cfg.problem, cfg.base_dir);
  res.n = prob.a.n;
  res.p = prob.b.cols();
  res.timings_ms["build"] = lap.lap_ms();

  // Orthonormal run basis; a congruence by r0 restores values for the
  // original (possibly non-orthonormal) block.
  Mat q0, r0;
  const Mat gram = prob.b.transpose() * prob.b;
  if ((gram - Mat::Identity(res.p, res.p)).cwiseAbs().maxCoeff() <= 1e-10) {
    q0 = prob.b;
    r0 = Mat::Identity(res.p, res.p);
  } else {
    try {
      QrResult qr = qr_thin(prob.b, 1e-12 * norm_est(prob.a));
      q0 = qr.q;
      r0 = qr.r;
    } catch (const RankDeficient& e) {
      throw Error(std::string("source block is rank deficient (") + e.what() +
                  ")");
    }
  }
  const Mat b_run = cfg.enrich > 0 ? enrich_block(q0, cfg.enrich, cfg.seed)
                                   : q0;
  res.p_run = b_run.cols();

  const Index m_cap = std::max<Index>(res.n / res.p_run, 1);
  res.m_max_used = std::min(cfg.m_max, m_cap);
  res.m_max_clamped = res.m_max_used != cfg.m_max;

  LanczosOptions lopts;
  lopts.m_max = res.m_max_used;
  lopts.reorth = cfg.reorth;
  LanczosResult lan = block_lanczos(prob.a, b_run, lopts);
  if (lan.breakdown_step && *lan.breakdown_step == 1) {
    throw Error("lanczos breakdown at step 1: source block is degenerate");
  }
  res.breakdown_step = lan.breakdown_step;
  res.completed_steps = lan.steps();
  res.op_norm_est = lan.op_norm_est;
  res.timings_ms["lanczos"] = lap.lap_ms();

  const StieltjesParams params = stieltjes_extract(lan.t);
  res.identities = check_identities(lan.t, params);
  res.timings_ms["extract"] = lap.lap_ms();

  // Reference values for the original block.
  std::vector<std::optional<Mat>> f_real(cfg.phis.size());
  std::vector<std::optional<CMat>> f_cplx(cfg.phis.size());
  if (cfg.with_oracle) {
    for (std::size_t i = 0; i < cfg.phis.size(); ++i) {
      if (cfg.phis[i].is_real()) {
        f_real[i] = reference_oracle(prob.a, prob.b, cfg.phis[i]);
      } else {
        f_cplx[i] = reference_oracle_complex(prob.a, prob.b, cfg.phis[i].s);
      }
    }
  }
  res.timings_ms["oracle"] = lap.lap_ms();

  const Index M = res.completed_steps;
  const Index p0 = res.p;
  auto to_reported = [&](const Mat& g) -> Mat {
    return symmetrize(r0.transpose() * g.topLeftCorner(p0, p0) * r0);
  };
  auto to_reported_c = [&](const CMat& g) -> CMat {
    CMat f = r0.transpose() * g.topLeftCorner(p0, p0) * r0;
    return 0.5 * (f + f.transpose().eval());
  };

  for (std::size_t pi = 0; pi < cfg.phis.size(); ++pi) {
    const PhiSpec& phi = cfg.phis[pi];
    const std::string label = phi_label(phi);
    const std::string param = phi_param(phi);
    for (Index m = 1; m + 1 <= M; ++m) {
      const RadauMatrix rd = radau_matrix(lan.t, params, m + 1);
      CsvRow row;
      row.phi_label = label;
      row.phi_param = param;
      row.m = m;
      if (phi.is_real()) {
        const Mat gauss = to_reported(eval_gauss(lan.t, m, phi));
        const Mat radau = to_reported(eval_radau(rd, phi));
        row.bound = norm2(radau - gauss);
        std::optional<Mat> hat, check;
        if (phi.kind == PhiSpec::Kind::resolvent) {
          ExtrapolationSet ex = extrapolate(gauss, radau);
          hat = ex.hat;
          check = ex.check;
        } else {
          hat = symmetrize(0.5 * (gauss + radau));
        }
        if (f_real[pi]) {
          const Mat& f = *f_real[pi];
          row.err_gauss = norm2(f - gauss);
          row.err_radau = norm2(f - radau);
          if (hat) row.err_hat = norm2(f - *hat);
          if (check) row.err_check = norm2(f - *check);
        }
      } else {
        const CMat gauss = to_reported_c(eval_gauss_complex(lan.t, m, phi.s));
        const CMat radau = to_reported_c(eval_radau_complex(rd, phi.s));
        row.bound = norm2(CMat(radau - gauss));
        const CMat hat = 0.5 * (gauss + radau);
        if (f_cplx[pi]) {
          const CMat& f = *f_cplx[pi];
          row.err_gauss = norm2(CMat(f - gauss));
          row.err_radau = norm2(CMat(f - radau));
          row.err_hat = norm2(CMat(f - hat));
        }
      }
      res.rows.push_back(std::move(row));
    }
  }
  res.timings_ms["evaluate"] = lap.lap_ms();

  for (Index k : cfg.nodes_weights_at) {
    if (k < 1 || k > M) {
      throw InvalidSpec("nodes_weights_at: step " + std::to_string(k) +
                        " outside completed range");
    }
    char name[48];
    std::snprintf(name, sizeof(name), "nodes_weights_m%lld.csv",
                  static_cast<long long>(k));
    write_nodes_weights(out_dir / name, nodes_weights(lan.t, k), res.p_run);
  }

  res.csv_path = out_dir / "convergence.csv";
  write_csv(res.csv_path, res.rows);

  json summary;
  summary["problem"] = {{"kind", problem_kind_name(cfg.problem)},
                        {"n", res.n},
                        {"p", res.p},
                        {"p_run", res.p_run}};
  summary["run"] = {{"m_max_requested", cfg.m_max},
                    {"m_max_used", res.m_max_used},
                    {"clamped", res.m_max_clamped},
                    {"enrich", cfg.enrich},
                    {"seed", cfg.seed},
                    {"reorth", cfg.reorth},
                    {"oracle", cfg.with_oracle}};
  summary["lanczos"] = {
      {"completed_steps", res.completed_steps},
      {"breakdown_step",
       res.breakdown_step ? json(*res.breakdown_step) : json(nullptr)},
      {"op_norm_est", res.op_norm_est},
      // Work bookkeeping: one operator application per step on a block of
      // p_run columns.
      {"matvec_columns", res.completed_steps * res.p_run}};
  summary["identities"] = {{"gauss_zero_rel", res.identities.gauss_zero_rel},
                           {"residue_rel", res.identities.residue_rel},
                           {"residue_raw_rel", res.identities.residue_raw_rel}};
  json phis = json::array();
  for (const PhiSpec& phi : cfg.phis) {
    phis.push_back({{"kind", phi_label(phi)}, {"param", phi_param(phi)}});
  }
  summary["phi"] = phis;
  res.timings_ms["total"] = total.lap_ms();
  summary["timings_ms"] = res.timings_ms;

  res.summary_path = out_dir / "summary.json";
  std::ofstream sout(res.summary_path);
  if (!sout) throw IoError("cannot write " + res.summary_path.string());
  sout << summary.dump(2) << "\n";
  if (!sout) throw IoError("failed writing " + res.summary_path.string());
  return res;
}

void gen_problem(const ProblemSpec& spec, const fs::path& out_dir,
                 const fs::path& base_dir) {
  Problem prob = build_problem(spec, base_dir);
  fs::create_directories(out_dir);
  save_matrix_market(out_dir / "A.mtx", prob.a);
  save_block(out_dir / "B.txt", prob.b);
}

}  // namespace blockquad
