#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gelfand/analysis.hpp"
#include "gelfand/errors.hpp"
#include "gelfand/geometry.hpp"
#include "gelfand/nonlinearity.hpp"
#include "gelfand/solver.hpp"
#include "gelfand/stability.hpp"

namespace {

using json = nlohmann::json;
using namespace gelfand;

constexpr int kExitOk = 0;
constexpr int kExitSolver = 2;
constexpr int kExitConfig = 3;
constexpr int kExitHypothesis = 4;

std::string fmt9(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.9g", v);
  return buf;
}

struct RunConfig {
  std::string model = "hyperbolic";
  int n = 10;
  double R = 1.0;
  std::string f = "exp-model";
  double m = 0.0; // 0 means unset
  int N = 1024;
  std::vector<int> ladder;
  double newton_tol = 1e-10;
  double eig_tol = 1e-10;
  double step0 = 0.0; // 0 means default 0.05 n
  unsigned long long seed = 0;
  int trials = 200;
  int jobs = 1;
  bool skip_lambda1 = false;
  std::string out;
  std::string branch_csv;
};

// --config JSON file provides defaults; command-line flags override
void apply_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream is(path);
  if (!is) throw DomainError("cannot open config file: " + path);
  json j = json::parse(is);
  if (j.contains("model")) cfg.model = j["model"].get<std::string>();
  if (j.contains("n")) cfg.n = j["n"].get<int>();
  if (j.contains("R")) cfg.R = j["R"].get<double>();
  if (j.contains("f")) cfg.f = j["f"].get<std::string>();
  if (j.contains("m")) cfg.m = j["m"].get<double>();
  if (j.contains("N")) cfg.N = j["N"].get<int>();
  if (j.contains("ladder")) cfg.ladder = j["ladder"].get<std::vector<int>>();
  if (j.contains("newton_tol")) cfg.newton_tol = j["newton_tol"].get<double>();
  if (j.contains("eig_tol")) cfg.eig_tol = j["eig_tol"].get<double>();
  if (j.contains("step0")) cfg.step0 = j["step0"].get<double>();
  if (j.contains("seed")) cfg.seed = j["seed"].get<unsigned long long>();
  if (j.contains("trials")) cfg.trials = j["trials"].get<int>();
  if (j.contains("jobs")) cfg.jobs = j["jobs"].get<int>();
  if (j.contains("out")) cfg.out = j["out"].get<std::string>();
  if (j.contains("branch_csv")) cfg.branch_csv = j["branch_csv"].get<std::string>();
}

SpaceForm parse_model(const std::string& s) {
  if (s == "euclidean") return SpaceForm::Euclidean;
  if (s == "hyperbolic") return SpaceForm::Hyperbolic;
  if (s == "elliptic") return SpaceForm::Elliptic;
  throw DomainError("unknown model kind: " + s + " (euclidean|hyperbolic|elliptic)");
}

Nonlinearity parse_nonlinearity(const RiemannianModel& model, const RunConfig& cfg) {
  if (cfg.f == "exp-model") return make_exp_model(model);
  if (cfg.f == "power-model") {
    if (cfg.m <= 0) throw DomainError("power-model requires --m");
    return make_power_model(model, cfg.m);
  }
  if (cfg.f == "gelfand") return make_gelfand_classic();
  if (cfg.f == "power-classic") {
    if (cfg.m <= 0) throw DomainError("power-classic requires --m");
    return make_power_classic(cfg.m);
  }
  throw DomainError("unknown nonlinearity: " + cfg.f +
                    " (exp-model|power-model|gelfand|power-classic)");
}

void write_output(const RunConfig& cfg, const std::string& text) {
  if (cfg.out.empty()) {
    std::cout << text;
  } else {
    std::ofstream os(cfg.out, std::ios::binary);
    if (!os) throw DomainError("cannot open output file: " + cfg.out);
    os << text;
  }
}

// elliptic branch configs are restricted to the theory radius R < R0
void check_elliptic_branch_range(const RiemannianModel& model) {
  if (model.kind != SpaceForm::Elliptic) return;
  double r0 = critical_radii(model).r0;
  if (!(model.radius < r0))
    throw DomainError("elliptic branch runs require R < R0=" + std::to_string(r0));
}

int cmd_branch(const RunConfig& cfg) {
  RiemannianModel model = make_space_form(parse_model(cfg.model), cfg.n, cfg.R);
  check_elliptic_branch_range(model);
  Nonlinearity nl = parse_nonlinearity(model, cfg);
  RadialMesh mesh = RadialMesh::uniform(cfg.R, cfg.N);
  ContinuationOptions opts;
  opts.newton_tol = cfg.newton_tol;
  opts.eig_tol = cfg.eig_tol;
  opts.compute_lambda1 = !cfg.skip_lambda1;
  if (cfg.step0 > 0) opts.lambda_step0 = cfg.step0;
  Branch br = continue_branch(model, mesh, nl, opts);
  if (br.points.empty()) {
    std::cerr << "ERROR:" << kExitSolver << ":no convergence at the very first step\n";
    return kExitSolver;
  }
  write_output(cfg, branch_csv(br));
  return kExitOk;
}

int cmd_verify_extremal(const RunConfig& cfg) {
  RiemannianModel model = make_space_form(parse_model(cfg.model), cfg.n, cfg.R);
  Nonlinearity nl = parse_nonlinearity(model, cfg);
  std::vector<int> ladder = cfg.ladder;
  if (ladder.empty()) ladder = {512, 1024, 2048, 4096};
  ContinuationOptions opts = make_verify_options();
  opts.newton_tol = cfg.newton_tol;
  opts.eig_tol = cfg.eig_tol;
  if (cfg.step0 > 0) opts.lambda_step0 = cfg.step0;

  ExtremalReport rep;
  bool lambda_ok = true;
  try {
    rep = verify_extremal(model, nl, ladder, opts, cfg.jobs);
  } catch (const ReportFailure& rf) {
    rep = rf.report;
    lambda_ok = false;
  }
  write_output(cfg, to_json(rep));
  // residual-decrease criterion: observed order >= 1 across the ladder
  bool residual_ok = true;
  if (rep.weak_residual_ladder.size() >= 2) {
    double h0 = 1.0 / (rep.ladder.front() + 0.5);
    double h1 = 1.0 / (rep.ladder.back() + 0.5);
    double order = (std::log(rep.weak_residual_ladder.front()) -
                    std::log(rep.weak_residual_ladder.back())) /
                   (std::log(h0) - std::log(h1));
    residual_ok = order >= 1.0;
  }
  if (!lambda_ok) {
    std::cerr << "ERROR:" << kExitSolver << ":lambda* estimate outside the 2% band ("
              << fmt9(rep.lambda_star_numeric) << " vs " << fmt9(rep.lambda_star_closed)
              << ")\n";
    return kExitSolver;
  }
  if (!residual_ok) {
    std::cerr << "ERROR:" << kExitSolver
              << ":weak residual of the closed form does not decrease at order >= 1\n";
    return kExitSolver;
  }
  return kExitOk;
}

int cmd_stability(const RunConfig& cfg) {
  if (cfg.branch_csv.empty()) throw DomainError("stability requires --branch-csv");
  std::ifstream is(cfg.branch_csv);
  if (!is) throw DomainError("cannot open branch csv: " + cfg.branch_csv);
  BranchCsv data = parse_branch_csv(is);
  if (data.rows.empty()) throw DomainError("branch csv has no rows");

  RiemannianModel model = make_space_form(parse_model(cfg.model), cfg.n, cfg.R);
  Nonlinearity nl = parse_nonlinearity(model, cfg);
  RadialMesh mesh = RadialMesh::uniform(cfg.R, cfg.N);
  DiscreteOperator op = assemble_laplacian(model, mesh);

  std::vector<double> u(mesh.n_points, 0.0);
  std::ostringstream os;
  os << "lambda,sup_u,l1_norm,lambda1,newton_iters\n";
  NewtonOptions nopts;
  nopts.tol = cfg.newton_tol;
  nopts.max_iter = 60;
  nopts.sup_guard = nl.sup_guard;
  for (const auto& row : data.rows) {
    bool solved = false;
    try {
      u = newton_solve(op, nl, row.lambda, u, nopts);
      solved = true;
    } catch (const std::exception&) {
      // near-vertical tail rows: re-anchor on the recorded height instead
      double lam = row.lambda;
      if (solve_at_height(op, nl, u, lam, row.sup_u, cfg.newton_tol, nl.sup_guard))
        solved = true;
    }
    if (!solved) {
      std::cerr << "ERROR:" << kExitSolver << ":could not re-solve branch row at lambda="
                << fmt9(row.lambda) << "\n";
      return kExitSolver;
    }
    EigenPair pair = principal_eigenvalue(model, mesh, nl, row.lambda, u, cfg.eig_tol);
    os << fmt9(row.lambda) << ',' << fmt9(row.sup_u) << ',' << fmt9(row.l1_norm) << ','
       << fmt9(pair.lambda1) << ',' << row.newton_iters << '\n';
  }
  os << "# lambda_star_estimate=" << fmt9(data.lambda_star_estimate) << '\n';
  write_output(cfg, os.str());
  return kExitOk;
}

int cmd_hardy(const RunConfig& cfg) {
  RiemannianModel model = make_space_form(parse_model(cfg.model), cfg.n, cfg.R);
  HardyReport rep = hardy_verify(model, cfg.trials, cfg.seed, cfg.N);
  std::ostringstream line;
  line << "H=" << fmt9(rep.h_constant) << " worst_margin=" << fmt9(rep.worst_margin) << "\n";
  std::cout << line.str();
  if (!cfg.out.empty()) {
    json j = {{"h_constant", rep.h_constant},
              {"worst_margin", rep.worst_margin},
              {"worst_margin_rel", rep.worst_margin_rel},
              {"worst_poincare_margin", rep.worst_poincare_margin},
              {"worst_poincare_rel", rep.worst_poincare_rel},
              {"trials", rep.trials}};
    std::ofstream os(cfg.out, std::ios::binary);
    if (!os) throw DomainError("cannot open output file: " + cfg.out);
    os << j.dump(2) << "\n";
  }
  return rep.worst_margin_rel >= -1e-8 ? kExitOk : kExitSolver;
}

int cmd_exponents(const RunConfig& cfg) {
  std::optional<double> m;
  if (cfg.m > 0) m = cfg.m;
  RegularityExponents e = regularity_exponents(cfg.n, m);
  std::ostringstream os;
  os << "p0=" << fmt9(e.p0) << " p1=" << fmt9(e.p1);
  if (m) os << " N_m=" << fmt9(e.n_m);
  os << "\n";
  write_output(cfg, os.str());
  return kExitOk;
}

void add_common(CLI::App* sub, RunConfig& cfg, std::string* config_path) {
  sub->add_option("--config", *config_path, "JSON config file (flags override it)");
  sub->add_option("--model", cfg.model, "euclidean|hyperbolic|elliptic");
  sub->add_option("--n", cfg.n, "dimension");
  sub->add_option("--R", cfg.R, "geodesic ball radius");
  sub->add_option("--f", cfg.f, "exp-model|power-model|gelfand|power-classic");
  sub->add_option("--m", cfg.m, "power exponent");
  sub->add_option("--N", cfg.N, "interior mesh points");
  sub->add_option("--newton-tol", cfg.newton_tol, "newton residual tolerance");
  sub->add_option("--eig-tol", cfg.eig_tol, "eigenvalue tolerance");
  sub->add_option("--step0", cfg.step0, "initial lambda step");
  sub->add_option("--seed", cfg.seed, "seed for randomized checks");
  sub->add_option("--jobs", cfg.jobs, "parallel ladder jobs");
  sub->add_option("--out", cfg.out, "output file (default stdout)");
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"radial semilinear elliptic problems on Riemannian models"};
  app.require_subcommand(1);

  RunConfig cfg;
  std::string config_path;
  std::string ladder_str;

  auto* branch = app.add_subcommand("branch", "trace the minimal branch to the fold");
  add_common(branch, cfg, &config_path);
  branch->add_flag("--skip-lambda1", cfg.skip_lambda1, "leave the lambda1 column as nan");

  auto* verify = app.add_subcommand("verify-extremal", "compare lambda* against the closed form");
  add_common(verify, cfg, &config_path);
  verify->add_option("--ladder", ladder_str, "comma-separated mesh ladder (default 512,1024,2048,4096)");

  auto* stability = app.add_subcommand("stability", "recompute lambda1 along a branch csv");
  add_common(stability, cfg, &config_path);
  stability->add_option("--branch-csv", cfg.branch_csv, "branch csv produced by `branch`");

  auto* hardy = app.add_subcommand("hardy", "test the improved weighted Hardy inequality");
  add_common(hardy, cfg, &config_path);
  hardy->add_option("--trials", cfg.trials, "number of random test functions");

  auto* exponents = app.add_subcommand("exponents", "critical regularity exponents");
  add_common(exponents, cfg, &config_path);

  // pre-scan for --config so that file values act as defaults under the flags
  for (int i = 1; i + 1 < argc; ++i) {
    if (std::string(argv[i]) == "--config") {
      try {
        apply_config_file(cfg, argv[i + 1]);
      } catch (const std::exception& e) {
        std::cerr << "ERROR:" << kExitConfig << ":" << e.what() << "\n";
        return kExitConfig;
      }
      break;
    }
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e); // --help
    std::cerr << "ERROR:" << kExitConfig << ":" << e.what() << "\n";
    return kExitConfig;
  }

  if (!ladder_str.empty()) {
    cfg.ladder.clear();
    std::stringstream ss(ladder_str);
    std::string tok;
    while (std::getline(ss, tok, ',')) cfg.ladder.push_back(std::atoi(tok.c_str()));
  }

  try {
    if (*branch) return cmd_branch(cfg);
    if (*verify) return cmd_verify_extremal(cfg);
    if (*stability) return cmd_stability(cfg);
    if (*hardy) return cmd_hardy(cfg);
    if (*exponents) return cmd_exponents(cfg);
  } catch (const HypothesisError& e) {
    std::cerr << "ERROR:" << kExitHypothesis << ":" << e.what() << "\n";
    return kExitHypothesis;
  } catch (const NoConvergence& e) {
    std::cerr << "ERROR:" << kExitSolver << ":" << e.what() << "\n";
    return kExitSolver;
  } catch (const SingularJacobian& e) {
    std::cerr << "ERROR:" << kExitSolver << ":" << e.what() << "\n";
    return kExitSolver;
  } catch (const ReportFailure& e) {
    std::cerr << "ERROR:" << kExitSolver << ":" << e.what() << "\n";
    return kExitSolver;
  } catch (const std::exception& e) {
    std::cerr << "ERROR:" << kExitConfig << ":" << e.what() << "\n";
    return kExitConfig;
  }
  return kExitConfig;
}
