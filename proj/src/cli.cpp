#include "hamcert/cli.hpp"

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <optional>

#include "hamcert/config.hpp"
#include "hamcert/report.hpp"

namespace hamcert {

namespace {

struct GlobalFlags {
  std::string report_path;
  bool plots = false;
  long long seed = -1;
  int grid = 0;
};

void apply_overrides(ProblemConfig& cfg, const GlobalFlags& flags) {
  if (!flags.report_path.empty()) cfg.report_path = flags.report_path;
  if (flags.plots) cfg.plots = true;
  if (flags.seed >= 0) cfg.seed = static_cast<unsigned long long>(flags.seed);
  if (flags.grid > 0) {
    cfg.grid_nodes = flags.grid;
    if (cfg.grid_nodes % cfg.grid_panels != 0) cfg.grid_panels = std::max(1, cfg.grid_nodes / 4);
    if (cfg.grid_nodes % cfg.grid_panels != 0)
      throw ConfigError("--grid must be divisible into panels of 4");
  }
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write output file '" + path + "'");
  return out;
}

int cmd_certify(const std::string& cfg_path, const GlobalFlags& flags) {
  ProblemConfig cfg = load_config(cfg_path);
  apply_overrides(cfg, flags);

  KernelSurface K = build_kernel(cfg);
  NonlinearitySpec f = build_nonlinearity(cfg, K.max_order());

  CertifyArtifacts art;
  art.report = classify(K, cfg.cone, cfg.hypothesis);
  for (const std::string& warning :
       limit_consistency_warnings(f, K.domain_length(), cfg.seed))
    art.report.notes.push_back("warning: " + warning);

  CertificateOptions copt;
  copt.sampling.seed = cfg.seed;
  art.certificate = build_certificate(K, art.report, f, copt);
  art.best_c1 = best_lambda_window_C1(art.certificate, art.report, f, copt.sampling);

  std::vector<double> rho_grid = default_rho_grid(cfg.rho_min, cfg.rho_max, cfg.rho_count);
  art.lambdas = cfg.lambdas;
  for (double lambda : cfg.lambdas)
    art.per_lambda.push_back(
        multiplicity_search(art.certificate, art.report, f, lambda, rho_grid, copt.sampling));

  std::string name = !cfg.kernel_builtin.empty() ? cfg.kernel_builtin : "explicit kernel";
  name += " / " + f.name;
  if (cfg.report_path.empty()) {
    write_certify_report(std::cout, name, art);
  } else {
    auto out = open_out(cfg.report_path);
    write_certify_report(out, name, art);
  }
  if (!cfg.csv_path.empty()) {
    auto out = open_out(cfg.csv_path);
    write_condition_csv(out, art);
  }

  bool any_window = !art.certificate.existence.empty || !art.best_c1.empty;
  for (const auto& mr : art.per_lambda)
    for (const auto& rec : mr.records) any_window = any_window || !rec.window.empty;
  if (!any_window) {
    std::cerr << "certify: empty certificate (no lambda window established)\n";
    return 2;
  }
  return 0;
}

int cmd_solve(const std::string& cfg_path, std::optional<double> lambda_flag,
              const GlobalFlags& flags) {
  ProblemConfig cfg = load_config(cfg_path);
  apply_overrides(cfg, flags);

  double lambda = 0.0;
  if (lambda_flag) {
    lambda = *lambda_flag;
  } else if (!cfg.lambdas.empty()) {
    lambda = cfg.lambdas.front();
  }
  if (!(lambda > 0.0)) throw ConfigError("solve needs a positive lambda (--lambda)");

  KernelSurface K = build_kernel(cfg);
  NonlinearitySpec f = build_nonlinearity(cfg, K.max_order());

  Grid grid = make_grid(cfg.grid_nodes, cfg.grid_panels, K.domain_length());
  DiscreteOperator op(K, grid);

  ExpressionTree u0_tree = parse_expression(cfg.u0_expr, {"t"});
  std::vector<std::vector<double>> u0(K.max_order() + 1,
                                      std::vector<double>(grid.size(), 0.0));
  for (int p = 0; p < grid.size(); ++p) {
    std::vector<double> args = {grid.nodes[p]};
    u0[0][p] = u0_tree.evaluate(args);
  }

  PicardOutcome outcome = picard_solve(op, f, lambda, u0, cfg.theta, cfg.tol, cfg.max_iter);

  SolveSummary summary;
  summary.lambda = lambda;
  if (std::holds_alternative<DivergenceReport>(outcome)) {
    const auto& div = std::get<DivergenceReport>(outcome);
    summary.converged = false;
    summary.iterations = div.iterations;
    summary.divergence_reason = div.reason;
    summary.history = div.history;
    if (cfg.report_path.empty()) {
      write_solve_summary(std::cout, summary);
    } else {
      auto out = open_out(cfg.report_path);
      write_solve_summary(out, summary);
    }
    std::cerr << "solve: divergence (" << div.reason << ")\n";
    return 3;
  }

  const Solution& sol = std::get<Solution>(outcome);
  HypothesisReport rep = classify(K, cfg.cone, cfg.hypothesis);
  ConeSpec cone = ConeSpec::from_report(rep);

  summary.converged = true;
  summary.iterations = sol.iterations;
  summary.residual = sol.residual_norm;
  for (const auto& row : sol.U)
    for (double v : row) summary.max_abs_u = std::max(summary.max_abs_u, std::abs(v));
  summary.trivial = summary.max_abs_u < 1e-8;
  summary.cone = cone_check(op, sol, cone);

  if (!cfg.solution_path.empty()) {
    auto out = open_out(cfg.solution_path);
    write_solution_csv(out, sol);
  }
  if (cfg.plots) {
    std::string svg_path =
        cfg.solution_path.empty() ? "solution.svg" : cfg.solution_path + ".svg";
    auto out = open_out(svg_path);
    write_solution_svg(out, sol);
  }
  if (cfg.report_path.empty()) {
    write_solve_summary(std::cout, summary);
  } else {
    auto out = open_out(cfg.report_path);
    write_solve_summary(out, summary);
  }
  return 0;
}

int cmd_signs(int n, int density, const GlobalFlags& flags) {
  SignPatternReport report = verify_sign_pattern(n, density);
  if (flags.report_path.empty()) {
    write_sign_pattern_report(std::cout, report);
  } else {
    auto out = open_out(flags.report_path);
    write_sign_pattern_report(out, report);
  }
  return 0;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"hamcert: cone fixed-point certificates and solves for Hammerstein integral "
               "equations"};
  app.require_subcommand(1);

  GlobalFlags flags;
  app.add_option("--report", flags.report_path, "write the report to this path");
  app.add_flag("--plots", flags.plots, "emit SVG plots next to solution output");
  app.add_option("--seed", flags.seed, "sampling seed override");
  app.add_option("--grid", flags.grid, "solver grid node count override");

  std::string certify_cfg, solve_cfg;
  auto* certify = app.add_subcommand("certify", "hypothesis checks, constants, lambda windows");
  certify->add_option("config", certify_cfg, "problem config file")->required();

  double lambda = 0.0;
  auto* solve = app.add_subcommand("solve", "discretize and run the damped Picard iteration");
  solve->add_option("config", solve_cfg, "problem config file")->required();
  auto* lambda_opt =
      solve->add_option("--lambda", lambda, "parameter value (overrides the config list)");

  int n = 0, density = 41;
  auto* signs = app.add_subcommand("signs", "mod-4 sign-pattern table for the 2n-order family");
  signs->add_option("--n", n, "family index n >= 2")->required();
  signs->add_option("--density", density, "grid density per axis");

  try {
    app.parse(argc, argv);
    if (certify->parsed()) return cmd_certify(certify_cfg, flags);
    if (solve->parsed())
      return cmd_solve(solve_cfg,
                       lambda_opt->count() > 0 ? std::optional<double>(lambda) : std::nullopt,
                       flags);
    if (signs->parsed()) return cmd_signs(n, density, flags);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : 1;
  } catch (const ConfigError& e) {
    std::cerr << e.what() << "\n";
    return 1;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace hamcert
