#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "hamcert/errors.hpp"
#include "hamcert/hypothesis.hpp"
#include "hamcert/kernel.hpp"
#include "hamcert/nonlinearity.hpp"

namespace hamcert {

// One problem description, read from a line-based `key = value` text file.
struct ProblemConfig {
  // kernel: either a builtin id or explicit piece polynomials.
  std::string kernel_builtin;
  struct ExplicitKernel {
    int m = 0;
    Rational T = 1;
    // Per order: monomial triples for the two regions; empty optional means
    // "derive from the previous order".
    std::vector<std::optional<std::vector<std::tuple<int, int, Rational>>>> upper, lower;
  };
  std::optional<ExplicitKernel> kernel_explicit;

  std::vector<ConeDecl> cone;

  std::string f_builtin;
  std::string f_expr;
  std::optional<double> f0;    // declared limits override builtin ones when set
  std::optional<double> finf;

  std::vector<double> lambdas;
  int grid_nodes = 200;
  int grid_panels = 50;
  double tol = 1e-12;
  double theta = 1.0;
  int max_iter = 500;
  std::string u0_expr = "0";

  HypothesisOptions hypothesis;

  double rho_min = 1e-8, rho_max = 1e2;
  int rho_count = 96;

  std::string report_path;
  std::string csv_path;
  std::string solution_path;
  bool plots = false;
  unsigned long long seed = 42;
};

// Throws ConfigError (with line/field context) on malformed or invalid input.
ProblemConfig load_config(const std::string& path);
ProblemConfig parse_config_text(const std::string& text, const std::string& origin = "<memory>");

KernelSurface build_kernel(const ProblemConfig& config);
NonlinearitySpec build_nonlinearity(const ProblemConfig& config, int m);

}  // namespace hamcert
