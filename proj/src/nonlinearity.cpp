#include "hamcert/nonlinearity.hpp"

#include <cassert>
#include <cmath>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>

#include "hamcert/quadrature.hpp"

namespace hamcert {

double evaluate(const NonlinearitySpec& spec, double t, std::span<const double> x) {
  if (static_cast<int>(x.size()) != spec.state_arity)
    throw std::invalid_argument("evaluate: state vector arity mismatch");
  double v = spec.eval_fn(t, x);
  assert(v >= 0.0 && "nonlinearity must map into [0, inf)");
  return v;
}

NonlinearitySpec nonlinearity_from_expr(const std::string& text, int m, double f0, double finf) {
  std::vector<std::string> vars;
  vars.push_back("t");
  for (int i = 0; i <= m; ++i) vars.push_back("x" + std::to_string(i));
  ExpressionTree tree = parse_expression(text, vars);

  NonlinearitySpec spec;
  spec.state_arity = m + 1;
  spec.expr = tree;
  spec.name = tree.print();
  spec.f0 = f0;
  spec.finf = finf;
  spec.eval_fn = [tree](double t, std::span<const double> x) {
    std::vector<double> args;
    args.reserve(x.size() + 1);
    args.push_back(t);
    args.insert(args.end(), x.begin(), x.end());
    return tree.evaluate(args);
  };
  return spec;
}

bool is_builtin_nonlinearity(const std::string& id) {
  return id == "example1_f" || id == "example2_f";
}

NonlinearitySpec builtin_nonlinearity(const std::string& id) {
  const double inf = std::numeric_limits<double>::infinity();
  if (id == "example1_f") {
    // e^t (|x0| + |x1| + |x2|) / (1 + x0^2)
    NonlinearitySpec spec =
        nonlinearity_from_expr("exp(t)*(abs(x0)+abs(x1)+abs(x2))/(1+x0^2)", 2, 1.0, 0.0);
    spec.name = "example1_f";
    // f vanishes on the zero state, so every inf box containing it gives 0.
    spec.frho_inf_closed = [](double, const InfBox&) { return 0.0; };
    return spec;
  }
  if (id == "example2_f") {
    // t (e^{x0} + x1^2 + x2^2 + x3^2)
    NonlinearitySpec spec =
        nonlinearity_from_expr("t*(exp(x0)+x1^2+x2^2+x3^2)", 3, 0.0, inf);
    spec.name = "example2_f";
    spec.frho_sup_closed = [](double rho) { return (std::exp(rho) + 3.0 * rho * rho) / rho; };
    spec.frho_inf_closed = [](double rho, const InfBox& box) { return box.t_lo / rho; };
    return spec;
  }
  throw std::invalid_argument("unknown nonlinearity id: " + id);
}

LimitBand probe_limits(const NonlinearitySpec& spec, LimitDirection direction, int ray_count,
                       const std::vector<double>& magnitudes, double T,
                       unsigned long long seed) {
  if (ray_count < 8) throw std::invalid_argument("probe_limits: ray_count must be >= 8");
  if (magnitudes.empty()) throw std::invalid_argument("probe_limits: need magnitudes");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.5, 1.0);

  const int t_samples = 33;
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();

  std::vector<double> x(spec.state_arity);
  for (int ray = 0; ray < ray_count; ++ray) {
    std::vector<double> dir(spec.state_arity);
    for (double& d : dir) d = unit(rng);
    for (double mag : magnitudes) {
      double denom = 0.0;
      for (int j = 0; j < spec.state_arity; ++j) {
        x[j] = mag * dir[j];
        denom += std::abs(x[j]);
      }
      if (denom == 0.0) continue;
      double extremal = direction == LimitDirection::Zero
                            ? std::numeric_limits<double>::infinity()
                            : -std::numeric_limits<double>::infinity();
      for (int k = 0; k < t_samples; ++k) {
        double t = T * k / (t_samples - 1);
        double ratio = evaluate(spec, t, x) / denom;
        extremal = direction == LimitDirection::Zero ? std::min(extremal, ratio)
                                                     : std::max(extremal, ratio);
      }
      lo = std::min(lo, extremal);
      hi = std::max(hi, extremal);
    }
  }
  return {lo, hi};
}

std::vector<std::string> limit_consistency_warnings(const NonlinearitySpec& spec, double T,
                                                    unsigned long long seed) {
  std::vector<std::string> warnings;
  auto against = [&](const char* name, double declared, const LimitBand& band) {
    std::ostringstream os;
    os.precision(6);
    if (std::isinf(declared)) {
      if (std::isfinite(band.hi) && band.hi < 10.0) {
        os << name << " declared infinite but ray probes stay near [" << band.lo << ", "
           << band.hi << "]";
        warnings.push_back(os.str());
      }
    } else if (declared == 0.0) {
      if (band.lo > 0.1) {
        os << name << " declared 0 but ray probes stay above " << band.lo;
        warnings.push_back(os.str());
      }
    } else if (std::isfinite(band.lo) && std::isfinite(band.hi) &&
               (declared < band.lo / 10.0 || declared > band.hi * 10.0)) {
      os << name << " = " << declared << " is an order of magnitude away from the probe band ["
         << band.lo << ", " << band.hi << "]";
      warnings.push_back(os.str());
    }
  };
  against("f_0", spec.f0, probe_limits(spec, LimitDirection::Zero, 16, {1e-3, 1e-5}, T, seed));
  against("f^inf", spec.finf,
          probe_limits(spec, LimitDirection::Infinity, 16, {1e3, 1e5}, T, seed));
  return warnings;
}

double phi_r_estimate(const NonlinearitySpec& spec, double r, double t, int samples) {
  if (spec.phi_r_rule) {
    std::vector<double> args = {t, r};
    return spec.phi_r_rule->evaluate(args);
  }
  auto pts = halton_points(samples, spec.state_arity);
  std::vector<double> x(spec.state_arity);
  double best = 0.0;
  for (const auto& p : pts) {
    for (int j = 0; j < spec.state_arity; ++j) x[j] = r * (2.0 * p[j] - 1.0);
    best = std::max(best, evaluate(spec, t, x));
  }
  return 1.1 * best;
}

}  // namespace hamcert
