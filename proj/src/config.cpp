#include "hamcert/config.hpp"

#include <fstream>
#include <limits>
#include <set>
#include <sstream>

namespace hamcert {

namespace {

struct RawEntry {
  std::string value;
  int line = 0;
};

using RawMap = std::map<std::string, RawEntry>;

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

RawMap tokenize(const std::string& text) {
  RawMap map;
  std::istringstream in(text);
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos) throw ConfigError("expected 'key = value'", line_no);
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("empty key", line_no);
    if (map.count(key)) throw ConfigError("duplicate key '" + key + "'", line_no, key);
    map[key] = {value, line_no};
  }
  return map;
}

class Reader {
 public:
  explicit Reader(RawMap map) : map_(std::move(map)) {}

  bool has(const std::string& key) const { return map_.count(key) > 0; }

  std::string str(const std::string& key, const std::string& fallback = "") {
    auto it = map_.find(key);
    if (it == map_.end()) return fallback;
    used_.insert(key);
    return it->second.value;
  }

  double num(const std::string& key, double fallback) {
    auto it = map_.find(key);
    if (it == map_.end()) return fallback;
    used_.insert(key);
    return parse_num(it->second);
  }

  double required_num(const std::string& key) {
    auto it = map_.find(key);
    if (it == map_.end()) throw ConfigError("missing required key", 0, key);
    used_.insert(key);
    return parse_num(it->second);
  }

  int integer(const std::string& key, int fallback) {
    double v = num(key, fallback);
    return static_cast<int>(v);
  }

  bool flag(const std::string& key, bool fallback) {
    auto it = map_.find(key);
    if (it == map_.end()) return fallback;
    used_.insert(key);
    const std::string& v = it->second.value;
    if (v == "true" || v == "1" || v == "yes") return true;
    if (v == "false" || v == "0" || v == "no") return false;
    throw ConfigError("expected a boolean", it->second.line, key);
  }

  int line_of(const std::string& key) const {
    auto it = map_.find(key);
    return it == map_.end() ? 0 : it->second.line;
  }

  std::vector<std::string> keys_with_prefix(const std::string& prefix) const {
    std::vector<std::string> out;
    for (const auto& [k, v] : map_)
      if (k.rfind(prefix, 0) == 0) out.push_back(k);
    return out;
  }

  void check_all_used() const {
    for (const auto& [k, v] : map_)
      if (!used_.count(k)) throw ConfigError("unknown key '" + k + "'", v.line, k);
  }

  void mark_used(const std::string& key) { used_.insert(key); }

 private:
  double parse_num(const RawEntry& entry) {
    try {
      return to_double(parse_rational(entry.value));
    } catch (const std::exception&) {
      throw ConfigError("expected a number, got '" + entry.value + "'", entry.line);
    }
  }

  RawMap map_;
  std::set<std::string> used_;
};

std::vector<std::tuple<int, int, Rational>> parse_triples(const std::string& text, int line) {
  std::vector<std::tuple<int, int, Rational>> triples;
  std::string v = trim(text);
  if (v == "0" || v.empty()) return triples;  // zero polynomial
  std::size_t pos = 0;
  while (pos < v.size()) {
    while (pos < v.size() && (std::isspace(static_cast<unsigned char>(v[pos])) || v[pos] == ','))
      ++pos;
    if (pos >= v.size()) break;
    if (v[pos] != '(') throw ConfigError("expected '(' in monomial triple list", line);
    auto close = v.find(')', pos);
    if (close == std::string::npos) throw ConfigError("unbalanced '(' in triple list", line);
    std::string body = v.substr(pos + 1, close - pos - 1);
    pos = close + 1;
    std::vector<std::string> parts;
    std::istringstream bs(body);
    std::string part;
    while (std::getline(bs, part, ',')) parts.push_back(trim(part));
    if (parts.size() != 3) throw ConfigError("monomial triple needs (a, b, coeff)", line);
    try {
      triples.emplace_back(std::stoi(parts[0]), std::stoi(parts[1]), parse_rational(parts[2]));
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception&) {
      throw ConfigError("malformed monomial triple '(" + body + ")'", line);
    }
  }
  return triples;
}

std::vector<double> parse_num_list(const std::string& text, int line, const std::string& field) {
  std::vector<double> out;
  std::istringstream in(text);
  std::string item;
  while (in >> item) {
    try {
      out.push_back(to_double(parse_rational(item)));
    } catch (const std::exception&) {
      throw ConfigError("expected a number list, got '" + item + "'", line, field);
    }
  }
  return out;
}

double parse_extended(const std::string& text, int line, const std::string& field) {
  if (text == "inf" || text == "+inf" || text == "infinity")
    return std::numeric_limits<double>::infinity();
  try {
    double v = to_double(parse_rational(text));
    if (v < 0.0) throw ConfigError("must be nonnegative", line, field);
    return v;
  } catch (const ConfigError&) {
    throw;
  } catch (const std::exception&) {
    throw ConfigError("expected a nonnegative number or 'inf'", line, field);
  }
}

}  // namespace

ProblemConfig parse_config_text(const std::string& text, const std::string& origin) {
  Reader r(tokenize(text));
  ProblemConfig cfg;

  // Kernel block.
  cfg.kernel_builtin = r.str("kernel.builtin");
  if (!cfg.kernel_builtin.empty() && !is_builtin_kernel(cfg.kernel_builtin))
    throw ConfigError("unknown kernel builtin id '" + cfg.kernel_builtin + "'",
                      r.line_of("kernel.builtin"), "kernel.builtin");
  if (cfg.kernel_builtin.empty()) {
    if (!r.has("kernel.m"))
      throw ConfigError("kernel block needs kernel.builtin or explicit kernel.m/pieces in " +
                            origin,
                        0, "kernel");
    ProblemConfig::ExplicitKernel ek;
    ek.m = r.integer("kernel.m", 0);
    if (ek.m < 0) throw ConfigError("kernel.m must be >= 0", r.line_of("kernel.m"), "kernel.m");
    std::string t_text = r.str("kernel.T", "1");
    try {
      ek.T = parse_rational(t_text);
    } catch (const std::exception&) {
      throw ConfigError("kernel.T must be rational", r.line_of("kernel.T"), "kernel.T");
    }
    if (ek.T <= 0) throw ConfigError("kernel.T must be positive", r.line_of("kernel.T"));
    ek.upper.resize(ek.m + 1);
    ek.lower.resize(ek.m + 1);
    for (int i = 0; i <= ek.m; ++i) {
      std::string ku = "kernel.order" + std::to_string(i) + ".upper";
      std::string kl = "kernel.order" + std::to_string(i) + ".lower";
      if (r.has(ku)) ek.upper[i] = parse_triples(r.str(ku), r.line_of(ku));
      if (r.has(kl)) ek.lower[i] = parse_triples(r.str(kl), r.line_of(kl));
    }
    if (!ek.upper[0] || !ek.lower[0])
      throw ConfigError("explicit kernel needs kernel.order0.upper and kernel.order0.lower", 0,
                        "kernel.order0");
    cfg.kernel_explicit = std::move(ek);
  }

  // Cone block.
  if (r.has("cone.orders")) {
    std::string orders_text = r.str("cone.orders");
    std::istringstream in(orders_text);
    int order;
    while (in >> order) {
      std::string base = "cone.order" + std::to_string(order) + ".";
      ConeDecl decl;
      decl.order = order;
      decl.ab.lo = r.required_num(base + "a");
      decl.ab.hi = r.required_num(base + "b");
      decl.cd.lo = r.required_num(base + "c");
      decl.cd.hi = r.required_num(base + "d");
      std::string phi = r.str(base + "phi", "auto");
      if (phi == "auto") {
        decl.phi_auto = true;
      } else {
        decl.phi_auto = false;
        try {
          decl.phi_expr = parse_expression(phi, {"s"});
        } catch (const ParseError& err) {
          throw ConfigError(std::string("bad phi expression: ") + err.what(),
                            r.line_of(base + "phi"), base + "phi");
        }
      }
      if (r.has(base + "xi")) decl.xi_override = r.num(base + "xi", 0.0);
      cfg.cone.push_back(decl);
    }
  }

  // Nonlinearity block.
  cfg.f_builtin = r.str("f.builtin");
  cfg.f_expr = r.str("f.expr");
  if (!cfg.f_builtin.empty() && !is_builtin_nonlinearity(cfg.f_builtin))
    throw ConfigError("unknown nonlinearity builtin id '" + cfg.f_builtin + "'",
                      r.line_of("f.builtin"), "f.builtin");
  if (cfg.f_builtin.empty() && cfg.f_expr.empty())
    throw ConfigError("nonlinearity block needs f.builtin or f.expr", 0, "f");
  if (r.has("f.f0")) cfg.f0 = parse_extended(r.str("f.f0"), r.line_of("f.f0"), "f.f0");
  if (r.has("f.finf")) cfg.finf = parse_extended(r.str("f.finf"), r.line_of("f.finf"), "f.finf");

  // Solver block.
  if (r.has("solver.lambda")) {
    cfg.lambdas = parse_num_list(r.str("solver.lambda"), r.line_of("solver.lambda"),
                                 "solver.lambda");
    for (double l : cfg.lambdas)
      if (!(l > 0.0))
        throw ConfigError("lambda values must be positive", r.line_of("solver.lambda"),
                          "solver.lambda");
  }
  cfg.grid_nodes = r.integer("solver.grid", 200);
  cfg.grid_panels = r.integer("solver.panels", std::max(1, cfg.grid_nodes / 4));
  if (cfg.grid_nodes < 1 || cfg.grid_panels < 1 || cfg.grid_nodes % cfg.grid_panels != 0)
    throw ConfigError("solver.grid must be a positive multiple of solver.panels",
                      r.line_of("solver.grid"), "solver.grid");
  cfg.tol = r.num("solver.tol", 1e-12);
  cfg.theta = r.num("solver.theta", 1.0);
  if (!(cfg.theta > 0.0 && cfg.theta <= 1.0))
    throw ConfigError("solver.theta must lie in (0,1]", r.line_of("solver.theta"),
                      "solver.theta");
  cfg.max_iter = r.integer("solver.max_iter", 500);
  cfg.u0_expr = r.str("solver.u0", "0");
  try {
    parse_expression(cfg.u0_expr, {"t"});
  } catch (const ParseError& err) {
    throw ConfigError(std::string("bad u0 expression: ") + err.what(), r.line_of("solver.u0"),
                      "solver.u0");
  }

  // Hypothesis options.
  cfg.hypothesis.grid_density = r.integer("hypothesis.grid", 401);
  cfg.hypothesis.refine_tol = r.num("hypothesis.refine_tol", 1e-9);
  cfg.hypothesis.env_t_samples = r.integer("hypothesis.t_samples", 257);

  // Multiplicity search grid.
  cfg.rho_min = r.num("search.rho_min", 1e-8);
  cfg.rho_max = r.num("search.rho_max", 1e2);
  cfg.rho_count = r.integer("search.rho_count", 96);
  if (!(cfg.rho_min > 0.0) || !(cfg.rho_max > cfg.rho_min) || cfg.rho_count < 2)
    throw ConfigError("search.rho_* must satisfy 0 < rho_min < rho_max, count >= 2", 0,
                      "search");

  // Output block.
  cfg.report_path = r.str("output.report");
  cfg.csv_path = r.str("output.csv");
  cfg.solution_path = r.str("output.solution");
  cfg.plots = r.flag("output.plots", false);
  cfg.seed = static_cast<unsigned long long>(r.num("seed", 42));

  r.check_all_used();

  // Interval validation needs T.
  double T = 1.0;
  if (cfg.kernel_explicit) T = to_double(cfg.kernel_explicit->T);
  for (const auto& decl : cfg.cone) {
    auto inside = [&](const Interval& iv) {
      return iv.lo >= -1e-12 && iv.hi <= T + 1e-12 && iv.lo <= iv.hi;
    };
    if (!inside(decl.ab) || !inside(decl.cd))
      throw ConfigError("cone intervals for order " + std::to_string(decl.order) +
                            " must lie inside [0, T]",
                        0, "cone.order" + std::to_string(decl.order));
  }
  return cfg;
}

ProblemConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_config_text(buffer.str(), path);
}

KernelSurface build_kernel(const ProblemConfig& config) {
  if (!config.kernel_builtin.empty()) return make_builtin_kernel(config.kernel_builtin);
  const auto& ek = *config.kernel_explicit;
  BivariatePoly upper = BivariatePoly::from_triples(*ek.upper[0]);
  BivariatePoly lower = BivariatePoly::from_triples(*ek.lower[0]);
  KernelSurface derived =
      KernelSurface::from_poly(to_double(ek.T), upper, lower, ek.m, ek.T);
  // Explicitly provided higher orders must agree with exact differentiation.
  BivariatePoly du = upper, dl = lower;
  for (int i = 1; i <= ek.m; ++i) {
    du = du.deriv_t();
    dl = dl.deriv_t();
    if (ek.upper[i] && !(BivariatePoly::from_triples(*ek.upper[i]) == du))
      throw ConfigError("kernel.order" + std::to_string(i) +
                            ".upper is not the exact t-derivative of the previous order",
                        0, "kernel.order" + std::to_string(i) + ".upper");
    if (ek.lower[i] && !(BivariatePoly::from_triples(*ek.lower[i]) == dl))
      throw ConfigError("kernel.order" + std::to_string(i) +
                            ".lower is not the exact t-derivative of the previous order",
                        0, "kernel.order" + std::to_string(i) + ".lower");
  }
  return derived;
}

NonlinearitySpec build_nonlinearity(const ProblemConfig& config, int m) {
  NonlinearitySpec spec;
  if (!config.f_builtin.empty()) {
    spec = builtin_nonlinearity(config.f_builtin);
    if (spec.state_arity != m + 1)
      throw ConfigError("nonlinearity '" + config.f_builtin + "' expects m = " +
                            std::to_string(spec.state_arity - 1) + ", kernel has m = " +
                            std::to_string(m),
                        0, "f.builtin");
  } else {
    spec = nonlinearity_from_expr(config.f_expr, m, config.f0.value_or(0.0),
                                  config.finf.value_or(0.0));
  }
  if (config.f0) spec.f0 = *config.f0;
  if (config.finf) spec.finf = *config.finf;
  return spec;
}

}  // namespace hamcert
