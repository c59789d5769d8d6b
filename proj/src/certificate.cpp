#include "hamcert/certificate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "hamcert/errors.hpp"
#include "hamcert/quadrature.hpp"

namespace hamcert {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<double> uniform_breaks(double a, double b, int panels) {
  std::vector<double> out;
  for (int i = 1; i < panels; ++i) out.push_back(a + (b - a) * i / panels);
  return out;
}

}  // namespace

LambdaBars lambda_bars(const HypothesisReport& report) {
  if (static_cast<int>(report.envelopes.size()) != report.m + 1)
    throw std::invalid_argument("lambda_bars: report is missing envelopes");

  LambdaBars bars;
  for (int i = 0; i <= report.m; ++i) {
    const TabulatedFn& h = report.envelopes[i];
    bars.up.push_back(integrate_split([&](double s) { return h.eval(s); }, 0.0, report.T,
                                      uniform_breaks(0.0, report.T, 32), 16));
  }
  double max_up = 0.0;
  for (double v : bars.up) max_up = std::max(max_up, v);
  bars.bar = (report.m + 1) * max_up;

  bars.under = 0.0;
  for (const auto& entry : report.cone) {
    if (!entry.valid) continue;
    double low = entry.xi * entry.phi_integral_ab;
    bars.low[entry.order] = low;
    bars.under = std::max(bars.under, entry.xi * low);
  }
  return bars;
}

Window existence_window(double lambda_bar, double lambda_under, double f0, double finf) {
  Window w;
  if (!(lambda_bar > 0.0) || !(lambda_under > 0.0)) {
    w.diagnostic = "Lambda_bar and Lambda_under must be positive";
    return w;
  }
  if (f0 == 0.0 && std::isinf(finf)) {
    w.diagnostic = "f_0 = 0 and f^inf = inf: no sublinear gap";
    return w;
  }
  double upper_prod = std::isinf(finf) ? kInf : lambda_bar * finf;   // Lambda_bar f^inf
  double lower_prod = std::isinf(f0) ? kInf : lambda_under * f0;     // Lambda_under f_0
  if (!(upper_prod < lower_prod)) {
    std::ostringstream os;
    os << "Lambda_bar f^inf >= Lambda_under f_0 (" << upper_prod << " >= " << lower_prod << ")";
    w.diagnostic = os.str();
    return w;
  }
  w.lo = std::isinf(lower_prod) ? 0.0 : 1.0 / lower_prod;
  w.hi = upper_prod == 0.0 ? kInf : 1.0 / upper_prod;
  w.empty = false;
  w.certified = true;  // pure arithmetic on declared limits
  return w;
}

NResult compute_N(const KernelSurface& K, int t_density) {
  const double T = K.domain_length();
  NResult result;
  double worst = 0.0;
  for (int i = 0; i <= K.max_order(); ++i) {
    auto abs_row_integral = [&](double t) {
      return integrate_abs([&](double s) { return K.eval_deriv(i, t, s); }, 0.0, T, {t});
    };
    GoldenResult sup = scan_max(abs_row_integral, 0.0, T, t_density, {}, 1e-9);
    result.components.push_back(sup.value);
    result.arg_t.push_back(sup.arg);
    worst = std::max(worst, sup.value);
  }
  result.N = worst > 0.0 ? 1.0 / worst : kInf;
  return result;
}

MResult compute_M(const KernelSurface& K, int order, Interval ab, int t_density) {
  auto row_integral = [&](double t) {
    return integrate_split([&](double s) { return K.eval_deriv(order, t, s); }, ab.lo, ab.hi,
                           {t}, 32);
  };
  GoldenResult inf = scan_min(row_integral, ab.lo, ab.hi, t_density, {}, 1e-9);
  if (!(inf.value > 0.0))
    throw HypothesisError("compute_M: degenerate at order " + std::to_string(order) +
                          " (inf of the [a,b] integral is " + std::to_string(inf.value) +
                          "); condition (I0_rho) unusable here");
  MResult result;
  result.inv = inf.value;
  result.M = 1.0 / inf.value;
  result.arg_t = inf.arg;
  return result;
}

namespace {

// Coordinate-wise golden refinement of a box extremum from a start point.
// Axis 0 is t; the rest are the state coordinates.
double refine_box(const std::function<double(double, std::span<const double>)>& f,
                  std::vector<double>& point, const std::vector<std::pair<double, double>>& box,
                  int sweeps, bool maximize) {
  auto safe_eval = [&](const std::vector<double>& p) {
    try {
      return f(p[0], std::span<const double>(p).subspan(1));
    } catch (const EvalError&) {
      return maximize ? -kInf : kInf;
    }
  };
  double best = safe_eval(point);
  for (int sweep = 0; sweep < sweeps; ++sweep) {
    for (std::size_t axis = 0; axis < point.size(); ++axis) {
      auto [lo, hi] = box[axis];
      if (!(hi > lo)) continue;
      auto along = [&](double v) {
        std::vector<double> p = point;
        p[axis] = v;
        return safe_eval(p);
      };
      GoldenResult r = maximize ? golden_max(along, lo, hi, 1e-9 * (hi - lo) + 1e-14)
                                : golden_min(along, lo, hi, 1e-9 * (hi - lo) + 1e-14);
      if (maximize ? r.value > best : r.value < best) {
        best = r.value;
        point[axis] = r.arg;
      }
    }
  }
  return best;
}

double box_extremum(const NonlinearitySpec& f, const std::vector<std::pair<double, double>>& box,
                    const SamplingOptions& opt, bool maximize) {
  const int dim = static_cast<int>(box.size());
  auto eval_pt = [&](const std::vector<double>& p) {
    try {
      return f.eval_fn(p[0], std::span<const double>(p).subspan(1));
    } catch (const EvalError&) {
      return maximize ? -kInf : kInf;
    }
  };

  std::vector<double> best_pt(dim);
  for (int a = 0; a < dim; ++a) best_pt[a] = 0.5 * (box[a].first + box[a].second);
  double best = eval_pt(best_pt);

  auto consider = [&](const std::vector<double>& p) {
    double v = eval_pt(p);
    if (maximize ? v > best : v < best) {
      best = v;
      best_pt = p;
    }
  };

  // Low-discrepancy interior samples.
  for (const auto& u : halton_points(opt.samples, dim)) {
    std::vector<double> p(dim);
    for (int a = 0; a < dim; ++a) p[a] = box[a].first + (box[a].second - box[a].first) * u[a];
    consider(p);
  }
  // All box corners; extrema of monotone factors live there.
  if (dim <= 12) {
    std::vector<double> p(dim);
    for (unsigned mask = 0; mask < (1u << dim); ++mask) {
      for (int a = 0; a < dim; ++a) p[a] = (mask >> a) & 1u ? box[a].second : box[a].first;
      consider(p);
    }
  }

  auto fn = [&](double t, std::span<const double> x) { return f.eval_fn(t, x); };
  return refine_box(fn, best_pt, box, opt.refine_sweeps, maximize);
}

}  // namespace

double f_rho_sup(const NonlinearitySpec& f, double rho, double T, const SamplingOptions& opt) {
  if (!(rho > 0.0)) throw std::invalid_argument("f_rho_sup: rho must be positive");
  if (f.frho_sup_closed) return f.frho_sup_closed(rho);
  std::vector<std::pair<double, double>> box;
  box.emplace_back(0.0, T);
  for (int j = 0; j < f.state_arity; ++j) box.emplace_back(-rho, rho);
  return box_extremum(f, box, opt, true) / rho;
}

double f_rho_inf(const NonlinearitySpec& f, double rho, int order, const HypothesisReport& report,
                 const SamplingOptions& opt) {
  if (!(rho > 0.0)) throw std::invalid_argument("f_rho_inf: rho must be positive");
  const ConeEntry* entry = report.entry(order);
  if (entry == nullptr || !entry->valid)
    throw std::invalid_argument("f_rho_inf: order " + std::to_string(order) +
                                " has no valid cone data");
  InfBox box;
  box.t_lo = entry->ab.lo;
  box.t_hi = entry->ab.hi;
  for (int j = 0; j < f.state_arity; ++j) {
    if (report.J2.count(j)) {
      box.x_hi.push_back(rho / report.entry(j)->xi);
    } else {
      box.x_hi.push_back(rho);
    }
  }
  if (f.frho_inf_closed) return f.frho_inf_closed(rho, box);

  std::vector<std::pair<double, double>> full;
  full.emplace_back(box.t_lo, box.t_hi);
  for (double hi : box.x_hi) full.emplace_back(0.0, hi);
  return box_extremum(f, full, opt, false) / rho;
}

bool check_I1(double lambda, double N, double frho) { return lambda * frho / N < 1.0; }

bool check_I0(double lambda, double Mi, double frho_i) { return lambda * frho_i / Mi > 1.0; }

Certificate build_certificate(const KernelSurface& K, const HypothesisReport& report,
                              const NonlinearitySpec& f, const CertificateOptions& opt) {
  Certificate cert;
  cert.bars = lambda_bars(report);
  NResult n = compute_N(K, opt.t_density);
  cert.N = n.N;
  cert.N_components = n.components;
  for (int j : report.J1) {
    const ConeEntry* entry = report.entry(j);
    try {
      MResult m = compute_M(K, j, entry->ab, opt.t_density);
      cert.M[j] = m.M;
      cert.inv_M[j] = m.inv;
    } catch (const HypothesisError&) {
      // Order unusable for (I0); simply not recorded.
    }
  }
  cert.c = 0.0;
  for (int j : report.J2) {
    double xi = report.entry(j)->xi;
    cert.c = cert.c == 0.0 ? xi : std::min(cert.c, xi);
  }
  cert.existence = existence_window(cert.bars.bar, cert.bars.under, f.f0, f.finf);
  cert.frho_certified = static_cast<bool>(f.frho_sup_closed);
  return cert;
}

std::vector<double> default_rho_grid(double lo, double hi, int count) {
  if (!(lo > 0.0) || !(hi > lo) || count < 2) return {};
  std::vector<double> grid(count);
  for (int i = 0; i < count; ++i)
    grid[i] = lo * std::pow(hi / lo, static_cast<double>(i) / (count - 1));
  return grid;
}

namespace {

struct RhoData {
  double rho;
  bool i1 = false;
  bool i0 = false;
  double i1_limit = 0.0;  // N / f^rho: I1 holds iff lambda below this
  double i0_limit = kInf; // min_i M_i / f^i_rho: I0 holds iff lambda above this
};

// Greedy smallest-first chain search. types[k] is true for an I0 slot. The
// gap rule between consecutive levels: after an I0 at rho the next level must
// exceed rho / c; after an I1 it must merely exceed rho.
std::optional<std::vector<const RhoData*>> find_chain(const std::vector<RhoData>& data,
                                                      const std::vector<bool>& types, double c) {
  std::vector<const RhoData*> chain;
  double threshold = -kInf;
  std::size_t start = 0;
  for (bool want_i0 : types) {
    const RhoData* found = nullptr;
    for (std::size_t k = start; k < data.size(); ++k) {
      if (!(data[k].rho > threshold)) continue;
      if (want_i0 ? data[k].i0 : data[k].i1) {
        found = &data[k];
        start = k + 1;
        break;
      }
    }
    if (!found) return std::nullopt;
    chain.push_back(found);
    threshold = want_i0 ? found->rho / c : found->rho;
  }
  return chain;
}

}  // namespace

MultiplicityResult multiplicity_search(const Certificate& cert, const HypothesisReport& report,
                                       const NonlinearitySpec& f, double lambda,
                                       std::vector<double> rho_grid,
                                       const SamplingOptions& opt) {
  MultiplicityResult result;
  if (!report.H5_tilde || report.J2.empty()) {
    result.diagnostic =
        "multiplicity unavailable: (H~5) fails, K_rho and V_rho need not be nested";
    return result;
  }
  if (cert.M.empty()) {
    result.diagnostic = "multiplicity unavailable: no usable M_i (every inf degenerate)";
    return result;
  }
  result.available = true;
  if (rho_grid.empty()) rho_grid = default_rho_grid();
  std::sort(rho_grid.begin(), rho_grid.end());

  std::vector<RhoData> data;
  data.reserve(rho_grid.size());
  for (double rho : rho_grid) {
    RhoData d;
    d.rho = rho;
    double fs = f_rho_sup(f, rho, report.T, opt);
    d.i1 = check_I1(lambda, cert.N, fs);
    d.i1_limit = fs > 0.0 ? cert.N / fs : kInf;
    for (const auto& [i, Mi] : cert.M) {
      double fi = f_rho_inf(f, rho, i, report, opt);
      if (fi > 0.0) {
        result.i0_attainable = true;
        d.i0_limit = std::min(d.i0_limit, Mi / fi);
      }
      if (check_I0(lambda, Mi, fi)) d.i0 = true;
    }
    data.push_back(d);
  }

  struct Pattern {
    const char* name;
    std::vector<bool> types;  // true = I0 slot
    int solutions;
  };
  const std::vector<Pattern> patterns = {
      {"C1", {true, false}, 1},          {"C2", {false, true}, 1},
      {"C3", {true, false, true}, 2},    {"C4", {false, true, false}, 2},
      {"C5", {true, false, true, false}, 3}, {"C6", {false, true, false, true}, 3},
  };

  for (const Pattern& pattern : patterns) {
    auto chain = find_chain(data, pattern.types, cert.c);
    if (!chain) continue;
    MultiplicityRecord record;
    record.condition = pattern.name;
    record.solutions = pattern.solutions;
    Window w;
    w.lo = 0.0;
    w.hi = kInf;
    for (std::size_t k = 0; k < chain->size(); ++k) {
      record.rhos.push_back((*chain)[k]->rho);
      if (pattern.types[k])
        w.lo = std::max(w.lo, (*chain)[k]->i0_limit);
      else
        w.hi = std::min(w.hi, (*chain)[k]->i1_limit);
    }
    w.empty = !(w.lo < w.hi);
    w.certified = cert.frho_certified && static_cast<bool>(f.frho_inf_closed);
    record.window = w;
    result.records.push_back(std::move(record));
  }
  if (result.records.empty() && !result.i0_attainable)
    result.diagnostic = "no rho satisfies (I0_rho) for any lambda: every f^i_rho is zero";
  return result;
}

Window best_lambda_window_C1(const Certificate& cert, const HypothesisReport& report,
                             const NonlinearitySpec& f, const SamplingOptions& opt) {
  Window w;
  if (!report.H5_tilde || cert.M.empty()) {
    w.diagnostic = "C1 machinery unavailable ((H~5) or M_i missing)";
    return w;
  }

  // Right endpoint: maximize N / f^rho over rho (log-scan then golden).
  auto right_fn = [&](double log_rho) {
    double rho = std::exp(log_rho);
    double fs = f_rho_sup(f, rho, report.T, opt);
    return fs > 0.0 ? cert.N / fs : kInf;
  };
  const double lo_log = std::log(1e-4), hi_log = std::log(1e2);
  GoldenResult right = scan_max(right_fn, lo_log, hi_log, 129, {}, 1e-10);
  double rho2 = std::exp(right.arg);
  if (!(right.value > 0.0) || std::isinf(right.value)) {
    w.diagnostic = "right endpoint not positive/finite";
    if (std::isinf(right.value)) {
      // f^rho = 0 somewhere: I1 holds for every lambda there.
      w.lo = 0.0;
      w.hi = kInf;
      w.empty = false;
    }
    return w;
  }

  // Left endpoint: rho_1 -> 0 behaviour of M_{i0} / f^{i0}_{rho_1}.
  double left = kInf;
  bool vanishing = false;
  for (const auto& [i, Mi] : cert.M) {
    std::vector<double> probes = {1e-2, 1e-3, 1e-4};
    std::vector<double> beta;  // rho * f^i_rho
    for (double rho : probes) beta.push_back(rho * f_rho_inf(f, rho, i, report, opt));
    bool stable = beta[0] > 0.0 && beta[1] > 0.0 && beta[2] > 0.0 &&
                  std::abs(beta[2] - beta[1]) <= 0.25 * beta[1] &&
                  std::abs(beta[1] - beta[0]) <= 0.25 * beta[0];
    if (stable) {
      vanishing = true;  // M_i rho / beta -> 0
      break;
    }
    // Fall back to the best concrete rho_1 below c * rho2.
    for (double rho : default_rho_grid(1e-8, cert.c * rho2 * 0.999, 48)) {
      double fi = f_rho_inf(f, rho, i, report, opt);
      if (fi > 0.0) left = std::min(left, Mi / fi);
    }
  }
  if (vanishing) left = 0.0;
  if (std::isinf(left)) {
    w.diagnostic = "no rho_1 with positive f^i_rho: (I0) side unattainable";
    return w;
  }
  if (!(left < right.value)) {
    w.diagnostic = "left endpoint does not fall below the right endpoint";
    return w;
  }
  w.lo = left;
  w.hi = right.value;
  w.empty = false;
  w.certified = cert.frho_certified && static_cast<bool>(f.frho_inf_closed);
  return w;
}

}  // namespace hamcert
