#include "gbl/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace gbl {

PConstants p_constants(double p) {
  if (!(p > 0.0 && p <= 1.0)) throw ContractViolation("p_constants: p must lie in (0, 1]");
  PConstants c;
  c.p = p;
  c.a_p = std::pow(std::pow(2.0, p) - 1.0, -1.0 / p);
  c.b_p = std::pow(2.0 * c.kappa, 1.0 / p) * c.a_p;
  return c;
}

Minimum1d minimize_1d(const std::function<double(double)>& f, double lo, double hi,
                      int grid_points, double tol) {
  if (!(hi >= lo)) throw ContractViolation("minimize_1d: empty bracket");
  const int n = std::max(grid_points, 2);
  const double h = (hi - lo) / (n - 1);
  Minimum1d best{lo, f(lo)};
  int best_i = 0;
  for (int i = 1; i < n; ++i) {
    const double t = i == n - 1 ? hi : lo + h * i;
    const double v = f(t);
    if (v < best.value) {
      best = {t, v};
      best_i = i;
    }
  }
  double a = lo + h * std::max(best_i - 1, 0);
  double b = lo + h * std::min(best_i + 1, n - 1);
  constexpr double kInvPhi = 0.6180339887498949;
  double c = b - kInvPhi * (b - a), d = a + kInvPhi * (b - a);
  double fc = f(c), fd = f(d);
  while (b - a > tol) {
    if (fc < fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - kInvPhi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + kInvPhi * (b - a);
      fd = f(d);
    }
  }
  if (fc < best.value) best = {c, fc};
  if (fd < best.value) best = {d, fd};
  return best;
}

Minimum1d best_constant(const NormEngine& engine, const Vec& x, const IndexSet& a,
                        const ErrorBudget& budget) {
  const Vec xs = a.empty() ? x : padded(x, a.max());
  Minimum1d best{0.0, engine(xs)};
  if (a.empty()) return best;
  Vec ind = Vec::Zero(xs.size());
  for (int n : a) ind(n - 1) = 1.0;
  Vec r(xs.size());
  auto f = [&](double lambda) {
    r = xs - lambda * ind;
    return engine(r);
  };
  auto consider = [&](double lambda) {
    const double v = f(lambda);
    if (v < best.value) best = {lambda, v};
  };
  // Breakpoints: the exact minimisers for concave-between-breakpoints
  // objectives such as sum |x_n - lambda|^q with q < 1.
  for (int n : a) consider(xs(n - 1));
  // Every engine with p < 1 is an lp sum with q < 1: the breakpoints are exact.
  if (engine.p_exp() < 1.0) return best;
  const double bound = 2.0 * sup_norm(xs);
  if (bound == 0.0) return best;
  // Convex objectives need no fine grid before refinement.
  const int grid = std::min(budget.lambda_grid, 64);
  const Minimum1d m = minimize_1d(f, -bound, bound, grid, budget.refine_tol * std::max(1.0, bound));
  if (m.value < best.value) best = m;
  return best;
}

namespace {

double residual_norm(const NormEngine& engine, const Vec& x, const IndexSet& a) {
  return engine(suppress(x, a));
}

// Cyclic coordinate descent on the free coordinates of the residual.
double coordinate_descent(const NormEngine& engine, Vec r, const std::vector<int>& free,
                          const ErrorBudget& budget) {
  const double c2 = engine.bounds().c2;
  double current = engine(r);
  for (int cycle = 0; cycle < budget.coeff_opt_iters; ++cycle) {
    const double before = current;
    for (int n : free) {
      const Eigen::Index i = n - 1;
      const double keep = r(i);
      const double reach = c2 * current;
      if (reach == 0.0) return 0.0;
      auto f = [&](double v) {
        r(i) = v;
        return engine(r);
      };
      const Minimum1d m = minimize_1d(f, -reach, reach, 9, budget.refine_tol * std::max(1.0, reach));
      if (m.value < current) {
        r(i) = m.arg;
        current = m.value;
      } else {
        r(i) = keep;
      }
    }
    if (before - current < 1e-12) break;
  }
  return current;
}

}  // namespace

ErrorValue best_on_set(const NormEngine& engine, const Vec& x, const IndexSet& a,
                       const ErrorBudget& budget) {
  if (!a.empty() && a.max() > x.size())
    throw ContractViolation("best_on_set: set leaves the window of x");
  const double projected = residual_norm(engine, x, a);
  if (engine.lattice() || a.empty()) return {projected, false};

  double best = projected;
  const std::vector<int>& free = a.elems();
  best = std::min(best, coordinate_descent(engine, suppress(x, a), free, budget));
  const Minimum1d lam = best_constant(engine, x, a, budget);
  Vec r = x;
  for (int n : a) r(n - 1) -= lam.arg;
  best = std::min({best, lam.value, coordinate_descent(engine, r, free, budget)});
  best = std::min(best, coordinate_descent(engine, x, free, budget));
  return {best, true};
}

namespace {

void check_m(const Vec& x, int m, const char* who) {
  if (m < 0 || m > x.size()) throw ContractViolation(std::string(who) + ": need 0 <= m <= dim");
}

void check_cap(int dim, int max_card, const ErrorBudget& budget, const char* who) {
  std::uint64_t total = 0;
  for (int k = 0; k <= max_card; ++k) {
    const std::uint64_t c = binomial(dim, k);
    total = c > budget.cap || total > budget.cap - c ? budget.cap + 1 : total + c;
  }
  if (total > budget.cap) throw CapExceeded(std::string(who) + ": support enumeration exceeds cap");
}

template <typename Fn>
void for_each_subset_up_to(int dim, int m, Fn&& fn) {
  for (int k = 0; k <= m; ++k) for_each_combination(dim, k, fn);
}

}  // namespace

ErrorValue sigma_m(const NormEngine& engine, const Vec& x, int m, const ErrorBudget& budget) {
  check_m(x, m, "sigma_m");
  const int dim = static_cast<int>(x.size());
  check_cap(dim, m, budget, "sigma_m");
  ErrorValue best{engine(x), false};
  for_each_subset_up_to(dim, m, [&](const IndexSet& a) {
    const ErrorValue v = best_on_set(engine, x, a, budget);
    best.upper_bound |= v.upper_bound;
    best.value = std::min(best.value, v.value);
  });
  return best;
}

ErrorValue sigma_tilde_m(const NormEngine& engine, const Vec& x, int m, const ErrorBudget& budget) {
  check_m(x, m, "sigma_tilde_m");
  const int dim = static_cast<int>(x.size());
  if (binomial(dim, m) > budget.cap) throw CapExceeded("sigma_tilde_m: enumeration exceeds cap");
  double best = std::numeric_limits<double>::infinity();
  for_each_combination(dim, m, [&](const IndexSet& a) {
    best = std::min(best, residual_norm(engine, x, a));
  });
  return {best, false};
}

std::vector<Interval> consecutive_intervals(int dim, int m) {
  std::vector<Interval> out;
  if (m == 0) return out;
  for (int s = 1; s <= dim; ++s) out.push_back({s, m});
  return out;
}

namespace {

// Coefficients beyond the window never lower any shipped norm, so the free
// coefficients of an interval reaching past dim live on its part inside.
IndexSet inside_window(const Interval& iv, int dim) {
  return IndexSet::range(iv.start, std::min(iv.last(), dim));
}

}  // namespace

ErrorValue sigma_con_m(const NormEngine& engine, const Vec& x, int m, const ErrorBudget& budget) {
  check_m(x, m, "sigma_con_m");
  const int dim = static_cast<int>(x.size());
  ErrorValue best{engine(x), false};  // representative interval beyond the support
  // A length-k interval sits inside a length-m one whose extra coefficients
  // may copy x, so lengths k <= m give the same infimum.
  for (int k = 1; k <= m; ++k)
    for (const Interval& iv : consecutive_intervals(dim, k)) {
      const ErrorValue v = best_on_set(engine, x, inside_window(iv, dim), budget);
      best.upper_bound |= v.upper_bound;
      best.value = std::min(best.value, v.value);
    }
  return best;
}

ErrorValue d_m(const NormEngine& engine, const Vec& x, int m, const ErrorBudget& budget) {
  check_m(x, m, "d_m");
  const int dim = static_cast<int>(x.size());
  check_cap(dim, m, budget, "d_m");
  ErrorValue best{engine(x), false};
  for_each_subset_up_to(dim, m, [&](const IndexSet& a) {
    best.value = std::min(best.value, best_constant(engine, x, a, budget).value);
  });
  return best;
}

ErrorValue d_con_m(const NormEngine& engine, const Vec& x, int m, const ErrorBudget& budget) {
  check_m(x, m, "d_con_m");
  const int dim = static_cast<int>(x.size());
  ErrorValue best{engine(x), false};
  for (const Interval& iv : consecutive_intervals(dim, m))
    best.value = std::min(best.value, best_constant(engine, x, iv.to_set(), budget).value);
  return best;
}

ErrorProfile error_profile(const NormEngine& engine, const Vec& x, const ErrorBudget& budget,
                           unsigned which) {
  const int dim = static_cast<int>(x.size());
  if (dim > 62 || (std::uint64_t{1} << dim) > budget.cap)
    throw CapExceeded("error_profile: 2^dim supports exceed the cap");
  const std::size_t nsub = std::size_t{1} << dim;
  const double nan = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> free_best(nsub, nan), const_best(nsub, nan);
  bool flagged = false;
  auto free_of = [&](const IndexSet& a) {
    double& slot = free_best[a.mask()];
    if (std::isnan(slot)) {
      const ErrorValue v = best_on_set(engine, x, a, budget);
      flagged |= v.upper_bound;
      slot = v.value;
    }
    return slot;
  };
  auto const_of = [&](const IndexSet& a) {
    double& slot = const_best[a.mask()];
    if (std::isnan(slot)) slot = best_constant(engine, x, a, budget).value;
    return slot;
  };

  const double full = engine(x);
  ErrorProfile prof;
  const auto len = static_cast<std::size_t>(dim) + 1;
  if (which & kSigma) prof.sigma.resize(len);
  if (which & kSigmaTilde) prof.sigma_tilde.resize(len);
  if (which & kSigmaCon) prof.sigma_con.resize(len);
  if (which & kD) prof.d.resize(len);
  if (which & kDCon) prof.d_con.resize(len);

  double run_sigma = full, run_d = full, run_con = full;
  for (int m = 0; m <= dim; ++m) {
    const auto k = static_cast<std::size_t>(m);
    if (which & (kSigma | kSigmaTilde | kD)) {
      double tilde = std::numeric_limits<double>::infinity();
      for_each_combination(dim, m, [&](const IndexSet& a) {
        if (which & kSigma) run_sigma = std::min(run_sigma, free_of(a));
        if (which & kD) run_d = std::min(run_d, const_of(a));
        if (which & kSigmaTilde) tilde = std::min(tilde, residual_norm(engine, x, a));
      });
      if (which & kSigma) prof.sigma[k] = {run_sigma, flagged};
      if (which & kSigmaTilde) prof.sigma_tilde[k] = {tilde, false};
      if (which & kD) prof.d[k] = {run_d, false};
    }
    if (which & (kSigmaCon | kDCon)) {
      double dcon = full;
      for (const Interval& iv : consecutive_intervals(dim, m)) {
        if (which & kSigmaCon) run_con = std::min(run_con, free_of(inside_window(iv, dim)));
        if (which & kDCon) {
          const IndexSet s = iv.to_set();
          dcon = std::min(dcon, iv.last() <= dim ? const_of(s)
                                                 : best_constant(engine, x, s, budget).value);
        }
      }
      if (which & kSigmaCon) prof.sigma_con[k] = {run_con, flagged};
      if (which & kDCon) prof.d_con[k] = {dcon, false};
    }
  }
  return prof;
}

double eta_objective(double p, double u, double t) {
  const double inv_c = 1.0 / (p_constants(p).a_p * u);
  const double first = -std::expm1(p * std::log(t));          // 1 - t^p
  const double second = -std::expm1(-p * std::log1p(inv_c * t)); // 1 - (1 + t/(A_p u))^-p
  return std::exp(-(std::log(first) + std::log(second)) / p);
}

double eta_p(double p, double u) {
  if (!(p > 0.0 && p < 1.0)) throw ContractViolation("eta_p: need 0 < p < 1");
  if (!(u > 0.0)) throw ContractViolation("eta_p: need u > 0");
  auto f = [&](double t) { return eta_objective(p, u, t); };
  // The objective blows up at both ends of (0,1); keep the bracket interior.
  constexpr int kGrid = 4096;
  const double lo = 1.0 / (kGrid + 1), hi = 1.0 - lo;
  return minimize_1d(f, lo, hi, kGrid, 1e-13).value;
}

}  // namespace gbl
