#include "gbl/verify.hpp"

#include "gbl/greedy.hpp"
#include "gbl/io.hpp"
#include "gbl/parallel.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <limits>
#include <sstream>

namespace gbl {

using nlohmann::json;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr std::size_t kMaxFailures = 10;

double relative_slack(double lhs, double rhs) {
  if (lhs == rhs) return 0.0;
  if (std::isinf(rhs)) return 1.0;
  if (std::isinf(lhs)) return -1.0;
  const double scale = std::max(std::abs(lhs), std::abs(rhs));
  return scale == 0.0 ? 0.0 : (rhs - lhs) / scale;
}

/// Worst instance bookkeeping for one clause.
struct Tracker {
  std::size_t instances = 0;
  double worst_slack = kInf;
  double worst_ratio = 0.0;
  json worst;
  std::vector<json> failures;
  std::size_t failure_count = 0;

  template <typename W>
  void offer(double lhs, double rhs, W&& witness, std::size_t weight = 1) {
    instances += weight;
    if (lhs == 0.0 && rhs == 0.0) return;  // trivial, never the worst
    const double s = relative_slack(lhs, rhs);
    const double r = rhs > 0.0 ? lhs / rhs : (lhs > 0.0 ? kInf : 0.0);
    worst_ratio = std::max(worst_ratio, r);
    const bool fail = s < -kCheckTolerance;
    if (s < worst_slack || fail) {
      json w = witness();
      w["lhs"] = number_to_json(lhs);
      w["rhs"] = number_to_json(rhs);
      if (fail) {
        ++failure_count;
        if (failures.size() < kMaxFailures) failures.push_back(w);
      }
      if (s < worst_slack) {
        worst_slack = s;
        worst = std::move(w);
      }
    }
  }

  void merge(Tracker&& o) {
    instances += o.instances;
    worst_ratio = std::max(worst_ratio, o.worst_ratio);
    if (o.worst_slack < worst_slack) {
      worst_slack = o.worst_slack;
      worst = std::move(o.worst);
    }
    failure_count += o.failure_count;
    for (auto& f : o.failures)
      if (failures.size() < kMaxFailures) failures.push_back(std::move(f));
  }
};

/// Several trackers updated by the same enumeration.
template <std::size_t N>
struct Trackers {
  std::array<Tracker, N> t;
  RatioMax measured;  // a supremum collected on the side
  void merge(Trackers&& o) {
    for (std::size_t i = 0; i < N; ++i) t[i].merge(std::move(o.t[i]));
    measured.merge(std::move(o.measured));
  }
};

template <typename Acc, typename Fn>
Acc reduce_indices(std::size_t n, Fn&& per) {
  return chunked_reduce<Acc>(
      n,
      [&](std::size_t b, std::size_t e) {
        Acc acc;
        for (std::size_t i = b; i < e; ++i) per(acc, i);
        return acc;
      },
      [](Acc& acc, Acc&& next) { acc.merge(std::move(next)); });
}

json with_x(const Vec& x) { return {{"dim", x.size()}, {"x", vec_to_json(x)}}; }

json signed_set(const IndexSet& a, const SignVector& eps) {
  return {{"set", set_to_json(a)}, {"signs", signs_to_json(a, eps)}};
}

CheckReport make_report(const std::string& id, const CheckContext& ctx) {
  CheckReport r;
  r.check_id = id;
  r.engine = ctx.engine.label();
  return r;
}

void add_clause(CheckReport& rep, const std::string& name, Tracker&& t, bool asserted = true) {
  ClauseResult c;
  c.name = name;
  c.asserted = asserted;
  c.instances = t.instances;
  c.worst_slack = std::isinf(t.worst_slack) ? 0.0 : t.worst_slack;
  c.worst_ratio = t.worst_ratio;
  c.worst_witness = std::move(t.worst);
  c.failure_count = t.failure_count;
  if (asserted)
    for (auto& f : t.failures) {
      f["clause"] = name;
      if (rep.failures.size() < kMaxFailures) rep.failures.push_back(std::move(f));
    }
  rep.clauses.push_back(std::move(c));
}

void add_constant(CheckReport& rep, const std::string& name, double value, bool certified) {
  rep.constants.push_back({name, value, certified});
}

// Fills the summary fields from the clauses and expected failures.
void finalize(CheckReport& rep) {
  rep.instances = 0;
  rep.worst_slack = kInf;
  rep.worst_ratio = 0.0;
  bool violated = false;
  bool any = false;
  for (const auto& c : rep.clauses) {
    rep.instances += c.instances;
    if (!c.asserted) continue;
    any = true;
    rep.worst_slack = std::min(rep.worst_slack, c.worst_slack);
    rep.worst_ratio = std::max(rep.worst_ratio, c.worst_ratio);
    violated |= c.failure_count > 0;
  }
  if (!any) rep.worst_slack = 0.0;
  for (const auto& e : rep.expected_failures) violated |= !e.reproduced;
  for (const auto& k : rep.constants)
    if (!k.certified) rep.kind = "consistency";
  rep.status = violated ? CheckStatus::Fail : CheckStatus::Pass;
}

CheckReport skipped(CheckReport rep, const std::string& why) {
  rep.status = CheckStatus::Skipped;
  rep.notes.push_back(why);
  return rep;
}

// ---------------------------------------------------------------------------
// Engine facts

bool equal_weights(const engines::WeightedLp& w) {
  return std::all_of(w.weights.begin(), w.weights.end(),
                     [&](double v) { return v == w.weights.front(); });
}

/// Rearrangement-invariant engines: lp, sup and constant-weight lp.
bool symmetric(const NormEngine& e) {
  if (std::holds_alternative<engines::Lp>(e.params()) ||
      std::holds_alternative<engines::Sup>(e.params()))
    return true;
  if (const auto* w = std::get_if<engines::WeightedLp>(&e.params())) return equal_weights(*w);
  return false;
}

/// Bimonotone engines have basis constant 1; every shipped engine is.
constexpr double kCertifiedKb = 1.0;

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

std::vector<Vec> grid_family(const CheckContext& ctx, double scale = 1.0, int support = -1) {
  return grid_vectors(ctx.dim(), support < 0 ? ctx.grid_support : support, ctx.coeff_grid, scale);
}

struct SignedIndicator {
  IndexSet set;
  SignVector signs;
  double norm = 0.0;
};

std::vector<SignedIndicator> signed_indicators(const NormEngine& e, int dim, int max_card,
                                               bool all_signs) {
  std::vector<SignedIndicator> out;
  auto add = [&](const IndexSet& a, const SignVector& s) {
    out.push_back({a, s, e(indicator(a, s, dim))});
  };
  if (all_signs) {
    for_each_signed_subset(IndexSet::range(1, dim), 1, max_card, add);
  } else {
    for (int k = 1; k <= max_card; ++k)
      for_each_combination(dim, k, [&](const IndexSet& a) { add(a, SignVector::constant(a)); });
  }
  return out;
}

Vec padded_to(const Vec& x, int len) { return padded(x, len); }

// Auxiliary instances from the (super)democracy argument: with I1 the hull of
// A and I2 a block of |B| ones after everything, x1 = 1_{eps,A} + 1_{I1\A} + 1_{I2}
// has greedy set I2 u (I1\A), and x2 = 1_{I2} + 1_{delta,B} has greedy set B.
template <typename Den>
RatioMax democracy_chain(const NormEngine& e, int dim, int max_card, bool all_signs, Den&& den) {
  RatioMax r;
  const auto sets = signed_indicators(e, dim, max_card, all_signs);
  for (const auto& s : sets) {
    const IndexSet i1 = IndexSet::range(s.set.min(), s.set.max());
    for (int b = static_cast<int>(s.set.size()); b <= max_card; ++b) {
      const IndexSet i2 = IndexSet::range(dim + 1, dim + b);
      Vec x1 = indicator(s.set, s.signs, dim + b) + indicator(i1.minus(s.set), nullptr, dim + b) +
               indicator(i2, nullptr, dim + b);
      const IndexSet lam = i2.united(i1.minus(s.set));
      const int m = static_cast<int>(lam.size());
      r.offer(e(suppress(x1, lam)), den(x1, m), [&] {
        json w = with_x(x1);
        w["m"] = m;
        w["A"] = set_to_json(lam);
        return w;
      });
    }
  }
  for (const auto& s : sets) {
    const int b = static_cast<int>(s.set.size());
    const IndexSet i2 = IndexSet::range(dim + 1, dim + b);
    Vec x2 = indicator(i2, nullptr, dim + b) + indicator(s.set, s.signs, dim + b);
    r.offer(e(suppress(x2, s.set)), den(x2, b), [&] {
      json w = with_x(x2);
      w["m"] = b;
      w["A"] = set_to_json(s.set);
      return w;
    });
  }
  return r;
}

Tracker indicator_pairs(const std::vector<SignedIndicator>& sets, double factor) {
  Tracker t;
  for (const auto& a : sets)
    for (const auto& b : sets) {
      if (a.set.size() > b.set.size()) continue;
      t.offer(a.norm, factor * b.norm, [&] {
        return json{{"A", signed_set(a.set, a.signs)}, {"B", signed_set(b.set, b.signs)}};
      });
    }
  return t;
}

}  // namespace

// ---------------------------------------------------------------------------

std::string to_string(CheckStatus s) {
  switch (s) {
    case CheckStatus::Pass:
      return "pass";
    case CheckStatus::Fail:
      return "fail";
    case CheckStatus::Skipped:
      return "skipped";
  }
  return "?";
}

json to_json(const CheckReport& r) {
  json j;
  j["check_id"] = r.check_id;
  j["engine"] = r.engine;
  j["kind"] = r.kind;
  if (r.tau) j["tau"] = *r.tau;
  if (r.t) j["t"] = *r.t;
  j["instances_tested"] = r.instances;
  j["worst_slack"] = number_to_json(r.worst_slack);
  j["worst_ratio"] = number_to_json(r.worst_ratio);
  json bf;
  bf["formula"] = r.bound_formula;
  bf["constants"] = json::array();
  for (const auto& c : r.constants)
    bf["constants"].push_back({{"name", c.name},
                               {"value", number_to_json(c.value)},
                               {"source", c.certified ? "certified" : "measured"}});
  j["bound_formula"] = bf;
  j["clauses"] = json::array();
  for (const auto& c : r.clauses)
    j["clauses"].push_back({{"name", c.name},
                            {"asserted", c.asserted},
                            {"instances", c.instances},
                            {"worst_slack", number_to_json(c.worst_slack)},
                            {"worst_ratio", number_to_json(c.worst_ratio)},
                            {"violations", c.failure_count},
                            {"worst_witness", c.worst_witness}});
  j["status"] = to_string(r.status);
  j["failures"] = r.failures;
  j["expected_failures"] = json::array();
  for (const auto& e : r.expected_failures)
    j["expected_failures"].push_back({{"clause", e.clause},
                                      {"witness", e.witness},
                                      {"ratio", number_to_json(e.ratio)},
                                      {"reproduced", e.reproduced}});
  if (!r.notes.empty()) j["notes"] = r.notes;
  return j;
}

std::string csv_header() { return "check_id,engine,tau,instances,worst_slack,status"; }

std::string csv_row(const CheckReport& r) {
  std::ostringstream os;
  os << r.check_id << ",\"" << r.engine << "\"," << (r.tau ? fmt(*r.tau) : "") << ","
     << r.instances << "," << fmt(r.worst_slack) << "," << to_string(r.status);
  return os.str();
}

double consecutive_greedy_bound(double p, double tau, double kb, double c_ell, double delta_sd,
                                double c_tq) {
  const double ap = p_constants(p).a_p;
  const double inner = (1.0 + 2.0 * std::pow(kb, p)) * (2.0 + std::pow(c_ell, p)) +
                       std::pow(ap * delta_sd * c_tq / tau, p);
  return std::pow(inner, 1.0 / p);
}

double consecutive_greedy_bound_p1(double tau, double kb, double c_ell, double delta_sd,
                                   double c_ell_1) {
  return (1.0 + 2.0 * kb) * (2.0 + c_ell) + 2.0 * delta_sd * c_ell_1 / tau;
}

std::optional<double> certified_superdemocracy(const NormEngine& engine) {
  if (symmetric(engine)) return 1.0;
  const auto* w = std::get_if<engines::WeightedLp>(&engine.params());
  if (!w) return std::nullopt;
  // Extremal sets pick the largest (resp. smallest) weights; beyond the list
  // every weight equals the last one, so k <= len + 1 covers all ratios.
  const std::size_t len = w->weights.size();
  std::vector<double> pool = w->weights;
  pool.insert(pool.end(), len + 1, w->weights.back());
  std::sort(pool.begin(), pool.end());
  double best = 1.0, lo = 0.0, hi = 0.0;
  for (std::size_t k = 1; k <= len + 1; ++k) {
    lo += pool[k - 1];
    hi += pool[pool.size() - k];
    best = std::max(best, hi / lo);
  }
  return std::pow(best, 1.0 / w->q);
}

// ---------------------------------------------------------------------------
// Consecutive-greedy theorem

CheckReport check_m1_i(const CheckContext& ctx) {
  CheckReport rep = make_report("m1_i", ctx);
  rep.tau = ctx.tau;
  const NormEngine& e = ctx.engine;
  const int dim = ctx.dim();
  const int mc = std::min(ctx.max_card, dim);

  double c = est_consecutive_greedy(e, *ctx.corpus, ctx.tau, ctx.budget).value;
  RatioMax aux = democracy_chain(e, dim, mc, true, [&](const Vec& x, int m) {
    return sigma_con_m(e, x, m, ctx.budget).value;
  });
  c = std::max(c, aux.value);
  add_constant(rep, "C_g_con_tau", c, false);
  rep.bound_formula = "superdemocracy <= C^2; CGPCC <= C";

  add_clause(rep, "superdemocracy",
             indicator_pairs(signed_indicators(e, dim, mc, true), c * c));

  const auto& vs = ctx.corpus->vectors;
  Tracker cg = reduce_indices<Tracker>(vs.size(), [&](Tracker& t, std::size_t i) {
    const Vec& x = vs[i];
    const ErrorProfile prof = error_profile(e, x, ctx.budget, kDCon);
    for (int m = 0; m <= x.size(); ++m)
      for (const IndexSet& a : enumerate_greedy_sets({x, m, ctx.tau}, ctx.budget.cap))
        t.offer(e(suppress(x, a)), c * prof.d_con[static_cast<std::size_t>(m)].value, [&] {
          json w = with_x(x);
          w["m"] = m;
          w["A"] = set_to_json(a);
          return w;
        });
  });
  add_clause(rep, "cgpcc", std::move(cg));
  finalize(rep);
  return rep;
}

CheckReport check_m1_ii(const CheckContext& ctx) {
  CheckReport rep = make_report("m1_ii", ctx);
  rep.tau = ctx.tau;
  const NormEngine& e = ctx.engine;
  const int dim = ctx.dim();
  const int mc = std::min(ctx.max_card, dim);
  const auto& vs = ctx.corpus->vectors;
  auto dcon = [&](const Vec& x, int m) { return d_con_m(e, x, m, ctx.budget).value; };

  double pc = est_cgpcc(e, *ctx.corpus, ctx.tau, ctx.budget).value;
  pc = std::max(pc, democracy_chain(e, dim, mc, false, dcon).value);
  // Partial sums: y = x + alpha 1_{m+1..n} has greedy set {m+1..n} and
  // y - alpha 1_{m+1..n} = x.
  RatioMax schauder = reduce_indices<RatioMax>(vs.size(), [&](RatioMax& r, std::size_t i) {
    const Vec& x = vs[i];
    const IndexSet s = support(x);
    if (s.empty()) return;
    const double alpha = (1.0 + 1.0 / ctx.tau) * sup_norm(x) + 1.0;
    for (int m = 1; m < s.max(); ++m) {
      const IndexSet i2 = IndexSet::range(m + 1, s.max());
      const Vec y = x + alpha * indicator(i2, nullptr, x.size());
      const int k = static_cast<int>(i2.size());
      r.offer(e(suppress(y, i2)), dcon(y, k), [&] {
        json w = with_x(y);
        w["m"] = k;
        w["A"] = set_to_json(i2);
        return w;
      });
    }
  });
  pc = std::max(pc, schauder.value);
  add_constant(rep, "P_g_con_tau", pc, false);
  rep.bound_formula = "suppression tau-QG <= P; democracy <= P^2; Schauder <= P";

  Trackers<2> corpus_checks =
      reduce_indices<Trackers<2>>(vs.size(), [&](Trackers<2>& t, std::size_t i) {
        const Vec& x = vs[i];
        const double nx = e(x);
        for (int m = 0; m <= x.size(); ++m) {
          for (const IndexSet& a : enumerate_greedy_sets({x, m, ctx.tau}, ctx.budget.cap))
            t.t[0].offer(e(suppress(x, a)), pc * nx, [&] {
              json w = with_x(x);
              w["m"] = m;
              w["A"] = set_to_json(a);
              return w;
            });
          t.t[1].offer(e(partial_sum(x, m)), pc * nx, [&] {
            json w = with_x(x);
            w["m"] = m;
            return w;
          });
        }
      });
  add_clause(rep, "suppression_quasi_greedy", std::move(corpus_checks.t[0]));
  add_clause(rep, "democracy", indicator_pairs(signed_indicators(e, dim, mc, false), pc * pc));
  add_clause(rep, "schauder", std::move(corpus_checks.t[1]));
  finalize(rep);
  return rep;
}

namespace {

struct M1iiiConstants {
  double kb = kCertifiedKb;
  double c_ell = 1.0, c_ell_1 = 1.0, c_tq = 1.0, delta_sd = 1.0;
};

}  // namespace

CheckReport check_m1_iii(const CheckContext& ctx) {
  CheckReport rep = make_report("m1_iii", ctx);
  rep.tau = ctx.tau;
  const NormEngine& e = ctx.engine;
  const int dim = ctx.dim();
  const double p = e.p_exp();
  const double tau = ctx.tau;

  M1iiiConstants k;
  add_constant(rep, "K_b", k.kb, true);
  if (e.lattice()) {
    // Lattice norms: every projection has norm 1.
    k.delta_sd = *certified_superdemocracy(e);
    add_constant(rep, "C_ell_tau", k.c_ell, true);
    add_constant(rep, "C_tq", k.c_tq, true);
    add_constant(rep, "Delta_sd", k.delta_sd, true);
    add_constant(rep, "C_ell_1", k.c_ell_1, true);
  } else {
    k.c_ell = est_suppression_qg(e, *ctx.corpus, tau, ctx.budget).value;
    k.c_ell_1 = tau == 1.0 ? k.c_ell : est_suppression_qg(e, *ctx.corpus, 1.0, ctx.budget).value;
    k.c_tq = est_truncation_qg(e, *ctx.corpus, ctx.budget).value;
    k.delta_sd = est_superdemocracy(e, dim, std::min(ctx.max_card, dim)).value;
    add_constant(rep, "C_ell_tau", k.c_ell, false);
    add_constant(rep, "C_tq", k.c_tq, false);
    add_constant(rep, "Delta_sd", k.delta_sd, false);
    add_constant(rep, "C_ell_1", k.c_ell_1, false);
  }
  const double bound = consecutive_greedy_bound(p, tau, k.kb, k.c_ell, k.delta_sd, k.c_tq);
  const bool p1 = p == 1.0;
  const double bound1 = p1 ? consecutive_greedy_bound_p1(tau, k.kb, k.c_ell, k.delta_sd, k.c_ell_1) : kInf;
  rep.bound_formula = "((1+2K_b^p)(2+C_ell_tau^p)+(A_p Delta_sd C_tq/tau)^p)^(1/p) = " + fmt(bound);
  if (p1) rep.bound_formula += "; (1+2K_b)(2+C_ell_tau)+2 Delta_sd C_ell_1/tau = " + fmt(bound1);

  const std::vector<double>& grid = ctx.coeff_grid;
  const auto& vs = ctx.corpus->vectors;
  Trackers<3> tr = reduce_indices<Trackers<3>>(vs.size(), [&](Trackers<3>& t, std::size_t idx) {
    const Vec& x = vs[idx];
    const double xmax = sup_norm(x);
    for (int m = 0; m <= dim; ++m) {
      const std::vector<IndexSet> greedy = enumerate_greedy_sets({x, m, tau}, ctx.budget.cap);
      // Closest approximant y supported on an interval of length m, over the
      // coefficient family: values g * ||x||_inf and the coefficient of x.
      Vec xp = padded_to(x, dim + m);
      double best = e(x);
      Interval best_iv{1, 0};
      Vec best_a;
      std::size_t combos = 1;
      for (const Interval& iv : consecutive_intervals(dim, m)) {
        std::vector<std::vector<double>> cand(static_cast<std::size_t>(m));
        for (int j = 0; j < m; ++j) {
          auto& c = cand[static_cast<std::size_t>(j)];
          for (double g : grid) c.push_back(g * xmax);
          c.push_back(xp(iv.start + j - 1));
        }
        Vec r = xp;
        Vec a(m);
        auto eval = [&] {
          for (int j = 0; j < m; ++j) r(iv.start + j - 1) = xp(iv.start + j - 1) - a(j);
          const double v = e(r);
          ++combos;
          if (v < best) {
            best = v;
            best_iv = iv;
            best_a = a;
          }
        };
        if (m <= 3) {
          std::vector<std::size_t> d(static_cast<std::size_t>(m), 0);
          while (true) {
            for (int j = 0; j < m; ++j)
              a(j) = cand[static_cast<std::size_t>(j)][d[static_cast<std::size_t>(j)]];
            eval();
            std::size_t i = 0;
            while (i < d.size() && ++d[i] == cand[i].size()) d[i++] = 0;
            if (i == d.size()) break;
          }
        } else {
          for (int j = 0; j < m; ++j) a(j) = xp(iv.start + j - 1);
          eval();
          for (int j = 0; j < m; ++j) {
            const double keep = a(j);
            for (double g : grid) {
              a(j) = g * xmax;
              eval();
            }
            a(j) = keep;
          }
          for (double g : grid) {
            a.setConstant(g * xmax);
            eval();
          }
        }
      }
      for (const IndexSet& lam : greedy) {
        const double lhs = e(suppress(x, lam));
        auto witness = [&] {
          json w = with_x(x);
          w["m"] = m;
          w["Lambda"] = set_to_json(lam);
          w["I"] = {{"start", best_iv.start}, {"length", best_iv.length}};
          w["coefficients"] = std::vector<double>(best_a.data(), best_a.data() + best_a.size());
          return w;
        };
        t.t[0].offer(lhs, bound * best, witness, combos);
        if (p1) t.t[1].offer(lhs, bound1 * best, witness, combos);
        t.t[2].offer(lhs, best, witness, combos);
      }
    }
  });
  add_clause(rep, "general_bound", std::move(tr.t[0]));
  if (p1) add_clause(rep, "p1_bound", std::move(tr.t[1]));
  add_clause(rep, "observed_ratio", std::move(tr.t[2]), false);
  finalize(rep);
  return rep;
}

CheckReport check_lemmatqg(const CheckContext& ctx) {
  CheckReport rep = make_report("lemmatqg", ctx);
  const NormEngine& e = ctx.engine;
  const double p = e.p_exp();
  double c = 1.0;
  if (e.lattice()) {
    add_constant(rep, "C_ell_1", c, true);
  } else {
    c = est_suppression_qg(e, *ctx.corpus, 1.0, ctx.budget).value;
    add_constant(rep, "C_ell_1", c, false);
  }
  const double bound = p == 1.0 ? 2.0 * c : c * c * eta_p(p, c);
  rep.bound_formula = (p == 1.0 ? "2C = " : "C^2 eta_p(C) = ") + fmt(bound);
  const auto& vs = ctx.corpus->vectors;
  Tracker t = reduce_indices<Tracker>(vs.size(), [&](Tracker& tr, std::size_t i) {
    const Vec& x = vs[i];
    const double nx = e(x);
    for (int m = 1; m <= x.size(); ++m)
      for (const IndexSet& a : enumerate_greedy_sets({x, m, 1.0}, ctx.budget.cap)) {
        double lo = kInf;
        for (int n : a) lo = std::min(lo, std::abs(x(n - 1)));
        tr.offer(lo * e(indicator(a, sign_vector(x, a), x.size())), bound * nx, [&] {
          json w = with_x(x);
          w["m"] = m;
          w["A"] = set_to_json(a);
          return w;
        });
      }
  });
  add_clause(rep, "truncation_quasi_greedy", std::move(t));
  finalize(rep);
  return rep;
}

// ---------------------------------------------------------------------------
// Property (A)

namespace {

double property_a_constant(const CheckContext& ctx, double tau, CheckReport& rep,
                           const std::string& name) {
  if (symmetric(ctx.engine)) {
    add_constant(rep, name, 1.0, true);
    return 1.0;
  }
  const double c = est_propA(ctx.engine, ctx.dim(), tau, ctx.coeff_grid, ctx.grid_support).value;
  add_constant(rep, name, c, false);
  return c;
}

// ||tau x + 1_{eps,A}|| <= factor ||x + 1_{delta,B}|| over the grid family.
Tracker property_a_instances(const CheckContext& ctx, double tau, double factor, int support) {
  const NormEngine& e = ctx.engine;
  const int dim = ctx.dim();
  const std::vector<Vec> xs = grid_family(ctx, 1.0 / tau, support);
  return reduce_indices<Tracker>(xs.size(), [&](Tracker& t, std::size_t i) {
    const Vec& x = xs[i];
    for_each_disjoint_pair(x, dim, dim, [&](const IndexSet& a, const SignVector& eps,
                                            const IndexSet& b, const SignVector& delta) {
      const Vec ia = indicator(a, eps, dim), ib = indicator(b, delta, dim);
      t.offer(e(tau * x + ia), factor * e(x + ib), [&] {
        json w = with_x(x);
        w["tau"] = tau;
        w["A"] = signed_set(a, eps);
        w["B"] = signed_set(b, delta);
        return w;
      });
    });
  });
}

}  // namespace

CheckReport check_l1(const CheckContext& ctx) {
  CheckReport rep = make_report("l1", ctx);
  const NormEngine& e = ctx.engine;
  const int dim = ctx.dim();
  const double c = property_a_constant(ctx, 1.0, rep, "PropA_1");
  const double ap = p_constants(e.p_exp()).a_p;
  rep.bound_formula = "A_p C = " + fmt(ap * c);
  // Zeros of x inside A only shrink the admissible B, so A ranges over
  // subsets of supp(x).
  const std::vector<Vec> xs = grid_family(ctx);
  Tracker t = reduce_indices<Tracker>(xs.size(), [&](Tracker& tr, std::size_t i) {
    const Vec& x = xs[i];
    const IndexSet s = support(x);
    const IndexSet free = s.complement(dim);
    const double nx = e(x);
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << s.size()); ++mask) {
      std::vector<int> av;
      for (std::size_t j = 0; j < s.size(); ++j)
        if (mask >> j & 1U) av.push_back(s.elems()[j]);
      const IndexSet a(std::move(av));
      const Vec rest = suppress(x, a);
      for_each_signed_subset(free, static_cast<int>(a.size()), dim,
                             [&](const IndexSet& b, const SignVector& eps) {
                               tr.offer(nx, ap * c * e(rest + indicator(b, eps, dim)), [&] {
                                 json w = with_x(x);
                                 w["A"] = set_to_json(a);
                                 w["B"] = signed_set(b, eps);
                                 return w;
                               });
                             });
    }
  });
  add_clause(rep, "l1", std::move(t));
  finalize(rep);
  return rep;
}

CheckReport check_m3(const CheckContext& ctx) {
  CheckReport rep = make_report("m3", ctx);
  const NormEngine& e = ctx.engine;
  const bool banach_symmetric = symmetric(e) && e.p_exp() == 1.0;
  const bool interval = std::holds_alternative<engines::IntervalSup>(e.params());
  if (!banach_symmetric && !interval)
    return skipped(rep, "hypotheses with constant 1 are not certified for this engine");
  add_constant(rep, "C", 1.0, true);
  rep.bound_formula = "1-CGPCC, 1-Property (A), 1-suppression consecutive unconditional";
  const bool asserted = banach_symmetric;
  const auto& vs = ctx.corpus->vectors;

  Trackers<2> tr = reduce_indices<Trackers<2>>(vs.size(), [&](Trackers<2>& t, std::size_t i) {
    const Vec& x = vs[i];
    const ErrorProfile prof = error_profile(e, x, ctx.budget, kDCon);
    for (int m = 0; m <= x.size(); ++m)
      for (const IndexSet& a : enumerate_greedy_sets({x, m, 1.0}, ctx.budget.cap))
        t.t[0].offer(e(suppress(x, a)), prof.d_con[static_cast<std::size_t>(m)].value, [&] {
          json w = with_x(x);
          w["m"] = m;
          w["A"] = set_to_json(a);
          return w;
        });
    const double nx = e(x);
    const int dim = static_cast<int>(x.size());
    for (int s = 1; s <= dim; ++s)
      for (int len = 1; s + len - 1 <= dim; ++len) {
        const Interval iv{s, len};
        t.t[1].offer(e(suppress(x, iv.to_set())), nx, [&] {
          json w = with_x(x);
          w["I"] = {{"start", s}, {"length", len}};
          return w;
        });
      }
  });
  add_clause(rep, "cgpcc_1", std::move(tr.t[0]), asserted);
  add_clause(rep, "property_a_1", property_a_instances(ctx, 1.0, 1.0, ctx.grid_support), asserted);
  add_clause(rep, "consecutive_unconditional_1", std::move(tr.t[1]), asserted);

  if (interval) {
    const Vec x = parse_vec(R"({"1": 3, "2": -1, "3": 3})", ctx.dim());
    const IndexSet i{2};
    ExpectedFailure f;
    f.clause = "consecutive_unconditional_1";
    f.witness = with_x(x);
    f.witness["I"] = {{"start", 2}, {"length", 1}};
    f.ratio = e(suppress(x, i)) / e(x);
    f.reproduced = relative_slack(e(suppress(x, i)), e(x)) < -kCheckTolerance;
    rep.expected_failures.push_back(std::move(f));
    rep.notes.push_back("clauses observed only: the engine is expected to violate them");
  }
  finalize(rep);
  return rep;
}

CheckReport check_1propA_scaling(const CheckContext& ctx) {
  CheckReport rep = make_report("1propA_scaling", ctx);
  const NormEngine& e = ctx.engine;
  const int dim = ctx.dim();
  if (e.p_exp() != 1.0) return skipped(rep, "requires a Banach engine (p = 1)");
  if (symmetric(e)) {
    add_constant(rep, "PropA_1", 1.0, true);
  } else {
    const double c = est_propA(e, dim, 1.0, ctx.coeff_grid, ctx.grid_support).value;
    if (relative_slack(c, 1.0) < -kCheckTolerance)
      return skipped(rep, "1-Property (A) fails on the grid family (constant " + fmt(c) + ")");
    add_constant(rep, "PropA_1", c, false);
  }
  rep.bound_formula = "||u+y|| <= ||a u+z||; ||tau x+1_{eps,A}|| <= ||x+1_{delta,B}||";

  const std::vector<double> avals{1.0, -1.0, 1.5, -1.5, 2.0, -2.0, 4.0, -4.0};
  const std::vector<double> yvals{0.5, -0.5, 1.0, -1.0};
  const std::vector<double> zvals{1.0, -1.0, 2.0, -2.0};
  const std::vector<Vec> us = grid_family(ctx, 1.0, 2);

  // Vectors supported on subsets of `pool` with at most two entries from `vals`.
  auto small_vectors = [&](const IndexSet& pool, const std::vector<double>& vals) {
    std::vector<std::pair<Vec, int>> out;
    const int n = static_cast<int>(pool.size());
    for (int k = 0; k <= std::min(2, n); ++k)
      for_each_combination(n, k, [&](const IndexSet& pos) {
        std::vector<std::size_t> d(static_cast<std::size_t>(k), 0);
        while (true) {
          Vec v = Vec::Zero(dim);
          std::size_t j = 0;
          for (int q : pos) v(pool.elems()[static_cast<std::size_t>(q - 1)] - 1) = vals[d[j++]];
          out.emplace_back(std::move(v), k);
          std::size_t i = 0;
          while (i < d.size() && ++d[i] == vals.size()) d[i++] = 0;
          if (i == d.size()) break;
        }
      });
    return out;
  };

  Tracker scaling = reduce_indices<Tracker>(us.size(), [&](Tracker& t, std::size_t i) {
    const Vec& u = us[i];
    const IndexSet free = support(u).complement(dim);
    const auto ys = small_vectors(free, yvals);
    const auto zs = small_vectors(free, zvals);
    // Smallest right-hand side per |supp z|, then over |supp z| >= k.
    std::vector<double> rhs(3, kInf);
    std::vector<json> arg(3);
    for (const auto& [z, k] : zs)
      for (double a : avals) {
        const double v = e(a * u + z);
        if (v < rhs[static_cast<std::size_t>(k)]) {
          rhs[static_cast<std::size_t>(k)] = v;
          arg[static_cast<std::size_t>(k)] = {{"a", a}, {"z", vec_to_json(z)}};
        }
      }
    for (int k = 1; k >= 0; --k)
      if (rhs[static_cast<std::size_t>(k + 1)] < rhs[static_cast<std::size_t>(k)]) {
        rhs[static_cast<std::size_t>(k)] = rhs[static_cast<std::size_t>(k + 1)];
        arg[static_cast<std::size_t>(k)] = arg[static_cast<std::size_t>(k + 1)];
      }
    for (const auto& [y, k] : ys) {
      if (sup_norm(Vec(u + y)) > 1.0) continue;
      const auto kk = static_cast<std::size_t>(k);
      t.offer(e(u + y), rhs[kk], [&] {
        json w{{"u", vec_to_json(u)}, {"y", vec_to_json(y)}, {"dim", dim}};
        w["minimiser"] = arg[kk];
        return w;
      });
    }
  });
  add_clause(rep, "scaling", std::move(scaling));

  Tracker special;
  for (double tau : {0.25, 0.5, 1.0}) {
    const std::vector<Vec> xs = grid_family(ctx, 1.0 / tau, 2);
    special.merge(reduce_indices<Tracker>(xs.size(), [&](Tracker& t, std::size_t i) {
      const Vec& x = xs[i];
      for_each_disjoint_pair(x, dim, 2, [&](const IndexSet& a, const SignVector& eps,
                                            const IndexSet& b, const SignVector& delta) {
        t.offer(e(tau * x + indicator(a, eps, dim)), e(x + indicator(b, delta, dim)), [&] {
          json w = with_x(x);
          w["tau"] = tau;
          w["A"] = signed_set(a, eps);
          w["B"] = signed_set(b, delta);
          return w;
        });
      });
    }));
  }
  add_clause(rep, "tau_specialization", std::move(special));
  finalize(rep);
  return rep;
}

CheckReport check_alltau(const CheckContext& ctx) {
  CheckReport rep = make_report("alltau", ctx);
  rep.tau = ctx.tau;
  rep.t = ctx.t;
  const NormEngine& e = ctx.engine;
  const double p = e.p_exp();
  const double c = property_a_constant(ctx, ctx.tau, rep, "PropA_tau");
  double phi = 1.0;
  if (e.lattice()) {
    add_constant(rep, "phi_t", phi, true);
  } else {
    phi = est_near_unc_phi(e, ctx.dim(), ctx.t, ctx.coeff_grid, ctx.grid_support).value;
    add_constant(rep, "phi_t", phi, false);
  }
  const double tp = std::pow(ctx.t, p), php = std::pow(phi, p);
  const double d = std::pow(tp + tp * php + std::pow(c / ctx.tau, p) * php, 1.0 / p);
  rep.bound_formula = "D(t) = (t^p + t^p phi^p + (C/tau)^p phi^p)^(1/p) = " + fmt(d);
  add_clause(rep, "property_a_t", property_a_instances(ctx, ctx.t, d, ctx.grid_support));
  finalize(rep);
  return rep;
}

CheckReport check_unifA(const CheckContext& ctx) {
  CheckReport rep = make_report("unifA", ctx);
  const NormEngine& e = ctx.engine;
  const int dim = ctx.dim();
  const double p = e.p_exp();
  double cu = 1.0;
  if (symmetric(e)) {
    add_constant(rep, "uniform_PropA", cu, true);
  } else {
    cu = 0.0;
    for (double tau : ctx.taus)
      cu = std::max(cu, est_propA(e, dim, tau, ctx.coeff_grid, ctx.grid_support).value);
    add_constant(rep, "uniform_PropA", cu, false);
  }
  const double b12 = std::pow(1.0 + std::pow(cu, p) + std::pow(cu, 2.0 * p), 1.0 / p);

  // Statement ii) quantifies over unbounded x; scales cover every 1/tau.
  std::vector<double> scales{1.0, 2.0, 4.0};
  for (double tau : ctx.taus) scales.push_back(1.0 / tau);
  std::sort(scales.begin(), scales.end());
  scales.erase(std::unique(scales.begin(), scales.end()), scales.end());

  Trackers<1> ii;
  for (double s : scales) {
    const std::vector<Vec> xs = grid_family(ctx, s);
    ii.merge(reduce_indices<Trackers<1>>(xs.size(), [&](Trackers<1>& t, std::size_t i) {
      const Vec& x = xs[i];
      for_each_disjoint_pair(x, dim, dim, [&](const IndexSet& a, const SignVector& eps,
                                              const IndexSet& b, const SignVector& delta) {
        const double lhs = e(x + indicator(a, eps, dim)), den = e(x + indicator(b, delta, dim));
        auto witness = [&] {
          json w = with_x(x);
          w["A"] = signed_set(a, eps);
          w["B"] = signed_set(b, delta);
          return w;
        };
        t.t[0].offer(lhs, b12 * den, witness);
        t.measured.offer(lhs, den, witness);
      });
    }));
  }
  const double c2 = ii.measured.value;
  add_constant(rep, "C_ii", c2, false);
  const double b21 =
      std::pow(2.0 * std::pow(c2, p) + 1.0, 1.0 / p) * std::pow(2.0, 1.0 / p - 1.0) * c2;
  rep.bound_formula = "i=>ii: (1+C^p+C^2p)^(1/p) = " + fmt(b12) +
                      "; ii=>i: (2C_ii^p+1)^(1/p) 2^(1/p-1) C_ii = " + fmt(b21);
  add_clause(rep, "i_implies_ii", std::move(ii.t[0]));
  Tracker back;
  for (double tau : ctx.taus) back.merge(property_a_instances(ctx, tau, b21, ctx.grid_support));
  add_clause(rep, "ii_implies_i", std::move(back));
  finalize(rep);
  return rep;
}

// ---------------------------------------------------------------------------
// Squeeze symmetry

namespace {

/// ||x + lambda 1_{s,S}|| for every signed S inside {1..dim}; indexed by the
/// set mask and the mask of its minus signs.
struct SignedTable {
  int dim = 0;
  std::vector<double> v;
  double at(std::uint64_t set, std::uint64_t minus) const {
    return v[(set << dim) | (minus & set)];
  }
};

SignedTable signed_table(const NormEngine& e, const Vec& x, double lambda) {
  const int dim = static_cast<int>(x.size());
  SignedTable t;
  t.dim = dim;
  t.v.assign(std::size_t{1} << (2 * dim), 0.0);
  Vec y(dim);
  for (std::uint64_t set = 0; set < (std::uint64_t{1} << dim); ++set) {
    // Iterate the submasks of `set` as minus patterns.
    std::uint64_t minus = 0;
    while (true) {
      y = x;
      for (int n = 0; n < dim; ++n)
        if (set >> n & 1U) y(n) += (minus >> n & 1U) ? -lambda : lambda;
      t.v[(set << dim) | minus] = e(y);
      if (minus == set) break;
      minus = (minus - set) & set;
    }
  }
  return t;
}

std::uint64_t mask_of(const Vec& x) { return support(x).mask(); }

json signed_mask(std::uint64_t set, std::uint64_t minus) {
  const IndexSet a = IndexSet::from_mask(set);
  SignVector s;
  for (int n : a) s.set(n, (minus >> (n - 1) & 1U) ? Sign::Minus : Sign::Plus);
  return signed_set(a, s);
}

std::vector<IndexSet> all_greedy_sets(const Vec& x, std::uint64_t cap) {
  std::vector<IndexSet> out;
  for (int m = 0; m <= x.size(); ++m)
    for (IndexSet& a : enumerate_greedy_sets({x, m, 1.0}, cap)) out.push_back(std::move(a));
  return out;
}

const std::vector<double> kSqsLambdas{0.25, 0.5, 1.0, 2.0};

struct SqsMeasure {
  double c_sqs = 0.0;
  Tracker i_ii;      // instances of ii) against the bound from C_sqs
  RatioMax c_ii;     // measured constant of ii)
};

// Statement ii) over x in the grid family, A in G(x), |B| >= |A|,
// |B n supp x| <= |A|, eps = delta on A n B, lambda in kSqsLambdas. Negative
// lambda is the same family with all signs flipped.
SqsMeasure sqs_statement_ii(const CheckContext& ctx, double bound) {
  const NormEngine& e = ctx.engine;
  const int dim = ctx.dim();
  if (dim > 10) throw CapExceeded("sqs family: dim too large for signed tables");
  const std::vector<Vec> xs = grid_family(ctx);
  struct Acc {
    Tracker t;
    RatioMax r;
    void merge(Acc&& o) {
      t.merge(std::move(o.t));
      r.merge(std::move(o.r));
    }
  };
  Acc acc = reduce_indices<Acc>(xs.size(), [&](Acc& out, std::size_t i) {
    const Vec& x = xs[i];
    const std::uint64_t sx = mask_of(x);
    const std::vector<IndexSet> gs = all_greedy_sets(x, ctx.budget.cap);
    for (double lambda : kSqsLambdas) {
      const SignedTable tab = signed_table(e, x, lambda);
      for (const IndexSet& a : gs) {
        const std::uint64_t am = a.mask();
        const int na = static_cast<int>(a.size());
        for (std::uint64_t bm = 0; bm < (std::uint64_t{1} << dim); ++bm) {
          const int nb = std::popcount(bm);
          if (nb < na || std::popcount(bm & sx) > na) continue;
          const std::uint64_t common = am & bm;
          const std::uint64_t a_only = am & ~common, b_only = bm & ~common;
          // For each sign pattern on A n B: worst numerator and denominator.
          std::uint64_t c = 0;
          while (true) {
            double num = -1.0, den = kInf;
            std::uint64_t num_m = 0, den_m = 0;
            std::uint64_t s = 0;
            while (true) {
              const double v = tab.at(am, c | s);
              if (v > num) {
                num = v;
                num_m = c | s;
              }
              if (s == a_only) break;
              s = (s - a_only) & a_only;
            }
            s = 0;
            while (true) {
              const double v = tab.at(bm, c | s);
              if (v < den) {
                den = v;
                den_m = c | s;
              }
              if (s == b_only) break;
              s = (s - b_only) & b_only;
            }
            auto witness = [&] {
              json w = with_x(x);
              w["lambda"] = lambda;
              w["A"] = signed_mask(am, num_m);
              w["B"] = signed_mask(bm, den_m);
              return w;
            };
            const std::size_t weight = (std::size_t{1} << std::popcount(a_only)) *
                                       (std::size_t{1} << std::popcount(b_only));
            out.t.offer(num, bound * den, witness, weight);
            out.r.offer(num, den, witness);
            if (c == common) break;
            c = (c - common) & common;
          }
        }
      }
    }
  });
  SqsMeasure m;
  m.i_ii = std::move(acc.t);
  m.c_ii = std::move(acc.r);
  return m;
}

double sqs_bound(double p, double c_sqs) {
  return std::pow(1.0 + std::pow(2.0, p + 1.0) * std::pow(c_sqs, p), 1.0 / p);
}

}  // namespace

CheckReport check_sqs_implications(const CheckContext& ctx) {
  CheckReport rep = make_report("sqs_implications", ctx);
  const NormEngine& e = ctx.engine;
  const int dim = ctx.dim();
  const double p = e.p_exp();
  const double c_sqs = est_sqs(e, dim, ctx.coeff_grid, ctx.grid_support).value;
  add_constant(rep, "C_sqs", c_sqs, false);
  const double b12 = sqs_bound(p, c_sqs);

  SqsMeasure ii = sqs_statement_ii(ctx, b12);
  const double c_ii = ii.c_ii.value;
  add_constant(rep, "C_ii", c_ii, false);
  add_clause(rep, "i_implies_ii", std::move(ii.i_ii));

  // iii): ||x - 1_A|| <= C ||x - 1_{eps,B}||, A in G(x), B in supp x, |B| = |A|,
  // A n B empty. Each instance lies in the family of ii) with lambda = -1.
  const std::vector<Vec> xs = grid_family(ctx);
  Trackers<1> iii = reduce_indices<Trackers<1>>(xs.size(), [&](Trackers<1>& t, std::size_t i) {
    const Vec& x = xs[i];
    const std::uint64_t sx = mask_of(x);
    const SignedTable tab = signed_table(e, x, 1.0);
    for (const IndexSet& a : all_greedy_sets(x, ctx.budget.cap)) {
      if (a.empty()) continue;
      const std::uint64_t am = a.mask();
      const std::uint64_t pool = sx & ~am;
      for (std::uint64_t bm = pool;; bm = (bm - 1) & pool) {
        if (std::popcount(bm) == static_cast<int>(a.size())) {
          const double lhs = tab.at(am, am);  // x - 1_A
          for (std::uint64_t s = 0;; s = (s - bm) & bm) {
            // x - 1_{eps,B} with eps = -(minus pattern)
            const double den = tab.at(bm, s);
            auto witness = [&] {
              json w = with_x(x);
              w["A"] = set_to_json(a);
              w["B"] = signed_mask(bm, ~s & bm);
              return w;
            };
            t.t[0].offer(lhs, c_ii * den, witness);
            t.measured.offer(lhs, den, witness);
            if (s == bm) break;
          }
        }
        if (bm == 0) break;
      }
    }
  });
  const double c_iii = iii.measured.value;
  add_constant(rep, "C_iii", c_iii, false);
  add_clause(rep, "ii_implies_iii", std::move(iii.t[0]));

  // iii) => i) through the basis constant.
  const double m = kCertifiedKb;
  add_constant(rep, "K_b", m, true);
  const double b31 = c_iii * c_iii * std::pow(1.0 + std::pow(m, p), 1.0 / p);
  const int top = std::min(ctx.grid_support, dim);
  const auto sets = signed_indicators(e, dim, top, true);
  Tracker back = reduce_indices<Tracker>(xs.size(), [&](Tracker& t, std::size_t i) {
    const Vec& x = xs[i];
    int big = 0;
    for (int n = 0; n < dim; ++n) big += std::abs(x(n)) >= 1.0;
    const double nx = e(x);
    for (const auto& s : sets)
      if (static_cast<int>(s.set.size()) <= big)
        t.offer(s.norm, b31 * nx, [&] {
          json w = with_x(x);
          w["A"] = signed_set(s.set, s.signs);
          return w;
        });
  });
  add_clause(rep, "iii_implies_i", std::move(back));
  rep.bound_formula = "i=>ii: (1+2^(p+1) C_sqs^p)^(1/p) = " + fmt(b12) + "; ii=>iii: C_ii = " +
                      fmt(c_ii) + "; iii=>i: C_iii^2 (1+K_b^p)^(1/p) = " + fmt(b31);
  finalize(rep);
  return rep;
}

CheckReport check_corollaryforsemi(const CheckContext& ctx) {
  CheckReport rep = make_report("corollaryforsemi", ctx);
  const NormEngine& e = ctx.engine;
  const int dim = ctx.dim();
  const double p = e.p_exp();
  const double c_sqs = est_sqs(e, dim, ctx.coeff_grid, ctx.grid_support).value;
  double c = sqs_statement_ii(ctx, sqs_bound(p, c_sqs)).c_ii.value;

  const std::vector<Vec> xs = grid_family(ctx);
  struct Pending {
    std::size_t x;
    IndexSet a;
    double lhs, rhs;
    std::uint64_t d;
  };
  struct Acc {
    std::vector<Pending> items;
    RatioMax pointwise;
    void merge(Acc&& o) {
      items.insert(items.end(), std::make_move_iterator(o.items.begin()),
                   std::make_move_iterator(o.items.end()));
      pointwise.merge(std::move(o.pointwise));
    }
  };
  Acc acc = reduce_indices<Acc>(xs.size(), [&](Acc& out, std::size_t i) {
    const Vec& x = xs[i];
    const std::uint64_t sx = mask_of(x);
    const std::size_t nsub = std::size_t{1} << dim;
    std::vector<Minimum1d> val(nsub);
    for (std::uint64_t d = 0; d < nsub; ++d)
      val[d] = best_constant(e, x, IndexSet::from_mask(d), ctx.budget);
    // Right-hand side per bound k on |D n supp x|.
    std::vector<std::uint64_t> arg(static_cast<std::size_t>(dim) + 1, 0);
    for (int k = 0; k <= dim; ++k) {
      double best = kInf;
      for (std::uint64_t d = 0; d < nsub; ++d)
        if (std::popcount(d & sx) <= k && val[d].value < best) {
          best = val[d].value;
          arg[static_cast<std::size_t>(k)] = d;
        }
    }
    for (const IndexSet& a : all_greedy_sets(x, ctx.budget.cap)) {
      const std::uint64_t am = a.mask();
      double lhs = kInf;
      for (std::uint64_t b = am;; b = (b - 1) & am) {
        lhs = std::min(lhs, val[b].value);
        if (b == 0) break;
      }
      const std::uint64_t d = arg[a.size()];
      const double lam = val[d].arg;
      // The pointwise instance of ii) behind the bound, at the optimal lambda.
      IndexSet a1 = a;
      const auto nd = static_cast<std::size_t>(std::popcount(d));
      if (nd < a.size()) {
        std::vector<int> order = a.elems();
        std::stable_sort(order.begin(), order.end(),
                         [&](int u, int v) { return std::abs(x(u - 1)) > std::abs(x(v - 1)); });
        order.resize(nd);
        a1 = IndexSet(std::move(order));
      }
      const double num = e(x - lam * indicator(a1, nullptr, dim));
      out.pointwise.offer(num, val[d].value, [&] {
        json w = with_x(x);
        w["lambda"] = lam;
        w["A"] = set_to_json(a1);
        w["B"] = set_to_json(IndexSet::from_mask(d));
        return w;
      });
      out.items.push_back({i, a, lhs, val[d].value, d});
    }
  });
  const bool augmented = acc.pointwise.value > c;
  c = std::max(c, acc.pointwise.value);
  add_constant(rep, "C_ii", c, false);
  rep.bound_formula = "min_{B in A, l1} ||x - l1 1_B|| <= C min_{D, l2} ||x - l2 1_D||, C = " + fmt(c);
  if (augmented) rep.notes.push_back("C raised by the pointwise instances at the optimal lambda");
  Tracker t;
  for (const auto& it : acc.items)
    t.offer(it.lhs, c * it.rhs, [&] {
      json w = with_x(xs[it.x]);
      w["A"] = set_to_json(it.a);
      w["D"] = set_to_json(IndexSet::from_mask(it.d));
      return w;
    });
  add_clause(rep, "corollary", std::move(t));
  finalize(rep);
  return rep;
}

// ---------------------------------------------------------------------------
// Pseudo-greedy selectors

namespace {

bool distinct_nonzero_moduli(const Vec& x) {
  std::vector<double> m;
  for (Eigen::Index i = 0; i < x.size(); ++i)
    if (x(i) != 0.0) m.push_back(std::abs(x(i)));
  std::sort(m.begin(), m.end());
  return std::adjacent_find(m.begin(), m.end()) == m.end();
}

// min over pseudo-greedy A with |A| = m of ||x - P_A x||.
double best_pseudo_greedy(const NormEngine& e, const Vec& x, int m) {
  double best = kInf;
  for_each_combination(static_cast<int>(x.size()), m, [&](const IndexSet& a) {
    if (is_pseudo_greedy(x, a)) best = std::min(best, e(suppress(x, a)));
  });
  return best;
}

}  // namespace

CheckReport check_pseudogreedy(const CheckContext& ctx) {
  CheckReport rep = make_report("pseudogreedy", ctx);
  const NormEngine& e = ctx.engine;
  const double p = e.p_exp();
  const double c2 = e.bounds().c2;
  std::vector<Vec> xs;
  for (const Vec& x : ctx.corpus->vectors)
    if (!support(x).empty() && distinct_nonzero_moduli(x)) xs.push_back(x);
  rep.notes.push_back("vectors with tied nonzero moduli are skipped");

  // Measured selector constants, including the vectors x + k e_n used by the
  // argument (k far above ||x||_inf).
  struct Acc {
    std::array<RatioMax, 3> r;
    void merge(Acc&& o) {
      for (std::size_t i = 0; i < 3; ++i) r[i].merge(std::move(o.r[i]));
    }
  };
  const unsigned which = kSigma | kSigmaTilde | kSigmaCon;
  Acc acc = reduce_indices<Acc>(xs.size(), [&](Acc& out, std::size_t i) {
    const Vec& x = xs[i];
    const int dim = static_cast<int>(x.size());
    const int s = static_cast<int>(support(x).size());
    const ErrorProfile prof = error_profile(e, x, ctx.budget, which);
    for (int m = 1; m <= s; ++m) {
      const double best = best_pseudo_greedy(e, x, m);
      const auto k = static_cast<std::size_t>(m);
      auto w = [&] {
        json j = with_x(x);
        j["m"] = m;
        return j;
      };
      out.r[0].offer(best, prof.sigma[k].value, w);
      out.r[1].offer(best, prof.sigma_tilde[k].value, w);
      out.r[2].offer(best, prof.sigma_con[k].value, w);
      const double big = 1e6 * (sup_norm(x) + 1.0);
      for (int n0 = 1; n0 <= dim + 1; ++n0) {
        Vec y = padded_to(x, dim + 1);
        y(n0 - 1) += big;
        const ErrorProfile py =
            error_profile(e, y, ctx.budget, n0 == dim + 1 ? which : unsigned{kSigmaCon});
        const double by = best_pseudo_greedy(e, y, m + 1);
        const auto k1 = k + 1;
        auto wy = [&] {
          json j = with_x(y);
          j["m"] = m + 1;
          return j;
        };
        if (n0 == dim + 1) {
          out.r[0].offer(by, py.sigma[k1].value, wy);
          out.r[1].offer(by, py.sigma_tilde[k1].value, wy);
        }
        out.r[2].offer(by, py.sigma_con[k1].value, wy);
      }
    }
  });
  const double ci = acc.r[0].value, cii = acc.r[1].value, ciii = acc.r[2].value;
  add_constant(rep, "C_sigma", ci, false);
  add_constant(rep, "C_sigma_tilde", cii, false);
  add_constant(rep, "C_sigma_con", ciii, false);
  const double b3 = std::pow(std::pow(ciii, p) + std::pow(c2, 2.0 * p), 1.0 / p);
  add_constant(rep, "c_2", c2, true);
  rep.bound_formula = "greedy <= C_sigma; almost greedy <= C_sigma_tilde; consecutive greedy <= "
                      "(C^p + c_2^2p)^(1/p) = " + fmt(b3);

  Trackers<3> tr = reduce_indices<Trackers<3>>(xs.size(), [&](Trackers<3>& t, std::size_t i) {
    const Vec& x = xs[i];
    const int s = static_cast<int>(support(x).size());
    const ErrorProfile prof = error_profile(e, x, ctx.budget, which);
    for (int m = 1; m <= s; ++m) {
      const auto k = static_cast<std::size_t>(m);
      for (const IndexSet& a : enumerate_greedy_sets({x, m, 1.0}, ctx.budget.cap)) {
        const double lhs = e(suppress(x, a));
        auto w = [&] {
          json j = with_x(x);
          j["m"] = m;
          j["A"] = set_to_json(a);
          return j;
        };
        t.t[0].offer(lhs, ci * prof.sigma[k].value, w);
        t.t[1].offer(lhs, cii * prof.sigma_tilde[k].value, w);
        t.t[2].offer(lhs, b3 * prof.sigma_con[k].value, w);
      }
    }
  });
  add_clause(rep, "greedy", std::move(tr.t[0]));
  add_clause(rep, "almost_greedy", std::move(tr.t[1]));
  add_clause(rep, "consecutive_greedy", std::move(tr.t[2]));
  finalize(rep);
  return rep;
}

// ---------------------------------------------------------------------------
// Separation

Separation search_separation(const NormEngine& engine, const IndexSet& f, int m,
                             const std::vector<double>& values) {
  if (m < 0) throw ContractViolation("search_separation: m must be nonnegative");
  Separation best;
  if (m == 0) {
    best.m = 1.0;
    return best;
  }
  const int top = f.empty() ? 0 : f.max();
  const int len = top + 2 * m;
  auto vectors_on = [&](const IndexSet& s) {
    std::vector<Vec> out;
    std::vector<std::size_t> d(s.size(), 0);
    while (true) {
      Vec v = Vec::Zero(len);
      std::size_t j = 0;
      for (int n : s) v(n - 1) = values[d[j++]];
      out.push_back(std::move(v));
      std::size_t i = 0;
      while (i < d.size() && ++d[i] == values.size()) d[i++] = 0;
      if (i == d.size()) break;
    }
    return out;
  };
  const std::vector<Vec> xs = vectors_on(f);
  bool have = false;
  for_each_combination(2 * m, m, [&](const IndexSet& pos) {
    std::vector<int> ev;
    for (int q : pos) ev.push_back(top + q);
    const IndexSet e(std::move(ev));
    double worst = 0.0;
    std::size_t count = 0;
    for (const Vec& y : vectors_on(e))
      for (const Vec& x : xs) {
        const double nx = engine(x), nxy = engine(x + y);
        ++count;
        if (nx == 0.0 && nxy == 0.0) continue;
        worst = std::max(worst, nxy == 0.0 ? kInf : nx / nxy);
      }
    best.samples += count;
    if (!have || worst < best.m) {
      best.e = e;
      best.m = worst;
      have = true;
    }
  });
  return best;
}

CheckReport check_separation(const CheckContext& ctx) {
  CheckReport rep = make_report("separation", ctx);
  rep.kind = "sampled separation";
  rep.bound_formula = "sampled max ||x|| / ||x + y|| over x on F, y on E > F";
  Tracker t;
  for (const IndexSet& f : {IndexSet{1}, IndexSet{1, 2}})
    for (int m = 0; m <= 2; ++m) {
      const Separation s = search_separation(ctx.engine, f, m);
      t.offer(s.m, kInf, [&] {
        return json{{"F", set_to_json(f)}, {"m", m}, {"E", set_to_json(s.e)}, {"M", number_to_json(s.m)}};
      }, s.samples);
      t.worst_ratio = std::max(t.worst_ratio, s.m);
      rep.notes.push_back("F=" + set_to_json(f).dump() + " m=" + std::to_string(m) +
                          " E=" + set_to_json(s.e).dump() + " M=" + fmt(s.m));
    }
  add_clause(rep, "separation", std::move(t), false);
  finalize(rep);
  rep.worst_ratio = rep.clauses.front().worst_ratio;
  rep.status = std::isfinite(rep.worst_ratio) ? CheckStatus::Pass : CheckStatus::Fail;
  return rep;
}

// ---------------------------------------------------------------------------

const std::vector<std::string>& check_ids() {
  static const std::vector<std::string> ids{
      "m1_i", "m1_ii", "m1_iii", "lemmatqg", "l1", "m3", "1propA_scaling",
      "alltau", "unifA", "sqs_implications", "corollaryforsemi", "pseudogreedy", "separation"};
  return ids;
}

bool known_check(const std::string& id) {
  const auto& ids = check_ids();
  return std::find(ids.begin(), ids.end(), id) != ids.end();
}

bool tau_dependent(const std::string& id) {
  return id == "m1_i" || id == "m1_ii" || id == "m1_iii" || id == "alltau";
}

CheckReport run_check(const std::string& id, const CheckContext& ctx) {
  if (id == "m1_i") return check_m1_i(ctx);
  if (id == "m1_ii") return check_m1_ii(ctx);
  if (id == "m1_iii") return check_m1_iii(ctx);
  if (id == "lemmatqg") return check_lemmatqg(ctx);
  if (id == "l1") return check_l1(ctx);
  if (id == "m3") return check_m3(ctx);
  if (id == "1propA_scaling") return check_1propA_scaling(ctx);
  if (id == "alltau") return check_alltau(ctx);
  if (id == "unifA") return check_unifA(ctx);
  if (id == "sqs_implications") return check_sqs_implications(ctx);
  if (id == "corollaryforsemi") return check_corollaryforsemi(ctx);
  if (id == "pseudogreedy") return check_pseudogreedy(ctx);
  if (id == "separation") return check_separation(ctx);
  throw ContractViolation("unknown check id: " + id);
}

}  // namespace gbl
