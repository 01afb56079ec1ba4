#include "gbl/constants.hpp"

#include "gbl/greedy.hpp"
#include "gbl/io.hpp"
#include "gbl/parallel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <random>

namespace gbl {

using nlohmann::json;

namespace {

struct Ratio {
  double num = 0.0;
  double den = 0.0;
};

double ratio_value(const Ratio& r) {
  if (r.den == 0.0)
    return r.num == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return r.num / r.den;
}

// Instance ratios shared by the estimators and by reevaluate, so a witness is
// recomputed through exactly the same floating-point path.

Ratio kb_ratio(const NormEngine& e, const Vec& x, int m) { return {e(partial_sum(x, m)), e(x)}; }

Ratio suppression_ratio(const NormEngine& e, const Vec& x, const IndexSet& a) {
  return {e(suppress(x, a)), e(x)};
}

Ratio indicator_ratio(const NormEngine& e, const IndexSet& a, const SignVector& eps,
                      const IndexSet& b, const SignVector& delta, int dim) {
  return {e(indicator(a, eps, dim)), e(indicator(b, delta, dim))};
}

Ratio truncation_ratio(const NormEngine& e, const Vec& x, const IndexSet& a) {
  double lo = std::numeric_limits<double>::infinity();
  for (int n : a) lo = std::min(lo, std::abs(x(n - 1)));
  return {lo * e(indicator(a, sign_vector(x, a), x.size())), e(x)};
}

Ratio propA_ratio(const NormEngine& e, const Vec& x, double tau, const IndexSet& a,
                  const SignVector& eps, const IndexSet& b, const SignVector& delta) {
  const Vec ia = indicator(a, eps, x.size());
  const Vec ib = indicator(b, delta, x.size());
  return {e(tau * x + ia), e(x + ib)};
}

Ratio qglc_ratio(const NormEngine& e, const Vec& x, const IndexSet& a, const SignVector& eps) {
  const Vec ia = indicator(a, eps, x.size());
  return {e(ia), e(x + ia)};
}

Ratio near_unc_ratio(const NormEngine& e, const Vec& x, const IndexSet& a) {
  return {e(project(x, a)), e(x)};
}

Ratio sqs_ratio(const NormEngine& e, const Vec& x, const IndexSet& a, const SignVector& eps) {
  return {e(indicator(a, eps, x.size())), e(x)};
}

json interval_to_json(const Interval& iv) { return {{"start", iv.start}, {"length", iv.length}}; }

json with_x(const Vec& x) { return {{"dim", x.size()}, {"x", vec_to_json(x)}}; }

json signed_set(const IndexSet& a, const SignVector& eps) {
  return {{"set", set_to_json(a)}, {"signs", signs_to_json(a, eps)}};
}

ConstantEstimate finish(ConstantName name, std::optional<double> param, RatioMax&& r,
                        bool upper = false) {
  ConstantEstimate e;
  e.name = name;
  e.param = param;
  e.value = r.value;
  e.witness = std::move(r.witness);
  e.instances = r.instances;
  e.denominator_upper_bound = upper;
  return e;
}

template <typename PerVector>
RatioMax reduce_vectors(const std::vector<Vec>& vs, PerVector&& per) {
  return chunked_reduce<RatioMax>(
      vs.size(),
      [&](std::size_t b, std::size_t e) {
        RatioMax acc;
        for (std::size_t i = b; i < e; ++i) acc.merge(per(vs[i]));
        return acc;
      },
      [](RatioMax& acc, RatioMax&& next) { acc.merge(std::move(next)); });
}

std::uint64_t signed_subset_count(int n, int max_card) {
  std::uint64_t total = 0;
  for (int k = 0; k <= std::min(n, max_card); ++k) {
    const std::uint64_t c = binomial(n, k);
    const std::uint64_t s = k >= 63 ? UINT64_MAX : c << k;
    total = (s >> k) != c || total > UINT64_MAX - s ? UINT64_MAX : total + s;
  }
  return total;
}

// Extremes of ||1_{eps,A}|| per cardinality, with the first extremal instance.
struct IndicatorExtremes {
  struct Entry {
    double norm = 0.0;
    IndexSet set;
    SignVector signs;
  };
  std::vector<Entry> largest, smallest;
  std::vector<std::uint64_t> count;
};

IndicatorExtremes indicator_extremes(const NormEngine& engine, int dim, int max_card,
                                     bool all_signs) {
  IndicatorExtremes out;
  const auto len = static_cast<std::size_t>(max_card) + 1;
  out.largest.resize(len);
  out.smallest.resize(len);
  out.count.assign(len, 0);
  std::vector<bool> seen(len, false);
  auto visit = [&](const IndexSet& a, const SignVector& eps) {
    const auto k = a.size();
    const double v = engine(indicator(a, eps, dim));
    ++out.count[k];
    if (!seen[k] || v > out.largest[k].norm) out.largest[k] = {v, a, eps};
    if (!seen[k] || v < out.smallest[k].norm) out.smallest[k] = {v, a, eps};
    seen[k] = true;
  };
  if (all_signs) {
    for_each_signed_subset(IndexSet::range(1, dim), 0, max_card, visit);
  } else {
    for (int k = 0; k <= max_card; ++k)
      for_each_combination(dim, k, [&](const IndexSet& a) { visit(a, SignVector::constant(a)); });
  }
  return out;
}

ConstantEstimate democracy_like(ConstantName name, const NormEngine& engine, int dim, int max_card,
                                bool all_signs) {
  max_card = std::clamp(max_card, 0, dim);
  const IndicatorExtremes ex = indicator_extremes(engine, dim, max_card, all_signs);
  RatioMax r;
  for (int ka = 0; ka <= max_card; ++ka)
    for (int kb = ka; kb <= max_card; ++kb) {
      const auto& num = ex.largest[static_cast<std::size_t>(ka)];
      const auto& den = ex.smallest[static_cast<std::size_t>(kb)];
      const std::size_t before = r.instances;
      r.offer(num.norm, den.norm, [&] {
        return json{{"dim", dim},
                    {"A", signed_set(num.set, num.signs)},
                    {"B", signed_set(den.set, den.signs)}};
      });
      if (r.instances != before)
        r.instances += static_cast<std::size_t>(ex.count[static_cast<std::size_t>(ka)] *
                                                ex.count[static_cast<std::size_t>(kb)]) - 1;
    }
  return finish(name, std::nullopt, std::move(r));
}

void require_signed_budget(int pool, int max_card, std::size_t budget, const char* who) {
  if (signed_subset_count(pool, max_card) > budget)
    throw CapExceeded(std::string(who) + ": signed-set enumeration exceeds the sign budget");
}

// Per-index roles for the disjoint-set families: each index off supp(x) is
// left out or joins one of the signed sets.
template <typename Fn>
void for_each_assignment(const std::vector<int>& free, int roles, Fn&& fn) {
  std::vector<int> digit(free.size(), 0);
  while (true) {
    fn(digit);
    std::size_t i = 0;
    while (i < digit.size() && ++digit[i] == roles) digit[i++] = 0;
    if (i == digit.size()) return;
  }
}

}  // namespace

// ---------------------------------------------------------------------------

std::vector<double> default_coeff_grid() {
  return {0.0, 0.25, -0.25, 0.5, -0.5, 0.75, -0.75, 1.0, -1.0};
}

namespace {

std::vector<Vec> valued_supports(int dim, int max_support, const std::vector<double>& values) {
  std::vector<Vec> out;
  const int top = std::clamp(max_support, 0, dim);
  const auto nv = values.size();
  for (int k = 0; k <= top; ++k)
    for_each_combination(dim, k, [&](const IndexSet& s) {
      if (k > 0 && nv == 0) return;
      std::vector<std::size_t> digit(static_cast<std::size_t>(k), 0);
      while (true) {
        Vec x = Vec::Zero(dim);
        std::size_t j = 0;
        for (int n : s) x(n - 1) = values[digit[j++]];
        out.push_back(std::move(x));
        std::size_t i = 0;
        while (i < digit.size() && ++digit[i] == nv) digit[i++] = 0;
        if (i == digit.size()) return;
      }
    });
  return out;
}

}  // namespace

std::vector<Vec> grid_vectors(int dim, int max_support, const std::vector<double>& grid,
                              double scale) {
  std::vector<double> values;
  for (double g : grid)
    if (g != 0.0) values.push_back(g * scale);
  return valued_supports(dim, max_support, values);
}

Corpus Corpus::build(const CorpusSpec& spec) {
  if (spec.dim < 1) throw ContractViolation("Corpus: dim must be positive");
  Corpus c;
  c.spec = spec;
  std::vector<double> values;
  for (double m : spec.magnitudes) {
    values.push_back(m);
    values.push_back(-m);
  }
  std::vector<Vec> all = valued_supports(spec.dim, spec.max_support, values);
  if (all.size() > spec.structured_budget) {
    c.subsampled = true;
    const std::size_t total = all.size(), keep = spec.structured_budget;
    for (std::size_t j = 0; j < keep; ++j) c.vectors.push_back(std::move(all[j * total / keep]));
  } else {
    c.vectors = std::move(all);
  }
  c.structured = c.vectors.size();

  std::mt19937_64 rng(spec.seed);
  std::uniform_int_distribution<int> size_dist(1, spec.dim);
  std::uniform_real_distribution<double> coef(-spec.random_range, spec.random_range);
  std::vector<int> order(static_cast<std::size_t>(spec.dim));
  for (std::size_t i = 0; i < spec.random_count; ++i) {
    std::iota(order.begin(), order.end(), 0);
    std::shuffle(order.begin(), order.end(), rng);
    const int k = size_dist(rng);
    Vec x = Vec::Zero(spec.dim);
    for (int j = 0; j < k; ++j) x(order[static_cast<std::size_t>(j)]) = coef(rng);
    c.vectors.push_back(std::move(x));
  }
  return c;
}

Corpus Corpus::from_vectors(std::vector<Vec> vectors, int dim) {
  Corpus c;
  c.spec.dim = dim;
  c.spec.random_count = 0;
  for (const Vec& v : vectors)
    if (v.size() != dim) throw ContractViolation("Corpus: vector length differs from dim");
  c.vectors = std::move(vectors);
  c.structured = c.vectors.size();
  return c;
}

// ---------------------------------------------------------------------------

namespace {

constexpr std::array<std::pair<ConstantName, const char*>, 13> kNames{{
    {ConstantName::Kb, "Kb"},
    {ConstantName::Ksu, "Ksu"},
    {ConstantName::Delta_d, "Delta_d"},
    {ConstantName::Delta_sd, "Delta_sd"},
    {ConstantName::C_ell_tau, "C_ell_tau"},
    {ConstantName::C_tq, "C_tq"},
    {ConstantName::C_g_con_tau, "C_g_con_tau"},
    {ConstantName::P_g_con_tau, "P_g_con_tau"},
    {ConstantName::PropA_tau, "PropA_tau"},
    {ConstantName::QGLC, "QGLC"},
    {ConstantName::NearUnc_phi_t, "NearUnc_phi_t"},
    {ConstantName::C_sqs, "C_sqs"},
    {ConstantName::ConsecUnc, "ConsecUnc"},
}};

}  // namespace

std::string to_string(ConstantName name) {
  for (const auto& [n, s] : kNames)
    if (n == name) return s;
  return "?";
}

std::optional<ConstantName> constant_from_string(const std::string& s) {
  for (const auto& [n, str] : kNames)
    if (s == str) return n;
  return std::nullopt;
}

void RatioMax::merge(RatioMax&& other) {
  instances += other.instances;
  if (other.has && (!has || other.value > value)) {
    value = other.value;
    witness = std::move(other.witness);
    has = true;
  }
}

json to_json(const ConstantEstimate& e) {
  json row;
  row["name"] = to_string(e.name);
  const char* key = e.name == ConstantName::NearUnc_phi_t ? "t" : "tau";
  row[key] = e.param ? json(*e.param) : json(nullptr);
  row["value"] = number_to_json(e.value);
  row["witness"] = e.witness;
  row["instances"] = e.instances;
  if (e.denominator_upper_bound) row["denominator_upper_bound"] = true;
  return row;
}

// ---------------------------------------------------------------------------
// Per-vector maxima

RatioMax kb_at(const NormEngine& engine, const Vec& x) {
  RatioMax r;
  for (int m = 0; m <= x.size(); ++m) {
    const Ratio q = kb_ratio(engine, x, m);
    r.offer(q.num, q.den, [&] {
      json w = with_x(x);
      w["m"] = m;
      return w;
    });
  }
  return r;
}

RatioMax ksu_at(const NormEngine& engine, const Vec& x) {
  RatioMax r;
  const int dim = static_cast<int>(x.size());
  if (dim > 62) throw CapExceeded("ksu_at: 2^dim subsets");
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << dim); ++mask) {
    const IndexSet a = IndexSet::from_mask(mask);
    const Ratio q = suppression_ratio(engine, x, a);
    r.offer(q.num, q.den, [&] {
      json w = with_x(x);
      w["A"] = set_to_json(a);
      return w;
    });
  }
  return r;
}

RatioMax suppression_qg_at(const NormEngine& engine, const Vec& x, double tau, std::uint64_t cap) {
  RatioMax r;
  for (int m = 0; m <= x.size(); ++m)
    for (const IndexSet& a : enumerate_greedy_sets({x, m, tau}, cap)) {
      const Ratio q = suppression_ratio(engine, x, a);
      r.offer(q.num, q.den, [&] {
        json w = with_x(x);
        w["m"] = m;
        w["A"] = set_to_json(a);
        return w;
      });
    }
  return r;
}

RatioMax truncation_qg_at(const NormEngine& engine, const Vec& x, std::uint64_t cap) {
  RatioMax r;
  for (int m = 1; m <= x.size(); ++m)
    for (const IndexSet& a : enumerate_greedy_sets({x, m, 1.0}, cap)) {
      const Ratio q = truncation_ratio(engine, x, a);
      r.offer(q.num, q.den, [&] {
        json w = with_x(x);
        w["m"] = m;
        w["A"] = set_to_json(a);
        return w;
      });
    }
  return r;
}

namespace {

RatioMax consecutive_family(const NormEngine& engine, const Vec& x, double tau,
                            const ErrorBudget& budget, bool constant_coeffs) {
  RatioMax r;
  const ErrorProfile prof = error_profile(engine, x, budget, constant_coeffs ? kDCon : kSigmaCon);
  const auto& den = constant_coeffs ? prof.d_con : prof.sigma_con;
  for (int m = 0; m <= x.size(); ++m) {
    const ErrorValue d = den[static_cast<std::size_t>(m)];
    for (const IndexSet& a : enumerate_greedy_sets({x, m, tau}, budget.cap)) {
      r.offer(engine(suppress(x, a)), d.value, [&] {
        json w = with_x(x);
        w["m"] = m;
        w["A"] = set_to_json(a);
        if (d.upper_bound) w["denominator_upper_bound"] = true;
        return w;
      });
    }
  }
  return r;
}

}  // namespace

RatioMax consecutive_greedy_at(const NormEngine& engine, const Vec& x, double tau,
                               const ErrorBudget& budget) {
  return consecutive_family(engine, x, tau, budget, false);
}

RatioMax cgpcc_at(const NormEngine& engine, const Vec& x, double tau, const ErrorBudget& budget) {
  return consecutive_family(engine, x, tau, budget, true);
}

RatioMax consec_unc_at(const NormEngine& engine, const Vec& x) {
  RatioMax r;
  const int dim = static_cast<int>(x.size());
  auto offer = [&](const Interval& iv) {
    const Ratio q = suppression_ratio(engine, x, iv.to_set());
    r.offer(q.num, q.den, [&] {
      json w = with_x(x);
      w["I"] = interval_to_json(iv);
      return w;
    });
  };
  offer({1, 0});
  for (int s = 1; s <= dim; ++s)
    for (int len = 1; s + len - 1 <= dim; ++len) offer({s, len});
  return r;
}

// ---------------------------------------------------------------------------
// Corpus estimators

ConstantEstimate est_Kb(const NormEngine& engine, const Corpus& corpus) {
  return finish(ConstantName::Kb, std::nullopt,
                reduce_vectors(corpus.vectors, [&](const Vec& x) { return kb_at(engine, x); }));
}

ConstantEstimate est_Ksu(const NormEngine& engine, const Corpus& corpus) {
  return finish(ConstantName::Ksu, std::nullopt,
                reduce_vectors(corpus.vectors, [&](const Vec& x) { return ksu_at(engine, x); }));
}

ConstantEstimate est_superdemocracy(const NormEngine& engine, int dim, int max_card,
                                    std::size_t sign_budget) {
  require_signed_budget(dim, std::clamp(max_card, 0, dim), sign_budget, "est_superdemocracy");
  return democracy_like(ConstantName::Delta_sd, engine, dim, max_card, true);
}

ConstantEstimate est_democracy(const NormEngine& engine, int dim, int max_card) {
  return democracy_like(ConstantName::Delta_d, engine, dim, max_card, false);
}

ConstantEstimate est_suppression_qg(const NormEngine& engine, const Corpus& corpus, double tau,
                                    const ErrorBudget& budget) {
  return finish(ConstantName::C_ell_tau, tau, reduce_vectors(corpus.vectors, [&](const Vec& x) {
                  return suppression_qg_at(engine, x, tau, budget.cap);
                }));
}

ConstantEstimate est_truncation_qg(const NormEngine& engine, const Corpus& corpus,
                                   const ErrorBudget& budget) {
  return finish(ConstantName::C_tq, std::nullopt, reduce_vectors(corpus.vectors, [&](const Vec& x) {
                  return truncation_qg_at(engine, x, budget.cap);
                }));
}

ConstantEstimate est_consecutive_greedy(const NormEngine& engine, const Corpus& corpus, double tau,
                                        const ErrorBudget& budget) {
  return finish(ConstantName::C_g_con_tau, tau,
                reduce_vectors(corpus.vectors,
                               [&](const Vec& x) { return consecutive_greedy_at(engine, x, tau, budget); }),
                !engine.lattice());
}

ConstantEstimate est_cgpcc(const NormEngine& engine, const Corpus& corpus, double tau,
                           const ErrorBudget& budget) {
  return finish(ConstantName::P_g_con_tau, tau, reduce_vectors(corpus.vectors, [&](const Vec& x) {
                  return cgpcc_at(engine, x, tau, budget);
                }));
}

ConstantEstimate est_propA(const NormEngine& engine, int dim, double tau,
                           const std::vector<double>& coeff_grid, int max_support) {
  if (!(tau > 0.0 && tau <= 1.0)) throw ContractViolation("est_propA: tau must lie in (0, 1]");
  const std::vector<Vec> xs = grid_vectors(dim, max_support, coeff_grid, 1.0 / tau);
  RatioMax r = reduce_vectors(xs, [&](const Vec& x) {
    RatioMax acc;
    for_each_disjoint_pair(x, dim, dim, [&](const IndexSet& a, const SignVector& eps,
                                             const IndexSet& b, const SignVector& delta) {
      const Ratio q = propA_ratio(engine, x, tau, a, eps, b, delta);
      acc.offer(q.num, q.den, [&] {
        json w = with_x(x);
        w["A"] = signed_set(a, eps);
        w["B"] = signed_set(b, delta);
        return w;
      });
    });
    return acc;
  });
  return finish(ConstantName::PropA_tau, tau, std::move(r));
}

ConstantEstimate est_qglc(const NormEngine& engine, int dim, const std::vector<double>& coeff_grid,
                          int max_support) {
  const std::vector<Vec> xs = grid_vectors(dim, max_support, coeff_grid);
  RatioMax r = reduce_vectors(xs, [&](const Vec& x) {
    RatioMax acc;
    const std::vector<int> free = support(x).complement(dim).elems();
    for_each_assignment(free, 3, [&](const std::vector<int>& role) {
      std::vector<int> av;
      SignVector eps;
      for (std::size_t i = 0; i < free.size(); ++i)
        if (role[i] != 0) {
          av.push_back(free[i]);
          eps.set(free[i], role[i] == 2 ? Sign::Minus : Sign::Plus);
        }
      const IndexSet a(std::move(av));
      const Ratio q = qglc_ratio(engine, x, a, eps);
      acc.offer(q.num, q.den, [&] {
        json w = with_x(x);
        w["A"] = signed_set(a, eps);
        return w;
      });
    });
    return acc;
  });
  return finish(ConstantName::QGLC, std::nullopt, std::move(r));
}

ConstantEstimate est_near_unc_phi(const NormEngine& engine, int dim, double t,
                                  const std::vector<double>& coeff_grid, int max_support) {
  if (!(t > 0.0 && t <= 1.0)) throw ContractViolation("est_near_unc_phi: t must lie in (0, 1]");
  const std::vector<Vec> xs = grid_vectors(dim, max_support, coeff_grid);
  RatioMax r = reduce_vectors(xs, [&](const Vec& x) {
    RatioMax acc;
    std::vector<int> large;
    for (int n = 1; n <= dim; ++n)
      if (std::abs(x(n - 1)) >= t) large.push_back(n);
    const int k = static_cast<int>(large.size());
    for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask) {
      std::vector<int> av;
      for (int i = 0; i < k; ++i)
        if (mask >> i & 1U) av.push_back(large[static_cast<std::size_t>(i)]);
      const IndexSet a(std::move(av));
      const Ratio q = near_unc_ratio(engine, x, a);
      acc.offer(q.num, q.den, [&] {
        json w = with_x(x);
        w["A"] = set_to_json(a);
        return w;
      });
    }
    return acc;
  });
  return finish(ConstantName::NearUnc_phi_t, t, std::move(r));
}

ConstantEstimate est_sqs(const NormEngine& engine, int dim, const std::vector<double>& coeff_grid,
                         int max_support) {
  // The numerator depends on A only through its cardinality bound, so the
  // largest signed indicator per bound is computed once.
  const int top = std::clamp(max_support, 0, dim);
  const IndicatorExtremes ex = indicator_extremes(engine, dim, top, true);
  std::vector<std::size_t> best(static_cast<std::size_t>(top) + 1, 0);
  std::vector<std::uint64_t> upto(static_cast<std::size_t>(top) + 1, 0);
  for (std::size_t k = 0; k < best.size(); ++k) {
    best[k] = k == 0 || ex.largest[k].norm > ex.largest[best[k - 1]].norm ? k : best[k - 1];
    upto[k] = (k == 0 ? 0 : upto[k - 1]) + ex.count[k];
  }
  const std::vector<Vec> xs = grid_vectors(dim, max_support, coeff_grid);
  RatioMax r = reduce_vectors(xs, [&](const Vec& x) {
    RatioMax acc;
    int big = 0;
    for (int n = 1; n <= dim; ++n) big += std::abs(x(n - 1)) >= 1.0;
    const auto k = static_cast<std::size_t>(std::min(big, top));
    const auto& e = ex.largest[best[k]];
    acc.offer(e.norm, engine(x), [&] {
      json w = with_x(x);
      w["A"] = signed_set(e.set, e.signs);
      return w;
    });
    if (acc.instances) acc.instances = static_cast<std::size_t>(upto[k]);
    return acc;
  });
  return finish(ConstantName::C_sqs, std::nullopt, std::move(r));
}

ConstantEstimate est_consec_unc(const NormEngine& engine, const Corpus& corpus) {
  return finish(ConstantName::ConsecUnc, std::nullopt, reduce_vectors(corpus.vectors, [&](const Vec& x) {
                  return consec_unc_at(engine, x);
                }));
}

// ---------------------------------------------------------------------------

double reevaluate(const NormEngine& engine, const ConstantEstimate& e, const ErrorBudget& budget) {
  const json& w = e.witness;
  if (!w.is_object()) throw ContractViolation("reevaluate: estimate carries no witness");
  const Eigen::Index dim = w.at("dim").get<Eigen::Index>();
  auto x = [&] { return vec_from_json(w.at("x"), dim); };
  auto set = [&](const char* key) {
    const json& j = w.at(key);
    return j.is_object() ? set_from_json(j.at("set")) : set_from_json(j);
  };
  auto signs = [&](const char* key) {
    return signs_from_json(set(key), w.at(key).at("signs"));
  };
  const double tau = e.param.value_or(1.0);
  switch (e.name) {
    case ConstantName::Kb:
      return ratio_value(kb_ratio(engine, x(), w.at("m").get<int>()));
    case ConstantName::Ksu:
    case ConstantName::C_ell_tau:
      return ratio_value(suppression_ratio(engine, x(), set("A")));
    case ConstantName::Delta_d:
    case ConstantName::Delta_sd:
      return ratio_value(
          indicator_ratio(engine, set("A"), signs("A"), set("B"), signs("B"), static_cast<int>(dim)));
    case ConstantName::C_tq:
      return ratio_value(truncation_ratio(engine, x(), set("A")));
    case ConstantName::C_g_con_tau: {
      const Vec v = x();
      return ratio_value({engine(suppress(v, set("A"))),
                          sigma_con_m(engine, v, w.at("m").get<int>(), budget).value});
    }
    case ConstantName::P_g_con_tau: {
      const Vec v = x();
      return ratio_value(
          {engine(suppress(v, set("A"))), d_con_m(engine, v, w.at("m").get<int>(), budget).value});
    }
    case ConstantName::PropA_tau:
      return ratio_value(propA_ratio(engine, x(), tau, set("A"), signs("A"), set("B"), signs("B")));
    case ConstantName::QGLC:
      return ratio_value(qglc_ratio(engine, x(), set("A"), signs("A")));
    case ConstantName::NearUnc_phi_t:
      return ratio_value(near_unc_ratio(engine, x(), set("A")));
    case ConstantName::C_sqs:
      return ratio_value(sqs_ratio(engine, x(), set("A"), signs("A")));
    case ConstantName::ConsecUnc: {
      const Interval iv{w.at("I").at("start").get<int>(), w.at("I").at("length").get<int>()};
      return ratio_value(suppression_ratio(engine, x(), iv.to_set()));
    }
  }
  throw ContractViolation("reevaluate: unknown constant");
}

}  // namespace gbl
