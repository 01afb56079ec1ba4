#include <doctest.h>

#include "gbl/io.hpp"
#include "gbl/oracles.hpp"

#include <algorithm>
#include <cmath>
#include <random>

using namespace gbl;

namespace {

std::vector<Vec> random_vectors(std::size_t count, int dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> v(-3, 3);
  std::bernoulli_distribution keep(0.6);
  std::vector<Vec> out;
  for (std::size_t i = 0; i < count; ++i) {
    Vec x = Vec::Zero(dim);
    for (int n = 0; n < dim; ++n)
      if (keep(rng)) x(n) = v(rng) * 0.5;
    out.push_back(x);
  }
  return out;
}

// l_q tail after removing the m largest moduli: the best m-term error of a
// lattice norm that is symmetric.
double lq_sigma_ref(const Vec& x, int m, double q) {
  std::vector<double> a(x.data(), x.data() + x.size());
  for (double& v : a) v = std::abs(v);
  std::sort(a.begin(), a.end(), std::greater<>());
  double s = 0.0;
  for (std::size_t i = static_cast<std::size_t>(m); i < a.size(); ++i) s += std::pow(a[i], q);
  return std::pow(s, 1.0 / q);
}

// l_1 distance to lambda 1_A minimised over lambda: a median of the values on A.
double l1_const_ref(const Vec& x, const IndexSet& a) {
  double rest = 0.0;
  std::vector<double> on;
  for (int n = 1; n <= std::max<int>(static_cast<int>(x.size()), a.empty() ? 0 : a.max()); ++n) {
    const double v = coeff(x, n);
    if (a.contains(n)) on.push_back(v);
    else rest += std::abs(v);
  }
  double best = INFINITY;
  on.push_back(0.0);
  for (double lam : on) {
    double s = rest;
    for (int n : a) s += std::abs(coeff(x, n) - lam);
    best = std::min(best, s);
  }
  return best;
}

double lattice_con_ref(const NormEngine& e, const Vec& x, int m) {
  double best = e(x);
  const int dim = static_cast<int>(x.size());
  for (int len = 1; len <= m; ++len)
    for (int s = 1; s <= dim; ++s)
      best = std::min(best, e(suppress(x, IndexSet::range(s, std::min(dim, s + len - 1)))));
  return best;
}

}  // namespace

TEST_CASE("p constants") {
  CHECK(p_constants(1.0).a_p == doctest::Approx(1.0));
  CHECK(p_constants(0.5).a_p == doctest::Approx(std::pow(std::sqrt(2.0) - 1.0, -2.0)));
  CHECK_THROWS_AS(p_constants(1.5), ContractViolation);
}

TEST_CASE("one-dimensional minimisation") {
  const Minimum1d m = minimize_1d([](double t) { return (t - 0.3) * (t - 0.3) + 2.0; }, -1, 1, 16, 1e-12);
  CHECK(m.arg == doctest::Approx(0.3).epsilon(1e-6));
  CHECK(m.value == doctest::Approx(2.0).epsilon(1e-12));
  CHECK_THROWS_AS(minimize_1d([](double t) { return t; }, 1, 0, 4, 1e-9), ContractViolation);
}

TEST_CASE("best m-term errors on lp agree with the sorted tail") {
  for (double q : {1.0, 2.0, 0.5}) {
    const NormEngine e = NormEngine::lp(q);
    for (const Vec& x : random_vectors(40, 5, 21)) {
      const ErrorProfile prof = error_profile(e, x);
      for (int m = 0; m <= 5; ++m) {
        const auto k = static_cast<std::size_t>(m);
        const double ref = lq_sigma_ref(x, m, q);
        CHECK(sigma_m(e, x, m).value == doctest::Approx(ref).epsilon(1e-12));
        CHECK(sigma_tilde_m(e, x, m).value == doctest::Approx(ref).epsilon(1e-12));
        CHECK(prof.sigma[k].value == doctest::Approx(ref).epsilon(1e-12));
        CHECK(prof.sigma_tilde[k].value == doctest::Approx(ref).epsilon(1e-12));
        CHECK_FALSE(prof.sigma[k].upper_bound);
      }
    }
  }
}

TEST_CASE("consecutive error on lattice engines") {
  for (const NormEngine& e : {NormEngine::lp(1.0), NormEngine::sup(),
                              NormEngine::weighted_lp(1.0, {1.0, 0.5, 0.25})})
    for (const Vec& x : random_vectors(40, 5, 22))
      for (int m = 0; m <= 5; ++m) {
        const double ref = lattice_con_ref(e, x, m);
        CHECK(sigma_con_m(e, x, m).value == doctest::Approx(ref).epsilon(1e-12));
        CHECK(error_profile(e, x, {}, kSigmaCon).sigma_con[static_cast<std::size_t>(m)].value ==
              doctest::Approx(ref).epsilon(1e-12));
      }
}

TEST_CASE("constant-coefficient errors on l1 match the median rule") {
  const NormEngine e = NormEngine::lp(1.0);
  for (const Vec& x : random_vectors(40, 5, 23)) {
    const ErrorProfile prof = error_profile(e, x);
    for (int m = 0; m <= 5; ++m) {
      double dref = e(x), cref = e(x);
      for (int k = 1; k <= m; ++k)
        for_each_combination(5, k, [&](const IndexSet& a) { dref = std::min(dref, l1_const_ref(x, a)); });
      if (m > 0)
        for (int s = 1; s <= 5; ++s) cref = std::min(cref, l1_const_ref(x, IndexSet::range(s, s + m - 1)));
      const auto k = static_cast<std::size_t>(m);
      CHECK(d_m(e, x, m).value == doctest::Approx(dref).epsilon(1e-9));
      CHECK(prof.d[k].value == doctest::Approx(dref).epsilon(1e-9));
      CHECK(d_con_m(e, x, m).value == doctest::Approx(cref).epsilon(1e-9));
      CHECK(prof.d_con[k].value == doctest::Approx(cref).epsilon(1e-9));
    }
  }
}

TEST_CASE("exact-length constant error is not monotone") {
  const NormEngine e = NormEngine::lp(1.0);
  const Vec x = parse_vec(R"({"1": 1, "2": -1})", 4);
  CHECK(d_con_m(e, x, 1).value == doctest::Approx(1.0));
  CHECK(d_con_m(e, x, 2).value == doctest::Approx(2.0));
}

TEST_CASE("best constant on lp(1/2) lands on a breakpoint") {
  const NormEngine e = NormEngine::lp(0.5);
  const Vec x = parse_vec(R"({"1": 1, "2": 1.2, "3": 3})");
  const Minimum1d m = best_constant(e, x, IndexSet{1, 2, 3});
  double brute = INFINITY;
  for (int i = -400000; i <= 400000; ++i) {
    const double lam = i * 1e-5;
    brute = std::min(brute, e(Vec(x - lam * Vec::Ones(3))));
  }
  CHECK(m.value <= brute + 1e-12);
}

TEST_CASE("non-lattice coefficient search is an upper bound below the projection") {
  const NormEngine e = NormEngine::interval_sup();
  const Vec x = parse_vec(R"({"1": 3, "2": -1, "3": 3})");
  const ErrorValue v = best_on_set(e, x, IndexSet{2});
  CHECK(v.upper_bound);
  CHECK(v.value <= e(suppress(x, IndexSet{2})) + 1e-12);
  // One free coordinate: a fine grid certifies the value from both sides.
  double brute = INFINITY;
  for (int i = -60000; i <= 60000; ++i) {
    Vec y = x;
    y(1) = i * 1e-4;
    brute = std::min(brute, e(y));
  }
  CHECK(v.value == doctest::Approx(brute).epsilon(1e-6));
}

TEST_CASE("error functional chain on every engine") {
  const std::vector<NormEngine> engines{NormEngine::lp(1.0), NormEngine::lp(0.5), NormEngine::sup(),
                                        NormEngine::weighted_lp(1.0, {1.0, 0.5, 0.25}),
                                        NormEngine::interval_sup()};
  for (const NormEngine& e : engines)
    for (const Vec& x : random_vectors(15, 5, 24)) {
      INFO(e.label());
      const ErrorProfile p = error_profile(e, x);
      for (std::size_t m = 0; m <= 5; ++m) {
        CHECK(p.sigma[m].value <= p.sigma_tilde[m].value + 1e-9);
        CHECK(p.sigma[m].value <= p.sigma_con[m].value + 1e-9);
        CHECK(p.sigma_con[m].value <= p.d_con[m].value + 1e-9);
        CHECK(p.sigma[m].value <= p.d[m].value + 1e-9);
        CHECK(p.d[m].value <= p.d_con[m].value + 1e-9);
        if (m > 0) {
          CHECK(p.sigma[m].value <= p.sigma[m - 1].value + 1e-9);
          CHECK(p.sigma_con[m].value <= p.sigma_con[m - 1].value + 1e-9);
          CHECK(p.d[m].value <= p.d[m - 1].value + 1e-9);
        }
      }
    }
}

TEST_CASE("profiles match the standalone functionals") {
  const NormEngine e = NormEngine::interval_sup();
  for (const Vec& x : random_vectors(6, 4, 25)) {
    const ErrorProfile p = error_profile(e, x);
    for (int m = 0; m <= 4; ++m) {
      const auto k = static_cast<std::size_t>(m);
      CHECK(p.sigma_tilde[k].value == doctest::Approx(sigma_tilde_m(e, x, m).value));
      CHECK(p.d[k].value == doctest::Approx(d_m(e, x, m).value));
      CHECK(p.d_con[k].value == doctest::Approx(d_con_m(e, x, m).value));
    }
  }
}

TEST_CASE("eta_p against a direct grid") {
  for (double p : {0.25, 0.5, 0.75})
    for (double u : {0.5, 1.0, 2.0, 5.0}) {
      double brute = INFINITY;
      const int n = 100000;
      for (int i = 1; i < n; ++i) brute = std::min(brute, eta_objective(p, u, static_cast<double>(i) / n));
      const double v = eta_p(p, u);
      CHECK(v <= brute * (1 + 1e-12));
      CHECK(v == doctest::Approx(brute).epsilon(1e-5));
    }
  CHECK(eta_p(0.5, 2.0) >= eta_p(0.5, 1.0));
  CHECK_THROWS_AS(eta_p(1.0, 1.0), ContractViolation);
  CHECK_THROWS_AS(eta_p(0.5, 0.0), ContractViolation);
}

TEST_CASE("argument checks and caps") {
  const NormEngine e = NormEngine::lp(1.0);
  const Vec x = Vec::Ones(3);
  CHECK_THROWS_AS(sigma_m(e, x, 4), ContractViolation);
  CHECK_THROWS_AS(d_con_m(e, x, -1), ContractViolation);
  ErrorBudget small;
  small.cap = 4;
  CHECK_THROWS_AS(error_profile(e, x, small), CapExceeded);
}
