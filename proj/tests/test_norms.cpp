#include <doctest.h>

#include "gbl/io.hpp"
#include "gbl/norms.hpp"

#include <cmath>
#include <random>

using namespace gbl;

namespace {

// Independent evaluations straight from the definitions.
double lp_ref(const Vec& x, double q, const std::vector<double>& w = {1.0}) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    const double wi = i < static_cast<Eigen::Index>(w.size()) ? w[static_cast<std::size_t>(i)] : w.back();
    s += wi * std::pow(std::abs(x(i)), q);
  }
  return std::pow(s, 1.0 / q);
}

std::vector<Vec> random_vectors(std::size_t count, int dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-3.0, 3.0);
  std::bernoulli_distribution keep(0.6);
  std::vector<Vec> out;
  for (std::size_t i = 0; i < count; ++i) {
    Vec x = Vec::Zero(dim);
    for (int n = 0; n < dim; ++n)
      if (keep(rng)) x(n) = u(rng);
    out.push_back(x);
  }
  return out;
}

std::vector<NormEngine> all_engines() {
  return {NormEngine::lp(1.0),  NormEngine::lp(2.0), NormEngine::lp(0.5), NormEngine::lp(3.0),
          NormEngine::sup(),    NormEngine::weighted_lp(1.0, {1.0, 0.5, 0.25}),
          NormEngine::weighted_lp(0.5, {2.0, 1.0}), NormEngine::interval_sup()};
}

}  // namespace

TEST_CASE("interval sup counterexample values") {
  const NormEngine e = NormEngine::interval_sup();
  CHECK(e(parse_vec(R"({"1": 3, "2": -1, "3": 3})")) == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(e(parse_vec(R"({"1": 3, "3": 3})")) == doctest::Approx(6.0).epsilon(1e-12));
  CHECK(e(Vec::Zero(0)) == 0.0);
}

TEST_CASE("interval sup scan matches the quadratic definition") {
  const NormEngine e = NormEngine::interval_sup();
  for (const Vec& x : random_vectors(500, 8, 11))
    CHECK(e(x) == doctest::Approx(interval_sup_brute(x)).epsilon(1e-12));
}

TEST_CASE("lp and weighted lp agree with the sum formula") {
  for (const Vec& x : random_vectors(200, 6, 3)) {
    CHECK(NormEngine::lp(1.0)(x) == doctest::Approx(lp_ref(x, 1.0)).epsilon(1e-12));
    CHECK(NormEngine::lp(2.0)(x) == doctest::Approx(lp_ref(x, 2.0)).epsilon(1e-12));
    CHECK(NormEngine::lp(0.5)(x) == doctest::Approx(lp_ref(x, 0.5)).epsilon(1e-12));
    CHECK(NormEngine::weighted_lp(1.0, {1.0, 0.5, 0.25})(x) ==
          doctest::Approx(lp_ref(x, 1.0, {1.0, 0.5, 0.25})).epsilon(1e-12));
    CHECK(NormEngine::sup()(x) == doctest::Approx(x.cwiseAbs().maxCoeff()).epsilon(1e-12));
  }
  Vec x(2);
  x << 3, 4;
  CHECK(NormEngine::lp(2.0)(x) == doctest::Approx(5.0));
}

TEST_CASE("p-exponent and the p-triangle inequality") {
  CHECK(NormEngine::lp(0.5).p_exp() == 0.5);
  CHECK(NormEngine::lp(2.0).p_exp() == 1.0);
  CHECK(NormEngine::interval_sup().p_exp() == 1.0);
  const auto xs = random_vectors(120, 5, 7);
  std::vector<std::pair<Vec, Vec>> pairs;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) pairs.emplace_back(xs[i], xs[i + 1]);
  for (const NormEngine& e : all_engines()) {
    INFO(e.label());
    CHECK(p_convexity_audit(e, pairs) <= 1.0 + 1e-12);
  }
}

TEST_CASE("homogeneity, symmetry under sign flip and positivity") {
  for (const NormEngine& e : all_engines())
    for (const Vec& x : random_vectors(50, 5, 5)) {
      INFO(e.label());
      CHECK(e(Vec(-x)) == doctest::Approx(e(x)).epsilon(1e-12));
      CHECK(e(Vec(2.5 * x)) == doctest::Approx(2.5 * e(x)).epsilon(1e-12));
      CHECK((e(x) > 0.0) == (x.cwiseAbs().maxCoeff() > 0.0));
    }
}

TEST_CASE("lattice engines are monotone in moduli") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> shrink(0.0, 1.0);
  for (const NormEngine& e : all_engines()) {
    if (!e.lattice()) continue;
    for (const Vec& x : random_vectors(60, 5, 13)) {
      Vec y = x;
      for (Eigen::Index i = 0; i < y.size(); ++i) y(i) *= shrink(rng) * (i % 2 ? -1.0 : 1.0);
      CHECK(e(y) <= e(x) + 1e-12);
    }
  }
  CHECK_FALSE(NormEngine::interval_sup().lattice());
}

TEST_CASE("trailing zeros do not change the norm") {
  for (const NormEngine& e : all_engines())
    for (const Vec& x : random_vectors(30, 4, 17))
      CHECK(e(padded(x, 9)) == doctest::Approx(e(x)).epsilon(1e-15));
}

TEST_CASE("basis bounds") {
  const BasisBounds b = NormEngine::weighted_lp(1.0, {4.0, 0.25}).bounds();
  CHECK(b.c1 == doctest::Approx(0.25));
  CHECK(b.c2 == doctest::Approx(4.0));
  CHECK(NormEngine::sup().bounds().c2 == 1.0);
}

TEST_CASE("engine configuration round trip and errors") {
  for (const NormEngine& e : all_engines()) {
    const NormEngine back = engine_from_json(engine_to_json(e));
    CHECK(back.label() == e.label());
  }
  using nlohmann::json;
  CHECK_THROWS(engine_from_json(json{{"norm", "lp"}}));
  CHECK_THROWS(engine_from_json(json{{"norm", "lp"}, {"q", -1}}));
  CHECK_THROWS(engine_from_json(json{{"norm", "nope"}}));
  CHECK_THROWS(engine_from_json(json{{"norm", "weighted_lp"}, {"q", 1}, {"weights", json::array()}}));
  CHECK_THROWS_AS(NormEngine::lp(0.0), ContractViolation);
}
