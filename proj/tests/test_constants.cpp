#include <doctest.h>

#include "gbl/constants.hpp"
#include "gbl/io.hpp"
#include "gbl/parallel.hpp"

#include <cmath>

using namespace gbl;

namespace {

const Corpus& small_corpus() {
  static const Corpus c = [] {
    CorpusSpec s;
    s.dim = 4;
    s.max_support = 3;
    s.random_count = 16;
    return Corpus::build(s);
  }();
  return c;
}

void check_reproduces(const NormEngine& e, const ConstantEstimate& est) {
  INFO(to_string(est.name), " ", e.label());
  REQUIRE(est.witness.is_object());
  if (std::isinf(est.value)) return;
  CHECK(reevaluate(e, est) == doctest::Approx(est.value).epsilon(1e-12));
}

}  // namespace

TEST_CASE("corpus construction is deterministic and seeded") {
  CorpusSpec s;
  s.dim = 4;
  s.max_support = 2;
  const Corpus a = Corpus::build(s), b = Corpus::build(s);
  REQUIRE(a.vectors.size() == b.vectors.size());
  for (std::size_t i = 0; i < a.vectors.size(); ++i) CHECK(a.vectors[i] == b.vectors[i]);
  // structured part: 1 + 4*6 + 6*36 vectors with values +-1, +-2, +-3
  CHECK(a.structured == 1 + 4 * 6 + 6 * 36);
  CHECK(a.vectors.size() == a.structured + s.random_count);
  CHECK_FALSE(a.subsampled);
  s.seed = 5;
  const Corpus c = Corpus::build(s);
  bool differs = false;
  for (std::size_t i = a.structured; i < a.vectors.size(); ++i) differs |= a.vectors[i] != c.vectors[i];
  CHECK(differs);
  s.structured_budget = 50;
  const Corpus d = Corpus::build(s);
  CHECK(d.subsampled);
  CHECK(d.structured == 50);
}

TEST_CASE("grid family") {
  CHECK(default_coeff_grid().size() == 9);
  const auto g = grid_vectors(3, 1, default_coeff_grid());
  CHECK(g.size() == 1 + 3 * 8);
  const auto h = grid_vectors(3, 2, {0.0, 1.0}, 2.0);
  CHECK(h.size() == 1 + 3 + 3);
  for (const Vec& x : h) CHECK((x.array() == 0.0 || x.array() == 2.0).all());
}

TEST_CASE("ratio maxima keep the first maximiser and handle zero denominators") {
  RatioMax r;
  r.offer(0.0, 0.0, [] { return nlohmann::json(0); });
  CHECK_FALSE(r.has);
  r.offer(1.0, 2.0, [] { return nlohmann::json(1); });
  r.offer(2.0, 4.0, [] { return nlohmann::json(2); });
  CHECK(r.value == 0.5);
  CHECK(r.witness == 1);
  r.offer(1.0, 0.0, [] { return nlohmann::json(3); });
  CHECK(std::isinf(r.value));
  CHECK(r.instances == 3);
  RatioMax s;
  s.offer(3.0, 1.0, [] { return nlohmann::json(4); });
  RatioMax t = s;
  t.merge(std::move(r));
  CHECK(std::isinf(t.value));
  CHECK(t.instances == 4);
}

TEST_CASE("constant names round trip") {
  for (int i = 0; i <= static_cast<int>(ConstantName::ConsecUnc); ++i) {
    const auto n = static_cast<ConstantName>(i);
    CHECK(constant_from_string(to_string(n)) == n);
  }
  CHECK_FALSE(constant_from_string("bogus").has_value());
}

TEST_CASE("unit constants of l1") {
  const NormEngine e = NormEngine::lp(1.0);
  const Corpus& c = small_corpus();
  const std::vector<ConstantEstimate> ests{
      est_Kb(e, c), est_Ksu(e, c), est_superdemocracy(e, 4, 4), est_democracy(e, 4, 4),
      est_suppression_qg(e, c, 1.0), est_truncation_qg(e, c), est_consecutive_greedy(e, c, 1.0),
      est_consec_unc(e, c)};
  for (const auto& est : ests) {
    INFO(to_string(est.name));
    CHECK(est.value == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(est.instances > 0);
    check_reproduces(e, est);
  }
}

TEST_CASE("lp engines have unit unconditional constants for every q") {
  for (double q : {0.5, 2.0, 3.0}) {
    const NormEngine e = NormEngine::lp(q);
    CHECK(est_Kb(e, small_corpus()).value == doctest::Approx(1.0));
    CHECK(est_Ksu(e, small_corpus()).value == doctest::Approx(1.0));
    CHECK(est_suppression_qg(e, small_corpus(), 1.0).value == doctest::Approx(1.0));
    CHECK(est_superdemocracy(e, 4, 3).value == doctest::Approx(1.0));
  }
}

TEST_CASE("interval sup counterexample constants") {
  const NormEngine e = NormEngine::interval_sup();
  const Corpus& c = small_corpus();
  const ConstantEstimate unc = est_consec_unc(e, c);
  CHECK(unc.value >= 1.2 - 1e-12);
  check_reproduces(e, unc);
  const ConstantEstimate ksu = est_Ksu(e, c);
  CHECK(ksu.value >= 1.2 - 1e-12);
  check_reproduces(e, ksu);
  // The specific witness x = (3, -1, 3), A = {2}.
  const Corpus single = Corpus::from_vectors({parse_vec(R"({"1": 3, "2": -1, "3": 3})")}, 3);
  const ConstantEstimate w = est_consec_unc(e, single);
  CHECK(w.value == doctest::Approx(1.2).epsilon(1e-12));
  CHECK(w.witness.at("I").at("start") == 2);
  CHECK(w.witness.at("I").at("length") == 1);
}

TEST_CASE("sup engine democracy") {
  const NormEngine e = NormEngine::sup();
  CHECK(est_superdemocracy(e, 5, 5).value == doctest::Approx(1.0));
  CHECK(est_democracy(e, 5, 5).value == doctest::Approx(1.0));
}

TEST_CASE("weighted superdemocracy matches the extremal weight sums") {
  const NormEngine e = NormEngine::weighted_lp(1.0, {1.0, 0.5, 0.25});
  // Weights on {1..5}: 1, .5, .25, .25, .25. Worst pair for k = 1: 1 / .25.
  const ConstantEstimate est = est_superdemocracy(e, 5, 5);
  CHECK(est.value == doctest::Approx(4.0));
  check_reproduces(e, est);
}

TEST_CASE("grid-family constants reproduce their witnesses") {
  const auto grid = default_coeff_grid();
  for (const NormEngine& e : {NormEngine::lp(1.0), NormEngine::interval_sup(),
                              NormEngine::weighted_lp(1.0, {1.0, 0.5})}) {
    for (double tau : {0.5, 1.0}) check_reproduces(e, est_propA(e, 4, tau, grid, 2));
    check_reproduces(e, est_qglc(e, 4, grid, 2));
    check_reproduces(e, est_near_unc_phi(e, 4, 0.5, grid, 2));
    check_reproduces(e, est_sqs(e, 4, grid, 2));
    check_reproduces(e, est_cgpcc(e, small_corpus(), 0.5));
    check_reproduces(e, est_truncation_qg(e, small_corpus()));
  }
}

TEST_CASE("property A and squeeze symmetry are unit on symmetric engines") {
  const auto grid = default_coeff_grid();
  for (const NormEngine& e : {NormEngine::lp(1.0), NormEngine::sup()}) {
    CHECK(est_propA(e, 4, 1.0, grid, 2).value == doctest::Approx(1.0));
    CHECK(est_sqs(e, 4, grid, 2).value == doctest::Approx(1.0));
  }
}

TEST_CASE("lattice near-unconditionality is unit") {
  const auto grid = default_coeff_grid();
  for (double t : {0.25, 1.0})
    CHECK(est_near_unc_phi(NormEngine::lp(1.0), 4, t, grid, 3).value <= 1.0 + 1e-12);
}

TEST_CASE("estimates do not depend on the worker count") {
  const NormEngine e = NormEngine::interval_sup();
  set_worker_count(1);
  const ConstantEstimate a = est_suppression_qg(e, small_corpus(), 0.5);
  set_worker_count(3);
  const ConstantEstimate b = est_suppression_qg(e, small_corpus(), 0.5);
  set_worker_count(1);
  CHECK(a.value == b.value);
  CHECK(a.witness == b.witness);
  CHECK(a.instances == b.instances);
}

TEST_CASE("estimate json") {
  ConstantEstimate est;
  est.name = ConstantName::NearUnc_phi_t;
  est.param = 0.5;
  est.value = 1.5;
  const auto j = to_json(est);
  CHECK(j.at("name") == "NearUnc_phi_t");
  CHECK(j.at("t") == 0.5);
  CHECK_FALSE(j.contains("tau"));
}

TEST_CASE("signed budget is enforced") {
  CHECK_THROWS_AS(est_superdemocracy(NormEngine::lp(1.0), 6, 6, 100), CapExceeded);
}
