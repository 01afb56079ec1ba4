#ifndef GBL_CONSTANTS_HPP
#define GBL_CONSTANTS_HPP

#include "gbl/core.hpp"
#include "gbl/norms.hpp"
#include "gbl/oracles.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace gbl {

// ---------------------------------------------------------------------------
// Corpora

struct CorpusSpec {
  int dim = 6;
  int max_support = 4;
  std::vector<double> magnitudes{1.0, 2.0, 3.0};  // structured values are +-these
  std::size_t structured_budget = std::size_t{1} << 15;
  std::size_t random_count = 64;
  double random_range = 3.0;
  std::size_t sign_budget = 1'000'000;  // cap on signed-set enumerations
  std::uint64_t seed = 0;
};

/// Deterministic test family: a structured stratum of small-integer vectors
/// (evenly subsampled when over budget) followed by a seeded random stratum.
struct Corpus {
  CorpusSpec spec;
  std::vector<Vec> vectors;
  std::size_t structured = 0;
  bool subsampled = false;

  int dim() const { return spec.dim; }

  static Corpus build(const CorpusSpec& spec);
  static Corpus from_vectors(std::vector<Vec> vectors, int dim);
};

/// {0, +-1/4, +-1/2, +-3/4, +-1}.
std::vector<double> default_coeff_grid();

/// Every vector of length dim whose support has at most max_support elements
/// and whose nonzero entries are scale * (nonzero grid values).
std::vector<Vec> grid_vectors(int dim, int max_support, const std::vector<double>& grid,
                              double scale = 1.0);

// ---------------------------------------------------------------------------
// Estimates

enum class ConstantName {
  Kb,
  Ksu,
  Delta_d,
  Delta_sd,
  C_ell_tau,
  C_tq,
  C_g_con_tau,
  P_g_con_tau,
  PropA_tau,
  QGLC,
  NearUnc_phi_t,
  C_sqs,
  ConsecUnc,
};

std::string to_string(ConstantName name);
std::optional<ConstantName> constant_from_string(const std::string& s);

/// Running maximum of num/den with the witness of the first maximiser.
/// 0/0 is skipped; x/0 with x > 0 counts as +inf.
struct RatioMax {
  double value = 0.0;
  nlohmann::json witness;
  std::size_t instances = 0;
  bool has = false;

  template <typename MakeWitness>
  void offer(double num, double den, MakeWitness&& make_witness) {
    if (num == 0.0 && den == 0.0) return;
    ++instances;
    const double r = den == 0.0 ? std::numeric_limits<double>::infinity() : num / den;
    if (!has || r > value) {
      value = r;
      witness = make_witness();
      has = true;
    }
  }

  void merge(RatioMax&& other);
};

/// Corpus supremum of a named constant: a certified lower bound for the true
/// constant together with the instance attaining it.
struct ConstantEstimate {
  ConstantName name = ConstantName::Kb;
  std::optional<double> param;  // tau or t
  double value = 0.0;
  nlohmann::json witness;
  std::size_t instances = 0;
  bool denominator_upper_bound = false;  // denominators certified from above only
};

nlohmann::json to_json(const ConstantEstimate& e);

// Per-vector maxima; the corpus estimators below reduce these over a corpus.
RatioMax kb_at(const NormEngine& engine, const Vec& x);
RatioMax ksu_at(const NormEngine& engine, const Vec& x);
RatioMax suppression_qg_at(const NormEngine& engine, const Vec& x, double tau,
                           std::uint64_t cap = 1'000'000);
RatioMax truncation_qg_at(const NormEngine& engine, const Vec& x, std::uint64_t cap = 1'000'000);
RatioMax consecutive_greedy_at(const NormEngine& engine, const Vec& x, double tau,
                               const ErrorBudget& budget = {});
RatioMax cgpcc_at(const NormEngine& engine, const Vec& x, double tau, const ErrorBudget& budget = {});
RatioMax consec_unc_at(const NormEngine& engine, const Vec& x);

ConstantEstimate est_Kb(const NormEngine& engine, const Corpus& corpus);
ConstantEstimate est_Ksu(const NormEngine& engine, const Corpus& corpus);
ConstantEstimate est_superdemocracy(const NormEngine& engine, int dim, int max_card,
                                    std::size_t sign_budget = 1'000'000);
ConstantEstimate est_democracy(const NormEngine& engine, int dim, int max_card);
ConstantEstimate est_suppression_qg(const NormEngine& engine, const Corpus& corpus, double tau,
                                    const ErrorBudget& budget = {});
ConstantEstimate est_truncation_qg(const NormEngine& engine, const Corpus& corpus,
                                   const ErrorBudget& budget = {});
ConstantEstimate est_consecutive_greedy(const NormEngine& engine, const Corpus& corpus, double tau,
                                        const ErrorBudget& budget = {});
ConstantEstimate est_cgpcc(const NormEngine& engine, const Corpus& corpus, double tau,
                           const ErrorBudget& budget = {});
ConstantEstimate est_propA(const NormEngine& engine, int dim, double tau,
                           const std::vector<double>& coeff_grid, int max_support = 3);
ConstantEstimate est_qglc(const NormEngine& engine, int dim, const std::vector<double>& coeff_grid,
                          int max_support = 3);
ConstantEstimate est_near_unc_phi(const NormEngine& engine, int dim, double t,
                                  const std::vector<double>& coeff_grid, int max_support = 3);
ConstantEstimate est_sqs(const NormEngine& engine, int dim, const std::vector<double>& coeff_grid,
                         int max_support = 3);
ConstantEstimate est_consec_unc(const NormEngine& engine, const Corpus& corpus);

/// Recomputes the ratio recorded in an estimate's witness from scratch.
double reevaluate(const NormEngine& engine, const ConstantEstimate& e, const ErrorBudget& budget = {});

/// Enumerates signed subsets of `pool`: fn(A, eps) for every A within pool
/// with lo <= |A| <= hi and every sign pattern on A.
template <typename Fn>
void for_each_signed_subset(const IndexSet& pool, int lo, int hi, Fn&& fn) {
  const int n = static_cast<int>(pool.size());
  for (int k = std::max(lo, 0); k <= std::min(hi, n); ++k)
    for_each_combination(n, k, [&](const IndexSet& pos) {
      std::vector<int> members;
      for (int i : pos) members.push_back(pool.elems()[static_cast<std::size_t>(i - 1)]);
      const IndexSet a(std::move(members));
      for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << k); ++mask)
        fn(a, SignVector::from_mask(a, mask));
    });
}

/// Enumerates disjoint signed sets A, B inside {1..dim} \ supp(x) with
/// |A| <= |B| <= max_card: fn(A, eps, B, delta).
template <typename Fn>
void for_each_disjoint_pair(const Vec& x, int dim, int max_card, Fn&& fn) {
  const std::vector<int> free = support(x).complement(dim).elems();
  // roles per free index: 0 out, 1 A+, 2 A-, 3 B+, 4 B-
  std::vector<int> role(free.size(), 0);
  while (true) {
    int na = 0, nb = 0;
    for (int r : role) {
      na += r == 1 || r == 2;
      nb += r == 3 || r == 4;
    }
    if (na <= nb && nb <= max_card) {
      std::vector<int> av, bv;
      SignVector eps, delta;
      for (std::size_t i = 0; i < free.size(); ++i) {
        const Sign s = role[i] % 2 == 0 && role[i] > 0 ? Sign::Minus : Sign::Plus;
        if (role[i] == 1 || role[i] == 2) {
          av.push_back(free[i]);
          eps.set(free[i], s);
        } else if (role[i] >= 3) {
          bv.push_back(free[i]);
          delta.set(free[i], s);
        }
      }
      fn(IndexSet(std::move(av)), eps, IndexSet(std::move(bv)), delta);
    }
    std::size_t i = 0;
    while (i < role.size() && ++role[i] == 5) role[i++] = 0;
    if (i == role.size()) return;
  }
}

}  // namespace gbl

#endif  // GBL_CONSTANTS_HPP
