#ifndef GBL_GREEDY_HPP
#define GBL_GREEDY_HPP

#include "gbl/core.hpp"

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

namespace gbl {

/// Default bound on C(dim, m) for exhaustive greedy-set enumeration.
inline constexpr std::uint64_t kDefaultEnumerationCap = 1'000'000;

/// A request for tau-greedy sets of order m of x inside the window {1..x.size()}.
struct GreedyQuery {
  Vec x;
  int m = 0;
  double tau = 1.0;

  int dim() const { return static_cast<int>(x.size()); }
  void validate() const;
};

/// min_{n in A} |x_n| >= tau * max_{n notin A} |x_n| with |A| = m.
bool is_tau_greedy(const GreedyQuery& q, const IndexSet& a);

/// Every tau-greedy set of order m in lexicographic order.
/// Throws CapExceeded when C(dim, m) exceeds cap.
std::vector<IndexSet> enumerate_greedy_sets(const GreedyQuery& q,
                                            std::uint64_t cap = kDefaultEnumerationCap);

/// The m largest moduli, ties broken towards the smaller index.
IndexSet canonical_greedy_set(const GreedyQuery& q);

/// P_A(x) for a tau-greedy A.
Vec greedy_sum(const GreedyQuery& q, const IndexSet& a);

/// Every excluded modulus lies at or above sup_A or at or below inf_A.
bool is_pseudo_greedy(const Vec& x, const IndexSet& a);

/// Nested greedy sets (G1, G2) with A = G2 \ G1, or nullopt when A is not
/// pseudo-greedy. Moduli on {1..dim} must be pairwise distinct.
std::optional<std::pair<IndexSet, IndexSet>> pseudo_greedy_as_difference(const Vec& x,
                                                                         const IndexSet& a);

/// True when the moduli |x_1|, ..., |x_dim| are pairwise distinct.
bool distinct_moduli(const Vec& x);

}  // namespace gbl

#endif  // GBL_GREEDY_HPP
