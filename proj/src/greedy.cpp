#include "gbl/greedy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

namespace gbl {

namespace {

void require_window(const IndexSet& a, int dim, const char* who) {
  if (!a.empty() && a.max() > dim)
    throw ContractViolation(std::string(who) + ": set leaves the window {1..dim}");
}

}  // namespace

void GreedyQuery::validate() const {
  if (!(tau > 0.0 && tau <= 1.0)) throw ContractViolation("GreedyQuery: tau must lie in (0, 1]");
  if (m < 0 || m > dim()) throw ContractViolation("GreedyQuery: need 0 <= m <= dim");
}

bool is_tau_greedy(const GreedyQuery& q, const IndexSet& a) {
  q.validate();
  if (static_cast<int>(a.size()) != q.m) throw ContractViolation("is_tau_greedy: |A| != m");
  require_window(a, q.dim(), "is_tau_greedy");
  double inside = std::numeric_limits<double>::infinity();
  double outside = 0.0;
  for (int n = 1; n <= q.dim(); ++n) {
    const double v = std::abs(q.x(n - 1));
    if (a.contains(n))
      inside = std::min(inside, v);
    else
      outside = std::max(outside, v);
  }
  return inside >= q.tau * outside;
}

std::vector<IndexSet> enumerate_greedy_sets(const GreedyQuery& q, std::uint64_t cap) {
  q.validate();
  if (binomial(q.dim(), q.m) > cap)
    throw CapExceeded("enumerate_greedy_sets: C(" + std::to_string(q.dim()) + "," +
                      std::to_string(q.m) + ") exceeds the enumeration cap");
  std::vector<IndexSet> out;
  for_each_combination(q.dim(), q.m, [&](const IndexSet& a) {
    if (is_tau_greedy(q, a)) out.push_back(a);
  });
  return out;
}

IndexSet canonical_greedy_set(const GreedyQuery& q) {
  q.validate();
  std::vector<int> order(static_cast<std::size_t>(q.dim()));
  std::iota(order.begin(), order.end(), 1);
  std::stable_sort(order.begin(), order.end(), [&](int i, int j) {
    return std::abs(q.x(i - 1)) > std::abs(q.x(j - 1));
  });
  order.resize(static_cast<std::size_t>(q.m));
  return IndexSet(std::move(order));
}

Vec greedy_sum(const GreedyQuery& q, const IndexSet& a) {
  if (!is_tau_greedy(q, a)) throw ContractViolation("greedy_sum: set is not tau-greedy");
  return project(q.x, a);
}

bool is_pseudo_greedy(const Vec& x, const IndexSet& a) {
  const int dim = static_cast<int>(x.size());
  require_window(a, dim, "is_pseudo_greedy");
  if (a.empty()) return true;
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (int n : a) {
    lo = std::min(lo, std::abs(x(n - 1)));
    hi = std::max(hi, std::abs(x(n - 1)));
  }
  for (int n = 1; n <= dim; ++n) {
    if (a.contains(n)) continue;
    const double v = std::abs(x(n - 1));
    if (!(v >= hi || v <= lo)) return false;
  }
  return true;
}

bool distinct_moduli(const Vec& x) {
  std::vector<double> m(x.size());
  for (Eigen::Index i = 0; i < x.size(); ++i) m[static_cast<std::size_t>(i)] = std::abs(x(i));
  std::sort(m.begin(), m.end());
  return std::adjacent_find(m.begin(), m.end()) == m.end();
}

std::optional<std::pair<IndexSet, IndexSet>> pseudo_greedy_as_difference(const Vec& x,
                                                                         const IndexSet& a) {
  if (!distinct_moduli(x))
    throw ContractViolation("pseudo_greedy_as_difference: tied moduli are rejected");
  if (!is_pseudo_greedy(x, a)) return std::nullopt;
  if (a.empty()) return std::make_pair(IndexSet{}, IndexSet{});
  double hi = 0.0;
  for (int n : a) hi = std::max(hi, std::abs(x(n - 1)));
  std::vector<int> above;
  for (int n = 1; n <= x.size(); ++n)
    if (!a.contains(n) && std::abs(x(n - 1)) > hi) above.push_back(n);
  IndexSet g1(std::move(above));
  IndexSet g2 = g1.united(a);
  return std::make_pair(std::move(g1), std::move(g2));
}

}  // namespace gbl
