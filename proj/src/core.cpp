#include "gbl/core.hpp"

#include <algorithm>
#include <limits>

namespace gbl {

IndexSet::IndexSet(std::initializer_list<int> elems) : IndexSet(std::vector<int>(elems)) {}

IndexSet::IndexSet(std::vector<int> elems) : elems_(std::move(elems)) {
  if (!std::is_sorted(elems_.begin(), elems_.end())) std::sort(elems_.begin(), elems_.end());
  elems_.erase(std::unique(elems_.begin(), elems_.end()), elems_.end());
  if (!elems_.empty() && elems_.front() < 1)
    throw ContractViolation("IndexSet: indices are positive integers");
}

IndexSet IndexSet::from_mask(std::uint64_t mask) {
  std::vector<int> e;
  for (int k = 0; k < 64; ++k)
    if (mask & (std::uint64_t{1} << k)) e.push_back(k + 1);
  return IndexSet(std::move(e));
}

IndexSet IndexSet::range(int first, int last) {
  std::vector<int> e;
  for (int n = std::max(first, 1); n <= last; ++n) e.push_back(n);
  return IndexSet(std::move(e));
}

bool IndexSet::contains(int n) const {
  return std::binary_search(elems_.begin(), elems_.end(), n);
}

int IndexSet::min() const {
  if (elems_.empty()) throw ContractViolation("IndexSet::min of empty set");
  return elems_.front();
}

int IndexSet::max() const {
  if (elems_.empty()) throw ContractViolation("IndexSet::max of empty set");
  return elems_.back();
}

IndexSet IndexSet::united(const IndexSet& other) const {
  std::vector<int> out;
  std::set_union(begin(), end(), other.begin(), other.end(), std::back_inserter(out));
  return IndexSet(std::move(out));
}

IndexSet IndexSet::intersected(const IndexSet& other) const {
  std::vector<int> out;
  std::set_intersection(begin(), end(), other.begin(), other.end(), std::back_inserter(out));
  return IndexSet(std::move(out));
}

IndexSet IndexSet::minus(const IndexSet& other) const {
  std::vector<int> out;
  std::set_difference(begin(), end(), other.begin(), other.end(), std::back_inserter(out));
  return IndexSet(std::move(out));
}

bool IndexSet::disjoint(const IndexSet& other) const { return intersected(other).empty(); }

bool IndexSet::subset_of(const IndexSet& other) const {
  return std::includes(other.begin(), other.end(), begin(), end());
}

IndexSet IndexSet::complement(int dim) const { return IndexSet::range(1, dim).minus(*this); }

std::uint64_t IndexSet::mask() const {
  std::uint64_t m = 0;
  for (int n : elems_) {
    if (n > 64) throw ContractViolation("IndexSet::mask: index beyond 64");
    m |= std::uint64_t{1} << (n - 1);
  }
  return m;
}

std::ostream& operator<<(std::ostream& os, const IndexSet& a) {
  os << '{';
  for (std::size_t i = 0; i < a.size(); ++i) os << (i ? "," : "") << a.elems()[i];
  return os << '}';
}

SignVector SignVector::from_mask(const IndexSet& a, std::uint64_t mask) {
  SignVector s;
  int k = 0;
  for (int n : a) s.set(n, (mask >> k++) & 1U ? Sign::Minus : Sign::Plus);
  return s;
}

SignVector SignVector::constant(const IndexSet& a, Sign sign) {
  SignVector s;
  for (int n : a) s.set(n, sign);
  return s;
}

bool SignVector::defined_on(const IndexSet& a) const {
  return std::all_of(a.begin(), a.end(), [&](int n) { return entries_.count(n) > 0; });
}

Sign SignVector::at(int n) const {
  auto it = entries_.find(n);
  if (it == entries_.end()) throw ContractViolation("SignVector: no sign at index " + std::to_string(n));
  return it->second;
}

Vec indicator(const IndexSet& a, const SignVector* eps, Eigen::Index dim) {
  if (eps && !eps->defined_on(a))
    throw ContractViolation("indicator: signs must be defined on the whole set");
  const Eigen::Index len = std::max<Eigen::Index>(dim, a.empty() ? 0 : a.max());
  Vec out = Vec::Zero(len);
  for (int n : a) out(n - 1) = eps ? value(eps->at(n)) : 1.0;
  return out;
}

std::uint64_t binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 r = 1;
  for (int i = 1; i <= k; ++i) {
    r = r * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
    if (r > std::numeric_limits<std::uint64_t>::max()) return std::numeric_limits<std::uint64_t>::max();
  }
  return static_cast<std::uint64_t>(r);
}

}  // namespace gbl
