#ifndef GBL_CORE_HPP
#define GBL_CORE_HPP

#include <Eigen/Dense>

#include <cstdint>
#include <initializer_list>
#include <map>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace gbl {

/// Raised when a caller breaks an operation's precondition.
struct ContractViolation : std::logic_error {
  using std::logic_error::logic_error;
};

/// Raised when an exhaustive enumeration would exceed its configured cap.
struct CapExceeded : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Coefficient sequence over the ambient window {1..size()}.
/// Entry k-1 holds the coefficient of the k-th basis vector; indices past the
/// end are exact zeros, so the vector length doubles as the dimension hint.
template <typename Scalar>
using Coeffs = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using Vec = Coeffs<double>;

/// Coefficient at 1-based index n (zero beyond the stored window).
template <typename Derived>
typename Derived::Scalar coeff(const Eigen::MatrixBase<Derived>& x, int n) {
  if (n < 1 || n > x.size()) return typename Derived::Scalar(0);
  return x(n - 1);
}

/// Copy of x zero-padded (never truncated) to length n.
template <typename Derived>
Coeffs<typename Derived::Scalar> padded(const Eigen::MatrixBase<Derived>& x,
                                        Eigen::Index n) {
  Coeffs<typename Derived::Scalar> out =
      Coeffs<typename Derived::Scalar>::Zero(std::max(n, x.size()));
  out.head(x.size()) = x;
  return out;
}

/// Strictly increasing finite set of positive integers.
class IndexSet {
 public:
  IndexSet() = default;
  IndexSet(std::initializer_list<int> elems);
  explicit IndexSet(std::vector<int> elems);

  /// Members of {1..64} selected by the bits of mask (bit k -> index k+1).
  static IndexSet from_mask(std::uint64_t mask);
  static IndexSet range(int first, int last);  // {first..last}, empty if last < first

  std::size_t size() const { return elems_.size(); }
  bool empty() const { return elems_.empty(); }
  bool contains(int n) const;
  int min() const;
  int max() const;

  const std::vector<int>& elems() const { return elems_; }
  auto begin() const { return elems_.begin(); }
  auto end() const { return elems_.end(); }

  IndexSet united(const IndexSet& other) const;
  IndexSet intersected(const IndexSet& other) const;
  IndexSet minus(const IndexSet& other) const;
  bool disjoint(const IndexSet& other) const;
  bool subset_of(const IndexSet& other) const;

  /// Complement inside {1..dim}.
  IndexSet complement(int dim) const;

  std::uint64_t mask() const;

  friend bool operator==(const IndexSet&, const IndexSet&) = default;
  friend auto operator<=>(const IndexSet& a, const IndexSet& b) {
    return a.elems_ <=> b.elems_;
  }

 private:
  std::vector<int> elems_;
};

std::ostream& operator<<(std::ostream& os, const IndexSet& a);

/// Consecutive run {start, ..., start+length-1}; length 0 is the empty interval.
struct Interval {
  int start = 1;
  int length = 0;

  int last() const { return start + length - 1; }
  IndexSet to_set() const { return IndexSet::range(start, last()); }
};

enum class Sign : std::int8_t { Minus = -1, Plus = 1 };

inline double value(Sign s) { return static_cast<double>(s); }
inline Sign sgn(double v) { return v < 0.0 ? Sign::Minus : Sign::Plus; }

/// Signs indexed by a finite set of basis indices.
class SignVector {
 public:
  SignVector() = default;
  SignVector(std::initializer_list<std::pair<const int, Sign>> entries)
      : entries_(entries) {}

  /// Signs on A taken from the bits of mask: bit k set -> the (k+1)-th element
  /// of A gets Minus.
  static SignVector from_mask(const IndexSet& a, std::uint64_t mask);
  static SignVector constant(const IndexSet& a, Sign s = Sign::Plus);

  void set(int n, Sign s) { entries_[n] = s; }
  bool defined_on(const IndexSet& a) const;
  Sign at(int n) const;
  const std::map<int, Sign>& entries() const { return entries_; }

  friend bool operator==(const SignVector&, const SignVector&) = default;

 private:
  std::map<int, Sign> entries_;
};

/// Set of indices carrying nonzero coefficients.
template <typename Derived>
IndexSet support(const Eigen::MatrixBase<Derived>& x) {
  std::vector<int> s;
  for (Eigen::Index i = 0; i < x.size(); ++i)
    if (x(i) != typename Derived::Scalar(0)) s.push_back(static_cast<int>(i) + 1);
  return IndexSet(std::move(s));
}

/// Sum over n in A of eps_n e_n, in a window of length max(dim, max A).
Vec indicator(const IndexSet& a, const SignVector* eps = nullptr, Eigen::Index dim = 0);
inline Vec indicator(const IndexSet& a, const SignVector& eps, Eigen::Index dim = 0) {
  return indicator(a, &eps, dim);
}

/// x restricted to A; keeps the window of x.
template <typename Derived>
Coeffs<typename Derived::Scalar> project(const Eigen::MatrixBase<Derived>& x,
                                         const IndexSet& a) {
  Coeffs<typename Derived::Scalar> out = Coeffs<typename Derived::Scalar>::Zero(x.size());
  for (int n : a)
    if (n <= x.size()) out(n - 1) = x(n - 1);
  return out;
}

/// x with the coordinates in A zeroed, i.e. x - P_A(x).
template <typename Derived>
Coeffs<typename Derived::Scalar> suppress(const Eigen::MatrixBase<Derived>& x,
                                          const IndexSet& a) {
  Coeffs<typename Derived::Scalar> out = x;
  for (int n : a)
    if (n <= x.size()) out(n - 1) = typename Derived::Scalar(0);
  return out;
}

/// S_m(x): the first m coordinates of x.
template <typename Derived>
Coeffs<typename Derived::Scalar> partial_sum(const Eigen::MatrixBase<Derived>& x, int m) {
  Coeffs<typename Derived::Scalar> out = Coeffs<typename Derived::Scalar>::Zero(x.size());
  const Eigen::Index k = std::clamp<Eigen::Index>(m, 0, x.size());
  out.head(k) = x.head(k);
  return out;
}

/// sgn(e_n^*(x)) for n in A, with sgn(0) = +1.
template <typename Derived>
SignVector sign_vector(const Eigen::MatrixBase<Derived>& x, const IndexSet& a) {
  SignVector s;
  for (int n : a) s.set(n, sgn(static_cast<double>(coeff(x, n))));
  return s;
}

/// Largest coefficient modulus.
template <typename Derived>
typename Derived::Scalar sup_norm(const Eigen::MatrixBase<Derived>& x) {
  return x.size() == 0 ? typename Derived::Scalar(0) : x.cwiseAbs().maxCoeff();
}

/// Calls fn(IndexSet) for every m-subset of {1..n} in lexicographic order.
template <typename Fn>
void for_each_combination(int n, int m, Fn&& fn) {
  if (m < 0 || m > n) return;
  std::vector<int> idx(static_cast<std::size_t>(m));
  for (int i = 0; i < m; ++i) idx[static_cast<std::size_t>(i)] = i + 1;
  while (true) {
    fn(IndexSet(idx));
    int i = m - 1;
    while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - m + i + 1) --i;
    if (i < 0) return;
    ++idx[static_cast<std::size_t>(i)];
    for (int j = i + 1; j < m; ++j)
      idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  }
}

/// Binomial coefficient saturating at UINT64_MAX.
std::uint64_t binomial(int n, int k);

}  // namespace gbl

#endif  // GBL_CORE_HPP
