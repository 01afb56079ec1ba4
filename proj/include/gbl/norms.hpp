#ifndef GBL_NORMS_HPP
#define GBL_NORMS_HPP

#include "gbl/core.hpp"

#include <nlohmann/json.hpp>

#include <cmath>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace gbl {

namespace engines {

/// (sum |x_n|^q)^(1/q).
struct Lp {
  double q = 1.0;
};

/// max |x_n|, the c_0 model.
struct Sup {};

/// (sum w_n |x_n|^q)^(1/q); the weight list is extended by its last value.
struct WeightedLp {
  double q = 1.0;
  std::vector<double> weights{1.0};

  double weight(int n) const {
    return n <= static_cast<int>(weights.size()) ? weights[static_cast<std::size_t>(n - 1)]
                                                 : weights.back();
  }
};

/// sup over M >= N >= 1 of |x_N + ... + x_M|.
struct IntervalSup {};

}  // namespace engines

/// c1 <= ||e_n||, ||e_n^*|| <= c2 for every n.
struct BasisBounds {
  double c1 = 1.0;
  double c2 = 1.0;
};

/// A quasi-norm on finitely supported sequences together with the exponent p
/// of its p-triangle inequality. Immutable once built.
class NormEngine {
 public:
  using Params = std::variant<engines::Lp, engines::Sup, engines::WeightedLp, engines::IntervalSup>;

  static NormEngine lp(double q);
  static NormEngine sup();
  static NormEngine weighted_lp(double q, std::vector<double> weights);
  static NormEngine interval_sup();

  const std::string& name() const { return name_; }
  /// Display label including parameters, e.g. "lp(q=0.5)".
  std::string label() const;
  double p_exp() const { return p_exp_; }
  const Params& params() const { return params_; }
  BasisBounds bounds() const;

  /// True when removing coordinates or shrinking their moduli never increases
  /// the norm (lattice norms); the best coefficients on a set are then the
  /// coefficients of x itself.
  bool lattice() const { return !std::holds_alternative<engines::IntervalSup>(params_); }

  template <typename Derived>
  double operator()(const Eigen::MatrixBase<Derived>& x) const;

 private:
  NormEngine(std::string name, double p_exp, Params params)
      : name_(std::move(name)), p_exp_(p_exp), params_(std::move(params)) {}

  std::string name_;
  double p_exp_;
  Params params_;
};

namespace detail {

template <typename Derived>
double interval_sup_norm(const Eigen::MatrixBase<Derived>& x) {
  // max_{i<j} |P_j - P_i| over prefix sums P_0 = 0, ..., P_d equals the spread
  // max P - min P, scanned over the support span only.
  Eigen::Index lo = 0, hi = x.size();
  while (lo < hi && x(lo) == 0) ++lo;
  while (hi > lo && x(hi - 1) == 0) --hi;
  double prefix = 0.0, pmin = 0.0, pmax = 0.0;
  for (Eigen::Index i = lo; i < hi; ++i) {
    prefix += static_cast<double>(x(i));
    pmin = std::min(pmin, prefix);
    pmax = std::max(pmax, prefix);
  }
  return pmax - pmin;
}

}  // namespace detail

template <typename Derived>
double NormEngine::operator()(const Eigen::MatrixBase<Derived>& x) const {
  return std::visit(
      [&](const auto& e) -> double {
        using E = std::decay_t<decltype(e)>;
        if constexpr (std::is_same_v<E, engines::Lp>) {
          if (e.q == 1.0) return static_cast<double>(x.cwiseAbs().sum());
          if (e.q == 2.0) return static_cast<double>(x.norm());
          double s = 0.0;
          for (Eigen::Index i = 0; i < x.size(); ++i)
            if (x(i) != 0) s += std::pow(std::abs(static_cast<double>(x(i))), e.q);
          return std::pow(s, 1.0 / e.q);
        } else if constexpr (std::is_same_v<E, engines::Sup>) {
          return x.size() == 0 ? 0.0 : static_cast<double>(x.cwiseAbs().maxCoeff());
        } else if constexpr (std::is_same_v<E, engines::WeightedLp>) {
          double s = 0.0;
          for (Eigen::Index i = 0; i < x.size(); ++i)
            if (x(i) != 0)
              s += e.weight(static_cast<int>(i) + 1) *
                   std::pow(std::abs(static_cast<double>(x(i))), e.q);
          return std::pow(s, 1.0 / e.q);
        } else {
          return detail::interval_sup_norm(x);
        }
      },
      params_);
}

/// Reference O(d^2) evaluation of the interval-sup norm straight from its
/// definition; used to cross-check the prefix-sum scan.
double interval_sup_brute(const Vec& x);

/// max over pairs of ||x+y||^p / (||x||^p + ||y||^p); pairs with both norms
/// zero are skipped.
double p_convexity_audit(const NormEngine& engine, const std::vector<std::pair<Vec, Vec>>& corpus);

/// Space config: {"norm": "lp", "q": 0.5}, {"norm": "interval_sup"}, ...
NormEngine engine_from_json(const nlohmann::json& j);
nlohmann::json engine_to_json(const NormEngine& engine);

}  // namespace gbl

#endif  // GBL_NORMS_HPP
