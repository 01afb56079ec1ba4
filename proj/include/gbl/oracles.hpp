#ifndef GBL_ORACLES_HPP
#define GBL_ORACLES_HPP

#include "gbl/core.hpp"
#include "gbl/norms.hpp"

#include <cstdint>
#include <functional>
#include <vector>

namespace gbl {

/// Resolution of the one-dimensional and coefficient searches.
struct ErrorBudget {
  int lambda_grid = 2048;        // grid points over [-2||x||_inf, 2||x||_inf]
  double refine_tol = 1e-10;     // golden-section stopping width
  int coeff_opt_iters = 100;     // coordinate-descent cycle cap
  std::uint64_t cap = 1'000'000; // bound on enumerated supports
};

struct PConstants {
  double p = 1.0;
  double a_p = 1.0;   // (2^p - 1)^(-1/p)
  double b_p = 2.0;   // (2 kappa)^(1/p) A_p
  double kappa = 1.0; // real scalars
};

PConstants p_constants(double p);

/// An error-functional value; upper_bound marks infima only certified from above.
struct ErrorValue {
  double value = 0.0;
  bool upper_bound = false;
};

struct Minimum1d {
  double arg = 0.0;
  double value = 0.0;
};

/// Grid scan over [lo, hi] followed by golden-section refinement around the
/// best grid point.
Minimum1d minimize_1d(const std::function<double(double)>& f, double lo, double hi,
                      int grid_points, double tol);

/// min over lambda of ||x - lambda 1_A||, lambda = 0 included.
Minimum1d best_constant(const NormEngine& engine, const Vec& x, const IndexSet& a,
                        const ErrorBudget& budget = {});

/// inf over coefficients (a_n)_{n in A} of ||x - sum a_n e_n||. Exact for
/// lattice engines; otherwise multi-start coordinate descent (upper bound).
ErrorValue best_on_set(const NormEngine& engine, const Vec& x, const IndexSet& a,
                       const ErrorBudget& budget = {});

/// Best m-term error over supports |A| <= m inside {1..dim}.
ErrorValue sigma_m(const NormEngine& engine, const Vec& x, int m, const ErrorBudget& budget = {});

/// min over |A| = m of ||x - P_A(x)||.
ErrorValue sigma_tilde_m(const NormEngine& engine, const Vec& x, int m,
                         const ErrorBudget& budget = {});

/// Best error over vectors supported on an interval of length m.
ErrorValue sigma_con_m(const NormEngine& engine, const Vec& x, int m,
                       const ErrorBudget& budget = {});

/// min over |A| <= m and lambda of ||x - lambda 1_A||.
ErrorValue d_m(const NormEngine& engine, const Vec& x, int m, const ErrorBudget& budget = {});

/// min over intervals I of length m and lambda of ||x - lambda 1_I||.
ErrorValue d_con_m(const NormEngine& engine, const Vec& x, int m, const ErrorBudget& budget = {});

/// Intervals of length m examined by the consecutive functionals: every start
/// in {1..dim}. The representative interval beyond the support (value ||x||)
/// is accounted for separately.
std::vector<Interval> consecutive_intervals(int dim, int m);

/// All five functionals for m = 0..dim, computed once and shared by the
/// estimators and checks.
struct ErrorProfile {
  std::vector<ErrorValue> sigma, sigma_tilde, sigma_con, d, d_con;
};

enum Functional : unsigned {
  kSigma = 1U << 0,
  kSigmaTilde = 1U << 1,
  kSigmaCon = 1U << 2,
  kD = 1U << 3,
  kDCon = 1U << 4,
  kAllFunctionals = 0x1FU,
};

/// Only the functionals selected in `which` are filled in.
ErrorProfile error_profile(const NormEngine& engine, const Vec& x, const ErrorBudget& budget = {},
                           unsigned which = kAllFunctionals);

/// min over t in (0,1) of (1-t^p)^(-1/p) (1-(1+t/(A_p u))^(-p))^(-1/p), 0 < p < 1.
double eta_p(double p, double u);

/// The objective minimised by eta_p.
double eta_objective(double p, double u, double t);

}  // namespace gbl

#endif  // GBL_ORACLES_HPP
