#ifndef GBL_VERIFY_HPP
#define GBL_VERIFY_HPP

#include "gbl/constants.hpp"
#include "gbl/core.hpp"
#include "gbl/norms.hpp"
#include "gbl/oracles.hpp"

#include <nlohmann/json.hpp>

#include <optional>
#include <string>
#include <vector>

namespace gbl {

/// Relative tolerance on (rhs - lhs) / max(|lhs|, |rhs|).
inline constexpr double kCheckTolerance = 1e-9;

struct CheckContext {
  CheckContext(NormEngine e, const Corpus& c) : engine(std::move(e)), corpus(&c) {}

  NormEngine engine;
  const Corpus* corpus;
  double tau = 1.0;
  double t = 1.0;
  std::vector<double> taus{0.25, 0.5, 0.75, 1.0};
  ErrorBudget budget;
  std::vector<double> coeff_grid = default_coeff_grid();
  int grid_support = 3;  // support bound for the grid families
  int max_card = 3;      // cardinality bound for indicator families

  int dim() const { return corpus->dim(); }
};

enum class CheckStatus { Pass, Fail, Skipped };

std::string to_string(CheckStatus s);

/// A constant entering a bound: certified values are known analytically for
/// the engine, measured ones are corpus suprema.
struct BoundConstant {
  std::string name;
  double value = 0.0;
  bool certified = false;
};

/// A clause of a check together with the worst instance seen.
struct ClauseResult {
  std::string name;
  bool asserted = true;
  std::size_t instances = 0;
  double worst_slack = 0.0;
  double worst_ratio = 0.0;
  nlohmann::json worst_witness;
  std::size_t failure_count = 0;
};

/// A witness that must violate a stated bound.
struct ExpectedFailure {
  std::string clause;
  nlohmann::json witness;
  double ratio = 0.0;
  bool reproduced = false;
};

struct CheckReport {
  std::string check_id;
  std::string engine;
  std::string kind = "theorem";  // "consistency" once a measured constant is involved
  std::optional<double> tau;
  std::optional<double> t;
  std::size_t instances = 0;
  double worst_slack = 0.0;  // min relative slack over asserted clauses
  double worst_ratio = 0.0;  // max lhs/rhs over asserted clauses
  std::string bound_formula;
  std::vector<BoundConstant> constants;
  std::vector<ClauseResult> clauses;
  CheckStatus status = CheckStatus::Skipped;
  std::vector<nlohmann::json> failures;  // first few violating instances
  std::vector<ExpectedFailure> expected_failures;
  std::vector<std::string> notes;

  bool ok() const { return status != CheckStatus::Fail; }
};

nlohmann::json to_json(const CheckReport& r);
std::string csv_header();
std::string csv_row(const CheckReport& r);

/// Known check ids in report order.
const std::vector<std::string>& check_ids();
bool known_check(const std::string& id);
/// Checks run once per tau of the configuration.
bool tau_dependent(const std::string& id);

CheckReport run_check(const std::string& id, const CheckContext& ctx);

CheckReport check_m1_i(const CheckContext& ctx);
CheckReport check_m1_ii(const CheckContext& ctx);
CheckReport check_m1_iii(const CheckContext& ctx);
CheckReport check_lemmatqg(const CheckContext& ctx);
CheckReport check_l1(const CheckContext& ctx);
CheckReport check_m3(const CheckContext& ctx);
CheckReport check_1propA_scaling(const CheckContext& ctx);
CheckReport check_alltau(const CheckContext& ctx);
CheckReport check_unifA(const CheckContext& ctx);
CheckReport check_sqs_implications(const CheckContext& ctx);
CheckReport check_corollaryforsemi(const CheckContext& ctx);
CheckReport check_pseudogreedy(const CheckContext& ctx);
CheckReport check_separation(const CheckContext& ctx);

/// Bound of the consecutive-greedy theorem from its four constants; the
/// second form applies for p = 1 only.
double consecutive_greedy_bound(double p, double tau, double kb, double c_ell, double delta_sd,
                                double c_tq);
double consecutive_greedy_bound_p1(double tau, double kb, double c_ell, double delta_sd,
                                   double c_ell_1);

/// Superdemocracy constant of the engine when it is known in closed form.
std::optional<double> certified_superdemocracy(const NormEngine& engine);

struct Separation {
  IndexSet e;
  double m = 1.0;
  std::size_t samples = 0;
};

/// Among E > F with |E| = m drawn from {max F + 1, ..., max F + 2m}, the set
/// minimising the sampled max of ||x|| / ||x + y|| over x on F and y on E with
/// coefficients from `values`.
Separation search_separation(const NormEngine& engine, const IndexSet& f, int m,
                             const std::vector<double>& values = {1.0, -1.0, 0.5, -0.5});

}  // namespace gbl

#endif  // GBL_VERIFY_HPP
