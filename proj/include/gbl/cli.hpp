#ifndef GBL_CLI_HPP
#define GBL_CLI_HPP

#include "gbl/constants.hpp"
#include "gbl/norms.hpp"
#include "gbl/oracles.hpp"

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace gbl {

inline constexpr int kExitOk = 0;
inline constexpr int kExitFail = 1;
inline constexpr int kExitUsage = 2;
inline constexpr int kExitCap = 3;

/// Enumeration caps; JSON keys in parentheses.
struct Caps {
  std::uint64_t enumeration = 1'000'000;      // ("enumeration") greedy sets per (x, m)
  std::size_t structured = std::size_t{1} << 15;  // ("structured") structured corpus vectors
  std::size_t random = 64;                    // ("random") random corpus vectors
  std::size_t signed_sets = 1'000'000;        // ("signed_sets") signed-set enumerations
};

struct RunConfig {
  nlohmann::json space = {{"norm", "lp"}, {"q", 1.0}};
  int dim = 6;
  std::uint64_t seed = 0;
  std::vector<double> taus{0.25, 0.5, 0.75, 1.0};
  std::vector<std::string> checks;  // empty means all
  Caps caps;
  std::filesystem::path out = "gbl_out";

  /// Throws ParseError on a broken invariant.
  void validate() const;
  NormEngine engine() const;
  CorpusSpec corpus_spec() const;
  ErrorBudget budget() const;
  std::vector<std::string> selected_checks() const;
};

/// Missing keys keep their defaults; unknown keys are rejected.
RunConfig config_from_json(const nlohmann::json& j);
RunConfig load_config(const std::filesystem::path& file);

int cmd_norm(const RunConfig& cfg, const std::string& literal, std::ostream& out);
int cmd_constants(const RunConfig& cfg, std::ostream& log);
int cmd_check(const RunConfig& cfg, std::ostream& log);
int cmd_search(const RunConfig& cfg, const std::string& objective, std::size_t iterations,
               std::ostream& log);

/// Best ratio found by randomized search, with every improvement recorded.
struct SearchResult {
  ConstantName objective = ConstantName::Kb;
  double value = 0.0;
  nlohmann::json witness;
  nlohmann::json trail = nlohmann::json::array();
  std::size_t evaluations = 0;
};

/// Objectives with a per-vector ratio.
bool searchable(ConstantName name);

/// Starts from the structured corpus stratum, then draws `iterations` random or
/// mutated vectors from a generator seeded with cfg.seed.
SearchResult search_constant(const RunConfig& cfg, ConstantName objective, std::size_t iterations);

/// Entry point of the gbl tool.
int run_cli(int argc, char** argv);

}  // namespace gbl

#endif  // GBL_CLI_HPP
