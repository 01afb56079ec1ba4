#include <doctest.h>

#include "gbl/cli.hpp"
#include "gbl/io.hpp"
#include "gbl/parallel.hpp"
#include "gbl/verify.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

using namespace gbl;
using nlohmann::json;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("gbl_cli_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream os;
  os << is.rdbuf();
  return os.str();
}

RunConfig small_config(const json& space, const fs::path& out) {
  RunConfig c = config_from_json({{"space", space}, {"dim", 4}, {"taus", {0.5, 1.0}}, {"out", out.string()}});
  c.caps.random = 8;
  return c;
}

// Runs the installed tool; returns its exit status.
int run_tool(const std::string& args, const fs::path& log) {
  const char* bin = std::getenv("GBL_BIN");
  if (!bin) return -1;
  const std::string cmd = std::string(bin) + " " + args + " > " + log.string() + " 2>&1";
  const int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

}  // namespace

TEST_CASE("config parsing") {
  const RunConfig d = config_from_json(json::object());
  CHECK(d.dim == 6);
  CHECK(d.taus == std::vector<double>{0.25, 0.5, 0.75, 1.0});
  CHECK(d.selected_checks() == check_ids());
  const RunConfig c = config_from_json(json::parse(R"({
    "space": {"norm": "interval_sup"}, "dim": 5, "seed": 7, "taus": [0.5],
    "checks": ["m3", "l1"], "caps": {"enumeration": 1000, "structured": 10}, "out": "x"})"));
  CHECK(c.engine().name() == "interval_sup");
  CHECK(c.dim == 5);
  CHECK(c.seed == 7);
  CHECK(c.selected_checks() == std::vector<std::string>{"m3", "l1"});
  CHECK(c.budget().cap == 1000);
  CHECK(c.corpus_spec().structured_budget == 10);
  CHECK(c.out == "x");
  CHECK(config_from_json(json{{"checks", "all"}}).checks.empty());
}

TEST_CASE("config validation") {
  CHECK_THROWS_AS(config_from_json(json{{"bogus", 1}}), ParseError);
  CHECK_THROWS_AS(config_from_json(json{{"dim", "six"}}), ParseError);
  CHECK_THROWS_AS(config_from_json(json{{"checks", "some"}}), ParseError);
  CHECK_THROWS_AS(config_from_json(json{{"caps", {{"speed", 1}}}}), ParseError);
  CHECK_THROWS_AS(config_from_json(json::array()), ParseError);
  CHECK_THROWS_AS(config_from_json(json{{"dim", 1}}).validate(), ParseError);
  CHECK_THROWS_AS(config_from_json(json{{"taus", {0.0}}}).validate(), ParseError);
  CHECK_THROWS_AS(config_from_json(json{{"taus", {1.5}}}).validate(), ParseError);
  CHECK_THROWS_AS(config_from_json(json{{"checks", {"m9"}}}).validate(), ParseError);
  CHECK_THROWS_AS(config_from_json(json{{"space", {{"norm", "lq"}}}}).validate(), ParseError);
  CHECK_NOTHROW(config_from_json(json::object()).validate());
}

TEST_CASE("norm command") {
  RunConfig c;
  std::ostringstream os;
  c.space = {{"norm", "interval_sup"}};
  CHECK(cmd_norm(c, R"({"1":3,"2":-1,"3":3})", os) == kExitOk);
  c.space = {{"norm", "lp"}, {"q", 2}};
  cmd_norm(c, R"({"1":3,"2":4})", os);
  cmd_norm(c, "{}", os);
  c.space = {{"norm", "lp"}, {"q", 1}};
  cmd_norm(c, R"({"1":0.1,"2":0.2})", os);
  CHECK(os.str() == "5\n5\n0\n0.3\n");
  CHECK_THROWS_AS(cmd_norm(c, "[1,2]", os), ParseError);
}

TEST_CASE("check command writes reports and is byte-identical across runs") {
  const fs::path a = scratch("check_a"), b = scratch("check_b");
  RunConfig ca = small_config({{"norm", "lp"}, {"q", 1}}, a);
  ca.checks = {"m1_iii", "m3", "l1"};
  RunConfig cb = ca;
  cb.out = b;
  std::ostringstream log;
  set_worker_count(1);
  CHECK(cmd_check(ca, log) == kExitOk);
  set_worker_count(3);
  CHECK(cmd_check(cb, log) == kExitOk);
  set_worker_count(1);
  CHECK(slurp(a / "report.json") == slurp(b / "report.json"));
  CHECK(slurp(a / "summary.csv") == slurp(b / "summary.csv"));
  const json rep = json::parse(slurp(a / "report.json"));
  REQUIRE(rep.is_array());
  CHECK(rep.size() == 4);  // m1_iii once per tau
  CHECK(fs::exists(a / "witnesses" / "m1_iii_tau0.5.json"));
  CHECK(fs::exists(a / "witnesses" / "m3.json"));
}

TEST_CASE("expected failures count as passing") {
  const fs::path out = scratch("m3_interval");
  RunConfig c = small_config({{"norm", "interval_sup"}}, out);
  c.checks = {"m3"};
  std::ostringstream log;
  CHECK(cmd_check(c, log) == kExitOk);
  const json rep = json::parse(slurp(out / "report.json"));
  CHECK(rep[0]["expected_failures"][0]["reproduced"] == true);
}

TEST_CASE("cap exceeded gives a partial report") {
  const fs::path out = scratch("capped");
  RunConfig c = small_config({{"norm", "lp"}, {"q", 1}}, out);
  c.checks = {"m1_i", "l1"};
  c.caps.enumeration = 2;
  std::ostringstream log;
  CHECK(cmd_check(c, log) == kExitCap);
  const json rep = json::parse(slurp(out / "report.json"));
  CHECK(rep[0]["status"] == "cap_exceeded");
  CHECK(rep[0]["partial"] == true);
  CHECK(rep.back()["check_id"] == "l1");
  CHECK(rep.back()["status"] == "pass");
}

TEST_CASE("constants command") {
  const fs::path out = scratch("constants");
  RunConfig c = small_config({{"norm", "lp"}, {"q", 1}}, out);
  std::ostringstream log;
  CHECK(cmd_constants(c, log) == kExitOk);
  const json rep = json::parse(slurp(out / "report.json"));
  // 8 parameter-free constants plus 5 swept over two taus.
  CHECK(rep.size() == 8 + 5 * 2);
  for (const auto& row : rep) {
    INFO(row.dump());
    if (row["name"] == "QGLC" || row["name"] == "NearUnc_phi_t") continue;
    // tau-greedy sets of l1 lose exactly 1/tau against the best error
    const bool greedy = row["name"] == "C_g_con_tau" || row["name"] == "P_g_con_tau";
    const double expect = greedy ? 1.0 / row["tau"].get<double>() : 1.0;
    CHECK(number_from_json(row["value"]) == doctest::Approx(expect));
  }
  CHECK(fs::exists(out / "witnesses" / "PropA_tau_tau0.5.json"));
  CHECK(fs::exists(out / "witnesses" / "NearUnc_phi_t_t1.json"));
}

TEST_CASE("interval sup constants and sup democracy") {
  std::ostringstream log;
  const fs::path out = scratch("constants_interval");
  RunConfig c = small_config({{"norm", "interval_sup"}}, out);
  CHECK(cmd_constants(c, log) == kExitOk);
  for (const auto& row : json::parse(slurp(out / "report.json")))
    if (row["name"] == "Ksu") CHECK(number_from_json(row["value"]) >= 1.2 - 1e-12);
  const fs::path out2 = scratch("constants_sup");
  RunConfig s = small_config({{"norm", "sup"}}, out2);
  CHECK(cmd_constants(s, log) == kExitOk);
  for (const auto& row : json::parse(slurp(out2 / "report.json")))
    if (row["name"] == "Delta_sd") CHECK(number_from_json(row["value"]) == doctest::Approx(1.0));
}

TEST_CASE("search") {
  RunConfig c = small_config({{"norm", "interval_sup"}}, scratch("search"));
  const SearchResult zero = search_constant(c, ConstantName::Ksu, 0);
  CHECK(zero.value >= 1.2 - 1e-12);
  CHECK(zero.trail.back()["origin"] == "structured");
  const SearchResult r1 = search_constant(c, ConstantName::Ksu, 500);
  const SearchResult r2 = search_constant(c, ConstantName::Ksu, 500);
  CHECK(r1.value >= zero.value);
  CHECK(r1.trail == r2.trail);
  CHECK(r1.evaluations == zero.evaluations + 500);
  RunConfig l = small_config({{"norm", "lp"}, {"q", 1}}, scratch("search_l1"));
  CHECK(search_constant(l, ConstantName::Ksu, 200).value == doctest::Approx(1.0));
  CHECK_FALSE(searchable(ConstantName::PropA_tau));
  CHECK_THROWS_AS(search_constant(l, ConstantName::C_sqs, 1), ContractViolation);
}

TEST_CASE("tool exit codes") {
  if (!std::getenv("GBL_BIN")) {
    MESSAGE("GBL_BIN not set; skipping");
    return;
  }
  const fs::path dir = scratch("tool");
  fs::create_directories(dir);
  const fs::path cfg = dir / "cfg.json", log = dir / "log.txt";
  std::ofstream(cfg) << R"({"space": {"norm": "interval_sup"}, "dim": 4, "caps": {"random": 4}})";
  CHECK(run_tool("norm -c " + cfg.string() + R"( '{"1":3,"2":-1,"3":3}')", log) == 0);
  CHECK(slurp(log) == "5\n");
  CHECK(run_tool("norm 'not json'", log) == kExitUsage);
  CHECK(run_tool("check --check nope", log) == kExitUsage);
  CHECK(run_tool("frobnicate", log) == kExitUsage);
  CHECK(run_tool("check -c " + (dir / "missing.json").string(), log) == kExitUsage);
  CHECK(run_tool("check -c " + cfg.string() + " --check m3 --out " + (dir / "o").string(), log) == 0);
  CHECK(fs::exists(dir / "o" / "summary.csv"));
  CHECK(run_tool("check -c " + cfg.string() + " --check m1_i --tau 1 --out " + (dir / "c").string() +
                     " -j 1",
                 log) == 0);
  const std::string capped = R"({"dim": 4, "caps": {"enumeration": 2, "random": 4}})";
  std::ofstream(dir / "capped.json") << capped;
  CHECK(run_tool("check -c " + (dir / "capped.json").string() + " --check m1_i --out " +
                     (dir / "p").string(),
                 log) == kExitCap);
  CHECK(run_tool("search -c " + cfg.string() + " --objective Ksu --iterations 50 --out " +
                     (dir / "s").string(),
                 log) == 0);
  CHECK(fs::exists(dir / "s" / "search.json"));
  CHECK(run_tool("search --objective Nope --out " + (dir / "s").string(), log) == kExitUsage);
}
