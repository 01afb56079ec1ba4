#include "gbl/cli.hpp"

#include "gbl/io.hpp"
#include "gbl/parallel.hpp"
#include "gbl/verify.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <random>
#include <sstream>
#include <thread>

namespace gbl {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(12) << v;
  return os.str();
}

template <typename T>
T get_as(const json& j, const char* key) {
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw ParseError(std::string("config key \"") + key + "\": " + e.what());
  }
}

void write_json(const fs::path& file, const json& j) {
  std::ofstream os(file, std::ios::binary);
  if (!os) throw std::runtime_error("cannot write " + file.string());
  os << j.dump(2) << '\n';
}

void prepare_out(const fs::path& out) {
  fs::create_directories(out / "witnesses");
}

std::string param_suffix(std::optional<double> p, const char* key) {
  return p ? std::string("_") + key + fmt(*p) : std::string();
}

}  // namespace

// ---------------------------------------------------------------------------
// Configuration

void RunConfig::validate() const {
  if (dim < 2) throw ParseError("dim must be at least 2");
  if (dim > 62) throw ParseError("dim must be at most 62");
  if (taus.empty()) throw ParseError("taus must not be empty");
  for (double t : taus)
    if (!(t > 0.0 && t <= 1.0)) throw ParseError("every tau must lie in (0, 1]; got " + fmt(t));
  for (const auto& c : checks)
    if (!known_check(c)) throw ParseError("unknown check id \"" + c + "\"");
  try {
    (void)engine();
  } catch (const std::invalid_argument& e) {
    throw ParseError(e.what());
  }
}

NormEngine RunConfig::engine() const { return engine_from_json(space); }

CorpusSpec RunConfig::corpus_spec() const {
  CorpusSpec s;
  s.dim = dim;
  s.seed = seed;
  s.structured_budget = caps.structured;
  s.random_count = caps.random;
  s.sign_budget = caps.signed_sets;
  return s;
}

ErrorBudget RunConfig::budget() const {
  ErrorBudget b;
  b.cap = caps.enumeration;
  return b;
}

std::vector<std::string> RunConfig::selected_checks() const {
  return checks.empty() ? check_ids() : checks;
}

RunConfig config_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("config must be a JSON object");
  RunConfig c;
  for (const auto& [key, val] : j.items()) {
    if (key == "space") {
      c.space = val;
    } else if (key == "dim") {
      c.dim = get_as<int>(j, "dim");
    } else if (key == "seed") {
      c.seed = get_as<std::uint64_t>(j, "seed");
    } else if (key == "taus") {
      c.taus = get_as<std::vector<double>>(j, "taus");
    } else if (key == "checks") {
      if (val.is_string()) {
        if (val.get<std::string>() != "all") throw ParseError("checks must be \"all\" or a list");
        c.checks.clear();
      } else {
        c.checks = get_as<std::vector<std::string>>(j, "checks");
      }
    } else if (key == "caps") {
      if (!val.is_object()) throw ParseError("caps must be an object");
      for (const auto& [ck, cv] : val.items()) {
        if (!cv.is_number_unsigned()) throw ParseError("caps." + ck + " must be a nonnegative integer");
        if (ck == "enumeration") c.caps.enumeration = cv.get<std::uint64_t>();
        else if (ck == "structured") c.caps.structured = cv.get<std::size_t>();
        else if (ck == "random") c.caps.random = cv.get<std::size_t>();
        else if (ck == "signed_sets") c.caps.signed_sets = cv.get<std::size_t>();
        else throw ParseError("unknown cap \"" + ck + "\"");
      }
    } else if (key == "out") {
      c.out = get_as<std::string>(j, "out");
    } else {
      throw ParseError("unknown config key \"" + key + "\"");
    }
  }
  return c;
}

RunConfig load_config(const fs::path& file) {
  std::ifstream is(file);
  if (!is) throw ParseError("cannot read config " + file.string());
  try {
    return config_from_json(json::parse(is));
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("config: ") + e.what());
  }
}

// ---------------------------------------------------------------------------
// Commands

int cmd_norm(const RunConfig& cfg, const std::string& literal, std::ostream& out) {
  const Vec x = parse_vec(literal);
  out << fmt(cfg.engine()(x)) << '\n';
  return kExitOk;
}

int cmd_constants(const RunConfig& cfg, std::ostream& log) {
  const NormEngine e = cfg.engine();
  const Corpus corpus = Corpus::build(cfg.corpus_spec());
  const ErrorBudget budget = cfg.budget();
  const std::vector<double> grid = default_coeff_grid();
  const int dim = cfg.dim;
  const int support = std::min(3, dim);
  prepare_out(cfg.out);

  json report = json::array();
  std::ostringstream csv;
  csv << "name,param,value,instances,status\n";
  bool capped = false;
  auto run = [&](ConstantName name, std::optional<double> param, auto&& estimate) {
    const char* key = name == ConstantName::NearUnc_phi_t ? "t" : "tau";
    const std::string file = to_string(name) + param_suffix(param, key) + ".json";
    try {
      ConstantEstimate est = estimate();
      json row = to_json(est);
      row["engine"] = e.label();
      report.push_back(row);
      csv << to_string(name) << ',' << (param ? fmt(*param) : "") << ',' << fmt(est.value) << ','
          << est.instances << ",ok\n";
      write_json(cfg.out / "witnesses" / file, row);
      log << to_string(name) << (param ? " (" + std::string(key) + "=" + fmt(*param) + ")" : "")
          << ": " << fmt(est.value) << '\n';
    } catch (const CapExceeded& ex) {
      capped = true;
      json row{{"name", to_string(name)}, {"engine", e.label()}, {"partial", true},
               {"status", "cap_exceeded"}, {"message", ex.what()}};
      if (param) row[key] = *param;
      report.push_back(row);
      csv << to_string(name) << ',' << (param ? fmt(*param) : "") << ",,0,cap_exceeded\n";
      log << to_string(name) << ": cap exceeded (" << ex.what() << ")\n";
    }
  };

  run(ConstantName::Kb, std::nullopt, [&] { return est_Kb(e, corpus); });
  run(ConstantName::Ksu, std::nullopt, [&] { return est_Ksu(e, corpus); });
  run(ConstantName::Delta_d, std::nullopt, [&] { return est_democracy(e, dim, dim); });
  run(ConstantName::Delta_sd, std::nullopt,
      [&] { return est_superdemocracy(e, dim, dim, cfg.caps.signed_sets); });
  for (double tau : cfg.taus)
    run(ConstantName::C_ell_tau, tau, [&] { return est_suppression_qg(e, corpus, tau, budget); });
  run(ConstantName::C_tq, std::nullopt, [&] { return est_truncation_qg(e, corpus, budget); });
  for (double tau : cfg.taus)
    run(ConstantName::C_g_con_tau, tau,
        [&] { return est_consecutive_greedy(e, corpus, tau, budget); });
  for (double tau : cfg.taus)
    run(ConstantName::P_g_con_tau, tau, [&] { return est_cgpcc(e, corpus, tau, budget); });
  for (double tau : cfg.taus)
    run(ConstantName::PropA_tau, tau, [&] { return est_propA(e, dim, tau, grid, support); });
  run(ConstantName::QGLC, std::nullopt, [&] { return est_qglc(e, dim, grid, support); });
  for (double t : cfg.taus)
    run(ConstantName::NearUnc_phi_t, t, [&] { return est_near_unc_phi(e, dim, t, grid, support); });
  run(ConstantName::C_sqs, std::nullopt, [&] { return est_sqs(e, dim, grid, support); });
  run(ConstantName::ConsecUnc, std::nullopt, [&] { return est_consec_unc(e, corpus); });

  write_json(cfg.out / "report.json", report);
  std::ofstream(cfg.out / "summary.csv", std::ios::binary) << csv.str();
  return capped ? kExitCap : kExitOk;
}

int cmd_check(const RunConfig& cfg, std::ostream& log) {
  const NormEngine e = cfg.engine();
  const Corpus corpus = Corpus::build(cfg.corpus_spec());
  prepare_out(cfg.out);

  json report = json::array();
  std::ostringstream csv;
  csv << csv_header() << '\n';
  bool capped = false, failed = false;
  for (const std::string& id : cfg.selected_checks()) {
    std::vector<std::optional<double>> params{std::nullopt};
    if (tau_dependent(id)) params.assign(cfg.taus.begin(), cfg.taus.end());
    for (const auto& tau : params) {
      CheckContext ctx(e, corpus);
      ctx.budget = cfg.budget();
      ctx.taus = cfg.taus;
      if (tau) ctx.tau = ctx.t = *tau;
      const std::string file = id + param_suffix(tau, "tau") + ".json";
      try {
        const CheckReport r = run_check(id, ctx);
        json row = to_json(r);
        report.push_back(row);
        csv << csv_row(r) << '\n';
        json w{{"check_id", r.check_id}, {"engine", r.engine}, {"clauses", json::array()}};
        if (r.tau) w["tau"] = *r.tau;
        for (const auto& c : row["clauses"])
          w["clauses"].push_back({{"name", c["name"]}, {"worst_witness", c["worst_witness"]}});
        w["failures"] = row["failures"];
        w["expected_failures"] = row["expected_failures"];
        write_json(cfg.out / "witnesses" / file, w);
        failed |= !r.ok();
        log << id << (tau ? " tau=" + fmt(*tau) : "") << ": " << to_string(r.status)
            << " (instances " << r.instances << ", worst slack " << fmt(r.worst_slack) << ")\n";
      } catch (const CapExceeded& ex) {
        capped = true;
        json row{{"check_id", id}, {"engine", e.label()}, {"partial", true},
                 {"status", "cap_exceeded"}, {"message", ex.what()}};
        if (tau) row["tau"] = *tau;
        report.push_back(row);
        csv << id << ",\"" << e.label() << "\"," << (tau ? fmt(*tau) : "") << ",0,,cap_exceeded\n";
        log << id << ": cap exceeded (" << ex.what() << ")\n";
      }
    }
  }
  write_json(cfg.out / "report.json", report);
  std::ofstream(cfg.out / "summary.csv", std::ios::binary) << csv.str();
  if (capped) return kExitCap;
  return failed ? kExitFail : kExitOk;
}

// ---------------------------------------------------------------------------
// Search

bool searchable(ConstantName name) {
  switch (name) {
    case ConstantName::Kb:
    case ConstantName::Ksu:
    case ConstantName::C_ell_tau:
    case ConstantName::C_tq:
    case ConstantName::C_g_con_tau:
    case ConstantName::P_g_con_tau:
    case ConstantName::ConsecUnc:
      return true;
    default:
      return false;
  }
}

SearchResult search_constant(const RunConfig& cfg, ConstantName objective, std::size_t iterations) {
  if (!searchable(objective))
    throw ContractViolation("objective " + to_string(objective) + " has no per-vector ratio");
  const NormEngine e = cfg.engine();
  const ErrorBudget budget = cfg.budget();
  const double tau = cfg.taus.front();
  auto ratio = [&](const Vec& x) -> RatioMax {
    switch (objective) {
      case ConstantName::Kb:
        return kb_at(e, x);
      case ConstantName::Ksu:
        return ksu_at(e, x);
      case ConstantName::C_ell_tau:
        return suppression_qg_at(e, x, tau, budget.cap);
      case ConstantName::C_tq:
        return truncation_qg_at(e, x, budget.cap);
      case ConstantName::C_g_con_tau:
        return consecutive_greedy_at(e, x, tau, budget);
      case ConstantName::P_g_con_tau:
        return cgpcc_at(e, x, tau, budget);
      default:
        return consec_unc_at(e, x);
    }
  };

  SearchResult res;
  res.objective = objective;
  CorpusSpec spec = cfg.corpus_spec();
  spec.random_count = 0;
  const Corpus base = Corpus::build(spec);
  Vec best = Vec::Zero(cfg.dim);
  bool have = false;
  auto consider = [&](const Vec& x, const std::string& origin, std::size_t iteration) {
    RatioMax r = ratio(x);
    ++res.evaluations;
    if (r.has && (!have || r.value > res.value)) {
      have = true;
      res.value = r.value;
      res.witness = std::move(r.witness);
      best = x;
      res.trail.push_back({{"iteration", iteration},
                           {"origin", origin},
                           {"value", number_to_json(r.value)},
                           {"x", vec_to_json(x)}});
    }
  };
  for (const Vec& x : base.vectors) consider(x, "structured", 0);

  std::mt19937_64 rng(cfg.seed);
  std::uniform_int_distribution<int> coin(0, 1), pos(0, cfg.dim - 1), size(1, cfg.dim);
  std::uniform_real_distribution<double> val(-3.0, 3.0);
  std::normal_distribution<double> jitter(0.0, 0.5);
  for (std::size_t it = 1; it <= iterations; ++it) {
    Vec x;
    std::string origin;
    if (!have || coin(rng) == 0) {
      x = Vec::Zero(cfg.dim);
      const int k = size(rng);
      for (int j = 0; j < k; ++j) x(pos(rng)) = std::round(val(rng) * 4.0) / 4.0;
      origin = "random";
    } else {
      x = best;
      x(pos(rng)) += jitter(rng);
      origin = "mutation";
    }
    consider(x, origin, it);
  }
  return res;
}

int cmd_search(const RunConfig& cfg, const std::string& objective, std::size_t iterations,
               std::ostream& log) {
  const auto name = constant_from_string(objective);
  if (!name) throw ParseError("unknown objective \"" + objective + "\"");
  if (!searchable(*name))
    throw ParseError("objective \"" + objective + "\" has no per-vector ratio; use constants");
  const SearchResult res = search_constant(cfg, *name, iterations);
  prepare_out(cfg.out);
  json j{{"objective", objective},
         {"engine", cfg.engine().label()},
         {"seed", cfg.seed},
         {"tau", cfg.taus.front()},
         {"iterations", iterations},
         {"evaluations", res.evaluations},
         {"value", number_to_json(res.value)},
         {"witness", res.witness},
         {"trail", res.trail}};
  write_json(cfg.out / "search.json", j);
  write_json(cfg.out / "witnesses" / ("search_" + objective + ".json"), j);
  log << objective << ": " << fmt(res.value) << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------------------

int run_cli(int argc, char** argv) {
  CLI::App app{"Thresholding greedy algorithm laboratory"};
  app.require_subcommand(1);

  std::string config_file;
  std::optional<int> dim;
  std::optional<std::uint64_t> seed;
  std::vector<double> taus;
  std::string out;
  int jobs = 0;
  auto common = [&](CLI::App* sub) {
    sub->add_option("-c,--config", config_file, "JSON run configuration");
    sub->add_option("--dim", dim, "ambient dimension");
    sub->add_option("--seed", seed, "corpus seed");
    sub->add_option("--tau", taus, "tau values (repeatable)");
    sub->add_option("--out", out, "output directory");
    sub->add_option("-j,--jobs", jobs, "worker threads (default: GBL_JOBS, then all cores)");
  };

  auto* norm = app.add_subcommand("norm", "print the norm of a vector literal");
  std::string literal;
  common(norm);
  norm->add_option("vector", literal, "vector literal such as {\"1\": 3, \"2\": -1}")->required();

  auto* constants = app.add_subcommand("constants", "estimate every basis constant");
  common(constants);
  auto* check = app.add_subcommand("check", "run the inequality checks");
  common(check);
  std::vector<std::string> check_list;
  check->add_option("--check", check_list, "check id to run (repeatable; default: config)");

  auto* search = app.add_subcommand("search", "randomized ratio maximization");
  common(search);
  std::string objective;
  std::size_t iterations = 10000;
  search->add_option("--objective", objective, "constant name")->required();
  search->add_option("--iterations", iterations, "random draws after the structured stratum");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    RunConfig cfg = config_file.empty() ? RunConfig{} : load_config(config_file);
    if (dim) cfg.dim = *dim;
    if (seed) cfg.seed = *seed;
    if (!taus.empty()) cfg.taus = taus;
    if (!out.empty()) cfg.out = out;
    if (!check_list.empty()) cfg.checks = check_list;
    cfg.validate();

    if (jobs <= 0)
      if (const char* env = std::getenv("GBL_JOBS")) jobs = std::atoi(env);
    if (jobs <= 0) jobs = static_cast<int>(std::max(1U, std::thread::hardware_concurrency()));
    set_worker_count(jobs);

    if (*norm) return cmd_norm(cfg, literal, std::cout);
    if (*constants) return cmd_constants(cfg, std::cout);
    if (*check) return cmd_check(cfg, std::cout);
    return cmd_search(cfg, objective, iterations, std::cout);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const CapExceeded& e) {
    std::cerr << "cap exceeded: " << e.what() << '\n';
    return kExitCap;
  } catch (const ContractViolation& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

}  // namespace gbl
