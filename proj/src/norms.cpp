#include "gbl/norms.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace gbl {

NormEngine NormEngine::lp(double q) {
  if (!(q > 0.0) || !std::isfinite(q)) throw ContractViolation("lp: q must be in (0, inf)");
  return NormEngine("lp", std::min(q, 1.0), engines::Lp{q});
}

NormEngine NormEngine::sup() { return NormEngine("sup", 1.0, engines::Sup{}); }

NormEngine NormEngine::weighted_lp(double q, std::vector<double> weights) {
  if (!(q > 0.0) || !std::isfinite(q)) throw ContractViolation("weighted_lp: q must be in (0, inf)");
  if (weights.empty()) throw ContractViolation("weighted_lp: weight list is empty");
  for (double w : weights)
    if (!(w > 0.0) || !std::isfinite(w)) throw ContractViolation("weighted_lp: weights must be positive");
  return NormEngine("weighted_lp", std::min(q, 1.0), engines::WeightedLp{q, std::move(weights)});
}

NormEngine NormEngine::interval_sup() {
  return NormEngine("interval_sup", 1.0, engines::IntervalSup{});
}

std::string NormEngine::label() const {
  std::ostringstream os;
  os << name_;
  if (const auto* e = std::get_if<engines::Lp>(&params_)) {
    os << "(q=" << e->q << ")";
  } else if (const auto* w = std::get_if<engines::WeightedLp>(&params_)) {
    os << "(q=" << w->q << ",w=[";
    for (std::size_t i = 0; i < w->weights.size(); ++i) os << (i ? "," : "") << w->weights[i];
    os << "])";
  }
  return os.str();
}

BasisBounds NormEngine::bounds() const {
  if (const auto* w = std::get_if<engines::WeightedLp>(&params_)) {
    // ||e_n|| = w_n^(1/q) and ||e_n^*|| = w_n^(-1/q).
    BasisBounds b{1e300, 0.0};
    for (double wn : w->weights) {
      const double a = std::pow(wn, 1.0 / w->q);
      b.c1 = std::min({b.c1, a, 1.0 / a});
      b.c2 = std::max({b.c2, a, 1.0 / a});
    }
    return b;
  }
  return BasisBounds{1.0, 1.0};
}

double interval_sup_brute(const Vec& x) {
  double best = 0.0;
  for (Eigen::Index n = 0; n < x.size(); ++n) {
    double s = 0.0;
    for (Eigen::Index m = n; m < x.size(); ++m) {
      s += x(m);
      best = std::max(best, std::abs(s));
    }
  }
  return best;
}

double p_convexity_audit(const NormEngine& engine, const std::vector<std::pair<Vec, Vec>>& corpus) {
  if (corpus.empty()) throw ContractViolation("p_convexity_audit: empty corpus");
  const double p = engine.p_exp();
  double worst = 0.0;
  for (const auto& [x, y] : corpus) {
    const Eigen::Index n = std::max(x.size(), y.size());
    const Vec xs = padded(x, n), ys = padded(y, n);
    const double den = std::pow(engine(xs), p) + std::pow(engine(ys), p);
    if (den == 0.0) continue;
    worst = std::max(worst, std::pow(engine(Vec(xs + ys)), p) / den);
  }
  return worst;
}

NormEngine engine_from_json(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("norm") || !j.at("norm").is_string())
    throw std::invalid_argument("space config needs a string field \"norm\"");
  const std::string kind = j.at("norm").get<std::string>();
  auto q_of = [&] {
    if (!j.contains("q") || !j.at("q").is_number())
      throw std::invalid_argument("space config \"" + kind + "\" needs numeric \"q\"");
    return j.at("q").get<double>();
  };
  try {
    if (kind == "lp") return NormEngine::lp(q_of());
    if (kind == "sup") return NormEngine::sup();
    if (kind == "interval_sup") return NormEngine::interval_sup();
    if (kind == "weighted_lp") {
      if (!j.contains("weights") || !j.at("weights").is_array())
        throw std::invalid_argument("weighted_lp needs a \"weights\" array");
      return NormEngine::weighted_lp(q_of(), j.at("weights").get<std::vector<double>>());
    }
  } catch (const ContractViolation& e) {
    throw std::invalid_argument(e.what());
  }
  throw std::invalid_argument("unknown norm \"" + kind + "\"");
}

nlohmann::json engine_to_json(const NormEngine& engine) {
  nlohmann::json j{{"norm", engine.name()}};
  if (const auto* e = std::get_if<engines::Lp>(&engine.params())) {
    j["q"] = e->q;
  } else if (const auto* w = std::get_if<engines::WeightedLp>(&engine.params())) {
    j["q"] = w->q;
    j["weights"] = w->weights;
  }
  return j;
}

}  // namespace gbl
