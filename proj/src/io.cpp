#include "gbl/io.hpp"

#include <cmath>
#include <limits>
#include <map>

namespace gbl {

Vec vec_from_json(const nlohmann::json& j, Eigen::Index dim) {
  if (!j.is_object()) throw ParseError("vector literal must be a JSON object");
  std::map<int, double> entries;
  for (const auto& [key, val] : j.items()) {
    std::size_t used = 0;
    int n = 0;
    try {
      n = std::stoi(key, &used);
    } catch (const std::exception&) {
      throw ParseError("vector literal: bad index \"" + key + "\"");
    }
    if (used != key.size() || n < 1) throw ParseError("vector literal: bad index \"" + key + "\"");
    if (!val.is_number()) throw ParseError("vector literal: coefficient at " + key + " is not a number");
    if (!entries.emplace(n, val.get<double>()).second)
      throw ParseError("vector literal: duplicate index " + key);
  }
  const Eigen::Index len = std::max<Eigen::Index>(dim, entries.empty() ? 0 : entries.rbegin()->first);
  Vec x = Vec::Zero(len);
  for (const auto& [n, v] : entries) x(n - 1) = v;
  return x;
}

Vec parse_vec(const std::string& literal, Eigen::Index dim) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(literal);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("vector literal: ") + e.what());
  }
  return vec_from_json(j, dim);
}

nlohmann::json vec_to_json(const Vec& x) {
  nlohmann::json o = nlohmann::json::object();
  for (Eigen::Index i = 0; i < x.size(); ++i)
    if (x(i) != 0.0) o[std::to_string(i + 1)] = x(i);
  return o;
}

nlohmann::json set_to_json(const IndexSet& a) { return a.elems(); }

IndexSet set_from_json(const nlohmann::json& j) {
  if (!j.is_array()) throw ParseError("index set must be a JSON array");
  return IndexSet(j.get<std::vector<int>>());
}

nlohmann::json signs_to_json(const IndexSet& a, const SignVector& s) {
  nlohmann::json out = nlohmann::json::array();
  for (int n : a) out.push_back(static_cast<int>(s.at(n)));
  return out;
}

SignVector signs_from_json(const IndexSet& a, const nlohmann::json& j) {
  if (!j.is_array() || j.size() != a.size()) throw ParseError("sign array does not match its set");
  SignVector s;
  std::size_t k = 0;
  for (int n : a) s.set(n, j[k++].get<int>() < 0 ? Sign::Minus : Sign::Plus);
  return s;
}

nlohmann::json number_to_json(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  return v;
}

double number_from_json(const nlohmann::json& j) {
  if (j.is_number()) return j.get<double>();
  if (j == "inf") return std::numeric_limits<double>::infinity();
  if (j == "-inf") return -std::numeric_limits<double>::infinity();
  return std::numeric_limits<double>::quiet_NaN();
}

}  // namespace gbl
