#ifndef GBL_IO_HPP
#define GBL_IO_HPP

#include "gbl/core.hpp"

#include <nlohmann/json.hpp>

#include <stdexcept>
#include <string>

namespace gbl {

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Vector literal {"1": 3, "2": -1}: decimal index strings mapped to numbers.
/// The result has length max(dim, largest index).
Vec vec_from_json(const nlohmann::json& j, Eigen::Index dim = 0);
Vec parse_vec(const std::string& literal, Eigen::Index dim = 0);

/// Nonzero coefficients only.
nlohmann::json vec_to_json(const Vec& x);

nlohmann::json set_to_json(const IndexSet& a);
IndexSet set_from_json(const nlohmann::json& j);

/// Signs on A as an array of +1/-1 aligned with the elements of A.
nlohmann::json signs_to_json(const IndexSet& a, const SignVector& s);
SignVector signs_from_json(const IndexSet& a, const nlohmann::json& j);

/// Finite values as numbers; +inf as the string "inf".
nlohmann::json number_to_json(double v);
double number_from_json(const nlohmann::json& j);

}  // namespace gbl

#endif  // GBL_IO_HPP
