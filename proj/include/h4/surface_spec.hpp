#pragma once

#include <array>
#include <fstream>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

#include "json.hpp"

#include "h4/geometry.hpp"

namespace h4 {

/// Problems with a surface specification document (missing keys, wrong
/// types, unparseable expressions, bad bounds).
struct SpecError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// A surface specification file: four coordinate expressions keyed x, y, z, t,
/// a per-parameter domain box, grid resolutions, and optional extras (an
/// implicit equation for cross-validation, threshold overrides).
struct SurfaceSpec {
  ParametricSurface surface;
  std::array<int, 3> samples{};
  std::optional<Expr> implicit;
  std::optional<double> eps_k;    // absolute zero-curvature threshold
  std::optional<double> eps_reg;  // relative regularity threshold
};

namespace detail {

inline Expr parse_spec_expression(const nlohmann::json& j, const std::string& key, Mode mode,
                                  const std::string& label) {
  if (!j.contains(key)) throw SpecError("missing expression '" + label + "'");
  if (!j.at(key).is_string()) throw SpecError("expression '" + label + "' must be a string");
  try {
    return parse(j.at(key).get<std::string>(), mode);
  } catch (const ParseError& e) {
    throw SpecError("expression '" + label + "': " + e.what());
  }
}

inline std::array<double, 2> parse_interval(const nlohmann::json& j, const std::string& key) {
  if (!j.contains(key)) throw SpecError("missing domain interval '" + key + "'");
  const auto& v = j.at(key);
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number())
    throw SpecError("domain interval '" + key + "' must be [lo, hi]");
  const std::array<double, 2> interval{v[0].get<double>(), v[1].get<double>()};
  if (!(interval[0] <= interval[1])) throw SpecError("domain interval '" + key + "' must satisfy lo <= hi");
  return interval;
}

}  // namespace detail

inline SurfaceSpec load_surface_spec(const nlohmann::json& j) {
  if (!j.is_object()) throw SpecError("specification must be a JSON object");
  if (!j.contains("surface") || !j.at("surface").is_object())
    throw SpecError("missing 'surface' object with keys x, y, z, t");
  if (!j.contains("domain") || !j.at("domain").is_object())
    throw SpecError("missing 'domain' object with keys u, v, w");

  const auto& js = j.at("surface");
  std::array<Expr, 4> coords{
      detail::parse_spec_expression(js, "x", Mode::Parametric, "surface.x"),
      detail::parse_spec_expression(js, "y", Mode::Parametric, "surface.y"),
      detail::parse_spec_expression(js, "z", Mode::Parametric, "surface.z"),
      detail::parse_spec_expression(js, "t", Mode::Parametric, "surface.t"),
  };

  const auto& jd = j.at("domain");
  std::array<std::array<double, 2>, 3> domain{
      detail::parse_interval(jd, "u"),
      detail::parse_interval(jd, "v"),
      detail::parse_interval(jd, "w"),
  };

  if (!j.contains("samples")) throw SpecError("missing 'samples' array");
  const auto& jn = j.at("samples");
  if (!jn.is_array() || jn.size() != 3) throw SpecError("'samples' must hold three integers");
  std::array<int, 3> samples{};
  for (int i = 0; i < 3; ++i) {
    if (!jn[static_cast<std::size_t>(i)].is_number_integer())
      throw SpecError("'samples' must hold three integers");
    samples[static_cast<std::size_t>(i)] = jn[static_cast<std::size_t>(i)].get<int>();
    if (samples[static_cast<std::size_t>(i)] < 1) throw SpecError("'samples' entries must be positive");
  }

  SurfaceSpec spec{ParametricSurface(std::move(coords), domain), samples, std::nullopt, std::nullopt,
                   std::nullopt};

  if (j.contains("implicit")) spec.implicit = detail::parse_spec_expression(j, "implicit", Mode::Implicit, "implicit");
  if (j.contains("eps_k")) {
    if (!j.at("eps_k").is_number()) throw SpecError("'eps_k' must be a number");
    spec.eps_k = j.at("eps_k").get<double>();
    if (!(*spec.eps_k > 0.0)) throw SpecError("'eps_k' must be positive");
  }
  if (j.contains("eps_reg")) {
    if (!j.at("eps_reg").is_number()) throw SpecError("'eps_reg' must be a number");
    spec.eps_reg = j.at("eps_reg").get<double>();
    if (!(*spec.eps_reg > 0.0)) throw SpecError("'eps_reg' must be positive");
  }
  return spec;
}

inline SurfaceSpec load_surface_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw SpecError("cannot open specification file '" + path + "'");
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw SpecError("invalid JSON in '" + path + "': " + e.what());
  }
  return load_surface_spec(j);
}

}  // namespace h4
