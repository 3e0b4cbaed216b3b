#pragma once

#include <array>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "h4/classify.hpp"
#include "h4/surface_spec.hpp"
#include "h4/weingarten.hpp"

namespace h4 {

/// Threshold overrides for one analysis run; unset fields fall back to the
/// specification file and then to the built-in defaults.
struct AnalysisOptions {
  std::optional<double> eps_k;
  std::optional<double> eps_reg;
};

inline AnalysisOptions merge_options(const SurfaceSpec& spec, const AnalysisOptions& overrides) {
  AnalysisOptions o;
  o.eps_k = overrides.eps_k ? overrides.eps_k : spec.eps_k;
  o.eps_reg = overrides.eps_reg ? overrides.eps_reg : spec.eps_reg;
  return o;
}

/// Everything reported for one parameter point. Singular points carry only
/// the parameters and ok = false.
struct PointReport {
  double u = 0.0, v = 0.0, w = 0.0;
  bool ok = false;
  Vec4 position;
  Vec4 normal;
  Sym3 gram;
  Sym3 second_form;
  Sym3 ortho;
  double gauss = 0.0;
  double mean = 0.0;
  std::array<double, 3> principal{};
  PointClass cls = PointClass::Flat;
  double eps_k_used = 0.0;
  double residual_gauss_identity = 0.0;
  double residual_mean_identity = 0.0;
  std::optional<double> residual_cayley;  // unset when a principal curvature is zero
};

/// Full pipeline at one point. Throws NotRegularError / DomainError; grid
/// traversal catches those and records the point as singular instead.
inline PointReport analyze_point(const ParametricSurface& s, double u, double v, double w,
                                 const AnalysisOptions& opt = {}) {
  const FrameData f = frame_at(s, u, v, w, opt.eps_reg.value_or(kDefaultRegularityEps));
  const ShapeResult shape = compute_shape(f);

  PointReport r;
  r.u = u;
  r.v = v;
  r.w = w;
  r.ok = true;
  r.position = f.position;
  r.normal = f.normal;
  r.gram = f.gram;
  r.second_form = f.second_form;
  r.ortho = shape.ortho_matrix;
  r.gauss = shape.gauss;
  r.mean = shape.mean;
  r.principal = shape.principal;
  r.eps_k_used = opt.eps_k.value_or(default_curvature_eps(shape.principal));
  r.cls = classify_point(shape.principal, r.eps_k_used);

  const TernaryIdentityResiduals t =
      verify_ternary_identities(f, shape.frame_matrix, {1, 0, 0}, {0, 1, 0}, {0, 0, 1});
  r.residual_gauss_identity = t.gauss_residual;
  r.residual_mean_identity = t.mean_residual;

  const double min_k = std::min({std::abs(shape.principal[0]), std::abs(shape.principal[1]),
                                 std::abs(shape.principal[2])});
  if (min_k > r.eps_k_used)
    r.residual_cayley =
        cayley_hamilton_residual(shape.ortho_matrix, shape.gauss, shape.mean, shape.principal, r.eps_k_used);
  return r;
}

inline PointReport grid_point_report(const ParametricSurface& s, double u, double v, double w,
                                     const AnalysisOptions& opt = {}) {
  try {
    return analyze_point(s, u, v, w, opt);
  } catch (const NotRegularError&) {
  } catch (const DomainError&) {
  }
  PointReport r;
  r.u = u;
  r.v = v;
  r.w = w;
  r.ok = false;
  return r;
}

/// Sample lattice over the spec's domain box: inclusive endpoints, uniform
/// spacing. Traversal order is w fastest, then v, then u; output files depend
/// on it. Grid mode needs at least two samples per axis.
inline std::vector<std::array<double, 3>> grid_points(const SurfaceSpec& spec) {
  for (int n : spec.samples)
    if (n < 2) throw SpecError("grid mode needs samples >= 2 per axis");
  const auto coordinate = [](const std::array<double, 2>& range, int i, int n) {
    return range[0] + static_cast<double>(i) * (range[1] - range[0]) / static_cast<double>(n - 1);
  };
  std::vector<std::array<double, 3>> pts;
  pts.reserve(static_cast<std::size_t>(spec.samples[0]) * static_cast<std::size_t>(spec.samples[1]) *
              static_cast<std::size_t>(spec.samples[2]));
  for (int iu = 0; iu < spec.samples[0]; ++iu)
    for (int iv = 0; iv < spec.samples[1]; ++iv)
      for (int iw = 0; iw < spec.samples[2]; ++iw)
        pts.push_back({coordinate(spec.surface.domain[0], iu, spec.samples[0]),
                       coordinate(spec.surface.domain[1], iv, spec.samples[1]),
                       coordinate(spec.surface.domain[2], iw, spec.samples[2])});
  return pts;
}

inline constexpr std::string_view kCsvHeader =
    "u,v,w,x,y,z,t,n1,n2,n3,n4,g11,g12,g13,g22,g23,g33,b11,b12,b13,b22,b23,b33,K,H,k1,k2,k3,class,status";

/// One CSV record in the fixed column order. Numbers are the shortest decimal
/// strings that round-trip, so identical inputs give byte-identical files.
/// Singular points leave every numeric field after w (and the class) empty.
inline std::string csv_row(const PointReport& r) {
  std::string out;
  out += format_double(r.u);
  out += ',';
  out += format_double(r.v);
  out += ',';
  out += format_double(r.w);
  if (!r.ok) {
    // 25 empty numeric fields, empty class, then the status
    for (int i = 0; i < 26; ++i) out += ',';
    out += ",singular";
    return out;
  }
  const auto push = [&out](double v) {
    out += ',';
    out += format_double(v);
  };
  for (int i = 0; i < 4; ++i) push(r.position[i]);
  for (int i = 0; i < 4; ++i) push(r.normal[i]);
  for (double v : r.gram.a) push(v);
  for (double v : r.second_form.a) push(v);
  push(r.gauss);
  push(r.mean);
  for (double v : r.principal) push(v);
  out += ',';
  out += to_string(r.cls);
  out += ",ok";
  return out;
}

inline void write_grid_csv(std::ostream& os, std::span<const PointReport> rows) {
  os << kCsvHeader << '\n';
  for (const PointReport& r : rows) os << csv_row(r) << '\n';
}

namespace detail {

inline void json_array(std::string& out, std::span<const double> values) {
  out += '[';
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out += ',';
    out += format_double(values[i]);
  }
  out += ']';
}

}  // namespace detail

/// One self-contained JSON object per line; richer than the CSV (it carries
/// the orthonormal-basis shape matrix and the identity residuals).
inline std::string jsonl_row(const PointReport& r) {
  std::string out = "{\"u\":" + format_double(r.u) + ",\"v\":" + format_double(r.v) +
                    ",\"w\":" + format_double(r.w);
  if (!r.ok) {
    out += ",\"status\":\"singular\"}";
    return out;
  }
  out += ",\"position\":";
  detail::json_array(out, r.position.c);
  out += ",\"normal\":";
  detail::json_array(out, r.normal.c);
  out += ",\"gram\":";
  detail::json_array(out, r.gram.a);
  out += ",\"second_form\":";
  detail::json_array(out, r.second_form.a);
  out += ",\"shape_orthonormal\":";
  detail::json_array(out, r.ortho.a);
  out += ",\"K\":" + format_double(r.gauss);
  out += ",\"H\":" + format_double(r.mean);
  out += ",\"k\":";
  detail::json_array(out, r.principal);
  out += ",\"class\":\"";
  out += to_string(r.cls);
  out += "\",\"residual_gauss_identity\":" + format_double(r.residual_gauss_identity);
  out += ",\"residual_mean_identity\":" + format_double(r.residual_mean_identity);
  out += ",\"residual_cayley\":";
  out += r.residual_cayley ? format_double(*r.residual_cayley) : std::string("null");
  out += ",\"status\":\"ok\"}";
  return out;
}

inline void write_grid_jsonl(std::ostream& os, std::span<const PointReport> rows) {
  for (const PointReport& r : rows) os << jsonl_row(r) << '\n';
}

/// Human-oriented key: value report for a single point.
inline std::string text_report(const PointReport& r) {
  std::string out;
  const auto line = [&out](std::string_view key, const std::string& value) {
    out += key;
    out += ": ";
    out += value;
    out += '\n';
  };
  const auto values = [](std::span<const double> vs) {
    std::string s;
    for (std::size_t i = 0; i < vs.size(); ++i) {
      if (i) s += ' ';
      s += format_double(vs[i]);
    }
    return s;
  };
  line("u", format_double(r.u));
  line("v", format_double(r.v));
  line("w", format_double(r.w));
  line("status", r.ok ? "ok" : "singular");
  if (!r.ok) return out;
  line("position", values(r.position.c));
  line("normal", values(r.normal.c));
  line("gram", values(r.gram.a));
  line("second_form", values(r.second_form.a));
  line("shape_orthonormal", values(r.ortho.a));
  line("gauss_curvature", format_double(r.gauss));
  line("mean_curvature", format_double(r.mean));
  line("principal_curvatures", values(r.principal));
  line("class", std::string(to_string(r.cls)));
  line("eps_k", format_double(r.eps_k_used));
  line("residual_gauss_identity", format_double(r.residual_gauss_identity));
  line("residual_mean_identity", format_double(r.residual_mean_identity));
  line("residual_cayley", r.residual_cayley ? format_double(*r.residual_cayley) : std::string("n/a"));
  return out;
}

}  // namespace h4
