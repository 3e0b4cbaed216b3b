#pragma once

#include <array>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "h4/expr.hpp"
#include "h4/vec4.hpp"

namespace h4 {

/// The tangent frame fails the rank-3 test: the Gram determinant is at or
/// below the scale-relative regularity threshold.
struct NotRegularError : std::runtime_error {
  double gram_determinant;
  double threshold;
  NotRegularError(double d, double thr)
      : std::runtime_error("surface is not regular here (gram determinant " + format_double(d) +
                           " <= threshold " + format_double(thr) + ")"),
        gram_determinant(d),
        threshold(thr) {}
};

/// Gradient of the implicit function vanishes at the requested point.
struct ZeroGradientError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Regularity test uses gram_determinant <= eps * (product of squared frame
/// norms), so the threshold scales with the surface.
inline constexpr double kDefaultRegularityEps = 1e-12;

inline constexpr double kDefaultOrthogonalityTol = 1e-9;

/// Parametric hypersurface: four coordinate functions of (u, v, w) over an
/// inclusive box domain.
struct ParametricSurface {
  std::array<Expr, 4> coords;
  std::array<std::array<double, 2>, 3> domain;  // [lo, hi] per parameter

  ParametricSurface(std::array<Expr, 4> c, std::array<std::array<double, 2>, 3> d)
      : coords(std::move(c)), domain(d) {
    for (const Expr& e : coords)
      if (e.mode() != Mode::Parametric)
        throw std::invalid_argument("surface coordinate functions must use parametric variables");
    for (const auto& axis : domain)
      if (!(axis[0] <= axis[1])) throw std::invalid_argument("domain bounds must satisfy lo <= hi");
  }

  bool contains(double u, double v, double w) const {
    const std::array<double, 3> p{u, v, w};
    for (int i = 0; i < 3; ++i)
      if (p[i] < domain[i][0] || p[i] > domain[i][1]) return false;
    return true;
  }
};

/// Everything evaluated at one parameter point: position, first and second
/// partials, Gram matrix of the frame, its determinant, the unit normal from
/// the ternary product, and the second-form matrix whose (i, j) entry is
/// -<second partial ij, normal>.
struct FrameData {
  std::array<double, 3> param{};
  Vec4 position;
  std::array<Vec4, 3> tangents;  // partials w.r.t. u, v, w
  std::array<Vec4, 6> seconds;   // uu, uv, uw, vv, vw, ww
  Sym3 gram;
  double gram_determinant = 0.0;
  Vec4 normal;
  Sym3 second_form;

  const Vec4& tangent(int i) const { return tangents[static_cast<std::size_t>(i)]; }
  const Vec4& second(int i, int j) const { return seconds[static_cast<std::size_t>(Sym3::index(i, j))]; }
};

/// Evaluates the surface at (u, v, w). One jet evaluation per coordinate
/// function supplies all partials. Throws NotRegularError when the frame
/// fails the rank test, and propagates DomainError from expression
/// evaluation. The normal keeps the sign the ternary product produces; no
/// orientation normalization is applied.
inline FrameData frame_at(const ParametricSurface& s, double u, double v, double w,
                          double regularity_eps = kDefaultRegularityEps) {
  const std::array<Jet2<3>, 3> env{Jet2<3>::variable(0, u), Jet2<3>::variable(1, v), Jet2<3>::variable(2, w)};

  FrameData f;
  f.param = {u, v, w};
  for (int c = 0; c < 4; ++c) {
    const Jet2<3> jet = eval_jet<3>(s.coords[static_cast<std::size_t>(c)], env);
    f.position[c] = jet.val;
    for (int i = 0; i < 3; ++i) f.tangents[static_cast<std::size_t>(i)][c] = jet.d1(i);
    for (int k = 0; k < 6; ++k) f.seconds[static_cast<std::size_t>(k)][c] = jet.hess[static_cast<std::size_t>(k)];
  }

  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) f.gram.at(i, j) = dot(f.tangent(i), f.tangent(j));
  f.gram_determinant = det(f.gram);

  const double norm_product = f.gram(0, 0) * f.gram(1, 1) * f.gram(2, 2);
  const double threshold = regularity_eps * norm_product;
  if (f.gram_determinant <= threshold) throw NotRegularError(f.gram_determinant, threshold);

  const Vec4 raw = ternary(f.tangent(0), f.tangent(1), f.tangent(2));
  f.normal = raw / norm(raw);

  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) f.second_form.at(i, j) = -dot(f.second(i, j), f.normal);
  return f;
}

/// True when every off-diagonal Gram entry is negligible against the product
/// of the corresponding frame-vector norms.
inline bool is_orthogonal_frame(const FrameData& f, double tol = kDefaultOrthogonalityTol) {
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      if (std::abs(f.gram(i, j)) > tol * std::sqrt(f.gram(i, i) * f.gram(j, j))) return false;
  return true;
}

/// Unit normal of an implicitly given hypersurface: the normalized gradient
/// of f at the point, computed through 4-variable jets.
inline Vec4 implicit_normal(const Expr& f, const Vec4& point) {
  if (f.mode() != Mode::Implicit)
    throw std::invalid_argument("implicit_normal needs an expression in implicit variables");
  std::array<Jet2<4>, 4> env;
  for (int i = 0; i < 4; ++i) env[static_cast<std::size_t>(i)] = Jet2<4>::variable(i, point[i]);
  const Jet2<4> jet = eval_jet<4>(f, env);
  const Vec4 grad{jet.d1(0), jet.d1(1), jet.d1(2), jet.d1(3)};
  const double len = norm(grad);
  if (len <= 1e-12) throw ZeroGradientError("gradient vanishes at the requested point");
  return grad / len;
}

}  // namespace h4
