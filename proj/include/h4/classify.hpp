#pragma once

#include <array>
#include <stdexcept>
#include <string_view>

namespace h4 {

/// Point taxonomy by the type of the indicatrix quadric
/// k1*x^2 + k2*y^2 + k3*z^2 = +-1 in the tangent space. The type is a pure
/// function of the signs of the principal curvatures after thresholding.
///
/// PlanarPair labels the two-zero-curvature case (the quadric degenerates to
/// a pair of parallel planes); the name is this library's own, the quadric
/// classification carries no conventional point-type name there.
enum class PointClass {
  Ellipsoidal,        // all three curvatures share one sign
  Hyperboloidal,      // mixed signs, none zero
  EllipticCylinder,   // one zero, remaining two share a sign
  HyperbolicCylinder, // one zero, remaining two of opposite sign
  PlanarPair,         // two zero
  Flat,               // all zero
};

/// Snake_case names used in CSV/JSON output.
constexpr std::string_view to_string(PointClass c) {
  switch (c) {
    case PointClass::Ellipsoidal: return "ellipsoidal";
    case PointClass::Hyperboloidal: return "hyperboloidal";
    case PointClass::EllipticCylinder: return "elliptic_cylinder";
    case PointClass::HyperbolicCylinder: return "hyperbolic_cylinder";
    case PointClass::PlanarPair: return "planar_pair";
    case PointClass::Flat: return "flat";
  }
  return "unknown";
}

/// Sign pattern of the principal curvatures after thresholding with eps.
struct SignCounts {
  int positive = 0;
  int negative = 0;
  int zero = 0;
};

constexpr SignCounts count_signs(const std::array<double, 3>& k, double eps) {
  SignCounts c;
  for (double v : k) {
    if (v > eps)
      ++c.positive;
    else if (v < -eps)
      ++c.negative;
    else
      ++c.zero;
  }
  return c;
}

constexpr PointClass classify_counts(const SignCounts& c) {
  switch (c.zero) {
    case 0:
      return (c.positive == 3 || c.negative == 3) ? PointClass::Ellipsoidal : PointClass::Hyperboloidal;
    case 1:
      return (c.positive == 2 || c.negative == 2) ? PointClass::EllipticCylinder
                                                  : PointClass::HyperbolicCylinder;
    case 2:
      return PointClass::PlanarPair;
    default:
      return PointClass::Flat;
  }
}

/// Total function over curvature triples; eps_k must be positive.
inline PointClass classify_point(const std::array<double, 3>& k, double eps_k) {
  if (!(eps_k > 0.0)) throw std::invalid_argument("curvature threshold must be positive");
  return classify_counts(count_signs(k, eps_k));
}

}  // namespace h4
