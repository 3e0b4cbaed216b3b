#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>

#include "h4/geometry.hpp"
#include "h4/vec4.hpp"

namespace h4 {

struct FrameNotOrthogonalError : std::runtime_error {
  FrameNotOrthogonalError() : std::runtime_error("tangent frame is not orthogonal") {}
};

struct DependentTripleError : std::runtime_error {
  DependentTripleError() : std::runtime_error("tangent vectors are linearly dependent") {}
};

struct ZeroPrincipalCurvatureError : std::runtime_error {
  ZeroPrincipalCurvatureError()
      : std::runtime_error("a principal curvature is zero; the harmonic mean is undefined") {}
};

struct NoConvergenceError : std::runtime_error {
  NoConvergenceError() : std::runtime_error("eigenvalue iteration did not converge") {}
};

namespace detail {

// Forward substitution with a lower-triangular factor, matrix right-hand side.
inline Mat3 forward_solve(const std::array<double, 6>& lower, const Mat3& rhs) {
  const double l00 = lower[0], l10 = lower[1], l11 = lower[2], l20 = lower[3], l21 = lower[4], l22 = lower[5];
  Mat3 x;
  for (int j = 0; j < 3; ++j) {
    x(0, j) = rhs(0, j) / l00;
    x(1, j) = (rhs(1, j) - l10 * x(0, j)) / l11;
    x(2, j) = (rhs(2, j) - l20 * x(0, j) - l21 * x(1, j)) / l22;
  }
  return x;
}

// Cholesky factor (lower triangular, positive diagonal) of a symmetric
// positive-definite matrix; entries packed as l00, l10, l11, l20, l21, l22.
inline std::array<double, 6> cholesky_lower(const Sym3& g) {
  const double d0 = g(0, 0);
  if (d0 <= 0.0) throw NotRegularError(det(g), 0.0);
  const double l00 = std::sqrt(d0);
  const double l10 = g(0, 1) / l00;
  const double l20 = g(0, 2) / l00;
  const double d1 = g(1, 1) - l10 * l10;
  if (d1 <= 0.0) throw NotRegularError(det(g), 0.0);
  const double l11 = std::sqrt(d1);
  const double l21 = (g(1, 2) - l20 * l10) / l11;
  const double d2 = g(2, 2) - l20 * l20 - l21 * l21;
  if (d2 <= 0.0) throw NotRegularError(det(g), 0.0);
  const double l22 = std::sqrt(d2);
  return {l00, l10, l11, l20, l21, l22};
}

}  // namespace detail

/// Solves the three shared-coefficient linear systems gram * column_j = rhs
/// column_j with partially pivoted elimination. Numerically safer than the
/// determinant-ratio route for small Gram determinants.
inline Mat3 solve_gram_systems(const Sym3& gram, const Sym3& rhs) {
  double a[3][4 + 3];
  for (int i = 0; i < 3; ++i) {
    for (int j = 0; j < 3; ++j) {
      a[i][j] = gram(i, j);
      a[i][3 + j] = rhs(i, j);
    }
  }
  for (int col = 0; col < 3; ++col) {
    int pivot = col;
    for (int r = col + 1; r < 3; ++r)
      if (std::abs(a[r][col]) > std::abs(a[pivot][col])) pivot = r;
    if (a[pivot][col] == 0.0) throw NotRegularError(det(gram), 0.0);
    if (pivot != col)
      for (int j = 0; j < 6; ++j) std::swap(a[pivot][j], a[col][j]);
    for (int r = 0; r < 3; ++r) {
      if (r == col) continue;
      const double factor = a[r][col] / a[col][col];
      for (int j = col; j < 6; ++j) a[r][j] -= factor * a[col][j];
    }
  }
  Mat3 x;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) x(i, j) = a[i][3 + j] / a[i][i];
  return x;
}

/// Matrix of the shape operator with respect to the native tangent frame.
/// Column j holds the frame coordinates of the image of the j-th frame
/// vector. Not symmetric in general, because the native frame is not
/// orthonormal; its eigenvalues are still the principal curvatures.
inline Mat3 shape_operator_general(const FrameData& f) {
  return solve_gram_systems(f.gram, f.second_form);
}

/// Same systems solved literally by determinant ratios: each unknown is the
/// determinant of the Gram matrix with one column replaced by the right-hand
/// side, divided by the Gram determinant. Kept as an independent route and
/// cross-checked against solve_gram_systems.
inline Mat3 shape_operator_cramer(const FrameData& f) {
  const double delta = f.gram_determinant;
  if (delta == 0.0) throw NotRegularError(delta, 0.0);
  const Mat3 g = Mat3::from(f.gram);
  Mat3 s;
  for (int j = 0; j < 3; ++j) {
    for (int i = 0; i < 3; ++i) {
      Mat3 m = g;
      for (int r = 0; r < 3; ++r) m(r, i) = f.second_form(r, j);
      s(i, j) = det(m) / delta;
    }
  }
  return s;
}

/// Closed form for an orthogonal tangent frame: with the Gram matrix
/// diagonal, the operator matrix w.r.t. the normalized frame is symmetric
/// with entries second_form(i,i)/gram(i,i) on the diagonal and
/// second_form(i,j)/sqrt(gram(i,i)*gram(j,j)) off it.
inline Sym3 shape_operator_orthogonal(const FrameData& f, double tol = kDefaultOrthogonalityTol) {
  if (!is_orthogonal_frame(f, tol)) throw FrameNotOrthogonalError();
  Sym3 s;
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j)
      s.at(i, j) = i == j ? f.second_form(i, i) / f.gram(i, i)
                          : f.second_form(i, j) / std::sqrt(f.gram(i, i) * f.gram(j, j));
  return s;
}

/// Shape operator w.r.t. a Gram-Schmidt orthonormal tangent basis together
/// with that basis. With gram = transpose(L) * L (Cholesky), the matrix is
/// inverse(transpose(L)) * second_form * inverse(L), which is symmetric and
/// reduces exactly to the orthogonal-frame closed form when the native frame
/// is already orthogonal.
struct OrthonormalShape {
  Sym3 matrix;
  std::array<Vec4, 3> basis;
};

inline OrthonormalShape shape_operator_orthonormal(const FrameData& f) {
  const std::array<double, 6> lower = detail::cholesky_lower(f.gram);
  const Mat3 y = detail::forward_solve(lower, Mat3::from(f.second_form));
  const Mat3 z = transpose(detail::forward_solve(lower, transpose(y)));

  OrthonormalShape out;
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) out.matrix.at(i, j) = 0.5 * (z(i, j) + z(j, i));

  const Mat3 inv = detail::forward_solve(lower, Mat3::identity());
  for (int j = 0; j < 3; ++j) {
    Vec4 e;
    for (int i = 0; i < 3; ++i) e = e + inv(j, i) * f.tangent(i);
    out.basis[static_cast<std::size_t>(j)] = e;
  }
  return out;
}

struct Curvatures {
  double gauss = 0.0;
  double mean = 0.0;
};

/// Gaussian curvature is the determinant of the operator matrix, mean
/// curvature a third of its trace; both are basis-independent.
inline Curvatures curvatures(const Mat3& shape) { return {det(shape), trace(shape) / 3.0}; }

/// Independent closed-form route for orthogonal frames, written directly in
/// the Gram and second-form entries.
inline Curvatures curvatures_closed_form(const FrameData& f) {
  const Sym3& g = f.gram;
  const Sym3& b = f.second_form;
  const double gauss = (b(0, 0) * b(1, 1) * b(2, 2) + 2.0 * b(0, 1) * b(0, 2) * b(1, 2) -
                        b(0, 1) * b(0, 1) * b(2, 2) - b(0, 2) * b(0, 2) * b(1, 1) -
                        b(1, 2) * b(1, 2) * b(0, 0)) /
                       (g(0, 0) * g(1, 1) * g(2, 2));
  const double mean = (b(0, 0) / g(0, 0) + b(1, 1) / g(1, 1) + b(2, 2) / g(2, 2)) / 3.0;
  return {gauss, mean};
}

/// Eigenvalues of a symmetric 3x3 matrix by cyclic Jacobi rotations, sorted
/// descending. Unconditionally convergent for symmetric input, robust near
/// repeated eigenvalues.
inline std::array<double, 3> principal_curvatures(const Sym3& s) {
  Mat3 a = Mat3::from(s);
  const double scale = frobenius_norm(a);
  const auto off_norm = [&a] {
    return std::sqrt(2.0 * (a(0, 1) * a(0, 1) + a(0, 2) * a(0, 2) + a(1, 2) * a(1, 2)));
  };
  constexpr int kMaxSweeps = 30;
  constexpr double kOffTol = 1e-13;
  bool converged = false;
  for (int sweep = 0; sweep < kMaxSweeps && !converged; ++sweep) {
    if (off_norm() <= kOffTol * scale) {
      converged = true;
      break;
    }
    constexpr int pairs[3][2] = {{0, 1}, {0, 2}, {1, 2}};
    for (const auto& pq : pairs) {
      const int p = pq[0], q = pq[1];
      const double apq = a(p, q);
      if (apq == 0.0) continue;
      const double tau = (a(q, q) - a(p, p)) / (2.0 * apq);
      const double t = (tau >= 0.0 ? 1.0 : -1.0) / (std::abs(tau) + std::sqrt(1.0 + tau * tau));
      const double c = 1.0 / std::sqrt(1.0 + t * t);
      const double sn = t * c;
      const double app = a(p, p), aqq = a(q, q);
      a(p, p) = app - t * apq;
      a(q, q) = aqq + t * apq;
      a(p, q) = a(q, p) = 0.0;
      const int r = 3 - p - q;
      const double arp = a(r, p), arq = a(r, q);
      a(r, p) = a(p, r) = c * arp - sn * arq;
      a(r, q) = a(q, r) = sn * arp + c * arq;
    }
  }
  if (!converged && off_norm() > kOffTol * scale) throw NoConvergenceError();
  std::array<double, 3> k{a(0, 0), a(1, 1), a(2, 2)};
  std::sort(k.begin(), k.end(), std::greater<>());
  return k;
}

/// q-th fundamental form applied to tangent vectors given in frame
/// coordinates: <shape^(q-1) X, Y> evaluated as Y^T gram shape^(q-1) X.
/// q = 1 is the metric itself, q = 2 the second fundamental form.
inline double fundamental_form(int q, const FrameData& f, const Mat3& shape,
                               const std::array<double, 3>& x, const std::array<double, 3>& y) {
  if (q < 1 || q > 4) throw std::invalid_argument("fundamental form index must be in 1..4");
  std::array<double, 3> sx = x;
  for (int i = 1; i < q; ++i) sx = shape * sx;
  return dot3(y, f.gram * sx);
}

/// Residuals of the two ternary-product curvature identities for a linearly
/// independent tangent triple X, Y, Z (frame coordinates):
///   ternary(SX, SY, SZ)                     = gauss * ternary(X, Y, Z)
///   sum of ternary with S on one slot each  = 3 * mean * ternary(X, Y, Z)
/// The scales accompany the raw residual norms for relative comparisons.
struct TernaryIdentityResiduals {
  double gauss_residual = 0.0;
  double mean_residual = 0.0;
  double gauss_scale = 0.0;
  double mean_scale = 0.0;
};

inline TernaryIdentityResiduals verify_ternary_identities(const FrameData& f, const Mat3& shape,
                                                          const std::array<double, 3>& x,
                                                          const std::array<double, 3>& y,
                                                          const std::array<double, 3>& z) {
  Mat3 cols;
  for (int i = 0; i < 3; ++i) {
    cols(i, 0) = x[static_cast<std::size_t>(i)];
    cols(i, 1) = y[static_cast<std::size_t>(i)];
    cols(i, 2) = z[static_cast<std::size_t>(i)];
  }
  const double size = std::sqrt(dot3(x, x) * dot3(y, y) * dot3(z, z));
  if (std::abs(det(cols)) <= 1e-12 * size) throw DependentTripleError();

  const auto ambient = [&f](const std::array<double, 3>& coeff) {
    return coeff[0] * f.tangent(0) + coeff[1] * f.tangent(1) + coeff[2] * f.tangent(2);
  };
  const Vec4 xa = ambient(x), ya = ambient(y), za = ambient(z);
  const Vec4 sxa = ambient(shape * x), sya = ambient(shape * y), sza = ambient(shape * z);
  const Curvatures c = curvatures(shape);

  const Vec4 base = ternary(xa, ya, za);
  const Vec4 all_mapped = ternary(sxa, sya, sza);
  TernaryIdentityResiduals r;
  r.gauss_residual = norm(all_mapped - c.gauss * base);
  r.gauss_scale = norm(all_mapped) + std::abs(c.gauss) * norm(base) + norm(base);

  const Vec4 one_each = ternary(sxa, ya, za) + ternary(xa, sya, za) + ternary(xa, ya, sza);
  r.mean_residual = norm(one_each - 3.0 * c.mean * base);
  r.mean_scale = norm(ternary(sxa, ya, za)) + norm(ternary(xa, sya, za)) + norm(ternary(xa, ya, sza)) +
                 3.0 * std::abs(c.mean) * norm(base) + norm(base);
  return r;
}

/// Default threshold below which a principal curvature counts as zero.
inline double default_curvature_eps(const std::array<double, 3>& k) {
  const double m = std::max({std::abs(k[0]), std::abs(k[1]), std::abs(k[2])});
  return 1e-8 * std::max(1.0, m);
}

/// Frobenius norm of shape^3 - 3*mean*shape^2 + (3*gauss/h)*shape - gauss*I,
/// where h is the harmonic mean of the principal curvatures. The coefficient
/// 3*gauss/h equals the second elementary symmetric function of the
/// curvatures, so the expression is the characteristic polynomial applied to
/// the operator and must vanish. Requires every principal curvature to be
/// nonzero, else the harmonic mean is undefined.
inline double cayley_hamilton_residual(const Sym3& shape_ortho, double gauss, double mean,
                                       const std::array<double, 3>& k, double eps_k) {
  if (std::min({std::abs(k[0]), std::abs(k[1]), std::abs(k[2])}) <= eps_k)
    throw ZeroPrincipalCurvatureError();
  const double harmonic = 3.0 / (1.0 / k[0] + 1.0 / k[1] + 1.0 / k[2]);
  const Mat3 s = Mat3::from(shape_ortho);
  const Mat3 s2 = s * s;
  const Mat3 s3 = s2 * s;
  const Mat3 residual =
      s3 - 3.0 * mean * s2 + (3.0 * gauss / harmonic) * s - gauss * Mat3::identity();
  return frobenius_norm(residual);
}

inline double cayley_hamilton_residual(const Sym3& shape_ortho, double gauss, double mean,
                                       const std::array<double, 3>& k) {
  return cayley_hamilton_residual(shape_ortho, gauss, mean, k, default_curvature_eps(k));
}

/// Full shape data at one point: the operator in both bases, the orthonormal
/// basis itself, and the curvature invariants.
struct ShapeResult {
  Mat3 frame_matrix;
  Sym3 ortho_matrix;
  std::array<Vec4, 3> basis;
  double gauss = 0.0;
  double mean = 0.0;
  std::array<double, 3> principal{};  // sorted descending
};

inline ShapeResult compute_shape(const FrameData& f) {
  ShapeResult r;
  r.frame_matrix = shape_operator_general(f);
  OrthonormalShape ortho = shape_operator_orthonormal(f);
  r.ortho_matrix = ortho.matrix;
  r.basis = ortho.basis;
  const Curvatures c = curvatures(r.frame_matrix);
  r.gauss = c.gauss;
  r.mean = c.mean;
  r.principal = principal_curvatures(r.ortho_matrix);
  return r;
}

}  // namespace h4
