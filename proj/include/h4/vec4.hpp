#pragma once

#include <array>
#include <cmath>

namespace h4 {

/// Vector in Euclidean 4-space, components relative to the standard basis.
struct Vec4 {
  std::array<double, 4> c{};

  constexpr Vec4() = default;
  constexpr Vec4(double c1, double c2, double c3, double c4) : c{c1, c2, c3, c4} {}

  constexpr double operator[](int i) const { return c[static_cast<std::size_t>(i)]; }
  constexpr double& operator[](int i) { return c[static_cast<std::size_t>(i)]; }

  friend constexpr bool operator==(const Vec4&, const Vec4&) = default;
};

constexpr Vec4 operator+(const Vec4& a, const Vec4& b) {
  return {a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]};
}

constexpr Vec4 operator-(const Vec4& a, const Vec4& b) {
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2], a[3] - b[3]};
}

constexpr Vec4 operator-(const Vec4& a) { return {-a[0], -a[1], -a[2], -a[3]}; }

constexpr Vec4 operator*(double s, const Vec4& a) {
  return {s * a[0], s * a[1], s * a[2], s * a[3]};
}

constexpr Vec4 operator*(const Vec4& a, double s) { return s * a; }

constexpr Vec4 operator/(const Vec4& a, double s) { return (1.0 / s) * a; }

/// Standard inner product of E4.
constexpr double dot(const Vec4& x, const Vec4& y) {
  return x[0] * y[0] + x[1] * y[1] + x[2] * y[2] + x[3] * y[3];
}

constexpr double norm_squared(const Vec4& x) { return dot(x, x); }

inline double norm(const Vec4& x) { return std::sqrt(norm_squared(x)); }

/// Ternary (cross) product of three 4-vectors: the formal cofactor expansion,
/// along the basis row, of the determinant whose remaining rows are x, y, z.
/// The result is orthogonal to all three arguments, trilinear and alternating.
/// Computed from the six 2x2 minors of (y, z) so that integer inputs give
/// bit-exact integer components.
constexpr Vec4 ternary(const Vec4& x, const Vec4& y, const Vec4& z) {
  const double d12 = y[0] * z[1] - y[1] * z[0];
  const double d13 = y[0] * z[2] - y[2] * z[0];
  const double d14 = y[0] * z[3] - y[3] * z[0];
  const double d23 = y[1] * z[2] - y[2] * z[1];
  const double d24 = y[1] * z[3] - y[3] * z[1];
  const double d34 = y[2] * z[3] - y[3] * z[2];
  return {
      x[1] * d34 - x[2] * d24 + x[3] * d23,
      -(x[0] * d34 - x[2] * d14 + x[3] * d13),
      x[0] * d24 - x[1] * d14 + x[3] * d12,
      -(x[0] * d23 - x[1] * d13 + x[2] * d12),
  };
}

/// Determinant of the 4x4 matrix with rows x, y, z, t, by cofactor expansion
/// along the first row (2x2 minors of (z, t) reused across the 3x3 minors).
/// Pairing with the ternary product: dot(ternary(x, y, z), t) == det4(t, x, y, z).
constexpr double det4(const Vec4& x, const Vec4& y, const Vec4& z, const Vec4& t) {
  const double e12 = z[0] * t[1] - z[1] * t[0];
  const double e13 = z[0] * t[2] - z[2] * t[0];
  const double e14 = z[0] * t[3] - z[3] * t[0];
  const double e23 = z[1] * t[2] - z[2] * t[1];
  const double e24 = z[1] * t[3] - z[3] * t[1];
  const double e34 = z[2] * t[3] - z[3] * t[2];
  const double m0 = y[1] * e34 - y[2] * e24 + y[3] * e23;
  const double m1 = y[0] * e34 - y[2] * e14 + y[3] * e13;
  const double m2 = y[0] * e24 - y[1] * e14 + y[3] * e12;
  const double m3 = y[0] * e23 - y[1] * e13 + y[2] * e12;
  return x[0] * m0 - x[1] * m1 + x[2] * m2 - x[3] * m3;
}

/// Determinant of the 3x3 matrix of pairwise inner products of x, y, z.
/// Equals norm_squared(ternary(x, y, z)); computed here from the Gram entries
/// directly so the two routes stay independent.
constexpr double gram_det(const Vec4& x, const Vec4& y, const Vec4& z) {
  const double xx = dot(x, x);
  const double xy = dot(x, y);
  const double xz = dot(x, z);
  const double yy = dot(y, y);
  const double yz = dot(y, z);
  const double zz = dot(z, z);
  return xx * (yy * zz - yz * yz) - xy * (xy * zz - yz * xz) + xz * (xy * yz - yy * xz);
}

/// Symmetric 3x3 matrix; the six independent entries are stored once, so
/// entry (i, j) and entry (j, i) are the same object by construction.
/// Storage order: (0,0), (0,1), (0,2), (1,1), (1,2), (2,2).
struct Sym3 {
  std::array<double, 6> a{};

  static constexpr int index(int i, int j) {
    if (i > j) {
      const int s = i;
      i = j;
      j = s;
    }
    return i * 3 - i * (i - 1) / 2 + (j - i);
  }

  constexpr double operator()(int i, int j) const { return a[static_cast<std::size_t>(index(i, j))]; }
  constexpr double& at(int i, int j) { return a[static_cast<std::size_t>(index(i, j))]; }

  static constexpr Sym3 identity() { return Sym3{{1, 0, 0, 1, 0, 1}}; }
  static constexpr Sym3 diagonal(double d1, double d2, double d3) { return Sym3{{d1, 0, 0, d2, 0, d3}}; }

  friend constexpr bool operator==(const Sym3&, const Sym3&) = default;
};

constexpr double det(const Sym3& s) {
  return s(0, 0) * (s(1, 1) * s(2, 2) - s(1, 2) * s(1, 2)) -
         s(0, 1) * (s(0, 1) * s(2, 2) - s(1, 2) * s(0, 2)) +
         s(0, 2) * (s(0, 1) * s(1, 2) - s(1, 1) * s(0, 2));
}

constexpr double trace(const Sym3& s) { return s(0, 0) + s(1, 1) + s(2, 2); }

/// General 3x3 real matrix, row-major. When it represents an operator on the
/// tangent frame, column j holds the coordinates of the image of the j-th
/// frame vector in the frame basis.
struct Mat3 {
  std::array<double, 9> m{};

  constexpr double operator()(int i, int j) const { return m[static_cast<std::size_t>(3 * i + j)]; }
  constexpr double& operator()(int i, int j) { return m[static_cast<std::size_t>(3 * i + j)]; }

  static constexpr Mat3 identity() { return Mat3{{1, 0, 0, 0, 1, 0, 0, 0, 1}}; }

  static constexpr Mat3 from(const Sym3& s) {
    Mat3 r;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) r(i, j) = s(i, j);
    return r;
  }

  friend constexpr bool operator==(const Mat3&, const Mat3&) = default;
};

constexpr Mat3 operator*(const Mat3& a, const Mat3& b) {
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r(i, j) = a(i, 0) * b(0, j) + a(i, 1) * b(1, j) + a(i, 2) * b(2, j);
  return r;
}

constexpr Mat3 operator*(double s, const Mat3& a) {
  Mat3 r;
  for (int i = 0; i < 9; ++i) r.m[static_cast<std::size_t>(i)] = s * a.m[static_cast<std::size_t>(i)];
  return r;
}

constexpr Mat3 operator+(const Mat3& a, const Mat3& b) {
  Mat3 r;
  for (int i = 0; i < 9; ++i)
    r.m[static_cast<std::size_t>(i)] = a.m[static_cast<std::size_t>(i)] + b.m[static_cast<std::size_t>(i)];
  return r;
}

constexpr Mat3 operator-(const Mat3& a, const Mat3& b) {
  Mat3 r;
  for (int i = 0; i < 9; ++i)
    r.m[static_cast<std::size_t>(i)] = a.m[static_cast<std::size_t>(i)] - b.m[static_cast<std::size_t>(i)];
  return r;
}

constexpr std::array<double, 3> operator*(const Mat3& a, const std::array<double, 3>& x) {
  return {a(0, 0) * x[0] + a(0, 1) * x[1] + a(0, 2) * x[2],
          a(1, 0) * x[0] + a(1, 1) * x[1] + a(1, 2) * x[2],
          a(2, 0) * x[0] + a(2, 1) * x[1] + a(2, 2) * x[2]};
}

constexpr std::array<double, 3> operator*(const Sym3& s, const std::array<double, 3>& x) {
  return {s(0, 0) * x[0] + s(0, 1) * x[1] + s(0, 2) * x[2],
          s(1, 0) * x[0] + s(1, 1) * x[1] + s(1, 2) * x[2],
          s(2, 0) * x[0] + s(2, 1) * x[1] + s(2, 2) * x[2]};
}

constexpr double dot3(const std::array<double, 3>& a, const std::array<double, 3>& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

constexpr Mat3 transpose(const Mat3& a) {
  Mat3 r;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r(i, j) = a(j, i);
  return r;
}

constexpr double det(const Mat3& a) {
  return a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1)) -
         a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0)) +
         a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0));
}

constexpr double trace(const Mat3& a) { return a(0, 0) + a(1, 1) + a(2, 2); }

inline double frobenius_norm(const Mat3& a) {
  double s = 0.0;
  for (double x : a.m) s += x * x;
  return std::sqrt(s);
}

inline double frobenius_norm(const Sym3& s) { return frobenius_norm(Mat3::from(s)); }

}  // namespace h4
