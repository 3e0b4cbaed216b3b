#pragma once

#include <array>
#include <cmath>
#include <stdexcept>

namespace h4 {

/// Math domain violation: log of a nonpositive value, square root of a
/// negative value, a power of a nonpositive base with a real exponent, or a
/// division whose denominator magnitude is below kMinDivisor.
struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Denominators at or below this magnitude raise DomainError instead of
/// producing infinities that would poison every downstream quantity.
inline constexpr double kMinDivisor = 1e-300;

/// Second-order truncated Taylor value in N variables. Carries the value, the
/// gradient and the upper triangle of the Hessian through arithmetic, so one
/// evaluation of a composite expression yields all first and second partial
/// derivatives at once. Mixed partials are stored once each, so their
/// symmetry holds at the storage level.
///
/// Hessian storage order for N = 3: uu, uv, uw, vv, vw, ww.
template <int N>
struct Jet2 {
  static constexpr int kHessSize = N * (N + 1) / 2;

  double val = 0.0;
  std::array<double, N> grad{};
  std::array<double, kHessSize> hess{};

  static constexpr int hess_index(int i, int j) {
    if (i > j) {
      const int s = i;
      i = j;
      j = s;
    }
    return i * N - i * (i - 1) / 2 + (j - i);
  }

  double d1(int i) const { return grad[static_cast<std::size_t>(i)]; }
  double d2(int i, int j) const { return hess[static_cast<std::size_t>(hess_index(i, j))]; }

  static Jet2 constant(double value) {
    Jet2 r;
    r.val = value;
    return r;
  }

  /// Seed for the independent variable at the given index: unit gradient
  /// entry, zero Hessian.
  static Jet2 variable(int index, double value) {
    if (index < 0 || index >= N) throw std::out_of_range("jet variable index out of range");
    Jet2 r;
    r.val = value;
    r.grad[static_cast<std::size_t>(index)] = 1.0;
    return r;
  }
};

template <int N>
Jet2<N> operator+(const Jet2<N>& a, const Jet2<N>& b) {
  Jet2<N> r;
  r.val = a.val + b.val;
  for (int i = 0; i < N; ++i) r.grad[i] = a.grad[i] + b.grad[i];
  for (int i = 0; i < Jet2<N>::kHessSize; ++i) r.hess[i] = a.hess[i] + b.hess[i];
  return r;
}

template <int N>
Jet2<N> operator-(const Jet2<N>& a, const Jet2<N>& b) {
  Jet2<N> r;
  r.val = a.val - b.val;
  for (int i = 0; i < N; ++i) r.grad[i] = a.grad[i] - b.grad[i];
  for (int i = 0; i < Jet2<N>::kHessSize; ++i) r.hess[i] = a.hess[i] - b.hess[i];
  return r;
}

template <int N>
Jet2<N> operator-(const Jet2<N>& a) {
  Jet2<N> r;
  r.val = -a.val;
  for (int i = 0; i < N; ++i) r.grad[i] = -a.grad[i];
  for (int i = 0; i < Jet2<N>::kHessSize; ++i) r.hess[i] = -a.hess[i];
  return r;
}

/// Leibniz rule to second order.
template <int N>
Jet2<N> operator*(const Jet2<N>& a, const Jet2<N>& b) {
  Jet2<N> r;
  r.val = a.val * b.val;
  for (int i = 0; i < N; ++i) r.grad[i] = a.val * b.grad[i] + b.val * a.grad[i];
  for (int i = 0; i < N; ++i)
    for (int j = i; j < N; ++j) {
      const int h = Jet2<N>::hess_index(i, j);
      r.hess[h] = a.val * b.hess[h] + b.val * a.hess[h] + a.grad[i] * b.grad[j] + a.grad[j] * b.grad[i];
    }
  return r;
}

template <int N>
Jet2<N> operator*(double s, const Jet2<N>& a) {
  Jet2<N> r;
  r.val = s * a.val;
  for (int i = 0; i < N; ++i) r.grad[i] = s * a.grad[i];
  for (int i = 0; i < Jet2<N>::kHessSize; ++i) r.hess[i] = s * a.hess[i];
  return r;
}

/// Univariate chain rule to second order: composes an outer scalar function
/// with value f, first derivative df and second derivative ddf at a.val.
template <int N>
Jet2<N> chain(double f, double df, double ddf, const Jet2<N>& a) {
  Jet2<N> r;
  r.val = f;
  for (int i = 0; i < N; ++i) r.grad[i] = df * a.grad[i];
  for (int i = 0; i < N; ++i)
    for (int j = i; j < N; ++j) {
      const int h = Jet2<N>::hess_index(i, j);
      r.hess[h] = df * a.hess[h] + ddf * a.grad[i] * a.grad[j];
    }
  return r;
}

template <int N>
Jet2<N> reciprocal(const Jet2<N>& a) {
  if (std::abs(a.val) < kMinDivisor) throw DomainError("division by a vanishing value");
  const double inv = 1.0 / a.val;
  return chain(inv, -inv * inv, 2.0 * inv * inv * inv, a);
}

/// Division is multiplication by the reciprocal jet.
template <int N>
Jet2<N> operator/(const Jet2<N>& a, const Jet2<N>& b) {
  return a * reciprocal(b);
}

template <int N>
Jet2<N> sin(const Jet2<N>& a) {
  const double s = std::sin(a.val);
  const double c = std::cos(a.val);
  return chain(s, c, -s, a);
}

template <int N>
Jet2<N> cos(const Jet2<N>& a) {
  const double s = std::sin(a.val);
  const double c = std::cos(a.val);
  return chain(c, -s, -c, a);
}

template <int N>
Jet2<N> tan(const Jet2<N>& a) {
  const double t = std::tan(a.val);
  const double d = 1.0 + t * t;
  return chain(t, d, 2.0 * t * d, a);
}

template <int N>
Jet2<N> exp(const Jet2<N>& a) {
  const double e = std::exp(a.val);
  return chain(e, e, e, a);
}

template <int N>
Jet2<N> log(const Jet2<N>& a) {
  if (a.val <= 0.0) throw DomainError("log of a nonpositive value");
  const double inv = 1.0 / a.val;
  return chain(std::log(a.val), inv, -inv * inv, a);
}

template <int N>
Jet2<N> sqrt(const Jet2<N>& a) {
  if (a.val < 0.0) throw DomainError("sqrt of a negative value");
  const double s = std::sqrt(a.val);
  const double d = 0.5 / s;
  return chain(s, d, -0.5 * d / a.val, a);
}

}  // namespace h4
