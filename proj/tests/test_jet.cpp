#include <cmath>
#include <random>

#include <catch2/catch_amalgamated.hpp>

#include "h4/jet.hpp"

using h4::Jet2;
using Jet3 = Jet2<3>;

namespace {

// A composite function exercising every operation, usable with doubles and
// jets alike so finite differences can probe the jet derivatives.
template <class T>
T composite(const T& u, const T& v, const T& w) {
  using std::cos;
  using std::exp;
  using std::sin;
  using std::sqrt;
  const T a = sin(u) * cos(v) + u * v * w;
  const T b = exp(w * T(-0.25)) + sqrt(u + T(3.0));
  return a * b + u / (v + T(3.0));
}

double fd_first(int i, const std::array<double, 3>& p, double h = 1e-5) {
  auto at = [&](double d0, double d1, double d2) {
    return composite(p[0] + d0, p[1] + d1, p[2] + d2);
  };
  std::array<double, 3> dp{};
  dp[static_cast<std::size_t>(i)] = h;
  return (at(dp[0], dp[1], dp[2]) - at(-dp[0], -dp[1], -dp[2])) / (2 * h);
}

double fd_second(int i, int j, const std::array<double, 3>& p, double h = 1e-5) {
  auto at = [&](const std::array<double, 3>& q) { return composite(q[0], q[1], q[2]); };
  std::array<double, 3> di{}, dj{};
  di[static_cast<std::size_t>(i)] = h;
  dj[static_cast<std::size_t>(j)] = h;
  if (i == j) {
    std::array<double, 3> hi = p, lo = p;
    hi[static_cast<std::size_t>(i)] += h;
    lo[static_cast<std::size_t>(i)] -= h;
    return (at(hi) - 2 * at(p) + at(lo)) / (h * h);
  }
  std::array<double, 3> pp = p, pm = p, mp = p, mm = p;
  for (int k = 0; k < 3; ++k) {
    pp[static_cast<std::size_t>(k)] += di[static_cast<std::size_t>(k)] + dj[static_cast<std::size_t>(k)];
    pm[static_cast<std::size_t>(k)] += di[static_cast<std::size_t>(k)] - dj[static_cast<std::size_t>(k)];
    mp[static_cast<std::size_t>(k)] += -di[static_cast<std::size_t>(k)] + dj[static_cast<std::size_t>(k)];
    mm[static_cast<std::size_t>(k)] += -di[static_cast<std::size_t>(k)] - dj[static_cast<std::size_t>(k)];
  }
  return (at(pp) - at(pm) - at(mp) + at(mm)) / (4 * h * h);
}

}  // namespace

TEST_CASE("variable seeds", "[jet]") {
  const Jet3 u = Jet3::variable(0, 2.0);
  CHECK(u.val == 2.0);
  CHECK(u.grad == std::array<double, 3>{1, 0, 0});
  CHECK(u.hess == std::array<double, 6>{});

  const Jet3 w = Jet3::variable(2, -1.0);
  CHECK(w.val == -1.0);
  CHECK(w.grad == std::array<double, 3>{0, 0, 1});

  const Jet3 v = Jet3::variable(1, 0.0);
  CHECK(v.val == 0.0);
  CHECK(v.grad == std::array<double, 3>{0, 1, 0});

  CHECK_THROWS_AS(Jet3::variable(3, 1.0), std::out_of_range);
  CHECK_THROWS_AS(Jet3::variable(-1, 1.0), std::out_of_range);
}

TEST_CASE("product rule to second order", "[jet]") {
  const Jet3 u = Jet3::variable(0, 3.0);
  const Jet3 uu = u * u;
  CHECK(uu.val == 9.0);
  CHECK(uu.d1(0) == 6.0);
  CHECK(uu.d2(0, 0) == 2.0);

  const Jet3 p = Jet3::variable(0, 2.0) * Jet3::variable(1, 5.0);
  CHECK(p.val == 10.0);
  CHECK(p.grad == std::array<double, 3>{5, 2, 0});
  CHECK(p.d2(0, 1) == 1.0);
  CHECK(p.d2(0, 0) == 0.0);

  const Jet3 q = Jet3::constant(3.0) * Jet3::variable(2, 4.0);
  CHECK(q.val == 12.0);
  CHECK(q.grad == std::array<double, 3>{0, 0, 3});
  CHECK(q.hess == std::array<double, 6>{});
}

TEST_CASE("chain rule to second order", "[jet]") {
  const Jet3 s = h4::sin(Jet3::variable(0, 0.0));
  CHECK(s.val == 0.0);
  CHECK(s.d1(0) == 1.0);
  CHECK(s.d2(0, 0) == 0.0);

  const Jet3 r = h4::reciprocal(Jet3::variable(0, 1.0));
  CHECK(r.val == 1.0);
  CHECK(r.d1(0) == -1.0);
  CHECK(r.d2(0, 0) == 2.0);

  const Jet3 e = h4::exp(Jet3::constant(0.0));
  CHECK(e.val == 1.0);
  CHECK(e.grad == std::array<double, 3>{});
  CHECK(e.hess == std::array<double, 6>{});
}

TEST_CASE("jet arithmetic over constants reproduces plain arithmetic", "[jet]") {
  const Jet3 a = Jet3::constant(2.5), b = Jet3::constant(-1.25);
  CHECK((a + b).val == 2.5 + -1.25);
  CHECK((a - b).val == 2.5 - -1.25);
  CHECK((a * b).val == 2.5 * -1.25);
  CHECK((a / b).val == 2.5 * (1.0 / -1.25));
  CHECK((a / b).grad == std::array<double, 3>{});
  CHECK(h4::exp(b).val == std::exp(-1.25));
}

TEST_CASE("division guard", "[jet]") {
  const Jet3 one = Jet3::constant(1.0);
  CHECK_THROWS_AS(one / Jet3::constant(0.0), h4::DomainError);
  CHECK_THROWS_AS(one / Jet3::constant(1e-301), h4::DomainError);
  CHECK_NOTHROW(one / Jet3::constant(1e-300));
}

TEST_CASE("transcendental domain guards", "[jet]") {
  CHECK_THROWS_AS(h4::log(Jet3::constant(0.0)), h4::DomainError);
  CHECK_THROWS_AS(h4::log(Jet3::constant(-2.0)), h4::DomainError);
  CHECK_THROWS_AS(h4::sqrt(Jet3::constant(-1.0)), h4::DomainError);
  CHECK_NOTHROW(h4::sqrt(Jet3::constant(0.0)));
}

TEST_CASE("jet derivatives match central finite differences", "[jet]") {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> coord(0.6, 2.4);
  for (int iter = 0; iter < 200; ++iter) {
    const std::array<double, 3> p{coord(rng), coord(rng), coord(rng)};
    const Jet3 r = composite(Jet3::variable(0, p[0]), Jet3::variable(1, p[1]), Jet3::variable(2, p[2]));
    for (int i = 0; i < 3; ++i) {
      const double fd = fd_first(i, p);
      CHECK(std::abs(r.d1(i) - fd) <= 1e-6 * std::max(1.0, std::abs(r.d1(i))));
      for (int j = i; j < 3; ++j) {
        const double fd2 = fd_second(i, j, p);
        CHECK(std::abs(r.d2(i, j) - fd2) <= 1e-4 * std::max(1.0, std::abs(r.d2(i, j))));
      }
    }
  }
}

TEST_CASE("four-variable jets", "[jet]") {
  using Jet4 = Jet2<4>;
  const Jet4 x = Jet4::variable(0, 2.0);
  const Jet4 t = Jet4::variable(3, 5.0);
  const Jet4 p = x * t;
  CHECK(p.val == 10.0);
  CHECK(p.grad == std::array<double, 4>{5, 0, 0, 2});
  CHECK(p.d2(0, 3) == 1.0);
  CHECK(Jet4::kHessSize == 10);
  CHECK_THROWS_AS(Jet4::variable(4, 0.0), std::out_of_range);
}
