#include <cmath>
#include <random>

#include <catch2/catch_amalgamated.hpp>

#include "h4/geometry.hpp"
#include "test_surfaces.hpp"

using h4::FrameData;
using h4::Vec4;
using h4test::corpus;
using h4test::kPi;

namespace {

const h4::ParametricSurface& surface(const char* name) {
  for (const auto& t : corpus())
    if (std::string_view(t.name) == name) return t.surface;
  throw std::logic_error("unknown test surface");
}

double max_abs_diff(const Vec4& a, const Vec4& b) {
  double m = 0.0;
  for (int i = 0; i < 4; ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

}  // namespace

TEST_CASE("hyperbola sheet frame", "[geometry]") {
  const FrameData f = h4::frame_at(surface("hyperbola_sheet"), 1.0, 0.5, -0.25);
  CHECK(f.position == Vec4{1, 1, 0.5, -0.25});
  CHECK(f.tangent(0) == Vec4{1, -1, 0, 0});
  CHECK(f.tangent(1) == Vec4{0, 0, 1, 0});
  CHECK(f.tangent(2) == Vec4{0, 0, 0, 1});

  CHECK(f.gram(0, 0) == 2.0);
  CHECK(f.gram(1, 1) == 1.0);
  CHECK(f.gram(2, 2) == 1.0);
  CHECK(f.gram(0, 1) == 0.0);
  CHECK(f.gram_determinant == 2.0);

  const double s = 1.0 / std::sqrt(2.0);
  CHECK(max_abs_diff(f.normal, Vec4{-s, -s, 0, 0}) < 1e-15);
  CHECK(std::abs(h4::norm(f.normal) - 1.0) <= 1e-12);

  // second partial in u is (0, 2, 0, 0); projecting on the normal gives sqrt(2)
  CHECK(f.second(0, 0) == Vec4{0, 2, 0, 0});
  CHECK(std::abs(f.second_form(0, 0) - std::sqrt(2.0)) < 1e-14);
  CHECK(f.second_form(1, 1) == 0.0);
  CHECK(f.second_form(2, 2) == 0.0);
}

TEST_CASE("hypersphere frame at a pole-free point", "[geometry]") {
  const FrameData f = h4::frame_at(surface("hypersphere_inner"), kPi / 2, 0.0, kPi / 2);
  CHECK(max_abs_diff(f.position, Vec4{1, 0, 0, 0}) < 1e-15);
  CHECK(max_abs_diff(f.normal, Vec4{-1, 0, 0, 0}) < 1e-15);
  for (int i = 0; i < 3; ++i)
    for (int j = i; j < 3; ++j) CHECK(std::abs(f.gram(i, j) - (i == j ? 1.0 : 0.0)) < 1e-15);
}

TEST_CASE("flat slab frame", "[geometry]") {
  const FrameData f = h4::frame_at(surface("flat_slab"), 0.3, -1.7, 0.9);
  CHECK(std::abs(std::abs(f.normal[3]) - 1.0) < 1e-15);
  CHECK(f.gram == h4::Sym3::identity());
  CHECK(f.second_form == h4::Sym3{});
  for (const Vec4& s : f.seconds) CHECK(s == Vec4{});
}

TEST_CASE("regularity is enforced", "[geometry]") {
  // the frame degenerates where sin(u) or sin(w) vanishes exactly
  CHECK_THROWS_AS(h4::frame_at(surface("hypersphere_inner"), 0.0, 1.0, 1.0), h4::NotRegularError);
  CHECK_THROWS_AS(h4::frame_at(surface("hypersphere_inner"), 1.0, 1.0, 0.0), h4::NotRegularError);
  CHECK_NOTHROW(h4::frame_at(surface("hypersphere_inner"), 0.05, 1.0, 1.0));
  // rounding the pole coordinate leaves a tiny but genuinely independent
  // frame; the scale-relative test keeps it regular
  CHECK_NOTHROW(h4::frame_at(surface("hypersphere_inner"), kPi, 1.0, 1.0));
  // the threshold is relative to the frame scale: it measures skewness, so a
  // custom value can reject a shear whose gram ratio is 1/2
  CHECK_NOTHROW(h4::frame_at(surface("shear_slab"), 0.0, 0.0, 0.0, 0.4));
  CHECK_THROWS_AS(h4::frame_at(surface("shear_slab"), 0.0, 0.0, 0.0, 0.6), h4::NotRegularError);

  try {
    h4::frame_at(surface("hypersphere_inner"), 0.0, 1.0, 1.0);
    FAIL("expected NotRegularError");
  } catch (const h4::NotRegularError& e) {
    CHECK(e.gram_determinant <= e.threshold);
  }
}

TEST_CASE("domain containment", "[geometry]") {
  const auto& s = surface("hyperbola_sheet");
  CHECK(s.contains(0.5, -1.0, 1.0));
  CHECK(!s.contains(0.4, 0.0, 0.0));
  CHECK(!s.contains(1.0, 0.0, 1.5));
}

TEST_CASE("surface construction is validated", "[geometry]") {
  using h4::Mode;
  std::array<h4::Expr, 4> coords{h4::parse("u", Mode::Parametric), h4::parse("v", Mode::Parametric),
                                 h4::parse("w", Mode::Parametric), h4::parse("0", Mode::Parametric)};
  CHECK_THROWS_AS(h4::ParametricSurface(coords, {{{1.0, -1.0}, {0, 1}, {0, 1}}}), std::invalid_argument);
  std::array<h4::Expr, 4> wrong{h4::parse("x", Mode::Implicit), h4::parse("y", Mode::Implicit),
                                h4::parse("z", Mode::Implicit), h4::parse("t", Mode::Implicit)};
  CHECK_THROWS_AS(h4::ParametricSurface(wrong, {{{0, 1}, {0, 1}, {0, 1}}}), std::invalid_argument);
}

TEST_CASE("orthogonal frame detection", "[geometry]") {
  CHECK(h4::is_orthogonal_frame(h4::frame_at(surface("hyperbola_sheet"), 1.0, 0.0, 0.0)));
  CHECK(h4::is_orthogonal_frame(h4::frame_at(surface("hypersphere_inner"), 1.1, 0.7, 2.0)));
  CHECK_FALSE(h4::is_orthogonal_frame(h4::frame_at(surface("shear_slab"), 0.0, 0.0, 0.0)));
  CHECK_FALSE(h4::is_orthogonal_frame(h4::frame_at(surface("shear_graph"), 0.0, 1.0, 0.0)));
}

TEST_CASE("implicit normals", "[geometry]") {
  using h4::Mode;
  const h4::Expr sphere = h4::parse("x^2+y^2+z^2+t^2", Mode::Implicit);
  CHECK(h4::implicit_normal(sphere, Vec4{1, 0, 0, 0}) == Vec4{1, 0, 0, 0});

  const h4::Expr xy = h4::parse("x*y", Mode::Implicit);
  const double s = 1.0 / std::sqrt(2.0);
  CHECK(max_abs_diff(h4::implicit_normal(xy, Vec4{1, 1, 0, 0}), Vec4{s, s, 0, 0}) < 1e-15);

  const h4::Expr constant = h4::parse("3", Mode::Implicit);
  CHECK_THROWS_AS(h4::implicit_normal(constant, Vec4{0, 0, 0, 0}), h4::ZeroGradientError);
  CHECK_THROWS_AS(h4::implicit_normal(h4::parse("u", Mode::Parametric), Vec4{}), std::invalid_argument);
}

TEST_CASE("normal orthogonality and gram consistency at random points", "[geometry]") {
  std::mt19937_64 rng(42);
  for (const auto& t : corpus()) {
    for (int i = 0; i < 2000; ++i) {
      const auto p = h4test::random_point(t.sample_box, rng);
      const FrameData f = h4::frame_at(t.surface, p[0], p[1], p[2]);
      for (int j = 0; j < 3; ++j)
        CHECK(std::abs(h4::dot(f.normal, f.tangent(j))) <= 1e-10 * h4::norm(f.tangent(j)));
      const double t2 = h4::norm_squared(h4::ternary(f.tangent(0), f.tangent(1), f.tangent(2)));
      CHECK(std::abs(f.gram_determinant - t2) <= 1e-9 * std::max(f.gram_determinant, t2));
      CHECK(std::abs(h4::norm(f.normal) - 1.0) <= 1e-12);
    }
  }
}

TEST_CASE("implicit and parametric normals agree up to sign", "[geometry]") {
  std::mt19937_64 rng(43);
  for (const auto& t : corpus()) {
    if (!t.implicit) continue;
    for (int i = 0; i < 300; ++i) {
      const auto p = h4test::random_point(t.sample_box, rng);
      const FrameData f = h4::frame_at(t.surface, p[0], p[1], p[2]);
      const Vec4 gn = h4::implicit_normal(*t.implicit, f.position);
      const double mismatch = std::min(h4::norm(gn - f.normal), h4::norm(gn + f.normal));
      CHECK(mismatch <= 1e-9);
    }
  }
}

// Orthogonality of the ternary normal, hammered across one million points per
// surface on the four orthogonal-frame members of the corpus.
TEST_CASE("normal tangency holds at one million points per surface", "[geometry][heavy]") {
  std::mt19937_64 rng(44);
  for (const char* name : {"hyperbola_sheet", "hypersphere_outer", "sphere_cylinder", "flat_slab"}) {
    const auto& t = [&]() -> const h4test::TestSurface& {
      for (const auto& c : corpus())
        if (std::string_view(c.name) == name) return c;
      throw std::logic_error("missing surface");
    }();
    double worst = 0.0;
    for (int i = 0; i < 1000000; ++i) {
      const auto p = h4test::random_point(t.sample_box, rng);
      const FrameData f = h4::frame_at(t.surface, p[0], p[1], p[2]);
      for (int j = 0; j < 3; ++j)
        worst = std::max(worst, std::abs(h4::dot(f.normal, f.tangent(j))) / h4::norm(f.tangent(j)));
    }
    INFO(name);
    CHECK(worst <= 1e-10);
  }
}
