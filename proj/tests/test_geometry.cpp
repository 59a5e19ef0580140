#include <doctest.h>

#include <cmath>

#include "qopdd/geometry.hpp"

using namespace qopdd;

namespace {
const double TWO_PI = 2.0 * PI;
}

TEST_CASE("build_grid on a flat profile gives the stated nodes and unit jacobian") {
  // four-point layout checked on a 16-node grid prefix scaled down is not
  // possible (n >= 16), so check the defining pattern at n = 16.
  auto g = build_grid(GratingProfile::flat(0.0, TWO_PI), 16);
  CHECK(g.n == 16);
  for (int m = 0; m < 16; ++m) {
    CHECK(g.s[m] == doctest::Approx(TWO_PI * m / 16.0));
    CHECK(g.f[m] == doctest::Approx(0.0));
    CHECK(g.jacobian[m] == doctest::Approx(1.0));
  }
}

TEST_CASE("build_grid rejects odd or tiny node counts") {
  const auto p = GratingProfile::flat(0.0, TWO_PI);
  CHECK_THROWS_AS(build_grid(p, 15), config_error);
  CHECK_THROWS_AS(build_grid(p, 8), config_error);
}

TEST_CASE("cosine profile sampling matches the closed form at production size") {
  const auto p = GratingProfile::cosine_series(0.0, 0.02, {2.5}, {}, TWO_PI);
  auto g = build_grid(p, 256);
  for (int m = 0; m < 256; m += 17) {
    const double x = g.s[m];
    CHECK(g.f[m] == doctest::Approx(0.02 * 2.5 * std::cos(x)).epsilon(1e-14));
    CHECK(g.fp[m] == doctest::Approx(-0.02 * 2.5 * std::sin(x)).epsilon(1e-13));
    CHECK(g.jacobian[m] == doctest::Approx(std::sqrt(1.0 + std::pow(0.05 * std::sin(x), 2))));
  }
}

TEST_CASE("triangle profile is piecewise linear with a.e. normals") {
  const auto p = GratingProfile::triangle(0.0, 1.0, TWO_PI);
  auto g = build_grid(p, 64);
  // slope +-2/d away from the corners
  CHECK(std::abs(g.fp[5]) == doctest::Approx(2.0 / TWO_PI));
  CHECK(std::abs(g.fp[40]) == doctest::Approx(2.0 / TWO_PI));
  const auto [lo, hi] = p.extrema();
  CHECK(hi - lo == doctest::Approx(1.0).epsilon(1e-6));
  CHECK_FALSE(p.is_smooth());
}

TEST_CASE("sampled periodicity of profiles") {
  for (const auto& p :
       {GratingProfile::cosine_series(0.3, 0.5, {2.5, -0.7}, {0.4}, TWO_PI),
        GratingProfile::triangle(-1.0, 2.0, TWO_PI), GratingProfile::lamellar(0.0, 1.0, TWO_PI)}) {
    double sup = 0.0, scale = 0.0;
    for (int m = 0; m < 257; ++m) {
      const double x = TWO_PI * m / 257.0;
      sup = std::max(sup, std::abs(p.value(x + TWO_PI) - p.value(x)));
      scale = std::max(scale, std::abs(p.value(x)));
    }
    CHECK(sup <= 1e-13 * (1.0 + scale));
  }
}

TEST_CASE("normals of the two grid orientations are exact negations") {
  const auto p = GratingProfile::cosine_series(0.0, 0.5, {2.5}, {}, TWO_PI);
  auto gd = build_grid(p, 32, NormalOrientation::down);
  auto gu = build_grid(p, 32, NormalOrientation::up);
  for (int m = 0; m < 32; ++m) {
    CHECK(gd.normal(m)[0] == doctest::Approx(-gu.normal(m)[0]));
    CHECK(gd.normal(m)[1] == doctest::Approx(-gu.normal(m)[1]));
  }
}

TEST_CASE("validate_stack accepts a production two-interface configuration") {
  LayerStack stack;
  stack.qp = {0.0, TWO_PI};
  stack.profiles = {GratingProfile::flat(0.0, TWO_PI), GratingProfile::flat(-3.3, TWO_PI)};
  stack.wavenumbers = {1.3, 4.3, 16.3};
  CHECK(validate_stack(stack).ok());
}

TEST_CASE("validate_stack flags an exact Wood frequency") {
  LayerStack stack;
  stack.qp = {0.0, TWO_PI};
  stack.profiles = {GratingProfile::flat(0.0, TWO_PI)};
  stack.wavenumbers = {2.0, 4.3};
  const auto diag = validate_stack(stack);
  REQUIRE_FALSE(diag.ok());
  bool found = false;
  for (const auto& item : diag.items)
    if (item.kind == StackDiagnostics::Kind::near_wood && item.j == 0 && std::abs(item.r) == 2)
      found = true;
  CHECK(found);
}

TEST_CASE("validate_stack rejects swapped profile order") {
  LayerStack stack;
  stack.qp = {0.0, TWO_PI};
  stack.profiles = {GratingProfile::flat(-3.3, TWO_PI), GratingProfile::flat(0.0, TWO_PI)};
  stack.wavenumbers = {1.3, 4.3, 16.3};
  const auto diag = validate_stack(stack);
  REQUIRE_FALSE(diag.ok());
  CHECK(diag.items.front().kind == StackDiagnostics::Kind::overlapping_profiles);
}

TEST_CASE("strip cut feasibility per the interval checks") {
  // interface 0 spans [-2.5, 2.5], interface 1 is flat at -3.3: the middle cut
  // must lie strictly between them.
  LayerStack stack;
  stack.qp = {0.0, TWO_PI};
  stack.profiles = {GratingProfile::cosine_series(0.0, 1.0, {2.5}, {}, TWO_PI),
                    GratingProfile::flat(-3.3, TWO_PI)};
  stack.wavenumbers = {1.3, 4.3, 16.3};

  stack.strip_cuts = std::vector<double>{3.0, -2.6, -4.2};
  CHECK(validate_stack(stack).ok());

  stack.strip_cuts = std::vector<double>{3.0, -0.1, -4.2};  // above interface 0's min
  CHECK_FALSE(validate_stack(stack).ok());

  stack.strip_cuts = std::vector<double>{3.0, 2.0, -4.2};  // inside interface 0's range
  CHECK_FALSE(validate_stack(stack).ok());
}

TEST_CASE("default strip cuts fail when layers are too thin") {
  LayerStack stack;
  stack.qp = {0.0, TWO_PI};
  stack.profiles = {GratingProfile::cosine_series(0.0, 1.0, {2.5}, {}, TWO_PI),
                    GratingProfile::cosine_series(-3.3, 1.0, {2.5}, {}, TWO_PI)};
  stack.wavenumbers = {1.3, 4.3, 16.3};
  CHECK_THROWS_AS(stack.default_strip_cuts(), geometry_error);
}
