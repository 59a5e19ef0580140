#include <doctest.h>

#include <cmath>

#include "qopdd/special.hpp"
#include "qopdd/types.hpp"

#ifdef QOPDD_HAVE_GSL
#include <gsl/gsl_sf_bessel.h>
#endif

using namespace qopdd;

TEST_CASE("bessel values at z = 1 match the classical ones") {
  CHECK(special::bessel_j0(1.0) == doctest::Approx(0.7651976865579666).epsilon(1e-13));
  CHECK(special::bessel_y0(1.0) == doctest::Approx(0.08825696421567696).epsilon(1e-12));
  CHECK(special::bessel_j1(1.0) == doctest::Approx(0.4400505857449335).epsilon(1e-13));
  CHECK(special::bessel_y1(1.0) == doctest::Approx(-0.7812128213002887).epsilon(1e-12));
}

#ifdef QOPDD_HAVE_GSL
TEST_CASE("bessel functions agree with an independent oracle across the argument range") {
  // arguments spanning the series, crossover and asymptotic regimes
  const double xs[] = {0.05, 0.5, 1.0, 3.7, 8.2, 12.0, 16.9, 17.1, 25.0,
                       60.0, 120.0, 333.3, 1000.0, 5000.0, 7716.0};
  for (double x : xs) {
    const double amp = std::max(1.0, std::sqrt(2.0 / (3.14159 * x)));
    CHECK(std::abs(special::bessel_j0(x) - gsl_sf_bessel_J0(x)) <= 2e-13 * amp);
    CHECK(std::abs(special::bessel_y0(x) - gsl_sf_bessel_Y0(x)) <= 2e-13 * amp);
    CHECK(std::abs(special::bessel_j1(x) - gsl_sf_bessel_J1(x)) <= 2e-13 * amp);
    CHECK(std::abs(special::bessel_y1(x) - gsl_sf_bessel_Y1(x)) <= 2e-13 * amp);
  }
}
#endif

TEST_CASE("complex hankel reduces to J + iY on the real axis") {
  for (double x : {0.3, 2.0, 9.0, 30.0, 200.0}) {
    const auto h0 = special::hankel1_0(Complex{x, 0.0});
    CHECK(h0.real() == doctest::Approx(special::bessel_j0(x)).epsilon(1e-11));
    CHECK(h0.imag() == doctest::Approx(special::bessel_y0(x)).epsilon(1e-11));
    const auto h1 = special::hankel1_1(Complex{x, 0.0});
    CHECK(h1.real() == doctest::Approx(special::bessel_j1(x)).epsilon(1e-11));
    CHECK(h1.imag() == doctest::Approx(special::bessel_y1(x)).epsilon(1e-11));
  }
}

TEST_CASE("wronskian J1 Y0 - J0 Y1 = 2/(pi z) holds for complex arguments") {
  const Complex zs[] = {{0.7, 0.3}, {4.0, 1.0}, {12.0, 2.0}, {40.0, 5.0}, {150.0, 10.0}};
  for (const Complex& z : zs) {
    const Complex j0 = special::bessel_j0(z);
    const Complex j1 = special::bessel_j1(z);
    const Complex y0 = (special::hankel1_0(z) - j0) / Complex{0.0, 1.0};
    const Complex y1 = (special::hankel1_1(z) - j1) / Complex{0.0, 1.0};
    const Complex w = j1 * y0 - j0 * y1;
    const Complex expected = 2.0 / (3.14159265358979323846 * z);
    // cancellation in the Wronskian scales with the largest product magnitude
    const double scale = std::max({std::abs(j1 * y0), std::abs(j0 * y1), std::abs(expected)});
    CHECK(std::abs(w - expected) <= 1e-12 * scale + 1e-14);
  }
}

TEST_CASE("hankel H0 decays for arguments with positive imaginary part") {
  const double m1 = std::abs(special::hankel1_0(Complex{10.0, 0.0}));
  const double m2 = std::abs(special::hankel1_0(Complex{10.0, 2.0}));
  CHECK(m2 < m1);
}
