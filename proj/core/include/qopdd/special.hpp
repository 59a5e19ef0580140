#pragma once

#include <complex>

namespace qopdd::special {

// Bessel/Hankel functions of orders 0 and 1.
//
// Real arguments use an ascending-series / large-argument asymptotic hybrid
// evaluated in extended precision; complex arguments (upper half plane,
// as produced by complexified wavenumbers) use the same hybrid over
// std::complex<long double>.

double bessel_j0(double x);
double bessel_y0(double x);
double bessel_j1(double x);
double bessel_y1(double x);

std::complex<double> bessel_j0(std::complex<double> z);
std::complex<double> bessel_j1(std::complex<double> z);

/// H0^(1)(z), Im z >= 0.
std::complex<double> hankel1_0(std::complex<double> z);
/// H1^(1)(z), Im z >= 0.
std::complex<double> hankel1_1(std::complex<double> z);

/// Combined H0^(1)(x), H1^(1)(x) for real x > 0 (kernel hot path).
struct HankelPair {
  std::complex<double> h0, h1;
};
HankelPair hankel1_01(double x);
/// H0^(1)(x) alone for real x > 0.
std::complex<double> hankel1_0(double x);

inline constexpr double euler_gamma = 0.57721566490153286060651209008240243;

}  // namespace qopdd::special
