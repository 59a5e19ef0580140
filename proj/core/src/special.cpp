#include "qopdd/special.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace qopdd::special {

namespace {

using CLD = std::complex<long double>;
constexpr long double PI_L = 3.14159265358979323846264338327950288L;
constexpr long double GAMMA_L = 0.57721566490153286060651209008240243L;

// Ascending series, |z| <= series_cut. Extended precision absorbs the
// cancellation (max term ~ e^|z|), keeping ~1e-13 absolute at the cut.
constexpr long double series_cut = 17.0L;

struct J0Y0 {
  CLD j0, y0;
};
struct J1Y1 {
  CLD j1, y1;
};

J0Y0 series_j0y0(CLD z) {
  const CLD q = 0.25L * z * z;  // (z/2)^2
  CLD term{1.0L, 0.0L};
  CLD j0 = term;
  CLD s = 0.0L;  // harmonic-weighted sum for Y0
  long double h = 0.0L;
  for (int m = 1; m < 200; ++m) {
    term *= -q / static_cast<long double>(m * m);
    j0 += term;
    h += 1.0L / m;
    // (-1)^{m+1} H_m q^m/(m!)^2 = -term*h
    s += -term * h;
    if (std::abs(term) < 1e-22L * (1.0L + std::abs(j0))) break;
  }
  const CLD lg = std::log(0.5L * z) + GAMMA_L;
  const CLD y0 = (2.0L / PI_L) * (lg * j0 + s);
  return {j0, y0};
}

J1Y1 series_j1y1(CLD z) {
  const CLD q = 0.25L * z * z;
  CLD term{1.0L, 0.0L};  // q^m/(m!(m+1)!)
  CLD j1s = term;
  CLD s = term * 1.0L;  // (H_m + H_{m+1}) q^m/(m!(m+1)!), alternating; m=0: H_0+H_1 = 1
  long double hm = 0.0L, hm1 = 1.0L;
  long double sign = 1.0L;
  for (int m = 1; m < 200; ++m) {
    term *= q / (static_cast<long double>(m) * (m + 1));
    sign = -sign;
    j1s += sign * term;
    hm += 1.0L / m;
    hm1 += 1.0L / (m + 1);
    s += sign * term * (hm + hm1);
    if (std::abs(term) < 1e-22L * (1.0L + std::abs(j1s))) break;
  }
  const CLD j1 = 0.5L * z * j1s;
  const CLD lg = std::log(0.5L * z) + GAMMA_L;
  const CLD y1 = (2.0L / PI_L) * lg * j1 - 2.0L / (PI_L * z) - (z / (2.0L * PI_L)) * s;
  return {j1, y1};
}

// Optimally truncated Hankel asymptotic expansion,
// H_nu^(1)(z) = sqrt(2/(pi z)) e^{i(z - nu pi/2 - pi/4)} sum_k i^k a_k(nu) z^-k.
CLD asymptotic_h1(CLD z, int nu) {
  const CLD iz = CLD{0.0L, 1.0L} / z;
  const long double fournu2 = 4.0L * nu * nu;
  CLD term{1.0L, 0.0L};
  CLD sum = term;
  long double prev = std::numeric_limits<long double>::max();
  for (int k = 1; k < 60; ++k) {
    const long double odd = 2.0L * k - 1.0L;
    term *= (fournu2 - odd * odd) / (8.0L * k) * iz;
    const long double mag = std::abs(term);
    if (mag > prev) break;  // divergent tail reached
    sum += term;
    prev = mag;
    if (mag < 1e-20L * std::abs(sum)) break;
  }
  const CLD phase = z - CLD{0.0L, 0.0L} - (nu * PI_L / 2.0L + PI_L / 4.0L);
  const CLD pref = std::sqrt(CLD{2.0L, 0.0L} / (PI_L * z)) *
                   std::exp(CLD{0.0L, 1.0L} * phase);
  return pref * sum;
}

CLD to_cld(std::complex<double> z) {
  return {static_cast<long double>(z.real()), static_cast<long double>(z.imag())};
}
std::complex<double> to_cd(CLD z) {
  return {static_cast<double>(z.real()), static_cast<double>(z.imag())};
}

// Double-precision asymptotic sums for real x >= 25 (optimal truncation is far
// below double rounding there); dominates the windowed-kernel image sums.
HankelPair asymptotic_pair_real(double x) {
  auto sum = [&](double fournu2) {
    std::complex<double> term{1.0, 0.0}, acc{1.0, 0.0};
    const std::complex<double> iz{0.0, 1.0 / x};
    double prev = 1.0;
    for (int k = 1; k < 40; ++k) {
      const double odd = 2.0 * k - 1.0;
      term *= (fournu2 - odd * odd) / (8.0 * k) * iz;
      const double mag = std::abs(term);
      if (mag > prev) break;
      acc += term;
      prev = mag;
      if (mag < 1e-18) break;
    }
    return acc;
  };
  const double pi = static_cast<double>(PI_L);
  const double pref = std::sqrt(2.0 / (pi * x));
  const double c = std::cos(x - 0.25 * pi), s = std::sin(x - 0.25 * pi);
  const std::complex<double> e0{c, s};                      // e^{i(x - pi/4)}
  const std::complex<double> e1 = e0 * std::complex<double>{0.0, -1.0};  // extra -pi/2
  return {pref * e0 * sum(0.0), pref * e1 * sum(4.0)};
}

void require_nonzero(std::complex<double> z) {
  if (z == std::complex<double>{0.0, 0.0})
    throw std::domain_error("bessel: singular at z = 0");
}

}  // namespace

std::complex<double> hankel1_0(double x) {
  if (x <= 0.0) throw std::domain_error("hankel1_0: requires x > 0");
  if (x >= 25.0) {
    std::complex<double> term{1.0, 0.0}, acc{1.0, 0.0};
    const std::complex<double> iz{0.0, 1.0 / x};
    double prev = 1.0;
    for (int k = 1; k < 40; ++k) {
      const double odd = 2.0 * k - 1.0;
      term *= (-odd * odd) / (8.0 * k) * iz;
      const double mag = std::abs(term);
      if (mag > prev) break;
      acc += term;
      prev = mag;
      if (mag < 1e-18) break;
    }
    const double pi = static_cast<double>(PI_L);
    const double pref = std::sqrt(2.0 / (pi * x));
    const std::complex<double> e0{std::cos(x - 0.25 * pi), std::sin(x - 0.25 * pi)};
    return pref * e0 * acc;
  }
  const CLD z{static_cast<long double>(x), 0.0L};
  if (x <= static_cast<double>(series_cut)) {
    const auto [j0, y0] = series_j0y0(z);
    return to_cd(j0 + CLD{0.0L, 1.0L} * y0);
  }
  return to_cd(asymptotic_h1(z, 0));
}

HankelPair hankel1_01(double x) {
  if (x <= 0.0) throw std::domain_error("hankel1_01: requires x > 0");
  if (x >= 25.0) return asymptotic_pair_real(x);
  const CLD z{static_cast<long double>(x), 0.0L};
  if (x <= static_cast<double>(series_cut)) {
    const auto [j0, y0] = series_j0y0(z);
    const auto [j1, y1] = series_j1y1(z);
    return {to_cd(j0 + CLD{0.0L, 1.0L} * y0), to_cd(j1 + CLD{0.0L, 1.0L} * y1)};
  }
  return {to_cd(asymptotic_h1(z, 0)), to_cd(asymptotic_h1(z, 1))};
}

std::complex<double> hankel1_0(std::complex<double> zd) {
  require_nonzero(zd);
  const CLD z = to_cld(zd);
  if (std::abs(z) <= series_cut) {
    const auto [j0, y0] = series_j0y0(z);
    return to_cd(j0 + CLD{0.0L, 1.0L} * y0);
  }
  return to_cd(asymptotic_h1(z, 0));
}

std::complex<double> hankel1_1(std::complex<double> zd) {
  require_nonzero(zd);
  const CLD z = to_cld(zd);
  if (std::abs(z) <= series_cut) {
    const auto [j1, y1] = series_j1y1(z);
    return to_cd(j1 + CLD{0.0L, 1.0L} * y1);
  }
  return to_cd(asymptotic_h1(z, 1));
}

std::complex<double> bessel_j0(std::complex<double> zd) {
  const CLD z = to_cld(zd);
  if (std::abs(z) <= series_cut) return to_cd(series_j0y0(z).j0);
  // J = (H^(1) + H^(2))/2; for Im z >= 0 both are representable at moderate |Im z|
  // (the kernels only need |Im z| << |z| here).
  const CLD h1 = asymptotic_h1(z, 0);
  const CLD h2 = std::conj(asymptotic_h1(std::conj(z), 0));
  return to_cd(0.5L * (h1 + h2));
}

std::complex<double> bessel_j1(std::complex<double> zd) {
  const CLD z = to_cld(zd);
  if (std::abs(z) <= series_cut) return to_cd(0.5L * z * [&] {
           const CLD q = 0.25L * z * z;
           CLD term{1.0L, 0.0L};
           CLD s = term;
           for (int m = 1; m < 200; ++m) {
             term *= -q / (static_cast<long double>(m) * (m + 1));
             s += term;
             if (std::abs(term) < 1e-22L * (1.0L + std::abs(s))) break;
           }
           return s;
         }());
  const CLD h1 = asymptotic_h1(z, 1);
  const CLD h2 = std::conj(asymptotic_h1(std::conj(z), 1));
  return to_cd(0.5L * (h1 + h2));
}

double bessel_j0(double x) {
  const double ax = std::abs(x);
  if (ax <= static_cast<double>(series_cut))
    return static_cast<double>(series_j0y0(CLD{ax, 0.0L}).j0.real());
  return static_cast<double>(asymptotic_h1(CLD{ax, 0.0L}, 0).real());
}

double bessel_y0(double x) {
  if (x <= 0.0) throw std::domain_error("bessel_y0: requires x > 0");
  if (x <= static_cast<double>(series_cut))
    return static_cast<double>(series_j0y0(CLD{x, 0.0L}).y0.real());
  return static_cast<double>(asymptotic_h1(CLD{x, 0.0L}, 0).imag());
}

double bessel_j1(double x) {
  const double ax = std::abs(x);
  double v;
  if (ax <= static_cast<double>(series_cut))
    v = static_cast<double>(series_j1y1(CLD{ax == 0.0 ? 1e-300L : ax, 0.0L}).j1.real());
  else
    v = static_cast<double>(asymptotic_h1(CLD{ax, 0.0L}, 1).real());
  if (ax == 0.0) return 0.0;
  return x < 0 ? -v : v;  // J1 odd
}

double bessel_y1(double x) {
  if (x <= 0.0) throw std::domain_error("bessel_y1: requires x > 0");
  if (x <= static_cast<double>(series_cut))
    return static_cast<double>(series_j1y1(CLD{x, 0.0L}).y1.real());
  return static_cast<double>(asymptotic_h1(CLD{x, 0.0L}, 1).imag());
}

}  // namespace qopdd::special
