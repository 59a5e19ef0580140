#include "qopdd/qpgreen.hpp"

#include <cmath>

#include "qopdd/special.hpp"

namespace qopdd {

namespace {

bool is_real(Complex k) { return k.imag() == 0.0; }

Complex h0(Complex k, double rho) {
  if (is_real(k)) return special::hankel1_0(k.real() * rho);
  return special::hankel1_0(k * rho);
}

Complex h1(Complex k, double rho) {
  if (is_real(k)) return special::hankel1_01(k.real() * rho).h1;
  return special::hankel1_1(k * rho);
}

}  // namespace

double window_chi(double r) {
  r = std::abs(r);
  if (r <= 0.5) return 1.0;
  if (r >= 1.0) return 0.0;
  const double u = 2.0 * r - 1.0;
  return std::exp(2.0 * std::exp(-1.0 / u) / (u - 1.0));
}

double window_chi_d1(double r) {
  const double sign = r < 0 ? -1.0 : 1.0;
  r = std::abs(r);
  if (r <= 0.5 || r >= 1.0) return 0.0;
  const double u = 2.0 * r - 1.0;
  const double e = std::exp(-1.0 / u);
  const double g1 = 2.0 * e * (1.0 / (u * u * (u - 1.0)) - 1.0 / ((u - 1.0) * (u - 1.0)));
  return sign * 2.0 * g1 * window_chi(r);
}

double window_chi_d2(double r) {
  r = std::abs(r);
  if (r <= 0.5 || r >= 1.0) return 0.0;
  const double u = 2.0 * r - 1.0;
  const double e = std::exp(-1.0 / u);
  const double um1 = u - 1.0;
  const double g1 = 2.0 * e * (1.0 / (u * u * um1) - 1.0 / (um1 * um1));
  const double g2 = 2.0 * e *
                    (1.0 / (u * u * u * u * um1) - 2.0 / (u * u * u * um1) -
                     2.0 / (u * u * um1 * um1) + 2.0 / (um1 * um1 * um1));
  const double chi = window_chi(r);
  return 4.0 * (g2 + g1 * g1) * chi;
}

void WindowedGreenParams::validate() const {
  if (period <= 0) throw config_error("windowed Green: period must be positive");
  if (window_size < 2.0 * period)
    throw config_error("windowed Green: window size A must be at least 2 periods");
  if (k.imag() < 0) throw config_error("windowed Green: Im k must be nonnegative");
}

int WindowedGreenParams::image_range() const {
  return static_cast<int>(std::ceil(window_size / period)) + 2;
}

Complex free_green(Complex k, double x1, double x2) {
  const double rho = std::hypot(x1, x2);
  if (rho == 0.0) throw numerical_error("free_green: evaluation at the singular point");
  return 0.25 * I * h0(k, rho);
}

Eigen::Vector2cd free_green_grad(Complex k, double x1, double x2) {
  const double rho = std::hypot(x1, x2);
  if (rho == 0.0) throw numerical_error("free_green_grad: evaluation at the singular point");
  const Complex gp = -0.25 * I * k * h1(k, rho);  // dG/drho
  return {gp * (x1 / rho), gp * (x2 / rho)};
}

Complex windowed_qp_green(const WindowedGreenParams& p, double x1, double x2) {
  p.validate();
  const int M = p.image_range();
  const double d = p.period;
  const double A = p.window_size;
  Complex acc{0.0, 0.0};
  for (int m = -M; m <= M; ++m) {
    const double xm = x1 + m * d;
    const double rm = std::hypot(xm, x2);
    const double chi = window_chi(rm / A);
    if (chi == 0.0) continue;
    if (rm == 0.0) throw numerical_error("windowed_qp_green: singular point");
    acc += std::exp(Complex{0.0, -p.alpha * m * d}) * (0.25 * I * h0(p.k, rm)) * chi;
  }
  return acc;
}

Eigen::Vector2cd windowed_qp_green_grad(const WindowedGreenParams& p, double x1, double x2) {
  p.validate();
  const int M = p.image_range();
  const double d = p.period;
  const double A = p.window_size;
  Eigen::Vector2cd acc = Eigen::Vector2cd::Zero();
  for (int m = -M; m <= M; ++m) {
    const double xm = x1 + m * d;
    const double rm = std::hypot(xm, x2);
    const double chi = window_chi(rm / A);
    if (chi == 0.0) continue;
    if (rm == 0.0) throw numerical_error("windowed_qp_green_grad: singular point");
    const Complex phase = std::exp(Complex{0.0, -p.alpha * m * d});
    const Complex g = 0.25 * I * h0(p.k, rm);
    const Complex gp = -0.25 * I * p.k * h1(p.k, rm);
    const Complex radial = gp * chi + g * window_chi_d1(rm / A) / A;
    acc[0] += phase * radial * (xm / rm);
    acc[1] += phase * radial * (x2 / rm);
  }
  return acc;
}

Eigen::Matrix2cd windowed_qp_green_hess(const WindowedGreenParams& p, double x1, double x2) {
  p.validate();
  const int M = p.image_range();
  const double d = p.period;
  const double A = p.window_size;
  Eigen::Matrix2cd acc = Eigen::Matrix2cd::Zero();
  for (int m = -M; m <= M; ++m) {
    const double xm = x1 + m * d;
    const double rm = std::hypot(xm, x2);
    const double chi = window_chi(rm / A);
    const double chi1 = window_chi_d1(rm / A);
    const double chi2 = window_chi_d2(rm / A);
    if (chi == 0.0 && chi1 == 0.0 && chi2 == 0.0) continue;
    if (rm == 0.0) throw numerical_error("windowed_qp_green_hess: singular point");
    const Complex phase = std::exp(Complex{0.0, -p.alpha * m * d});
    const Complex g = 0.25 * I * h0(p.k, rm);
    const Complex h1v = h1(p.k, rm);
    const Complex gp = -0.25 * I * p.k * h1v;
    // g'' = -(i k^2/4)(H0 - H1/(k rho))'... using H1' = H0 - H1/z:
    const Complex gpp = -0.25 * I * p.k * p.k * (h0(p.k, rm) - h1v / (p.k * rm));
    const Complex fp = gp * chi + g * chi1 / A;
    const Complex fpp = gpp * chi + 2.0 * gp * chi1 / A + g * chi2 / (A * A);
    const double e1 = xm / rm, e2 = x2 / rm;
    const Eigen::Vector2d e{e1, e2};
    Eigen::Matrix2cd H;
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        const double delta = a == b ? 1.0 : 0.0;
        H(a, b) = fpp * e[a] * e[b] + fp * (delta - e[a] * e[b]) / rm;
      }
    acc += phase * H;
  }
  return acc;
}

}  // namespace qopdd
