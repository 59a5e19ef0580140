#include "qopdd/fourier.hpp"

#include <cmath>

namespace qopdd {

Matrix trig_forward(int n, const QuasiPeriodicity& qp) {
  Matrix F(n, n);
  const double d = qp.period;
  for (int i = 0; i < n; ++i) {
    const double ar = qp.alpha_r(mode_of_slot(i, n));
    for (int m = 0; m < n; ++m) {
      const double sm = d * m / n;
      F(i, m) = std::exp(Complex{0.0, -ar * sm}) / double(n);
    }
  }
  return F;
}

Matrix trig_inverse(int n, const QuasiPeriodicity& qp) {
  Matrix Fi(n, n);
  const double d = qp.period;
  for (int m = 0; m < n; ++m) {
    const double sm = d * m / n;
    for (int i = 0; i < n; ++i) {
      const double ar = qp.alpha_r(mode_of_slot(i, n));
      Fi(m, i) = std::exp(Complex{0.0, ar * sm});
    }
  }
  return Fi;
}

Complex beta_branch_sqrt(Complex w) {
  double theta = std::atan2(w.imag(), w.real());
  if (theta < -PI / 2.0) theta += 2.0 * PI;  // cut along the negative imaginary axis
  const double r = std::sqrt(std::abs(w));
  return {r * std::cos(theta / 2.0), r * std::sin(theta / 2.0)};
}

Complex beta_symbol(Complex k, double alpha_r) {
  return beta_branch_sqrt(k * k - alpha_r * alpha_r);
}

Matrix FourierMultiplier::as_matrix() const {
  return trig_inverse(n, qp) * symbol.asDiagonal() * trig_forward(n, qp);
}

Vector FourierMultiplier::apply(const Vector& nodal) const {
  return trig_inverse(n, qp) * (symbol.array() * (trig_forward(n, qp) * nodal).array()).matrix();
}

FourierMultiplier FourierMultiplier::from_symbol(int n, const QuasiPeriodicity& qp,
                                                 const std::function<Complex(int)>& sym) {
  FourierMultiplier mult;
  mult.n = n;
  mult.qp = qp;
  mult.symbol.resize(n);
  for (int i = 0; i < n; ++i) mult.symbol[i] = sym(mode_of_slot(i, n));
  return mult;
}

Matrix spectral_derivative(int n, const QuasiPeriodicity& qp) {
  return FourierMultiplier::from_symbol(
             n, qp, [&](int r) { return Complex{0.0, qp.alpha_r(r)}; })
      .as_matrix();
}

Matrix dealiased_shape_multiply(const GratingProfile& profile, int n,
                                const QuasiPeriodicity& qp, int band) {
  if (band < 0) band = n / 2;
  const auto coeffs = profile.shape_fourier(band);
  auto c = [&](int m) -> Complex {
    if (m < -band || m > band) return {0.0, 0.0};
    return coeffs[m + band];
  };
  Matrix T = Matrix::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      const int diff = mode_of_slot(i, n) - mode_of_slot(j, n);
      T(i, j) = c(diff);
    }
  return trig_inverse(n, qp) * T * trig_forward(n, qp);
}

}  // namespace qopdd
