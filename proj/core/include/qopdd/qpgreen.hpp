#pragma once

#include "qopdd/types.hpp"

namespace qopdd {

/// Smooth window: 1 for r <= 1/2, 0 for r >= 1, C-infinity monotone between.
double window_chi(double r);
double window_chi_d1(double r);
double window_chi_d2(double r);

struct WindowedGreenParams {
  Complex k;
  double alpha = 0.0;
  double period = 2.0 * PI;
  double window_size = 120.0;  // A

  void validate() const;
  /// Image range: every term with a nonzero window factor is included, so the
  /// windowed sum is exactly shift-covariant for evaluation points within one period.
  int image_range() const;
};

/// Free-space kernel (i/4) H0^(1)(k |x|).
Complex free_green(Complex k, double x1, double x2);
/// Gradient of the free-space kernel.
Eigen::Vector2cd free_green_grad(Complex k, double x1, double x2);

/// Windowed quasi-periodic Green function value.
Complex windowed_qp_green(const WindowedGreenParams& p, double x1, double x2);
/// Gradient (includes the window-derivative terms).
Eigen::Vector2cd windowed_qp_green_grad(const WindowedGreenParams& p, double x1, double x2);
/// Hessian (symmetric 2x2).
Eigen::Matrix2cd windowed_qp_green_hess(const WindowedGreenParams& p, double x1, double x2);

}  // namespace qopdd
