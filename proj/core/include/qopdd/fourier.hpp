#pragma once

#include "qopdd/geometry.hpp"
#include "qopdd/types.hpp"

namespace qopdd {

// Trigonometric calculus on nodal values of alpha-quasi-periodic functions
// sampled at s_m = m d/n. Mode slots i = 0..n-1 hold r = i - n/2, i.e. the
// basis e^{i alpha_r s} with alpha_r = alpha + 2 pi r / d.

/// Mode index for slot i.
inline int mode_of_slot(int i, int n) { return i - n / 2; }

/// n x n forward transform: nodal values -> coefficients.
Matrix trig_forward(int n, const QuasiPeriodicity& qp);
/// n x n inverse transform: coefficients -> nodal values.
Matrix trig_inverse(int n, const QuasiPeriodicity& qp);

/// (k^2 - alpha_r^2)^{1/2} with sqrt(1) = 1 and the branch cut along the
/// negative imaginary axis (arg of the radicand taken in [-pi/2, 3 pi/2)).
Complex beta_branch_sqrt(Complex radicand);
Complex beta_symbol(Complex k, double alpha_r);

/// Diagonal operator in the quasi-periodic Fourier basis.
struct FourierMultiplier {
  Vector symbol;  // indexed by slot
  QuasiPeriodicity qp;
  int n = 0;

  Matrix as_matrix() const;
  Vector apply(const Vector& nodal) const;

  static FourierMultiplier from_symbol(int n, const QuasiPeriodicity& qp,
                                       const std::function<Complex(int /*r*/)>& sym);
};

/// Nodal spectral differentiation d/dx1 (symbol i alpha_r).
Matrix spectral_derivative(int n, const QuasiPeriodicity& qp);

/// Matrix of pointwise multiplication by the profile's d-periodic base shape,
/// de-aliased: the product's coefficients are formed exactly in the Fourier
/// domain and truncated back to the resolved band.
Matrix dealiased_shape_multiply(const GratingProfile& profile, int n,
                                const QuasiPeriodicity& qp, int band = -1);

}  // namespace qopdd
