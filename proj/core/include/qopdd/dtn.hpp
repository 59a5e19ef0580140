#pragma once

#include "qopdd/fourier.hpp"
#include "qopdd/geometry.hpp"
#include "qopdd/types.hpp"

namespace qopdd {

enum class TransmissionFamily { semi_series, slab_series, flat, despres, hilbert };

/// Dense transmission-operator matrix on one interface.
struct TransmissionOperator {
  Matrix mat;
  TransmissionFamily family;
  int order = 0;     // L
  Complex kappa{0.0, 0.0};
};

/// Fourier multiplier r -> (k^2 - alpha_r^2)^{1/2} on the stated branch.
FourierMultiplier beta_multiplier(Complex k, const QuasiPeriodicity& qp, int n);

/// Shape-perturbation series of the outward half-space DtN up to order L <= 2:
///   Y = -i beta_D(kappa) +- Y1(f) + Y2(f),  f = roughness * base shape,
/// with the stable commutator forms of the first- and second-order terms.
/// upper_domain selects the sign of the odd term.
TransmissionOperator dtn_series_semi(Complex kappa, const GratingProfile& profile,
                                     bool upper_domain, int L, const QuasiPeriodicity& qp,
                                     int n);

/// Bounded-layer DtN series blocks (top/bottom diagonal and couplings) from the
/// coth/csch base multipliers and the sinh-cosh correction recursion. The
/// recursion is carried out in Fourier space with de-aliased shape products;
/// it is known to lose accuracy for rough profiles and is used as printed.
struct SlabDtn {
  Matrix tt, tb, bt, bb;
};
SlabDtn dtn_series_slab(Complex kappa, const GratingProfile& top, const GratingProfile& bottom,
                        int L, const QuasiPeriodicity& qp, int n);

/// Z = -i beta_D(k + i sigma): complexified flat half-space DtN.
TransmissionOperator flat_transmission(double k, double sigma, const QuasiPeriodicity& qp, int n);

/// Classical Robin operator Z = i I.
TransmissionOperator despres_operator(int n);

/// Z = i T with T the log-kernel tangential operator (symbol 1 + |m|).
TransmissionOperator hilbert_operator(int n, const QuasiPeriodicity& qp);

/// Default complexification shift: sigma = 0.5 k^{1/3} (2 pi / d)^{2/3},
/// clamped to [0.4, 2]. Exposed as a tuning choice.
double default_sigma(double k, double period);

}  // namespace qopdd
