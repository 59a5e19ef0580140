#include "qopdd/precond.hpp"

namespace qopdd {

SweepFactors SweepFactors::make(const BlockTridiagonalSystem& system, PrecondMode mode) {
  SweepFactors f;
  f.mode = mode;
  f.system = &system;
  if (mode != PrecondMode::exact) return f;
  const int P = system.P;
  f.T.resize(P);
  f.Tinv_U.resize(P - 1 > 0 ? P - 1 : 0);
  Matrix Tj = system.D[0];
  f.T[0].compute(Tj);
  for (int j = 1; j < P; ++j) {
    f.Tinv_U[j - 1] = f.T[j - 1].solve(system.U[j - 1]);
    Tj = system.D[j] - system.L[j - 1] * f.Tinv_U[j - 1];
    f.T[j].compute(Tj);
    if (std::abs(f.T[j].matrixLU().diagonal().cwiseAbs().minCoeff()) == 0.0)
      throw numerical_error("exact block LU: singular pivot block T_" + std::to_string(j));
  }
  return f;
}

Vector apply_sweep(const SweepFactors& factors, const Vector& r) {
  const auto& sys = *factors.system;
  const int b = 2 * sys.n, P = sys.P;
  Vector z = r;
  switch (factors.mode) {
    case PrecondMode::none:
      return z;
    case PrecondMode::sweep: {
      // Forward (downward) sweep through the unit-diagonal lower factor...
      for (int j = 1; j < P; ++j)
        z.segment(b * j, b) -= sys.L[j - 1] * z.segment(b * (j - 1), b);
      // ...then the upward sweep through the unit-diagonal upper factor.
      for (int j = P - 2; j >= 0; --j)
        z.segment(b * j, b) -= sys.U[j] * z.segment(b * (j + 1), b);
      return z;
    }
    case PrecondMode::exact: {
      Vector y(r.size());
      y.segment(0, b) = factors.T[0].solve(z.segment(0, b));
      for (int j = 1; j < P; ++j)
        y.segment(b * j, b) = factors.T[j].solve(
            Vector(z.segment(b * j, b) - sys.L[j - 1] * y.segment(b * (j - 1), b)));
      for (int j = P - 2; j >= 0; --j)
        y.segment(b * j, b) -= factors.Tinv_U[j] * y.segment(b * (j + 1), b);
      return y;
    }
  }
  return z;
}

Vector preconditioned_apply(const BlockTridiagonalSystem& system, const SweepFactors& factors,
                            const Vector& x) {
  return apply_sweep(factors, system.apply(x));
}

}  // namespace qopdd
