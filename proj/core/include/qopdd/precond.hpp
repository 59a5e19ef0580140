#pragma once

#include "qopdd/ddm.hpp"

namespace qopdd {

enum class PrecondMode { none, sweep, exact };

/// Double-sweep preconditioner data. The approximate variant keeps only
/// references to the system's L/U blocks (unit diagonals, no inversions);
/// the exact variant factors the Schur recursion T_j = D_j - L_{j-1} T_{j-1}^{-1} U_{j-1}.
struct SweepFactors {
  PrecondMode mode = PrecondMode::none;
  const BlockTridiagonalSystem* system = nullptr;
  std::vector<Eigen::PartialPivLU<Matrix>> T;          // exact mode
  std::vector<Matrix> Tinv_U;                          // exact mode: T_j^{-1} U_j

  static SweepFactors make(const BlockTridiagonalSystem& system, PrecondMode mode);
};

/// Solve B z = r (approximate mode: downward then upward substitution sweep)
/// or A z = r (exact mode).
Vector apply_sweep(const SweepFactors& factors, const Vector& r);

/// Left-preconditioned operator action B^{-1}(A x).
Vector preconditioned_apply(const BlockTridiagonalSystem& system, const SweepFactors& factors,
                            const Vector& x);

}  // namespace qopdd
