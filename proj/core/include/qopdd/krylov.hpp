#pragma once

#include <functional>
#include <vector>

#include "qopdd/types.hpp"

namespace qopdd {

struct GmresConfig {
  double rel_tol = 1e-4;
  int max_iter = 500;
  int restart = 0;  // 0: full (unrestarted) GMRES
};

struct SolveReport {
  int iterations = 0;
  std::vector<double> residual_history;  // relative residuals, entry per iteration
  bool converged = false;
};

using LinearOp = std::function<Vector(const Vector&)>;

/// Full GMRES with modified Gram-Schmidt and one reorthogonalization pass.
std::pair<Vector, SolveReport> gmres(const LinearOp& op, const Vector& b,
                                     const GmresConfig& cfg);

}  // namespace qopdd
