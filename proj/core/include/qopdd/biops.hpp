#pragma once

#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <unordered_map>

#include "qopdd/fourier.hpp"
#include "qopdd/geometry.hpp"
#include "qopdd/qpgreen.hpp"
#include "qopdd/types.hpp"

namespace qopdd {

// Nystrom discretization of the weighted quasi-periodic boundary integral
// operators: trigonometric collocation with Martensen-Kussmaul logarithmic
// splitting on self-interactions and plain trapezoid on smooth
// cross-interface kernels. The m = 0 image of the windowed Green function
// carries the log singularity; the split coefficient is localized by a smooth
// cutoff so the trapezoidal remainder stays smooth across the periodic wrap.

enum class OperatorKind { single_layer, adjoint_double_layer, double_layer, hypersingular };

struct NystromOperator {
  Matrix matrix;  // n_target x n_source
  OperatorKind kind;
  Complex wavenumber;
  bool weighted = true;
  bool reduced_order_warning = false;  // hypersingular on a Lipschitz profile

  /// Debug dump: int64 rows, int64 cols, then row-major complex128.
  void dump(const std::string& path) const;
};

/// Quadrature weights R_{j-l} for the periodic log kernel ln(4 sin^2((t-u)/2)).
RealVector mk_log_weights(int n);

/// Weighted single layer S^w (acts on weighted nodal densities).
NystromOperator assemble_single_layer(Complex k, const InterfaceGrid& src,
                                      const InterfaceGrid& tgt, const QuasiPeriodicity& qp,
                                      double A);

/// Weighted adjoint double layer (K^w)^T; the +-1/2 |x'| jump term is not
/// included (Robin trace formulas add it explicitly). Target normal taken
/// from tgt.orientation.
NystromOperator assemble_adjoint_double_layer(Complex k, const InterfaceGrid& src,
                                              const InterfaceGrid& tgt,
                                              const QuasiPeriodicity& qp, double A);

/// Double layer K acting on unweighted nodal densities (the non-unit source
/// normal absorbs the jacobian); jump term not included. Source normal from
/// src.orientation.
NystromOperator assemble_double_layer(Complex k, const InterfaceGrid& src,
                                      const InterfaceGrid& tgt, const QuasiPeriodicity& qp,
                                      double A);

/// Hypersingular operator N (unit target normal, arclength densities),
/// regularized through the tangential integration-by-parts identity so only
/// log-singular kernels are quadratured. Self-interaction only.
NystromOperator assemble_hypersingular(Complex k, const InterfaceGrid& grid,
                                       const QuasiPeriodicity& qp, double A);

// Smooth cross-curve building blocks (plain trapezoid; curves must not touch).

/// rows: dir(s) . grad_x G^{q,A}(x_t(s) - x_src(tau)); weighted densities.
Matrix assemble_grad_dot_cross(Complex k, const InterfaceGrid& src, const InterfaceGrid& tgt,
                               const QuasiPeriodicity& qp, double A,
                               const std::vector<Eigen::Vector2d>& dirs);

/// Hessian form: -dir(s)^T Hess G^{q,A}(x_t(s) - x_src(tau)) n_src(tau);
/// this is dir . grad_x of the double-layer kernel; unweighted densities.
Matrix assemble_dl_grad_dot_cross(Complex k, const InterfaceGrid& src, const InterfaceGrid& tgt,
                                  const QuasiPeriodicity& qp, double A,
                                  const std::vector<Eigen::Vector2d>& dirs);

/// Potential evaluation at off-boundary points.
Complex eval_single_layer(const InterfaceGrid& src, const Vector& weighted_density, Complex k,
                          const QuasiPeriodicity& qp, double A, double x1, double x2);
Complex eval_double_layer(const InterfaceGrid& src, const Vector& density, Complex k,
                          const QuasiPeriodicity& qp, double A, double x1, double x2);

/// Concurrent memo cache for assembled operator matrices, keyed by the
/// geometric/spectral content of the assembly request. Translation-invariant
/// keys let repeated layers share matrices.
class BiopsCache {
 public:
  std::shared_ptr<const Matrix> get_or_build(const std::string& key,
                                             const std::function<Matrix()>& build);
  size_t size() const;

 private:
  mutable std::mutex mu_;
  std::unordered_map<std::string, std::shared_ptr<const Matrix>> map_;
};

std::string operator_cache_key(const std::string& op, Complex k, const InterfaceGrid& src,
                               const InterfaceGrid& tgt, const QuasiPeriodicity& qp, double A);

}  // namespace qopdd
