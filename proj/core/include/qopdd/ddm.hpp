#pragma once

#include <vector>

#include "qopdd/dtn.hpp"
#include "qopdd/rtr.hpp"

namespace qopdd {

enum class Scheme { layer_slab, layer_semi, strip };
enum class OperatorFamily { quasi_optimal, despres, hilbert };

struct SigmaPolicy {
  enum class Kind { by_wavenumber, fixed } kind = Kind::by_wavenumber;
  double value = 0.0;

  double operator()(double k, double period) const {
    return kind == Kind::fixed ? value : default_sigma(k, period);
  }
};

struct AssemblyOptions {
  int n = 256;
  double A = 120.0;
  int L = 0;
  Scheme scheme = Scheme::layer_slab;
  OperatorFamily family = OperatorFamily::quasi_optimal;
  SigmaPolicy sigma;
  BiopsCache* cache = nullptr;
};

/// Transmission operators attached to one interface: Z_above approximates the
/// DtN of the subdomain above it, Z_below the one below it.
struct InterfacePair {
  Matrix Z_above, Z_below;
};

/// Per-interface transmission operators for a stack under the given options.
std::vector<InterfacePair> build_transmission_operators(const LayerStack& stack,
                                                        const AssemblyOptions& opts);

/// Discrete block-tridiagonal DD operator: P interface blocks of size 2n,
/// unknown ordering [f_{0,1}, f_{1,0}, f_{1,2}, f_{2,1}, ...].
struct BlockTridiagonalSystem {
  int n = 0;
  int P = 0;  // number of interface blocks
  Scheme scheme = Scheme::layer_slab;
  std::vector<Matrix> D;       // P blocks, 2n x 2n
  std::vector<Matrix> U, L;    // P-1 blocks each
  Vector rhs;
  std::vector<std::shared_ptr<SubdomainField>> fields;  // P+1 subdomains
  LayerStack stack;
  double window = 120.0;
  std::vector<double> cuts;  // strip scheme only

  int dim() const { return 2 * n * P; }
  Vector apply(const Vector& x) const;
  Matrix densify() const;
  /// Incoming Robin data of one subdomain extracted from a solution vector.
  Vector subdomain_incoming(const Vector& solution, int subdomain) const;
};

BlockTridiagonalSystem assemble_system(const LayerStack& stack, const AssemblyOptions& opts);

/// Incident plane-wave right-hand side (all blocks zero except the first).
Vector assemble_rhs(const LayerStack& stack, Scheme scheme, const Matrix& Z_in0,
                    const Matrix& Z_out0, int n, double amplitude = 1.0,
                    double c_top = 0.0);

/// Eigenvalues of the densified DD operator (cluster diagnostics).
std::vector<Complex> dense_spectrum(const BlockTridiagonalSystem& system);

}  // namespace qopdd
