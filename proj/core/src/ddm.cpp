#include "qopdd/ddm.hpp"

#include <Eigen/Eigenvalues>

namespace qopdd {

namespace {

Vector incident_trace_layer(const LayerStack& stack, int n, double amplitude, bool derivative) {
  // u^inc = amplitude e^{i alpha x1 - i beta x2} sampled on Gamma_0;
  // the derivative variant returns d/dn_0 u^inc with n_0 = (F', -1).
  const auto& p = stack.profiles[0];
  const double alpha = stack.qp.alpha;
  const Complex beta = stack.qp.incidence_beta(stack.wavenumbers[0]);
  Vector v(n);
  for (int m = 0; m < n; ++m) {
    const double x1 = p.period() * m / n;
    const double x2 = p.value(x1);
    const Complex val = amplitude * std::exp(I * (alpha * x1) - I * beta * x2);
    v[m] = derivative ? (I * alpha * p.deriv(x1) + I * beta) * val : val;
  }
  return v;
}

Vector incident_trace_cut(const LayerStack& stack, int n, double amplitude, double c,
                          bool derivative) {
  const double alpha = stack.qp.alpha;
  const Complex beta = stack.qp.incidence_beta(stack.wavenumbers[0]);
  const double d = stack.qp.period;
  Vector v(n);
  for (int m = 0; m < n; ++m) {
    const double x1 = d * m / n;
    const Complex val = amplitude * std::exp(I * (alpha * x1) - I * beta * c);
    v[m] = derivative ? -I * beta * val : val;
  }
  return v;
}

}  // namespace

std::vector<InterfacePair> build_transmission_operators(const LayerStack& stack,
                                                        const AssemblyOptions& opts) {
  stack.check_shape();
  const int N = stack.num_inner_layers();
  const int n = opts.n;
  const auto& qp = stack.qp;

  if (opts.family == OperatorFamily::despres || opts.family == OperatorFamily::hilbert) {
    const Matrix Z = opts.family == OperatorFamily::despres ? despres_operator(n).mat
                                                            : hilbert_operator(n, qp).mat;
    std::vector<InterfacePair> out(N + 1);
    for (auto& pr : out) {
      pr.Z_above = Z;
      pr.Z_below = Z;
    }
    return out;
  }

  auto kappa = [&](int layer) {
    const double k = stack.wavenumbers[layer];
    return Complex{k, opts.sigma(k, qp.period)};
  };

  if (opts.scheme == Scheme::strip) {
    // One flat multiplier per cut; cut j sits inside layer j.
    std::vector<InterfacePair> out(N + 2);
    for (int j = 0; j <= N + 1; ++j) {
      const double k = stack.wavenumbers[j];
      const Matrix Z = flat_transmission(k, kappa(j).imag(), qp, n).mat;
      out[j].Z_above = Z;
      out[j].Z_below = Z;
    }
    return out;
  }

  std::vector<InterfacePair> out(N + 1);
  std::vector<SlabDtn> slabs(N + 1);  // slab DtN of bounded layer j, 1-based use
  if (opts.scheme == Scheme::layer_slab) {
    for (int j = 1; j <= N; ++j)
      slabs[j] = dtn_series_slab(kappa(j), stack.profiles[j - 1], stack.profiles[j], opts.L,
                                 qp, n);
  }
  for (int j = 0; j <= N; ++j) {
    // Z_above on Gamma_j: DtN approximation of layer j seen from below.
    if (j == 0 || opts.scheme == Scheme::layer_semi)
      out[j].Z_above = dtn_series_semi(kappa(j), stack.profiles[j], /*upper_domain=*/true,
                                       opts.L, qp, n).mat;
    else
      out[j].Z_above = slabs[j].bb;
    // Z_below on Gamma_j: DtN approximation of layer j+1 seen from above.
    if (j == N || opts.scheme == Scheme::layer_semi)
      out[j].Z_below = dtn_series_semi(kappa(j + 1), stack.profiles[j], /*upper_domain=*/false,
                                       opts.L, qp, n).mat;
    else
      out[j].Z_below = slabs[j + 1].tt;
  }
  return out;
}

Vector BlockTridiagonalSystem::apply(const Vector& x) const {
  const int b = 2 * n;
  Vector y(dim());
  for (int j = 0; j < P; ++j) {
    Vector acc = D[j] * x.segment(b * j, b);
    if (j > 0) acc += L[j - 1] * x.segment(b * (j - 1), b);
    if (j + 1 < P) acc += U[j] * x.segment(b * (j + 1), b);
    y.segment(b * j, b) = acc;
  }
  return y;
}

Matrix BlockTridiagonalSystem::densify() const {
  const int b = 2 * n;
  Matrix M = Matrix::Zero(dim(), dim());
  for (int j = 0; j < P; ++j) {
    M.block(b * j, b * j, b, b) = D[j];
    if (j + 1 < P) {
      M.block(b * j, b * (j + 1), b, b) = U[j];
      M.block(b * (j + 1), b * j, b, b) = L[j];
    }
  }
  return M;
}

Vector BlockTridiagonalSystem::subdomain_incoming(const Vector& solution, int subdomain) const {
  const int b = 2 * n;
  if (subdomain == 0) return solution.segment(0, n);
  if (subdomain == P) return solution.segment(b * (P - 1) + n, n);
  Vector g(2 * n);
  g.head(n) = solution.segment(b * (subdomain - 1) + n, n);  // data at the top boundary
  g.tail(n) = solution.segment(b * subdomain, n);            // data at the bottom boundary
  return g;
}

BlockTridiagonalSystem assemble_system(const LayerStack& stack, const AssemblyOptions& opts) {
  stack.check_shape();
  const auto diag = validate_stack(stack);
  if (!diag.ok()) throw geometry_error("invalid stack: " + diag.items.front().message);

  const int N = stack.num_inner_layers();
  const int n = opts.n;
  const auto& qp = stack.qp;
  const auto Z = build_transmission_operators(stack, opts);

  BlockTridiagonalSystem sys;
  sys.n = n;
  sys.scheme = opts.scheme;
  sys.stack = stack;
  sys.window = opts.A;

  std::vector<SubdomainRtR> rtr;
  if (opts.scheme == Scheme::strip) {
    const std::vector<double> cuts =
        stack.strip_cuts ? *stack.strip_cuts : stack.default_strip_cuts();
    if (static_cast<int>(cuts.size()) != N + 2)
      throw config_error("strip scheme needs num_interfaces + 1 cuts");
    sys.cuts = cuts;
    sys.P = N + 2;
    rtr.resize(N + 3);
    const double d = qp.period;
    rtr[0] = rtr_semi_infinite(stack.wavenumbers[0], GratingProfile::flat(cuts[0], d),
                               /*domain_above=*/true, Z[0].Z_below, Z[0].Z_above, qp, n,
                               opts.A, opts.cache);
    for (int j = 1; j <= N + 1; ++j)
      rtr[j] = rtr_strip(stack.wavenumbers[j - 1], stack.wavenumbers[j],
                         stack.profiles[j - 1], cuts[j - 1], cuts[j], Z[j - 1].Z_above,
                         Z[j - 1].Z_below, Z[j].Z_below, Z[j].Z_above, qp, n, opts.A,
                         opts.cache);
    rtr[N + 2] = rtr_semi_infinite(stack.wavenumbers[N + 1],
                                   GratingProfile::flat(cuts[N + 1], d),
                                   /*domain_above=*/false, Z[N + 1].Z_above, Z[N + 1].Z_below,
                                   qp, n, opts.A, opts.cache);
  } else {
    sys.P = N + 1;
    rtr.resize(N + 2);
    rtr[0] = rtr_semi_infinite(stack.wavenumbers[0], stack.profiles[0], /*domain_above=*/true,
                               Z[0].Z_below, Z[0].Z_above, qp, n, opts.A, opts.cache);
    for (int j = 1; j <= N; ++j)
      rtr[j] = rtr_layer(stack.wavenumbers[j], stack.profiles[j - 1], stack.profiles[j],
                         Z[j - 1].Z_above, Z[j - 1].Z_below, Z[j].Z_below, Z[j].Z_above, qp,
                         n, opts.A, opts.cache);
    rtr[N + 1] = rtr_semi_infinite(stack.wavenumbers[N + 1], stack.profiles[N],
                                   /*domain_above=*/false, Z[N].Z_above, Z[N].Z_below, qp, n,
                                   opts.A, opts.cache);
  }

  const int P = sys.P;
  sys.D.resize(P);
  sys.U.resize(P - 1);
  sys.L.resize(P - 1);
  auto top_response = [&](int sub) -> const Matrix& {
    return rtr[sub].two_sided ? rtr[sub].tt : rtr[sub].single;
  };
  auto bottom_response = [&](int sub) -> const Matrix& {
    return rtr[sub].two_sided ? rtr[sub].bb : rtr[sub].single;
  };
  for (int j = 0; j < P; ++j) {
    Matrix Dj = Matrix::Identity(2 * n, 2 * n);
    Dj.topRightCorner(n, n) = top_response(j + 1);
    Dj.bottomLeftCorner(n, n) = bottom_response(j);
    sys.D[j] = std::move(Dj);
    if (j + 1 < P) {
      Matrix Uj = Matrix::Zero(2 * n, 2 * n);
      Uj.topLeftCorner(n, n) = rtr[j + 1].tb;
      sys.U[j] = std::move(Uj);
      Matrix Lj = Matrix::Zero(2 * n, 2 * n);
      Lj.bottomRightCorner(n, n) = rtr[j + 1].bt;
      sys.L[j] = std::move(Lj);
    }
  }

  sys.fields.resize(P + 1);
  for (int s = 0; s <= P; ++s) sys.fields[s] = rtr[s].field;

  sys.rhs = assemble_rhs(stack, opts.scheme, Z[0].Z_below, Z[0].Z_above, n, 1.0,
                         opts.scheme == Scheme::strip ? sys.cuts[0] : 0.0);
  return sys;
}

Vector assemble_rhs(const LayerStack& stack, Scheme scheme, const Matrix& Z_in0,
                    const Matrix& Z_out0, int n, double amplitude, double c_top) {
  stack.check_shape();
  const int N = stack.num_inner_layers();
  const int P = scheme == Scheme::strip ? N + 2 : N + 1;
  Vector b = Vector::Zero(2 * n * P);
  if (scheme == Scheme::strip) {
    const Vector u = incident_trace_cut(stack, n, amplitude, c_top, false);
    const Vector du = incident_trace_cut(stack, n, amplitude, c_top, true);
    b.segment(0, n) = du - Z_in0 * u;
    b.segment(n, n) = du + Z_out0 * u;
  } else {
    const Vector u = incident_trace_layer(stack, n, amplitude, false);
    const Vector du = incident_trace_layer(stack, n, amplitude, true);
    b.segment(0, n) = -(du + Z_in0 * u);
    b.segment(n, n) = -(du - Z_out0 * u);
  }
  return b;
}

std::vector<Complex> dense_spectrum(const BlockTridiagonalSystem& system) {
  if (system.dim() > 20000)
    throw config_error("dense_spectrum limited to dimension 20000");
  Eigen::ComplexEigenSolver<Matrix> es(system.densify(), /*computeEigenvectors=*/false);
  std::vector<Complex> out(es.eigenvalues().data(),
                           es.eigenvalues().data() + es.eigenvalues().size());
  return out;
}

}  // namespace qopdd
