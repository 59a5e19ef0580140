#include "qopdd/biops.hpp"

#include <cmath>
#include <cstdint>
#include <fstream>

#include "qopdd/special.hpp"

namespace qopdd {

namespace {

// Term-wise windowed image sums of the free-space kernel and its derivatives.
struct WindowedKernel {
  Complex k;
  double alpha, d, A;
  int M;
  std::vector<Complex> phases;  // e^{-i alpha m d}, index m + M

  WindowedKernel(Complex k_, const QuasiPeriodicity& qp, double A_)
      : k(k_), alpha(qp.alpha), d(qp.period), A(A_) {
    M = static_cast<int>(std::ceil(A / d)) + 2;
    phases.resize(2 * M + 1);
    for (int m = -M; m <= M; ++m)
      phases[m + M] = std::exp(Complex{0.0, -alpha * m * d});
  }

  bool real_k() const { return k.imag() == 0.0; }

  special::HankelPair h01(double rho) const {
    if (real_k()) return special::hankel1_01(k.real() * rho);
    return {special::hankel1_0(k * rho), special::hankel1_1(k * rho)};
  }
  Complex h0(double rho) const {
    if (real_k()) return special::hankel1_0(k.real() * rho);
    return special::hankel1_0(k * rho);
  }

  Complex value(double x1, double x2, bool skip_m0 = false) const {
    Complex acc{0.0, 0.0};
    for (int m = -M; m <= M; ++m) {
      if (skip_m0 && m == 0) continue;
      const double xm = x1 + m * d;
      const double rm = std::hypot(xm, x2);
      const double chi = window_chi(rm / A);
      if (chi == 0.0) continue;
      acc += phases[m + M] * (0.25 * I * h0(rm)) * chi;
    }
    return acc;
  }

  Eigen::Vector2cd grad(double x1, double x2, bool skip_m0 = false) const {
    Eigen::Vector2cd acc = Eigen::Vector2cd::Zero();
    for (int m = -M; m <= M; ++m) {
      if (skip_m0 && m == 0) continue;
      const double xm = x1 + m * d;
      const double rm = std::hypot(xm, x2);
      const double chi = window_chi(rm / A);
      if (chi == 0.0) continue;
      const auto [h0v, h1v] = h01(rm);
      const Complex gp = -0.25 * I * k * h1v;
      Complex radial = gp * chi;
      const double chi1 = window_chi_d1(rm / A);
      if (chi1 != 0.0) radial += (0.25 * I * h0v) * chi1 / A;
      const Complex ph = phases[m + M] * radial / rm;
      acc[0] += ph * xm;
      acc[1] += ph * x2;
    }
    return acc;
  }

  Eigen::Matrix2cd hess(double x1, double x2) const {
    Eigen::Matrix2cd acc = Eigen::Matrix2cd::Zero();
    for (int m = -M; m <= M; ++m) {
      const double xm = x1 + m * d;
      const double rm = std::hypot(xm, x2);
      const double chi = window_chi(rm / A);
      const double chi1 = window_chi_d1(rm / A);
      if (chi == 0.0 && chi1 == 0.0) continue;
      const double chi2 = window_chi_d2(rm / A);
      const auto [h0v, h1v] = h01(rm);
      const Complex g = 0.25 * I * h0v;
      const Complex gp = -0.25 * I * k * h1v;
      const Complex gpp = -0.25 * I * k * k * (h0v - h1v / (k * rm));
      const Complex fp = gp * chi + g * chi1 / A;
      const Complex fpp = gpp * chi + 2.0 * gp * chi1 / A + g * chi2 / (A * A);
      const double e[2] = {xm / rm, x2 / rm};
      const Complex phase = phases[m + M];
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          acc(a, b) += phase * (fpp * e[a] * e[b] + fp * ((a == b ? 1.0 : 0.0) - e[a] * e[b]) / rm);
    }
    return acc;
  }

  /// Complex-capable J0/J1 for the MK split coefficients.
  Complex j0(double rho) const {
    if (real_k()) return {special::bessel_j0(k.real() * rho), 0.0};
    return special::bessel_j0(k * rho);
  }
  Complex j1(double rho) const {
    if (real_k()) return {special::bessel_j1(k.real() * rho), 0.0};
    return special::bessel_j1(k * rho);
  }
};

struct NearestImage {
  int m0;
  double x1;  // x1 + m0 d
  double rho;
};

NearestImage nearest_image(double dx, double df, double d) {
  const int m0 = static_cast<int>(std::lround(-dx / d));
  const double x = dx + m0 * d;
  return {m0, x, std::hypot(x, df)};
}

/// Cutoff localizing the log-split coefficient: identically 1 near the
/// diagonal, identically 0 before the nearest-image switch at half a period.
double split_cutoff(double rho, double d) { return window_chi(2.0 * rho / d); }

bool same_curve(const InterfaceGrid& a, const InterfaceGrid& b) {
  return a.n == b.n && a.profile.signature() == b.profile.signature();
}

void check_disjoint(const InterfaceGrid& src, const InterfaceGrid& tgt) {
  const auto [slo, shi] = src.profile.extrema();
  const auto [tlo, thi] = tgt.profile.extrema();
  if (!(shi < tlo || thi < slo))
    throw geometry_error("cross-interface operator between touching curves is unsupported");
}

using EntryFn = std::function<Complex(int, int)>;
using DiagFn = std::function<Complex(int)>;

/// A[j,l] = R_{j-l} L1(j,l) + (2 pi/n)(full(j,l) - L1(j,l) log(4 sin^2)), with
/// the analytic diagonal limit of the remainder supplied separately.
Matrix mk_assemble(int n, const EntryFn& L1, const EntryFn& full, const DiagFn& diag,
                   bool circulant) {
  const RealVector R = mk_log_weights(n);
  Matrix out(n, n);
  const double w = 2.0 * PI / n;
  auto entry = [&](int j, int l) -> Complex {
    if (j == l) return R[0] * L1(j, j) + w * diag(j);
    const int m = ((j - l) % n + n) % n;
    const double lg = std::log(4.0 * std::pow(std::sin(PI * (j - l) / double(n)), 2));
    return R[m] * L1(j, l) + w * (full(j, l) - L1(j, l) * lg);
  };
  if (circulant) {
    Vector row(n);
    for (int j = 0; j < n; ++j) row[j] = entry(j, 0);
    for (int j = 0; j < n; ++j)
      for (int l = 0; l < n; ++l) out(j, l) = row[((j - l) % n + n) % n];
    return out;
  }
#pragma omp parallel for schedule(dynamic)
  for (int j = 0; j < n; ++j)
    for (int l = 0; l < n; ++l) out(j, l) = entry(j, l);
  return out;
}

}  // namespace

RealVector mk_log_weights(int n) {
  RealVector R(n);
  for (int m = 0; m < n; ++m) {
    double s = 0.0;
    for (int p = 1; p < n / 2; ++p) s += std::cos(2.0 * PI * p * m / n) / p;
    R[m] = -(4.0 * PI / n) * s - (4.0 * PI / (n * n)) * (m % 2 == 0 ? 1.0 : -1.0);
  }
  return R;
}

void NystromOperator::dump(const std::string& path) const {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw config_error("cannot open dump file " + path);
  const int64_t rows = matrix.rows(), cols = matrix.cols();
  os.write(reinterpret_cast<const char*>(&rows), sizeof rows);
  os.write(reinterpret_cast<const char*>(&cols), sizeof cols);
  for (int64_t i = 0; i < rows; ++i)
    for (int64_t j = 0; j < cols; ++j) {
      const Complex v = matrix(i, j);
      const double re = v.real(), im = v.imag();
      os.write(reinterpret_cast<const char*>(&re), sizeof re);
      os.write(reinterpret_cast<const char*>(&im), sizeof im);
    }
}

NystromOperator assemble_single_layer(Complex k, const InterfaceGrid& src,
                                      const InterfaceGrid& tgt, const QuasiPeriodicity& qp,
                                      double A) {
  WindowedGreenParams{k, qp.alpha, qp.period, A}.validate();
  const WindowedKernel wk(k, qp, A);
  const double d = qp.period;
  NystromOperator op;
  op.kind = OperatorKind::single_layer;
  op.wavenumber = k;

  if (same_curve(src, tgt)) {
    const int n = src.n;
    auto L1 = [&](int j, int l) -> Complex {
      const auto ni = nearest_image(src.s[j] - src.s[l], src.f[j] - src.f[l], d);
      const double cl = split_cutoff(ni.rho, d);
      if (cl == 0.0) return {0.0, 0.0};
      return -(d / (8.0 * PI * PI)) * wk.j0(ni.rho) *
             std::exp(Complex{0.0, -qp.alpha * ni.m0 * d}) * cl;
    };
    auto full = [&](int j, int l) -> Complex {
      return (d / (2.0 * PI)) * wk.value(src.s[j] - src.s[l], src.f[j] - src.f[l]);
    };
    auto diag = [&](int j) -> Complex {
      const Complex logterm =
          std::log(k * (d * src.jacobian[j] / (4.0 * PI)));
      return (d / (2.0 * PI)) *
             (0.25 * I - special::euler_gamma / (2.0 * PI) - logterm / (2.0 * PI) +
              wk.value(0.0, 0.0, /*skip_m0=*/true));
    };
    op.matrix = mk_assemble(src.n, L1, full, diag, src.profile.is_flat());
    (void)n;
    return op;
  }

  check_disjoint(src, tgt);
  const int nt = tgt.n, ns = src.n;
  op.matrix.resize(nt, ns);
  const double w = src.period() / ns;
#pragma omp parallel for schedule(dynamic)
  for (int j = 0; j < nt; ++j)
    for (int l = 0; l < ns; ++l)
      op.matrix(j, l) = w * wk.value(tgt.s[j] - src.s[l], tgt.f[j] - src.f[l]);
  return op;
}

NystromOperator assemble_adjoint_double_layer(Complex k, const InterfaceGrid& src,
                                              const InterfaceGrid& tgt,
                                              const QuasiPeriodicity& qp, double A) {
  WindowedGreenParams{k, qp.alpha, qp.period, A}.validate();
  const WindowedKernel wk(k, qp, A);
  const double d = qp.period;
  NystromOperator op;
  op.kind = OperatorKind::adjoint_double_layer;
  op.wavenumber = k;

  if (same_curve(src, tgt)) {
    const int n = tgt.n;
    if (tgt.profile.is_flat()) {  // n(s).(x(s)-x(tau)) = 0 identically
      op.matrix = Matrix::Zero(n, n);
      return op;
    }
    auto L1 = [&](int j, int l) -> Complex {
      if (j == l) return {0.0, 0.0};
      const auto ni = nearest_image(tgt.s[j] - tgt.s[l], tgt.f[j] - tgt.f[l], d);
      const double cl = split_cutoff(ni.rho, d);
      if (cl == 0.0) return {0.0, 0.0};
      const Eigen::Vector2d nrm = tgt.normal(j);
      const double ndot = nrm[0] * ni.x1 + nrm[1] * (tgt.f[j] - tgt.f[l]);
      return (d / (2.0 * PI)) * (k / (4.0 * PI)) * wk.j1(ni.rho) * (ndot / ni.rho) *
             std::exp(Complex{0.0, -qp.alpha * ni.m0 * d}) * cl;
    };
    auto full = [&](int j, int l) -> Complex {
      const Eigen::Vector2cd g = wk.grad(tgt.s[j] - tgt.s[l], tgt.f[j] - tgt.f[l]);
      const Eigen::Vector2d nrm = tgt.normal(j);
      return (d / (2.0 * PI)) * (nrm[0] * g[0] + nrm[1] * g[1]);
    };
    auto diag = [&](int j) -> Complex {
      const double n_dot_xpp =
          (tgt.orientation == NormalOrientation::down ? -1.0 : 1.0) * tgt.fpp[j];
      const Eigen::Vector2cd g = wk.grad(0.0, 0.0, /*skip_m0=*/true);
      const Eigen::Vector2d nrm = tgt.normal(j);
      return (d / (2.0 * PI)) *
             (n_dot_xpp / (4.0 * PI * tgt.jacobian[j] * tgt.jacobian[j]) +
              (nrm[0] * g[0] + nrm[1] * g[1]));
    };
    op.matrix = mk_assemble(n, L1, full, diag, false);
    return op;
  }

  check_disjoint(src, tgt);
  const int nt = tgt.n, ns = src.n;
  op.matrix.resize(nt, ns);
  const double w = src.period() / ns;
#pragma omp parallel for schedule(dynamic)
  for (int j = 0; j < nt; ++j) {
    const Eigen::Vector2d nrm = tgt.normal(j);
    for (int l = 0; l < ns; ++l) {
      const Eigen::Vector2cd g = wk.grad(tgt.s[j] - src.s[l], tgt.f[j] - src.f[l]);
      op.matrix(j, l) = w * (nrm[0] * g[0] + nrm[1] * g[1]);
    }
  }
  return op;
}

NystromOperator assemble_double_layer(Complex k, const InterfaceGrid& src,
                                      const InterfaceGrid& tgt, const QuasiPeriodicity& qp,
                                      double A) {
  WindowedGreenParams{k, qp.alpha, qp.period, A}.validate();
  const WindowedKernel wk(k, qp, A);
  const double d = qp.period;
  NystromOperator op;
  op.kind = OperatorKind::double_layer;
  op.wavenumber = k;
  op.weighted = false;

  if (same_curve(src, tgt)) {
    const int n = src.n;
    if (src.profile.is_flat()) {
      op.matrix = Matrix::Zero(n, n);
      return op;
    }
    auto L1 = [&](int j, int l) -> Complex {
      if (j == l) return {0.0, 0.0};
      const auto ni = nearest_image(src.s[j] - src.s[l], src.f[j] - src.f[l], d);
      const double cl = split_cutoff(ni.rho, d);
      if (cl == 0.0) return {0.0, 0.0};
      const Eigen::Vector2d nrm = src.normal(l);
      const double ndot = nrm[0] * ni.x1 + nrm[1] * (src.f[j] - src.f[l]);
      return -(d / (2.0 * PI)) * (k / (4.0 * PI)) * wk.j1(ni.rho) * (ndot / ni.rho) *
             std::exp(Complex{0.0, -qp.alpha * ni.m0 * d}) * cl;
    };
    auto full = [&](int j, int l) -> Complex {
      const Eigen::Vector2cd g = wk.grad(src.s[j] - src.s[l], src.f[j] - src.f[l]);
      const Eigen::Vector2d nrm = src.normal(l);
      return -(d / (2.0 * PI)) * (nrm[0] * g[0] + nrm[1] * g[1]);
    };
    auto diag = [&](int j) -> Complex {
      const double n_dot_xpp =
          (src.orientation == NormalOrientation::down ? -1.0 : 1.0) * src.fpp[j];
      const Eigen::Vector2cd g = wk.grad(0.0, 0.0, /*skip_m0=*/true);
      const Eigen::Vector2d nrm = src.normal(j);
      return (d / (2.0 * PI)) *
             (n_dot_xpp / (4.0 * PI * src.jacobian[j] * src.jacobian[j]) -
              (nrm[0] * g[0] + nrm[1] * g[1]));
    };
    op.matrix = mk_assemble(n, L1, full, diag, false);
    return op;
  }

  check_disjoint(src, tgt);
  const int nt = tgt.n, ns = src.n;
  op.matrix.resize(nt, ns);
  const double w = src.period() / ns;
#pragma omp parallel for schedule(dynamic)
  for (int j = 0; j < nt; ++j)
    for (int l = 0; l < ns; ++l) {
      const Eigen::Vector2cd g = wk.grad(tgt.s[j] - src.s[l], tgt.f[j] - src.f[l]);
      const Eigen::Vector2d nrm = src.normal(l);
      op.matrix(j, l) = -w * (nrm[0] * g[0] + nrm[1] * g[1]);
    }
  return op;
}

NystromOperator assemble_hypersingular(Complex k, const InterfaceGrid& grid,
                                       const QuasiPeriodicity& qp, double A) {
  NystromOperator op;
  op.kind = OperatorKind::hypersingular;
  op.wavenumber = k;
  op.weighted = false;
  op.reduced_order_warning = !grid.profile.is_smooth();

  const int n = grid.n;
  const Matrix Sw = assemble_single_layer(k, grid, grid, qp, A).matrix;
  const Matrix D = spectral_derivative(n, qp);
  Eigen::VectorXd inv_jac = grid.jacobian.cwiseInverse();

  // tangential part: (1/|x'|) d/ds [ S^w (d psi/ds) ]
  Matrix N = inv_jac.asDiagonal() * (D * (Sw * D)).eval();

  // k^2 nu(x).nu(y) part: sum_c diag(n_c/jac) S^w diag(n_c)
  for (int c = 0; c < 2; ++c) {
    RealVector nc(n), nc_over_jac(n);
    for (int m = 0; m < n; ++m) {
      const Eigen::Vector2d nrm = grid.normal(m);
      nc[m] = nrm[c];
      nc_over_jac[m] = nrm[c] / grid.jacobian[m];
    }
    N += (k * k) * (nc_over_jac.asDiagonal() * Sw * nc.asDiagonal()).eval();
  }
  op.matrix = std::move(N);
  return op;
}

Matrix assemble_grad_dot_cross(Complex k, const InterfaceGrid& src, const InterfaceGrid& tgt,
                               const QuasiPeriodicity& qp, double A,
                               const std::vector<Eigen::Vector2d>& dirs) {
  WindowedGreenParams{k, qp.alpha, qp.period, A}.validate();
  check_disjoint(src, tgt);
  const WindowedKernel wk(k, qp, A);
  const int nt = tgt.n, ns = src.n;
  Matrix out(nt, ns);
  const double w = src.period() / ns;
#pragma omp parallel for schedule(dynamic)
  for (int j = 0; j < nt; ++j)
    for (int l = 0; l < ns; ++l) {
      const Eigen::Vector2cd g = wk.grad(tgt.s[j] - src.s[l], tgt.f[j] - src.f[l]);
      out(j, l) = w * (dirs[j][0] * g[0] + dirs[j][1] * g[1]);
    }
  return out;
}

Matrix assemble_dl_grad_dot_cross(Complex k, const InterfaceGrid& src, const InterfaceGrid& tgt,
                                  const QuasiPeriodicity& qp, double A,
                                  const std::vector<Eigen::Vector2d>& dirs) {
  WindowedGreenParams{k, qp.alpha, qp.period, A}.validate();
  check_disjoint(src, tgt);
  const WindowedKernel wk(k, qp, A);
  const int nt = tgt.n, ns = src.n;
  Matrix out(nt, ns);
  const double w = src.period() / ns;
#pragma omp parallel for schedule(dynamic)
  for (int j = 0; j < nt; ++j)
    for (int l = 0; l < ns; ++l) {
      const Eigen::Matrix2cd H = wk.hess(tgt.s[j] - src.s[l], tgt.f[j] - src.f[l]);
      const Eigen::Vector2d nrm = src.normal(l);
      Complex acc{0.0, 0.0};
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b) acc += dirs[j][a] * H(a, b) * nrm[b];
      out(j, l) = -w * acc;
    }
  return out;
}

Complex eval_single_layer(const InterfaceGrid& src, const Vector& weighted_density, Complex k,
                          const QuasiPeriodicity& qp, double A, double x1, double x2) {
  const WindowedKernel wk(k, qp, A);
  const double w = src.period() / src.n;
  Complex acc{0.0, 0.0};
  for (int l = 0; l < src.n; ++l)
    acc += wk.value(x1 - src.s[l], x2 - src.f[l]) * weighted_density[l];
  return w * acc;
}

Complex eval_double_layer(const InterfaceGrid& src, const Vector& density, Complex k,
                          const QuasiPeriodicity& qp, double A, double x1, double x2) {
  const WindowedKernel wk(k, qp, A);
  const double w = src.period() / src.n;
  Complex acc{0.0, 0.0};
  for (int l = 0; l < src.n; ++l) {
    const Eigen::Vector2cd g = wk.grad(x1 - src.s[l], x2 - src.f[l]);
    const Eigen::Vector2d nrm = src.normal(l);
    acc += -(nrm[0] * g[0] + nrm[1] * g[1]) * density[l];
  }
  return w * acc;
}

std::shared_ptr<const Matrix> BiopsCache::get_or_build(const std::string& key,
                                                       const std::function<Matrix()>& build) {
  {
    std::lock_guard lock(mu_);
    auto it = map_.find(key);
    if (it != map_.end()) return it->second;
  }
  auto value = std::make_shared<const Matrix>(build());
  std::lock_guard lock(mu_);
  auto [it, inserted] = map_.emplace(key, value);
  return it->second;
}

size_t BiopsCache::size() const {
  std::lock_guard lock(mu_);
  return map_.size();
}

std::string operator_cache_key(const std::string& op, Complex k, const InterfaceGrid& src,
                               const InterfaceGrid& tgt, const QuasiPeriodicity& qp, double A) {
  std::ostringstream os;
  os.precision(17);
  const double ref = tgt.profile.mean_height();
  os << op << "|k=" << k.real() << "+" << k.imag() << "i|n=" << src.n << "," << tgt.n
     << "|alpha=" << qp.alpha << "|A=" << A
     << "|src=" << src.profile.shifted(-ref).signature()
     << "|srcn=" << (src.orientation == NormalOrientation::down ? "d" : "u")
     << "|tgt=" << tgt.profile.shifted(-ref).signature()
     << "|tgtn=" << (tgt.orientation == NormalOrientation::down ? "d" : "u");
  return os.str();
}

}  // namespace qopdd
