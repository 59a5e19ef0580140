#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "qopdd/dtn.hpp"
#include "qopdd/rtr.hpp"

using namespace qopdd;

namespace {

const double TWO_PI = 2.0 * PI;
const QuasiPeriodicity QP0{0.0, TWO_PI};

Matrix mode_symbols(const Matrix& M, int n) {
  return trig_forward(n, QP0) * M * trig_inverse(n, QP0);
}

/// operator max-entry over the resolved mode band |r|, |r'| <= band
/// (near-Nyquist evanescent modes amplify quadrature noise by beta_r ~ n and
/// carry no physical content).
double band_max(const Matrix& M, int n, int band) {
  const Matrix sym = mode_symbols(M, n);
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    if (std::abs(mode_of_slot(i, n)) > band) continue;
    for (int j = 0; j < n; ++j) {
      if (std::abs(mode_of_slot(j, n)) > band) continue;
      worst = std::max(worst, std::abs(sym(i, j)));
    }
  }
  return worst;
}

}  // namespace

TEST_CASE("flat semi-infinite RtR vanishes for the exact half-space impedance") {
  const int n = 128;
  const double k = 1.3;
  // sigma = 0: the multiplier -i beta_D(k) is the exact DtN of the domain
  const Matrix Z = (-I * beta_multiplier(Complex{k, 0.0}, QP0, n).as_matrix()).eval();
  // flat self-interactions assemble on the circulant fast path, so a very
  // large window is cheap; transparency is limited by the windowed-kernel error
  const auto rtr = rtr_semi_infinite(Complex{k, 0.0}, GratingProfile::flat(0.0, TWO_PI), true,
                                     Z, Z, QP0, n, 7680.0);
  CHECK(band_max(rtr.single, n, n / 3) <= 1e-6);
}

TEST_CASE("flat semi-infinite RtR matches the half-space symbol with complexified Z") {
  const int n = 64;
  const double k = 1.5;  // half a unit away from the nearest Wood mode
  const double sigma = 0.5;
  const Matrix Z = flat_transmission(k, sigma, QP0, n).mat;
  const auto rtr = rtr_semi_infinite(Complex{k, 0.0}, GratingProfile::flat(0.0, TWO_PI), true,
                                     Z, Z, QP0, n, 960.0);
  const Matrix sym = mode_symbols(rtr.single, n);
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    const int r = mode_of_slot(i, n);
    if (std::abs(r) > 12) continue;
    const Complex z = -I * beta_symbol(Complex{k, sigma}, QP0.alpha_r(r));
    const Complex exact = oracle::halfspace_rtr_symbol(Complex{k, 0.0}, QP0.alpha_r(r), z, z);
    worst = std::max(worst, std::abs(sym(i, i) - exact));
  }
  CHECK(worst <= 1e-6);
}

TEST_CASE("semi-infinite RtR reproduces exact Robin data of a point-source field") {
  const int n = 96;
  const double k = 1.5, sigma = 0.5, A = 960.0;
  const auto prof = GratingProfile::cosine_series(0.0, 0.02, {2.5}, {}, TWO_PI);
  const Matrix Z = flat_transmission(k, sigma, QP0, n).mat;
  const auto rtr = rtr_semi_infinite(Complex{k, 0.0}, prof, true, Z, Z, QP0, n, A);

  auto grid = build_grid(prof, n, NormalOrientation::down);
  const oracle::PointSource src{Complex{k, 0.0}, 0.0, TWO_PI, 4000.0, 2.9, -2.0};
  Vector u(n), du(n);
  for (int m = 0; m < n; ++m) {
    u[m] = src.value(grid.s[m], grid.f[m]);
    const auto g = src.gradient(grid.s[m], grid.f[m]);
    const auto nn = grid.normal(m);
    du[m] = nn[0] * g[0] + nn[1] * g[1];
  }
  const Vector g_in = du + Z * u;
  const Vector out_exact = du - Z * u;
  const Vector out = rtr.single * g_in;
  CHECK((out - out_exact).cwiseAbs().maxCoeff() / out_exact.cwiseAbs().maxCoeff() <= 2e-6);
}

TEST_CASE("interior solve residual of the RtR systems is at the LU level") {
  const int n = 64;
  const double k = 1.3;
  const auto prof = GratingProfile::cosine_series(0.0, 0.1, {2.5}, {}, TWO_PI);
  const Matrix Z = flat_transmission(k, 0.5, QP0, n).mat;
  const auto rtr = rtr_semi_infinite(Complex{k, 0.0}, prof, true, Z, Z, QP0, n, 120.0);
  Vector g(n);
  for (int m = 0; m < n; ++m) g[m] = std::exp(Complex{0.0, TWO_PI * m / n});
  const Vector phi = rtr.field->solve_densities(g);
  // reconstruct M phi via the LU factors to check the solve residual
  const Matrix M = rtr.field->interior_lu.reconstructedMatrix();
  CHECK((M * phi - g).norm() / g.norm() <= 1e-12);
}

TEST_CASE("wide flat slab with absorbing wavenumber decouples its boundaries") {
  const int n = 64;
  const Complex k{2.3, 0.4};
  const double h = 20.0;
  const Matrix Zt = flat_transmission(2.3, 0.5, QP0, n).mat;
  const auto rtr = rtr_layer(k, GratingProfile::flat(0.0, TWO_PI),
                             GratingProfile::flat(-h, TWO_PI), Zt, Zt, Zt, Zt, QP0, n, 120.0);
  // off-diagonal blocks carry exp(-h Im beta) ~ 3e-4 at Im k = 0.4... use norms
  CHECK(rtr.tb.cwiseAbs().maxCoeff() <= 1e-3);
  CHECK(rtr.bt.cwiseAbs().maxCoeff() <= 1e-3);
  CHECK(rtr.tb.cwiseAbs().maxCoeff() < 1e-2 * rtr.tt.cwiseAbs().maxCoeff() + 1e-3);
}

TEST_CASE("flat slab with exact impedances is transparent and mirror symmetric") {
  const int n = 128;
  const double k = 2.3, h = 2.0;
  const Matrix Zexact = (-I * beta_multiplier(Complex{k, 0.0}, QP0, n).as_matrix()).eval();
  const auto rtr = rtr_layer(Complex{k, 0.0}, GratingProfile::flat(0.0, TWO_PI),
                             GratingProfile::flat(-h, TWO_PI), Zexact, Zexact, Zexact,
                             Zexact, QP0, n, 7680.0);
  CHECK(band_max(rtr.tt, n, n / 3) <= 1e-6);
  CHECK(band_max(rtr.bb, n, n / 3) <= 1e-6);
  // mirror symmetry for identical flat boundaries and symmetric impedances
  const Matrix Zs = flat_transmission(k, 0.5, QP0, n).mat;
  const auto r2 = rtr_layer(Complex{k, 0.0}, GratingProfile::flat(0.0, TWO_PI),
                            GratingProfile::flat(-h, TWO_PI), Zs, Zs, Zs, Zs, QP0, n, 480.0);
  CHECK((r2.tt - r2.bb).cwiseAbs().maxCoeff() <= 1e-10);
  CHECK((r2.tb - r2.bt).cwiseAbs().maxCoeff() <= 1e-10);
}

TEST_CASE("layer RtR reproduces exact Robin data of a point-source field") {
  const int n = 96;
  const double k = 3.5, A = 960.0;
  const auto top = GratingProfile::cosine_series(0.0, 0.02, {2.5}, {}, TWO_PI);
  const auto bot = GratingProfile::cosine_series(-3.3, 0.02, {2.5}, {}, TWO_PI);
  const Matrix Zt = flat_transmission(k, 0.8, QP0, n).mat;
  const Matrix Zb = flat_transmission(k, 0.6, QP0, n).mat;
  const auto rtr = rtr_layer(Complex{k, 0.0}, top, bot, Zt, Zt, Zb, Zb, QP0, n, A);
  auto gt = build_grid(top, n, NormalOrientation::up);
  auto gb = build_grid(bot, n, NormalOrientation::down);
  const oracle::PointSource src{Complex{k, 0.0}, 0.0, TWO_PI, 4000.0, 1.0, 4.0};
  Vector g_in(2 * n), out_exact(2 * n);
  for (int m = 0; m < n; ++m) {
    const Complex ut = src.value(gt.s[m], gt.f[m]);
    const auto g1 = src.gradient(gt.s[m], gt.f[m]);
    const auto n1 = gt.normal(m);
    const Complex dut = n1[0] * g1[0] + n1[1] * g1[1];
    const Complex ub = src.value(gb.s[m], gb.f[m]);
    const auto g2 = src.gradient(gb.s[m], gb.f[m]);
    const auto n2 = gb.normal(m);
    const Complex dub = n2[0] * g2[0] + n2[1] * g2[1];
    g_in[m] = dut;
    g_in[n + m] = dub;
    out_exact[m] = dut;
    out_exact[n + m] = dub;
  }
  Vector ut_vec(n), ub_vec(n);
  for (int m = 0; m < n; ++m) {
    ut_vec[m] = src.value(gt.s[m], gt.f[m]);
    ub_vec[m] = src.value(gb.s[m], gb.f[m]);
  }
  g_in.head(n) += Zt * ut_vec;
  g_in.tail(n) += Zb * ub_vec;
  out_exact.head(n) -= Zt * ut_vec;
  out_exact.tail(n) -= Zb * ub_vec;

  Matrix R(2 * n, 2 * n);
  R.topLeftCorner(n, n) = rtr.tt;
  R.topRightCorner(n, n) = rtr.tb;
  R.bottomLeftCorner(n, n) = rtr.bt;
  R.bottomRightCorner(n, n) = rtr.bb;
  const Vector out = R * g_in;
  CHECK((out - out_exact).cwiseAbs().maxCoeff() / out_exact.cwiseAbs().maxCoeff() <= 2e-6);
}

TEST_CASE("strip RtR with equal media reduces to the homogeneous strip map") {
  const int n = 64;
  const double k = 2.5, c_top = 1.0, c_bot = -1.2, A = 960.0;
  const Matrix Z = flat_transmission(k, 0.5, QP0, n).mat;
  const auto inhom = rtr_strip(Complex{k, 0.0}, Complex{k, 0.0},
                               GratingProfile::cosine_series(-0.1, 0.05, {2.5}, {}, TWO_PI),
                               c_top, c_bot, Z, Z, Z, Z, QP0, n, A);
  const auto hom = rtr_layer(Complex{k, 0.0}, GratingProfile::flat(c_top, TWO_PI),
                             GratingProfile::flat(c_bot, TWO_PI), Z, Z, Z, Z, QP0, n, A);
  const double err = std::max({(inhom.tt - hom.tt).cwiseAbs().maxCoeff(),
                               (inhom.tb - hom.tb).cwiseAbs().maxCoeff(),
                               (inhom.bt - hom.bt).cwiseAbs().maxCoeff(),
                               (inhom.bb - hom.bb).cwiseAbs().maxCoeff()});
  CHECK(err <= 2e-7);
}

TEST_CASE("strip RtR with a flat internal interface matches the transfer-matrix oracle") {
  const int n = 64;
  const double ku = 1.5, kl = 3.5, c_top = 1.0, c_bot = -1.2, y0 = -0.1, A = 1920.0;
  const Matrix Zt = flat_transmission(ku, 0.5, QP0, n).mat;
  const Matrix Zb = flat_transmission(kl, 0.8, QP0, n).mat;
  const auto rtr = rtr_strip(Complex{ku, 0.0}, Complex{kl, 0.0},
                             GratingProfile::flat(y0, TWO_PI), c_top, c_bot, Zt, Zt, Zb, Zb,
                             QP0, n, A);
  const Matrix tt = mode_symbols(rtr.tt, n), tb = mode_symbols(rtr.tb, n);
  const Matrix bt = mode_symbols(rtr.bt, n), bb = mode_symbols(rtr.bb, n);
  double worst = 0.0;
  for (int i = 0; i < n; ++i) {
    const int r = mode_of_slot(i, n);
    if (std::abs(r) > 10) continue;
    const double ar = QP0.alpha_r(r);
    const Complex zt = -I * beta_symbol(Complex{ku, 0.5}, ar);
    const Complex zb = -I * beta_symbol(Complex{kl, 0.8}, ar);
    const auto ex = oracle::strip_rtr_symbol_two_media(Complex{ku, 0.0}, Complex{kl, 0.0}, y0,
                                                       ar, c_top, c_bot, zt, zb);
    worst = std::max({worst, std::abs(tt(i, i) - ex.tt), std::abs(tb(i, i) - ex.tb),
                      std::abs(bt(i, i) - ex.bt), std::abs(bb(i, i) - ex.bb)});
  }
  CHECK(worst <= 1e-6);
}

TEST_CASE("strip RtR responses decay over high-order incoming modes") {
  const int n = 64;
  const double ku = 1.3, kl = 4.3, c_top = 1.0, c_bot = -1.3;
  const Matrix Zt = flat_transmission(ku, 0.5, QP0, n).mat;
  const Matrix Zb = flat_transmission(kl, 0.8, QP0, n).mat;
  const auto rtr = rtr_strip(Complex{ku, 0.0}, Complex{kl, 0.0},
                             GratingProfile::cosine_series(-0.15, 0.1, {2.5}, {}, TWO_PI),
                             c_top, c_bot, Zt, Zt, Zb, Zb, QP0, n, 120.0);
  Matrix R(2 * n, 2 * n);
  R.topLeftCorner(n, n) = rtr.tt;
  R.topRightCorner(n, n) = rtr.tb;
  R.bottomLeftCorner(n, n) = rtr.bt;
  R.bottomRightCorner(n, n) = rtr.bb;
  auto response = [&](int r) {
    Vector e(2 * n);
    for (int m = 0; m < n; ++m) {
      e[m] = std::exp(Complex{0.0, QP0.alpha_r(r) * (TWO_PI * m / n)});
      e[n + m] = 0.0;
    }
    return (R * e).cwiseAbs().maxCoeff();
  };
  const double r8 = response(8), r12 = response(12), r16 = response(16), r20 = response(20);
  CHECK(r12 < r8);
  CHECK(r16 < r12);
  CHECK(r20 < r16);
}
