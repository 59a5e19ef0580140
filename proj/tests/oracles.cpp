#include "oracles.hpp"

#include "qopdd/fourier.hpp"
#include "qopdd/qpgreen.hpp"

namespace qopdd::oracle {

Complex beta(Complex k, double alpha_r) { return beta_symbol(k, alpha_r); }

Complex halfspace_rtr_symbol(Complex k, double alpha_r, Complex z_in, Complex z_out) {
  const Complex b = beta(k, alpha_r);
  return (b - I * z_out) / (b + I * z_in);
}

FlatStackSolution flat_stack_modes(const std::vector<double>& ks,
                                   const std::vector<double>& heights, double alpha_r) {
  const int J = static_cast<int>(heights.size());
  if (static_cast<int>(ks.size()) != J + 1) throw std::invalid_argument("flat_stack_modes sizes");
  std::vector<Complex> betas(J + 1);
  for (int j = 0; j <= J; ++j) betas[j] = beta(Complex{ks[j], 0.0}, alpha_r);

  // Unknown layout: [b_0, a_1, b_1, ..., a_{J-1}, b_{J-1}, a_J].
  const int dim = 2 * J;
  Matrix M = Matrix::Zero(dim, dim);
  Vector rhs = Vector::Zero(dim);
  auto a_idx = [&](int j) { return 2 * j - 1; };  // valid for 1 <= j <= J
  auto b_idx = [&](int j) { return j == 0 ? 0 : 2 * j; };  // valid for 0 <= j <= J-1

  for (int j = 0; j < J; ++j) {
    const double h = heights[j];
    const Complex eu_m = std::exp(-I * betas[j] * h), eu_p = std::exp(I * betas[j] * h);
    const Complex el_m = std::exp(-I * betas[j + 1] * h), el_p = std::exp(I * betas[j + 1] * h);
    const int row_v = 2 * j, row_d = 2 * j + 1;
    // value continuity
    if (j == 0) rhs[row_v] -= eu_m;  // a_0 = 1 contribution moved right
    else M(row_v, a_idx(j)) += eu_m;
    M(row_v, b_idx(j)) += eu_p;
    M(row_v, a_idx(j + 1)) -= el_m;
    if (j + 1 < J) M(row_v, b_idx(j + 1)) -= el_p;
    // d/dx2 continuity
    if (j == 0) rhs[row_d] -= -I * betas[0] * eu_m;
    else M(row_d, a_idx(j)) += -I * betas[j] * eu_m;
    M(row_d, b_idx(j)) += I * betas[j] * eu_p;
    M(row_d, a_idx(j + 1)) -= -I * betas[j + 1] * el_m;
    if (j + 1 < J) M(row_d, b_idx(j + 1)) -= I * betas[j + 1] * el_p;
  }
  rhs = -rhs;
  const Vector x = M.partialPivLu().solve(rhs);

  FlatStackSolution sol;
  sol.a.resize(J + 1);
  sol.b.resize(J + 1);
  sol.a[0] = 1.0;
  sol.b[0] = x[0];
  for (int j = 1; j < J; ++j) {
    sol.a[j] = x[a_idx(j)];
    sol.b[j] = x[b_idx(j)];
  }
  sol.a[J] = x[a_idx(J)];
  sol.b[J] = 0.0;
  return sol;
}

namespace {

struct ModeField {
  Complex a, b, bta;
  Complex value(double y) const {
    return a * std::exp(-I * bta * y) + b * std::exp(I * bta * y);
  }
  Complex dvalue(double y) const {
    return -I * bta * a * std::exp(-I * bta * y) + I * bta * b * std::exp(I * bta * y);
  }
};

}  // namespace

StripRtRSymbols strip_rtr_symbol_homogeneous(Complex k, double alpha_r, double c_top,
                                             double c_bot, Complex z_t, Complex z_b) {
  const Complex bta = beta(k, alpha_r);
  auto solve = [&](Complex g_t, Complex g_b) {
    Matrix M(2, 2);
    Vector rhs(2);
    // (d/dx2 + z_t) v = g_t at c_top; (-d/dx2 + z_b) v = g_b at c_bot
    M(0, 0) = (-I * bta + z_t) * std::exp(-I * bta * c_top);
    M(0, 1) = (I * bta + z_t) * std::exp(I * bta * c_top);
    M(1, 0) = (I * bta + z_b) * std::exp(-I * bta * c_bot);
    M(1, 1) = (-I * bta + z_b) * std::exp(I * bta * c_bot);
    rhs << g_t, g_b;
    const Vector x = M.partialPivLu().solve(rhs);
    return ModeField{x[0], x[1], bta};
  };
  auto outgoing = [&](const ModeField& f) {
    return std::pair<Complex, Complex>{f.dvalue(c_top) - z_t * f.value(c_top),
                                       -f.dvalue(c_bot) - z_b * f.value(c_bot)};
  };
  const auto f1 = solve(1.0, 0.0);
  const auto f2 = solve(0.0, 1.0);
  const auto [tt, bt] = outgoing(f1);
  const auto [tb, bb] = outgoing(f2);
  return {tt, tb, bt, bb};
}

StripRtRSymbols strip_rtr_symbol_two_media(Complex k_above, Complex k_below, double y0,
                                           double alpha_r, double c_top, double c_bot,
                                           Complex z_t, Complex z_b) {
  const Complex bu = beta(k_above, alpha_r), bl = beta(k_below, alpha_r);
  auto solve = [&](Complex g_t, Complex g_b) {
    Matrix M = Matrix::Zero(4, 4);
    Vector rhs = Vector::Zero(4);
    // unknowns [a_u, b_u, a_l, b_l]
    auto em = [&](Complex b, double y) { return std::exp(-I * b * y); };
    auto ep = [&](Complex b, double y) { return std::exp(I * b * y); };
    M(0, 0) = (-I * bu + z_t) * em(bu, c_top);
    M(0, 1) = (I * bu + z_t) * ep(bu, c_top);
    M(1, 2) = (I * bl + z_b) * em(bl, c_bot);
    M(1, 3) = (-I * bl + z_b) * ep(bl, c_bot);
    // continuity at y0
    M(2, 0) = em(bu, y0);
    M(2, 1) = ep(bu, y0);
    M(2, 2) = -em(bl, y0);
    M(2, 3) = -ep(bl, y0);
    M(3, 0) = -I * bu * em(bu, y0);
    M(3, 1) = I * bu * ep(bu, y0);
    M(3, 2) = I * bl * em(bl, y0);
    M(3, 3) = -I * bl * ep(bl, y0);
    rhs << g_t, g_b, 0.0, 0.0;
    const Vector x = M.partialPivLu().solve(rhs);
    return std::pair<ModeField, ModeField>{{x[0], x[1], bu}, {x[2], x[3], bl}};
  };
  auto outgoing = [&](const std::pair<ModeField, ModeField>& f) {
    return std::pair<Complex, Complex>{
        f.first.dvalue(c_top) - z_t * f.first.value(c_top),
        -f.second.dvalue(c_bot) - z_b * f.second.value(c_bot)};
  };
  const auto f1 = solve(1.0, 0.0);
  const auto f2 = solve(0.0, 1.0);
  const auto [tt, bt] = outgoing(f1);
  const auto [tb, bb] = outgoing(f2);
  return {tt, tb, bt, bb};
}

Complex PointSource::value(double x1, double x2) const {
  return windowed_qp_green({k, alpha, period, window}, x1 - y1, x2 - y2);
}

Eigen::Vector2cd PointSource::gradient(double x1, double x2) const {
  return windowed_qp_green_grad({k, alpha, period, window}, x1 - y1, x2 - y2);
}

}  // namespace qopdd::oracle
