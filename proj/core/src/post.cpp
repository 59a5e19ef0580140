#include "qopdd/post.hpp"

#include <cmath>

namespace qopdd {

namespace {

struct ExtractionLines {
  double up, down;
};

ExtractionLines extraction_lines(const BlockTridiagonalSystem& sys, double off) {
  if (sys.scheme == Scheme::strip) return {sys.cuts.front() + off, sys.cuts.back() - off};
  return {sys.stack.profiles.front().extrema().second + off,
          sys.stack.profiles.back().extrema().first - off};
}

}  // namespace

Complex reconstruct_field(const BlockTridiagonalSystem& system, const Vector& solution,
                          int subdomain, double x1, double x2, double h_min) {
  if (subdomain < 0 || subdomain > system.P)
    throw config_error("subdomain index out of range");
  const auto& field = *system.fields[subdomain];
  if (!field.contains(x1, x2))
    throw numerical_error("evaluation point outside the subdomain");
  // Near-boundary guard: shifted points must stay inside (no singularity-swap
  // evaluation close to the sources).
  if (!field.contains(x1, x2 + h_min) || !field.contains(x1, x2 - h_min))
    throw numerical_error("evaluation point too close to a boundary");
  const Vector dens = field.solve_densities(system.subdomain_incoming(solution, subdomain));
  return field.eval(dens, x1, x2);
}

RayleighExpansion rayleigh_amplitudes(const BlockTridiagonalSystem& system,
                                      const Vector& solution, double line_offset) {
  const auto& stack = system.stack;
  const auto& qp = stack.qp;
  const int n = system.n;
  const double d = qp.period;
  const auto lines = extraction_lines(system, line_offset);

  RayleighExpansion out;
  out.beta00 = qp.incidence_beta(stack.wavenumbers.front()).real();

  const auto eval_line = [&](int subdomain, double y) {
    const auto& field = *system.fields[subdomain];
    const Vector dens = field.solve_densities(system.subdomain_incoming(solution, subdomain));
    Vector v(n);
    for (int m = 0; m < n; ++m) v[m] = field.eval(dens, d * m / n, y);
    return v;
  };

  const Vector up_line = eval_line(0, lines.up);
  const Vector down_line = eval_line(system.P, lines.down);

  const double k_up = stack.wavenumbers.front();
  const double k_dn = stack.wavenumbers.back();
  for (int slot = 0; slot < n; ++slot) {
    const int r = slot - n / 2;
    const double ar = qp.alpha_r(r);
    Complex cu{0.0, 0.0}, cd{0.0, 0.0};
    for (int m = 0; m < n; ++m) {
      const Complex ph = std::exp(Complex{0.0, -ar * d * m / n});
      cu += up_line[m] * ph;
      cd += down_line[m] * ph;
    }
    cu /= double(n);
    cd /= double(n);
    const Complex bu = beta_symbol(Complex{k_up, 0.0}, ar);
    const Complex bd = beta_symbol(Complex{k_dn, 0.0}, ar);
    out.up[r] = cu * std::exp(-I * bu * lines.up);
    out.down[r] = cd * std::exp(I * bd * lines.down);
    if (bu.imag() == 0.0 && bu.real() > 0.0) out.propagating_up.push_back(r);
    if (bd.imag() == 0.0 && bd.real() > 0.0) out.propagating_down.push_back(r);
  }
  return out;
}

double energy_balance(const RayleighExpansion& e, const LayerStack& stack) {
  for (double k : stack.wavenumbers)
    if (!(k > 0)) throw config_error("energy balance requires real positive wavenumbers");
  if (std::abs(e.beta00) < 1e-8 * stack.wavenumbers.front())
    throw numerical_error("energy balance undefined at grazing incidence");
  const auto& qp = stack.qp;
  double acc = 1.0;
  for (int r : e.propagating_up) {
    const double br = beta_symbol(Complex{stack.wavenumbers.front(), 0.0}, qp.alpha_r(r)).real();
    acc -= (br / e.beta00) * std::norm(e.up.at(r));
  }
  for (int r : e.propagating_down) {
    const double br = beta_symbol(Complex{stack.wavenumbers.back(), 0.0}, qp.alpha_r(r)).real();
    acc -= (br / e.beta00) * std::norm(e.down.at(r));
  }
  return std::abs(acc);
}

std::vector<std::pair<int, double>> efficiencies_up(const RayleighExpansion& e,
                                                    const LayerStack& stack) {
  std::vector<std::pair<int, double>> out;
  for (int r : e.propagating_up) {
    const double br =
        beta_symbol(Complex{stack.wavenumbers.front(), 0.0}, stack.qp.alpha_r(r)).real();
    out.emplace_back(r, (br / e.beta00) * std::norm(e.up.at(r)));
  }
  return out;
}

std::vector<std::pair<int, double>> efficiencies_down(const RayleighExpansion& e,
                                                      const LayerStack& stack) {
  std::vector<std::pair<int, double>> out;
  for (int r : e.propagating_down) {
    const double br =
        beta_symbol(Complex{stack.wavenumbers.back(), 0.0}, stack.qp.alpha_r(r)).real();
    out.emplace_back(r, (br / e.beta00) * std::norm(e.down.at(r)));
  }
  return out;
}

}  // namespace qopdd
