#include <doctest.h>

#include "qopdd/campaign.hpp"
#include "qopdd/post.hpp"
#include "qopdd/precond.hpp"

using namespace qopdd;

namespace {

const double TWO_PI = 2.0 * PI;

struct SolvedCase {
  BlockTridiagonalSystem system;
  Vector solution;
};

SolvedCase solve_stack(const LayerStack& stack, int n, double A, Scheme scheme,
                       double tol = 1e-9) {
  AssemblyOptions opts;
  opts.n = n;
  opts.A = A;
  opts.L = 0;
  opts.scheme = scheme;
  SolvedCase out{assemble_system(stack, opts), {}};
  auto [x, rep] = gmres([&](const Vector& v) { return out.system.apply(v); }, out.system.rhs,
                        {tol, 400, 0});
  REQUIRE(rep.converged);
  out.solution = x;
  return out;
}

LayerStack flat_two_media(double k0, double k1) {
  LayerStack stack;
  stack.qp = {0.0, TWO_PI};
  stack.profiles = {GratingProfile::flat(0.0, TWO_PI)};
  stack.wavenumbers = {k0, k1};
  return stack;
}

}  // namespace

TEST_CASE("flat interface reproduces the Fresnel coefficients") {
  const double k0 = 1.3, k1 = 4.3;
  const auto c = solve_stack(flat_two_media(k0, k1), 64, 480.0, Scheme::layer_semi);
  const auto e = rayleigh_amplitudes(c.system, c.solution);
  const double r = (k0 - k1) / (k0 + k1), t = 2.0 * k0 / (k0 + k1);
  CHECK(std::abs(e.up.at(0) - r) <= 1e-6);
  CHECK(std::abs(e.down.at(0) - t) <= 1e-6);
  CHECK(energy_balance(e, c.system.stack) <= 1e-8);
}

TEST_CASE("homogeneous medium transmits the plane wave unchanged") {
  const auto c = solve_stack(flat_two_media(1.3, 1.3), 64, 480.0, Scheme::layer_semi);
  const auto e = rayleigh_amplitudes(c.system, c.solution);
  CHECK(std::abs(e.down.at(0) - 1.0) <= 1e-6);
  for (const auto& [r, amp] : e.up) {
    // skip strongly evanescent orders whose extraction amplifies roundoff
    const Complex br = beta_symbol(Complex{1.3, 0.0}, c.system.stack.qp.alpha_r(r));
    if (br.imag() * 0.5 > 7.0) continue;
    CHECK(std::abs(amp) <= 1e-6);
  }
  for (const auto& [r, amp] : e.down) {
    if (r == 0) continue;
    const Complex br = beta_symbol(Complex{1.3, 0.0}, c.system.stack.qp.alpha_r(r));
    if (br.imag() * 0.5 > 7.0) continue;
    CHECK(std::abs(amp) <= 1e-6);
  }
  CHECK(energy_balance(e, c.system.stack) <= 1e-6);
}

TEST_CASE("amplitude extraction is independent of the line height") {
  const auto c = solve_stack(flat_two_media(1.3, 4.3), 64, 480.0, Scheme::layer_semi);
  const auto e1 = rayleigh_amplitudes(c.system, c.solution, 0.5);
  const auto e2 = rayleigh_amplitudes(c.system, c.solution, 1.0);
  CHECK(std::abs(e1.up.at(0) - e2.up.at(0)) <= 1e-7);
  CHECK(std::abs(e1.down.at(0) - e2.down.at(0)) <= 1e-7);
}

TEST_CASE("reconstructed fields satisfy the evaluator contracts") {
  LayerStack stack;
  stack.qp = {0.0, TWO_PI};
  stack.profiles = {GratingProfile::cosine_series(0.0, 0.02, {2.5}, {}, TWO_PI),
                    GratingProfile::cosine_series(-3.3, 0.02, {2.5}, {}, TWO_PI)};
  stack.wavenumbers = {1.3, 4.3, 16.3};
  const auto c = solve_stack(stack, 64, 120.0, Scheme::layer_semi);

  // zero Robin data reconstructs the zero field
  CHECK(std::abs(reconstruct_field(c.system, Vector::Zero(c.system.dim()), 1, 1.0, -1.5)) ==
        0.0);

  // periodicity of the reconstructed field at normal incidence
  const Complex u1 = reconstruct_field(c.system, c.solution, 1, 1.0, -1.5);
  const Complex u2 = reconstruct_field(c.system, c.solution, 1, 1.0 + TWO_PI, -1.5);
  CHECK(std::abs(u1 - u2) <= 1e-10 * std::abs(u1));

  // out-of-subdomain and near-boundary guards
  CHECK_THROWS_AS(reconstruct_field(c.system, c.solution, 1, 1.0, 5.0), numerical_error);
  CHECK_THROWS_AS(reconstruct_field(c.system, c.solution, 1, 0.0, 0.02), numerical_error);
}

TEST_CASE("field reconstruction matches the scattered wave in the top domain") {
  // Fresnel case: scattered field above is the reflected plane wave
  const double k0 = 1.3, k1 = 4.3;
  const auto c = solve_stack(flat_two_media(k0, k1), 64, 480.0, Scheme::layer_semi);
  const double r = (k0 - k1) / (k0 + k1);
  for (double x2 : {0.7, 1.9}) {
    const Complex u = reconstruct_field(c.system, c.solution, 0, 1.1, x2);
    const Complex exact = r * std::exp(I * k0 * x2);
    CHECK(std::abs(u - exact) <= 1e-6);
  }
}

TEST_CASE("energy balance rejects grazing incidence") {
  RayleighExpansion e;
  e.beta00 = 1e-12;
  LayerStack stack = flat_two_media(1.3, 4.3);
  CHECK_THROWS_AS(energy_balance(e, stack), numerical_error);
}

TEST_CASE("efficiency spectrum is symmetric under flipping the Bloch phase") {
  LayerStack stack;
  stack.qp = {0.3, TWO_PI};
  stack.profiles = {GratingProfile::cosine_series(0.0, 0.3, {2.5}, {}, TWO_PI)};
  stack.wavenumbers = {2.5, 4.5};
  const auto cp = solve_stack(stack, 64, 240.0, Scheme::layer_semi);
  const auto ep = rayleigh_amplitudes(cp.system, cp.solution);
  // Bloch-phase relation of the reconstructed field over one period
  const Complex u1 = reconstruct_field(cp.system, cp.solution, 0, 1.0, 2.0);
  const Complex u2 = reconstruct_field(cp.system, cp.solution, 0, 1.0 + 2.0 * PI, 2.0);
  CHECK(std::abs(u2 - u1 * std::exp(I * 0.3 * 2.0 * PI)) <= 1e-6 * std::abs(u1));

  stack.qp.alpha = -0.3;
  const auto cm = solve_stack(stack, 64, 240.0, Scheme::layer_semi);
  const auto em = rayleigh_amplitudes(cm.system, cm.solution);
  // symmetric profile: order r at +alpha pairs with order -r at -alpha
  auto effp = efficiencies_up(ep, cp.system.stack);
  auto effm = efficiencies_up(em, cm.system.stack);
  REQUIRE(effp.size() == effm.size());
  for (const auto& [r, val] : effp) {
    bool found = false;
    for (const auto& [rm, vm] : effm)
      if (rm == -r) {
        CHECK(val == doctest::Approx(vm).epsilon(1e-5));
        found = true;
      }
    CHECK(found);
  }
}
