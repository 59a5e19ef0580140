#include "qopdd/krylov.hpp"

#include <cmath>

namespace qopdd {

namespace {

struct GivensRotation {
  Complex c;
  Complex s;
};

std::pair<Vector, SolveReport> gmres_cycle(const LinearOp& op, const Vector& b, Vector x0,
                                           double rel_tol, int max_iter, double bnorm) {
  SolveReport report;
  const int dim = static_cast<int>(b.size());
  Vector r = b - (x0.isZero(0) ? Vector(Vector::Zero(dim)) : Vector(op(x0)));
  const double r0 = r.norm();
  report.residual_history.push_back(r0 / bnorm);
  if (r0 / bnorm <= rel_tol) {
    report.converged = true;
    return {x0, report};
  }

  std::vector<Vector> V;
  V.reserve(max_iter + 1);
  V.push_back(r / r0);
  Matrix H = Matrix::Zero(max_iter + 1, max_iter);
  std::vector<GivensRotation> rot;
  Vector g = Vector::Zero(max_iter + 1);
  g[0] = r0;

  int k = 0;
  for (; k < max_iter; ++k) {
    Vector w = op(V[k]);
    // Modified Gram-Schmidt with one reorthogonalization pass.
    for (int pass = 0; pass < 2; ++pass)
      for (int i = 0; i <= k; ++i) {
        const Complex h = V[i].dot(w);
        w -= h * V[i];
        H(i, k) += h;
      }
    const double hnext = w.norm();
    H(k + 1, k) = hnext;
    if (hnext > 0) V.push_back(w / hnext);

    for (int i = 0; i < k; ++i) {
      const Complex t = std::conj(rot[i].c) * H(i, k) + std::conj(rot[i].s) * H(i + 1, k);
      H(i + 1, k) = -rot[i].s * H(i, k) + rot[i].c * H(i + 1, k);
      H(i, k) = t;
    }
    const Complex a = H(k, k);
    const double hb = H(k + 1, k).real();
    const double denom = std::sqrt(std::norm(a) + hb * hb);
    GivensRotation gr;
    if (denom == 0.0) {
      gr.c = 1.0;
      gr.s = 0.0;
    } else {
      gr.c = a / denom;
      gr.s = hb / denom;
    }
    rot.push_back(gr);
    H(k, k) = std::conj(gr.c) * a + std::conj(gr.s) * hb;
    H(k + 1, k) = 0.0;
    const Complex gk = g[k];
    g[k] = std::conj(gr.c) * gk;
    g[k + 1] = -gr.s * gk;

    const double res = std::abs(g[k + 1]) / bnorm;
    report.residual_history.push_back(res);
    if (res <= rel_tol || hnext == 0.0) {
      ++k;
      report.converged = res <= rel_tol;
      break;
    }
  }
  report.iterations = k;

  // Back-substitute the triangular system for the minimizer.
  Vector y = Vector::Zero(k);
  for (int i = k - 1; i >= 0; --i) {
    Complex acc = g[i];
    for (int j = i + 1; j < k; ++j) acc -= H(i, j) * y[j];
    y[i] = acc / H(i, i);
  }
  Vector x = x0;
  for (int i = 0; i < k; ++i) x += y[i] * V[i];
  return {x, report};
}

}  // namespace

std::pair<Vector, SolveReport> gmres(const LinearOp& op, const Vector& b,
                                     const GmresConfig& cfg) {
  if (!(cfg.rel_tol > 0.0 && cfg.rel_tol < 1.0))
    throw config_error("gmres: rel_tol must lie in (0, 1)");
  const double bnorm = b.norm();
  if (bnorm == 0.0) {
    SolveReport report;
    report.converged = true;
    report.residual_history.push_back(0.0);
    return {Vector::Zero(b.size()), report};
  }
  if (cfg.restart <= 0)
    return gmres_cycle(op, b, Vector::Zero(b.size()), cfg.rel_tol, cfg.max_iter, bnorm);

  Vector x = Vector::Zero(b.size());
  SolveReport total;
  int remaining = cfg.max_iter;
  while (remaining > 0) {
    auto [xc, rep] = gmres_cycle(op, b, x, cfg.rel_tol, std::min(cfg.restart, remaining), bnorm);
    x = xc;
    total.iterations += rep.iterations;
    for (size_t i = total.residual_history.empty() ? 0 : 1; i < rep.residual_history.size(); ++i)
      total.residual_history.push_back(rep.residual_history[i]);
    if (total.residual_history.empty() && !rep.residual_history.empty())
      total.residual_history.push_back(rep.residual_history.front());
    total.converged = rep.converged;
    if (rep.converged || rep.iterations == 0) break;
    remaining -= rep.iterations;
  }
  return {x, total};
}

}  // namespace qopdd
