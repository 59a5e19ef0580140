#include "qopdd/rtr.hpp"

#include <cmath>

namespace qopdd {

namespace {

void check_interior_conditioning(const Eigen::PartialPivLU<Matrix>& lu, const char* what) {
  const auto diag = lu.matrixLU().diagonal();
  double lo = std::numeric_limits<double>::max(), hi = 0.0;
  for (Eigen::Index i = 0; i < diag.size(); ++i) {
    const double a = std::abs(diag[i]);
    lo = std::min(lo, a);
    hi = std::max(hi, a);
  }
  if (!(lo > 0.0) || hi / lo > 1e12)
    throw numerical_error(std::string(what) +
                          ": interior system numerically singular (ill-posed configuration)");
}

std::shared_ptr<const Matrix> cached(BiopsCache* cache, const std::string& key,
                                     const std::function<Matrix()>& build) {
  if (!cache) return std::make_shared<const Matrix>(build());
  return cache->get_or_build(key, build);
}

std::vector<Eigen::Vector2d> unit_normals(const InterfaceGrid& g) {
  std::vector<Eigen::Vector2d> nu(g.n);
  for (int m = 0; m < g.n; ++m) nu[m] = g.normal(m) / g.jacobian[m];
  return nu;
}

std::vector<Eigen::Vector2d> constant_dirs(int n, double x2_component) {
  return std::vector<Eigen::Vector2d>(n, Eigen::Vector2d{0.0, x2_component});
}

}  // namespace

bool SubdomainField::contains(double x1, double x2) const {
  for (const auto& r : regions)
    if (r.contains(x1, x2)) return true;
  return false;
}

Complex SubdomainField::eval(const Vector& densities, double x1, double x2) const {
  for (const auto& r : regions) {
    if (!r.contains(x1, x2)) continue;
    Complex acc{0.0, 0.0};
    for (const auto& t : r.terms) {
      const InterfaceGrid& g = grids[t.grid_index];
      Vector dens = densities.segment(t.offset, g.n);
      switch (t.kind) {
        case TermKind::single_layer_weighted:
          acc += eval_single_layer(g, dens, t.k, qp, window, x1, x2);
          break;
        case TermKind::single_layer_plain:
          acc += eval_single_layer(g, (dens.array() * g.jacobian.array()).matrix(), t.k, qp,
                                   window, x1, x2);
          break;
        case TermKind::double_layer:
          acc += eval_double_layer(g, dens, t.k, qp, window, x1, x2);
          break;
      }
    }
    return acc;
  }
  throw numerical_error("field evaluation point is outside the subdomain");
}

SubdomainRtR rtr_semi_infinite(Complex k, const GratingProfile& profile, bool domain_above,
                               const Matrix& Z_in, const Matrix& Z_out,
                               const QuasiPeriodicity& qp, int n, double A,
                               BiopsCache* cache) {
  const auto orientation = domain_above ? NormalOrientation::down : NormalOrientation::up;
  InterfaceGrid grid = build_grid(profile, n, orientation);

  const auto Sw = cached(cache, operator_cache_key("Sw", k, grid, grid, qp, A),
                         [&] { return assemble_single_layer(k, grid, grid, qp, A).matrix; });
  const auto KTw = cached(cache, operator_cache_key("KTw", k, grid, grid, qp, A), [&] {
    return assemble_adjoint_double_layer(k, grid, grid, qp, A).matrix;
  });

  Matrix M = 0.5 * Matrix::Identity(n, n) + *KTw + Z_in * (*Sw);

  SubdomainRtR out;
  out.two_sided = false;
  out.field = std::make_shared<SubdomainField>();
  out.field->qp = qp;
  out.field->window = A;
  out.field->grids.push_back(grid);
  out.field->interior_lu.compute(M);
  check_interior_conditioning(out.field->interior_lu, "semi-infinite RtR");
  out.field->rhs_embed = Matrix::Identity(n, n);

  const Matrix Minv_applied = out.field->interior_lu.solve(Matrix::Identity(n, n));
  out.single = Matrix::Identity(n, n) - (Z_in + Z_out) * (*Sw) * Minv_applied;

  GratingProfile p = profile;
  out.field->regions.push_back(
      {[p, domain_above](double x1, double x2) {
         return domain_above ? x2 > p.value(x1) : x2 < p.value(x1);
       },
       {{SubdomainField::TermKind::single_layer_weighted, 0, k, 0}}});
  return out;
}

SubdomainRtR rtr_layer(Complex k, const GratingProfile& top, const GratingProfile& bottom,
                       const Matrix& Zt_in, const Matrix& Zt_out, const Matrix& Zb_in,
                       const Matrix& Zb_out, const QuasiPeriodicity& qp, int n, double A,
                       BiopsCache* cache) {
  InterfaceGrid gt = build_grid(top, n, NormalOrientation::up);      // outward at the top
  InterfaceGrid gb = build_grid(bottom, n, NormalOrientation::down);  // outward at the bottom

  auto Stt = cached(cache, operator_cache_key("Sw", k, gt, gt, qp, A),
                    [&] { return assemble_single_layer(k, gt, gt, qp, A).matrix; });
  auto Sbb = cached(cache, operator_cache_key("Sw", k, gb, gb, qp, A),
                    [&] { return assemble_single_layer(k, gb, gb, qp, A).matrix; });
  auto Sbt = cached(cache, operator_cache_key("Sw", k, gb, gt, qp, A),
                    [&] { return assemble_single_layer(k, gb, gt, qp, A).matrix; });
  auto Stb = cached(cache, operator_cache_key("Sw", k, gt, gb, qp, A),
                    [&] { return assemble_single_layer(k, gt, gb, qp, A).matrix; });
  auto KTtt = cached(cache, operator_cache_key("KTw", k, gt, gt, qp, A),
                     [&] { return assemble_adjoint_double_layer(k, gt, gt, qp, A).matrix; });
  auto KTbb = cached(cache, operator_cache_key("KTw", k, gb, gb, qp, A),
                     [&] { return assemble_adjoint_double_layer(k, gb, gb, qp, A).matrix; });
  auto KTbt = cached(cache, operator_cache_key("KTw", k, gb, gt, qp, A),
                     [&] { return assemble_adjoint_double_layer(k, gb, gt, qp, A).matrix; });
  auto KTtb = cached(cache, operator_cache_key("KTw", k, gt, gb, qp, A),
                     [&] { return assemble_adjoint_double_layer(k, gt, gb, qp, A).matrix; });

  const Matrix Ihalf = 0.5 * Matrix::Identity(n, n);
  Matrix M(2 * n, 2 * n);
  M.topLeftCorner(n, n) = Ihalf + *KTtt + Zt_in * (*Stt);
  M.topRightCorner(n, n) = *KTbt + Zt_in * (*Sbt);
  M.bottomLeftCorner(n, n) = *KTtb + Zb_in * (*Stb);
  M.bottomRightCorner(n, n) = Ihalf + *KTbb + Zb_in * (*Sbb);

  SubdomainRtR out;
  out.two_sided = true;
  out.field = std::make_shared<SubdomainField>();
  out.field->qp = qp;
  out.field->window = A;
  out.field->grids = {gt, gb};
  out.field->interior_lu.compute(M);
  check_interior_conditioning(out.field->interior_lu, "layer RtR");
  out.field->rhs_embed = Matrix::Identity(2 * n, 2 * n);

  Matrix trace(2 * n, 2 * n);
  trace.topLeftCorner(n, n) = *Stt;
  trace.topRightCorner(n, n) = *Sbt;
  trace.bottomLeftCorner(n, n) = *Stb;
  trace.bottomRightCorner(n, n) = *Sbb;

  Matrix Zsum = Matrix::Zero(2 * n, 2 * n);
  Zsum.topLeftCorner(n, n) = Zt_in + Zt_out;
  Zsum.bottomRightCorner(n, n) = Zb_in + Zb_out;

  const Matrix R =
      Matrix::Identity(2 * n, 2 * n) -
      Zsum * trace * out.field->interior_lu.solve(Matrix::Identity(2 * n, 2 * n));
  out.tt = R.topLeftCorner(n, n);
  out.tb = R.topRightCorner(n, n);
  out.bt = R.bottomLeftCorner(n, n);
  out.bb = R.bottomRightCorner(n, n);

  GratingProfile pt = top, pb = bottom;
  out.field->regions.push_back(
      {[pt, pb](double x1, double x2) { return x2 < pt.value(x1) && x2 > pb.value(x1); },
       {{SubdomainField::TermKind::single_layer_weighted, 0, k, 0},
        {SubdomainField::TermKind::single_layer_weighted, 1, k, n}}});
  return out;
}

SubdomainRtR rtr_strip(Complex k_above, Complex k_below, const GratingProfile& inside,
                       double c_top, double c_bot, const Matrix& Zt_in, const Matrix& Zt_out,
                       const Matrix& Zb_in, const Matrix& Zb_out, const QuasiPeriodicity& qp,
                       int n, double A, BiopsCache* cache) {
  const auto [glo, ghi] = inside.extrema();
  if (!(c_top > ghi) || !(c_bot < glo))
    throw geometry_error("strip cuts must enclose the internal interface");

  const double d = inside.period();
  InterfaceGrid cut_t = build_grid(GratingProfile::flat(c_top, d), n, NormalOrientation::up);
  InterfaceGrid cut_b = build_grid(GratingProfile::flat(c_bot, d), n, NormalOrientation::down);
  InterfaceGrid gamma = build_grid(inside, n, NormalOrientation::down);

  const Complex ku = k_above, kl = k_below;

  auto S_T = cached(cache, operator_cache_key("Sw", ku, cut_t, cut_t, qp, A),
                    [&] { return assemble_single_layer(ku, cut_t, cut_t, qp, A).matrix; });
  auto S_B = cached(cache, operator_cache_key("Sw", kl, cut_b, cut_b, qp, A),
                    [&] { return assemble_single_layer(kl, cut_b, cut_b, qp, A).matrix; });

  const Eigen::VectorXd jac = gamma.jacobian;
  auto plainize = [&](Matrix m) {  // weighted-source matrix -> acts on arclength densities
    return Matrix(m * jac.asDiagonal());
  };

  // Gamma -> cuts (sources on the grating).
  auto SL_GT = plainize(*cached(cache, operator_cache_key("Sw", ku, gamma, cut_t, qp, A),
                                [&] { return assemble_single_layer(ku, gamma, cut_t, qp, A).matrix; }));
  auto SL_GB = plainize(*cached(cache, operator_cache_key("Sw", kl, gamma, cut_b, qp, A),
                                [&] { return assemble_single_layer(kl, gamma, cut_b, qp, A).matrix; }));
  auto DL_GT = *cached(cache, operator_cache_key("DL", ku, gamma, cut_t, qp, A),
                       [&] { return assemble_double_layer(ku, gamma, cut_t, qp, A).matrix; });
  auto DL_GB = *cached(cache, operator_cache_key("DL", kl, gamma, cut_b, qp, A),
                       [&] { return assemble_double_layer(kl, gamma, cut_b, qp, A).matrix; });
  auto dSL_GT = Matrix(*cached(cache, operator_cache_key("dx2SL", ku, gamma, cut_t, qp, A), [&] {
                  return assemble_grad_dot_cross(ku, gamma, cut_t, qp, A, constant_dirs(n, 1.0));
                }) * jac.asDiagonal());
  auto dSL_GB = Matrix(*cached(cache, operator_cache_key("dx2SL", kl, gamma, cut_b, qp, A), [&] {
                  return assemble_grad_dot_cross(kl, gamma, cut_b, qp, A, constant_dirs(n, 1.0));
                }) * jac.asDiagonal());
  auto dDL_GT = *cached(cache, operator_cache_key("dx2DL", ku, gamma, cut_t, qp, A), [&] {
    return assemble_dl_grad_dot_cross(ku, gamma, cut_t, qp, A, constant_dirs(n, 1.0));
  });
  auto dDL_GB = *cached(cache, operator_cache_key("dx2DL", kl, gamma, cut_b, qp, A), [&] {
    return assemble_dl_grad_dot_cross(kl, gamma, cut_b, qp, A, constant_dirs(n, 1.0));
  });

  // Cuts -> Gamma.
  const auto nu = unit_normals(gamma);
  auto nSL_TG = *cached(cache, operator_cache_key("nuSL", ku, cut_t, gamma, qp, A), [&] {
    return assemble_grad_dot_cross(ku, cut_t, gamma, qp, A, nu);
  });
  auto nSL_BG = *cached(cache, operator_cache_key("nuSL", kl, cut_b, gamma, qp, A), [&] {
    return assemble_grad_dot_cross(kl, cut_b, gamma, qp, A, nu);
  });
  auto SL_TG = *cached(cache, operator_cache_key("Sw", ku, cut_t, gamma, qp, A),
                       [&] { return assemble_single_layer(ku, cut_t, gamma, qp, A).matrix; });
  auto SL_BG = *cached(cache, operator_cache_key("Sw", kl, cut_b, gamma, qp, A),
                       [&] { return assemble_single_layer(kl, cut_b, gamma, qp, A).matrix; });

  // Self operators on the grating at both wavenumbers (unit-normal, arclength).
  auto unitize_kt = [&](const Matrix& ktw) {
    return Matrix(jac.cwiseInverse().asDiagonal() * ktw * jac.asDiagonal());
  };
  auto KT_u = unitize_kt(*cached(cache, operator_cache_key("KTw", ku, gamma, gamma, qp, A), [&] {
    return assemble_adjoint_double_layer(ku, gamma, gamma, qp, A).matrix;
  }));
  auto KT_l = unitize_kt(*cached(cache, operator_cache_key("KTw", kl, gamma, gamma, qp, A), [&] {
    return assemble_adjoint_double_layer(kl, gamma, gamma, qp, A).matrix;
  }));
  auto S_u = plainize(*cached(cache, operator_cache_key("Sw", ku, gamma, gamma, qp, A),
                              [&] { return assemble_single_layer(ku, gamma, gamma, qp, A).matrix; }));
  auto S_l = plainize(*cached(cache, operator_cache_key("Sw", kl, gamma, gamma, qp, A),
                              [&] { return assemble_single_layer(kl, gamma, gamma, qp, A).matrix; }));
  auto K_u = *cached(cache, operator_cache_key("DL", ku, gamma, gamma, qp, A),
                     [&] { return assemble_double_layer(ku, gamma, gamma, qp, A).matrix; });
  auto K_l = *cached(cache, operator_cache_key("DL", kl, gamma, gamma, qp, A),
                     [&] { return assemble_double_layer(kl, gamma, gamma, qp, A).matrix; });
  auto N_u = *cached(cache, operator_cache_key("N", ku, gamma, gamma, qp, A),
                     [&] { return assemble_hypersingular(ku, gamma, qp, A).matrix; });
  auto N_l = *cached(cache, operator_cache_key("N", kl, gamma, gamma, qp, A),
                     [&] { return assemble_hypersingular(kl, gamma, qp, A).matrix; });

  const Matrix Id = Matrix::Identity(n, n);
  Matrix M = Matrix::Zero(4 * n, 4 * n);
  // unknown order: [phi_t; phi_b; phi; psi]
  // (1) Robin data at the top cut, (+d/dx2 + Z) v = g_t
  M.block(0, 0 * n, n, n) = 0.5 * Id + Zt_in * (*S_T);
  M.block(0, 2 * n, n, n) = dSL_GT + Zt_in * SL_GT;
  M.block(0, 3 * n, n, n) = dDL_GT + Zt_in * DL_GT;
  // (2) Robin data at the bottom cut, (-d/dx2 + Z) v = g_b
  M.block(n, 1 * n, n, n) = 0.5 * Id + Zb_in * (*S_B);
  M.block(n, 2 * n, n, n) = -dSL_GB + Zb_in * SL_GB;
  M.block(n, 3 * n, n, n) = -dDL_GB + Zb_in * DL_GB;
  // (3) Neumann jump across the grating
  M.block(2 * n, 0 * n, n, n) = nSL_TG;
  M.block(2 * n, 1 * n, n, n) = -nSL_BG;
  M.block(2 * n, 2 * n, n, n) = Id + KT_u - KT_l;
  M.block(2 * n, 3 * n, n, n) = N_u - N_l;
  // (4) Dirichlet jump across the grating
  M.block(3 * n, 0 * n, n, n) = -SL_TG;
  M.block(3 * n, 1 * n, n, n) = SL_BG;
  M.block(3 * n, 2 * n, n, n) = S_l - S_u;
  M.block(3 * n, 3 * n, n, n) = Id + K_l - K_u;

  SubdomainRtR out;
  out.two_sided = true;
  out.field = std::make_shared<SubdomainField>();
  out.field->qp = qp;
  out.field->window = A;
  out.field->grids = {cut_t, cut_b, gamma};
  out.field->interior_lu.compute(M);
  check_interior_conditioning(out.field->interior_lu, "strip RtR");
  Matrix embed = Matrix::Zero(4 * n, 2 * n);
  embed.topLeftCorner(n, n) = Id;
  embed.block(n, n, n, n) = Id;
  out.field->rhs_embed = embed;

  // Traces of v on the cuts for the outgoing map out = g - 2 Z v|_cut.
  Matrix Et = Matrix::Zero(n, 4 * n), Eb = Matrix::Zero(n, 4 * n);
  Et.block(0, 0, n, n) = *S_T;
  Et.block(0, 2 * n, n, n) = SL_GT;
  Et.block(0, 3 * n, n, n) = DL_GT;
  Eb.block(0, n, n, n) = *S_B;
  Eb.block(0, 2 * n, n, n) = SL_GB;
  Eb.block(0, 3 * n, n, n) = DL_GB;

  const Matrix X = out.field->interior_lu.solve(embed);  // densities per unit data
  Matrix R(2 * n, 2 * n);
  R.topRows(n) = -(Zt_in + Zt_out) * (Et * X);
  R.bottomRows(n) = -(Zb_in + Zb_out) * (Eb * X);
  R += Matrix::Identity(2 * n, 2 * n);
  out.tt = R.topLeftCorner(n, n);
  out.tb = R.topRightCorner(n, n);
  out.bt = R.bottomLeftCorner(n, n);
  out.bb = R.bottomRightCorner(n, n);

  GratingProfile gp = inside;
  out.field->regions.push_back(
      {[gp, c_top](double x1, double x2) { return x2 < c_top && x2 > gp.value(x1); },
       {{SubdomainField::TermKind::single_layer_weighted, 0, ku, 0},
        {SubdomainField::TermKind::single_layer_plain, 2, ku, 2 * n},
        {SubdomainField::TermKind::double_layer, 2, ku, 3 * n}}});
  out.field->regions.push_back(
      {[gp, c_bot](double x1, double x2) { return x2 > c_bot && x2 < gp.value(x1); },
       {{SubdomainField::TermKind::single_layer_weighted, 1, kl, n},
        {SubdomainField::TermKind::single_layer_plain, 2, kl, 2 * n},
        {SubdomainField::TermKind::double_layer, 2, kl, 3 * n}}});
  return out;
}

}  // namespace qopdd
