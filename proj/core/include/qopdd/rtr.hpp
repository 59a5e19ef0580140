#pragma once

#include <memory>

#include "qopdd/biops.hpp"
#include "qopdd/geometry.hpp"
#include "qopdd/types.hpp"

namespace qopdd {

/// Layer-potential representation of one subdomain solve, kept for field
/// reconstruction after the DD system is solved.
struct SubdomainField {
  enum class TermKind { single_layer_weighted, single_layer_plain, double_layer };
  struct Term {
    TermKind kind;
    int grid_index;
    Complex k;
    int offset;  // start of this term's density block
  };
  struct Region {
    std::function<bool(double, double)> contains;
    std::vector<Term> terms;
  };

  std::vector<InterfaceGrid> grids;
  std::vector<Region> regions;
  Eigen::PartialPivLU<Matrix> interior_lu;
  Matrix rhs_embed;  // incoming Robin data -> interior right-hand side
  QuasiPeriodicity qp;
  double window = 120.0;

  Vector solve_densities(const Vector& incoming) const {
    return interior_lu.solve(rhs_embed * incoming);
  }
  bool contains(double x1, double x2) const;
  Complex eval(const Vector& densities, double x1, double x2) const;
};

/// Robin-to-Robin map of one subdomain. One-sided subdomains (semi-infinite)
/// populate `single`; bounded subdomains populate the 2x2 blocks with
/// ordering [top data; bottom data].
struct SubdomainRtR {
  bool two_sided = false;
  Matrix single;
  Matrix tt, tb, bt, bb;
  std::shared_ptr<SubdomainField> field;
};

/// RtR of a semi-infinite domain bounded by `profile` (domain above or below),
/// S = I - (Z_in + Z_out) S^w (I/2 + (K^w)^T + Z_in S^w)^{-1}.
SubdomainRtR rtr_semi_infinite(Complex k, const GratingProfile& profile, bool domain_above,
                               const Matrix& Z_in, const Matrix& Z_out,
                               const QuasiPeriodicity& qp, int n, double A,
                               BiopsCache* cache = nullptr);

/// RtR of a bounded layer between two non-touching profiles, represented by
/// one single-layer density per boundary.
SubdomainRtR rtr_layer(Complex k, const GratingProfile& top, const GratingProfile& bottom,
                       const Matrix& Zt_in, const Matrix& Zt_out, const Matrix& Zb_in,
                       const Matrix& Zb_out, const QuasiPeriodicity& qp, int n, double A,
                       BiopsCache* cache = nullptr);

/// RtR of a horizontal strip with flat boundaries at c_top/c_bot containing one
/// material interface; four densities (one per cut, single+double on the
/// grating). Media: k_above over the grating, k_below underneath.
SubdomainRtR rtr_strip(Complex k_above, Complex k_below, const GratingProfile& inside,
                       double c_top, double c_bot, const Matrix& Zt_in, const Matrix& Zt_out,
                       const Matrix& Zb_in, const Matrix& Zb_out, const QuasiPeriodicity& qp,
                       int n, double A, BiopsCache* cache = nullptr);

}  // namespace qopdd
