#pragma once

#include <map>

#include "qopdd/ddm.hpp"

namespace qopdd {

struct RayleighExpansion {
  std::map<int, Complex> up, down;  // r -> B_r^+ / B_r^-
  std::vector<int> propagating_up, propagating_down;
  double beta00 = 0.0;  // vertical incident wavenumber component
};

/// Evaluate the reconstructed field of one subdomain at a point. Subdomain 0
/// carries the scattered field; all others the total field. Points must be
/// strictly inside, at least h_min away from the bounding interfaces.
Complex reconstruct_field(const BlockTridiagonalSystem& system, const Vector& solution,
                          int subdomain, double x1, double x2, double h_min = 0.05);

/// Rayleigh amplitudes of the outgoing fields, extracted on horizontal lines
/// offset above/below the structure.
RayleighExpansion rayleigh_amplitudes(const BlockTridiagonalSystem& system,
                                      const Vector& solution, double line_offset = 0.5);

/// Energy-balance defect |1 - sum_up (beta_r/beta_0)|B_r^+|^2
///                          - sum_down (beta_r/beta_0)|B_r^-|^2| over
/// propagating orders (lossless media, non-grazing incidence).
double energy_balance(const RayleighExpansion& expansion, const LayerStack& stack);

/// Per-order efficiencies (propagating orders only): pairs (r, efficiency).
std::vector<std::pair<int, double>> efficiencies_up(const RayleighExpansion& e,
                                                    const LayerStack& stack);
std::vector<std::pair<int, double>> efficiencies_down(const RayleighExpansion& e,
                                                      const LayerStack& stack);

}  // namespace qopdd
