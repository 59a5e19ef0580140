#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qopdd/types.hpp"

namespace qopdd {

/// One periodic interface x2 = mean_height + roughness * shape(x1).
///
/// Shapes are either finite cosine/sine series or closures; closures carry a
/// smoothness flag (triangle and lamellar gratings are Lipschitz only).
class GratingProfile {
 public:
  static GratingProfile flat(double mean_height, double period);
  /// shape(x) = sum_m cos_coeffs[m-1] cos(2 pi m x / d) + sin_coeffs[m-1] sin(...).
  static GratingProfile cosine_series(double mean_height, double roughness,
                                      std::vector<double> cos_coeffs,
                                      std::vector<double> sin_coeffs, double period);
  /// Triangle wave of unit peak-to-trough; profile height = roughness.
  static GratingProfile triangle(double mean_height, double roughness, double period);
  /// Steep trapezoidal stand-in for a binary (lamellar) grating; height = roughness.
  static GratingProfile lamellar(double mean_height, double roughness, double period);
  static GratingProfile from_closure(double mean_height, double roughness,
                                     std::function<double(double)> shape,
                                     std::function<double(double)> shape_deriv,
                                     std::function<double(double)> shape_second_deriv,
                                     bool smooth, double period, std::string tag);

  double value(double x1) const { return mean_ + eps_ * shape_(x1); }
  double deriv(double x1) const { return eps_ * dshape_(x1); }
  double second_deriv(double x1) const { return eps_ * d2shape_(x1); }

  double mean_height() const { return mean_; }
  double roughness() const { return eps_; }
  double period() const { return d_; }
  bool is_smooth() const { return smooth_; }
  bool is_flat() const { return flat_; }

  /// Same shape shifted vertically (used to build stacks of repeated gratings).
  GratingProfile shifted(double delta_mean) const;

  /// min/max of the full profile value over one period (dense sampling plus
  /// local ternary refinement; feasibility checks only).
  std::pair<double, double> extrema() const;

  /// Fourier coefficients c_m of the base shape, shape(x) = sum c_m e^{i 2 pi m x/d},
  /// |m| <= band. Exact for series shapes, projected for closures.
  std::vector<Complex> shape_fourier(int band) const;

  /// Cache/identity key: same signature implies identical profile.
  const std::string& signature() const { return signature_; }

  GratingProfile() = default;  // flat zero profile

 private:
  double mean_ = 0.0, eps_ = 0.0, d_ = 2.0 * PI;
  bool smooth_ = true, flat_ = true;
  std::function<double(double)> shape_ = [](double) { return 0.0; };
  std::function<double(double)> dshape_ = [](double) { return 0.0; };
  std::function<double(double)> d2shape_ = [](double) { return 0.0; };
  std::vector<double> cosc_, sinc_;  // populated for series shapes
  bool is_series_ = false;
  std::string signature_;
};

/// Bloch phase and period; beta(k) = (k^2 - alpha^2)^{1/2} with Im >= 0.
struct QuasiPeriodicity {
  double alpha = 0.0;
  double period = 2.0 * PI;

  double alpha_r(int r) const { return alpha + 2.0 * PI * r / period; }
  Complex incidence_beta(double k0) const;
};

enum class NormalOrientation { down, up };  // down: n = (F', -1); up: n = (-F', 1)

/// Equispaced parameter grid on one interface with geometry samples.
struct InterfaceGrid {
  GratingProfile profile;
  NormalOrientation orientation = NormalOrientation::down;
  int n = 0;
  RealVector s;         // nodes x1_m = m d/n
  RealVector f, fp, fpp;  // F, F', F'' at nodes
  RealVector jacobian;  // sqrt(1 + F'^2)

  double period() const { return profile.period(); }
  /// Non-unit normal at node m.
  Eigen::Vector2d normal(int m) const;
  Eigen::Vector2d point(int m) const { return {s[m], f[m]}; }
};

InterfaceGrid build_grid(const GratingProfile& profile, int n,
                         NormalOrientation orientation = NormalOrientation::down);

struct StackDiagnostics {
  enum class Kind { overlapping_profiles, infeasible_cut, near_wood };
  struct Item {
    Kind kind;
    int j;        // layer or interface index
    int r;        // offending Fourier mode for Wood violations, else 0
    std::string message;
  };
  std::vector<Item> items;
  bool ok() const { return items.empty(); }
};

/// Ordered layered medium: N+1 interfaces (strictly decreasing in height),
/// N+2 wavenumbers, optional horizontal strip cuts.
struct LayerStack {
  std::vector<GratingProfile> profiles;
  std::vector<double> wavenumbers;
  QuasiPeriodicity qp;
  std::optional<std::vector<double>> strip_cuts;
  double wood_tol_factor = 1e-6;  // tolerance wood_tol = factor * k

  int num_interfaces() const { return static_cast<int>(profiles.size()); }
  int num_inner_layers() const { return num_interfaces() - 1; }  // N

  /// Throws config_error on structural mismatch (profile/wavenumber counts).
  void check_shape() const;

  /// Midpoint cuts between consecutive interfaces; throws geometry_error when
  /// the strip partition is infeasible.
  std::vector<double> default_strip_cuts(double margin = 0.5) const;
};

StackDiagnostics validate_stack(const LayerStack& stack);

}  // namespace qopdd
