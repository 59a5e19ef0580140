#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "qopdd/ddm.hpp"
#include "qopdd/krylov.hpp"
#include "qopdd/precond.hpp"

namespace qopdd {

/// One interface description from a config file.
struct ProfileSpec {
  std::string type;  // "cosine-series" | "triangle" | "lamellar" | "flat"
  std::vector<double> cos_coeffs, sin_coeffs;
  std::optional<double> mean;          // absolute mean height
  std::optional<double> gap_below_previous;  // place max at previous min minus gap
  std::optional<double> roughness;     // fixed; otherwise the sweep value applies
};

struct WavenumberSpec {
  // either k_l = a*l + b (one cell per slope a), or explicit per-cell lists
  std::vector<double> law_a;
  double law_b = 0.0;
  bool has_law = false;
  std::vector<std::vector<double>> values;
};

struct ExperimentConfig {
  std::string name;
  double period = 2.0 * PI;
  double alpha = 0.0;
  std::vector<ProfileSpec> profile_specs;  // repeated-profile configs hold one entry
  bool repeated_profile = true;            // single spec shifted down N+1 times
  double spacing = 3.3;                    // H for repeated profiles
  std::vector<int> N_values;
  WavenumberSpec wavenumbers;
  std::vector<double> roughness_values;
  std::vector<Scheme> schemes;
  std::vector<int> L_values;
  std::vector<PrecondMode> precond_modes;
  std::vector<OperatorFamily> families{OperatorFamily::quasi_optimal};
  int n = 256;
  double A = 120.0;
  GmresConfig gmres;
  SigmaPolicy sigma;
  std::optional<std::vector<double>> strip_cuts;
  double wood_tol_factor = 1e-6;
  std::string output = "results.csv";

  static ExperimentConfig from_json_file(const std::string& path);
  static ExperimentConfig from_json_text(const std::string& text);
};

std::string scheme_name(Scheme s);
std::string precond_name(PrecondMode m);
std::string family_name(OperatorFamily f);
Scheme scheme_from_name(const std::string& s);
PrecondMode precond_from_name(const std::string& s);
OperatorFamily family_from_name(const std::string& s);

/// Materialize the layer stack for one campaign cell.
LayerStack build_stack(const ExperimentConfig& cfg, int N, double roughness,
                       const std::vector<double>& wavenumbers);

/// Wavenumber lists for a cell; law-based specs produce one list per N.
std::vector<std::vector<double>> wavenumber_lists(const ExperimentConfig& cfg, int N);

std::string wavenumber_label(const ExperimentConfig& cfg, const std::vector<double>& ks);

}  // namespace qopdd
