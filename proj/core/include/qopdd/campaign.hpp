#pragma once

#include "qopdd/config.hpp"
#include "qopdd/post.hpp"

namespace qopdd {

struct CampaignRow {
  int N = 0;
  double eps = 0.0;
  std::string k_label;
  Scheme scheme = Scheme::layer_slab;
  int L = 0;
  PrecondMode precond = PrecondMode::none;
  int iterations = 0;
  bool converged = false;
  double energy_defect = 0.0;
  double wall_time = 0.0;
  std::string note;  // "skipped: <reason>" for infeasible cells
};

struct CampaignResult {
  std::vector<CampaignRow> rows;
  std::string csv() const;  // stable column order
};

/// Run every cell of the experiment grid; deterministic given the config.
CampaignResult run_campaign(const ExperimentConfig& cfg, int workers = 1);

/// Solve a single cell (all sweep axes must be singletons); returns the
/// assembled system, solution, and summary row.
struct SolveOutcome {
  CampaignRow row;
  BlockTridiagonalSystem system;
  Vector solution;
  RayleighExpansion expansion;
};
SolveOutcome run_single(const ExperimentConfig& cfg);

/// Eigenvalue clouds of the (optionally preconditioned) DD matrices, one file
/// per cell written under out_dir as "spectrum_<cell>.csv" with re,im rows.
std::vector<std::string> emit_spectrum(const ExperimentConfig& cfg, const std::string& out_dir);

void write_file(const std::string& path, const std::string& contents);

}  // namespace qopdd
