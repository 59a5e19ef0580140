// Batch driver: solve single configurations, run campaign grids, or dump
// eigenvalue clouds of the DD matrices for external plotting.

#include <filesystem>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "qopdd/campaign.hpp"

namespace {

using namespace qopdd;

ExperimentConfig load(const std::string& path, const std::string& precond_override) {
  ExperimentConfig cfg = ExperimentConfig::from_json_file(path);
  if (!precond_override.empty())
    cfg.precond_modes = {precond_from_name(precond_override)};
  return cfg;
}

std::string efficiencies_csv(const SolveOutcome& out) {
  std::ostringstream os;
  os.precision(12);
  os << "side,order,efficiency\n";
  for (const auto& [r, eff] : efficiencies_up(out.expansion, out.system.stack))
    os << "up," << r << ',' << eff << '\n';
  for (const auto& [r, eff] : efficiencies_down(out.expansion, out.system.stack))
    os << "down," << r << ',' << eff << '\n';
  return os.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quasi-periodic Helmholtz layered-media solver"};
  app.require_subcommand(1);

  std::string config_path, out_dir = ".", precond_override;
  int workers = 1;

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("config", config_path, "experiment config (JSON)")->required();
    cmd->add_option("--out", out_dir, "output directory");
    cmd->add_option("--precond", precond_override, "override preconditioner: none|sweep|exact")
        ->check(CLI::IsMember({"none", "sweep", "exact"}));
  };

  CLI::App* solve = app.add_subcommand("solve", "solve one configuration cell");
  add_common(solve);
  CLI::App* campaign = app.add_subcommand("campaign", "run the full experiment grid");
  add_common(campaign);
  campaign->add_option("--workers", workers, "parallel campaign cells")->check(CLI::PositiveNumber);
  CLI::App* spectrum = app.add_subcommand("spectrum", "emit DD-matrix eigenvalues per cell");
  add_common(spectrum);

  CLI11_PARSE(app, argc, argv);

  try {
    const ExperimentConfig cfg = load(config_path, precond_override);
    if (solve->parsed()) {
      const SolveOutcome out = run_single(cfg);
      CampaignResult result;
      result.rows.push_back(out.row);
      const std::string base = (std::filesystem::path(out_dir) / cfg.name).string();
      write_file(base + "_solve.csv", result.csv());
      write_file(base + "_efficiencies.csv", efficiencies_csv(out));
      std::cout << "iterations=" << out.row.iterations
                << " converged=" << (out.row.converged ? "yes" : "no")
                << " energy_defect=" << out.row.energy_defect << '\n'
                << "wrote " << base << "_solve.csv and " << base << "_efficiencies.csv\n";
    } else if (campaign->parsed()) {
      const CampaignResult result = run_campaign(cfg, workers);
      const std::string path = (std::filesystem::path(out_dir) / cfg.output).string();
      write_file(path, result.csv());
      std::cout << "wrote " << result.rows.size() << " rows to " << path << '\n';
    } else if (spectrum->parsed()) {
      const auto files = emit_spectrum(cfg, out_dir);
      for (const auto& f : files) std::cout << "wrote " << f << '\n';
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
