#include "qopdd/campaign.hpp"

#include <Eigen/Eigenvalues>

#include <chrono>
#include <filesystem>
#include <fstream>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace qopdd {

namespace {

struct Cell {
  int N;
  double eps;
  std::vector<double> ks;
  Scheme scheme;
  int L;
  PrecondMode precond;
  OperatorFamily family;
};

std::vector<Cell> enumerate_cells(const ExperimentConfig& cfg) {
  std::vector<Cell> cells;
  for (int N : cfg.N_values)
    for (double eps : cfg.roughness_values)
      for (const auto& ks : wavenumber_lists(cfg, N))
        for (Scheme scheme : cfg.schemes)
          for (int L : cfg.L_values)
            for (PrecondMode pm : cfg.precond_modes)
              for (OperatorFamily fam : cfg.families)
                cells.push_back({N, eps, ks, scheme, L, pm, fam});
  return cells;
}

CampaignRow run_cell(const ExperimentConfig& cfg, const Cell& cell, BiopsCache* cache) {
  CampaignRow row;
  row.N = cell.N;
  row.eps = cell.eps;
  row.k_label = wavenumber_label(cfg, cell.ks);
  row.scheme = cell.scheme;
  row.L = cell.L;
  row.precond = cell.precond;
  if (cell.family != OperatorFamily::quasi_optimal)
    row.note = "family=" + family_name(cell.family);

  const auto t0 = std::chrono::steady_clock::now();
  try {
    LayerStack stack = build_stack(cfg, cell.N, cell.eps, cell.ks);
    if (cell.scheme == Scheme::strip && !stack.strip_cuts)
      stack.strip_cuts = stack.default_strip_cuts();  // throws when infeasible

    AssemblyOptions opts;
    opts.n = cfg.n;
    opts.A = cfg.A;
    opts.L = cell.L;
    opts.scheme = cell.scheme;
    opts.family = cell.family;
    opts.sigma = cfg.sigma;
    opts.cache = cache;
    BlockTridiagonalSystem system = assemble_system(stack, opts);
    SweepFactors factors = SweepFactors::make(system, cell.precond);

    LinearOp op = [&](const Vector& x) { return preconditioned_apply(system, factors, x); };
    const Vector b = apply_sweep(factors, system.rhs);
    auto [x, report] = gmres(op, b, cfg.gmres);

    row.iterations = report.iterations;
    row.converged = report.converged;
    const auto expansion = rayleigh_amplitudes(system, x);
    row.energy_defect = energy_balance(expansion, stack);
  } catch (const geometry_error& e) {
    row.note = (row.note.empty() ? "" : row.note + " ") + std::string("skipped: ") + e.what();
  }
  row.wall_time =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return row;
}

std::string csv_escape(const std::string& s) {
  if (s.find(',') == std::string::npos && s.find('"') == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  out += '"';
  return out;
}

}  // namespace

std::string CampaignResult::csv() const {
  std::ostringstream os;
  os << "N,eps,k_law,scheme,L,precond,iterations,converged,energy_defect,wall_time,note\n";
  os.precision(12);
  for (const auto& r : rows) {
    os << r.N << ',' << r.eps << ',' << csv_escape(r.k_label) << ',' << scheme_name(r.scheme)
       << ',' << r.L << ',' << precond_name(r.precond) << ',' << r.iterations << ','
       << (r.converged ? "true" : "false") << ',' << r.energy_defect << ',';
    // wall time is informational only; fixed precision keeps the column readable
    os.precision(3);
    os << std::fixed << r.wall_time;
    os.unsetf(std::ios::fixed);
    os.precision(12);
    os << ',' << csv_escape(r.note) << '\n';
  }
  return os.str();
}

CampaignResult run_campaign(const ExperimentConfig& cfg, int workers) {
  const auto cells = enumerate_cells(cfg);
  CampaignResult result;
  result.rows.resize(cells.size());
  BiopsCache cache;
  if (workers <= 1) {
    for (size_t i = 0; i < cells.size(); ++i) result.rows[i] = run_cell(cfg, cells[i], &cache);
    return result;
  }
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic) num_threads(workers)
#endif
  for (size_t i = 0; i < cells.size(); ++i)  // NOLINT(modernize-loop-convert)
    result.rows[i] = run_cell(cfg, cells[i], &cache);
  return result;
}

SolveOutcome run_single(const ExperimentConfig& cfg) {
  const auto cells = enumerate_cells(cfg);
  if (cells.size() != 1)
    throw config_error("run_single requires a config with exactly one cell, got " +
                       std::to_string(cells.size()));
  const Cell& cell = cells.front();

  SolveOutcome out;
  out.row.N = cell.N;
  out.row.eps = cell.eps;
  out.row.k_label = wavenumber_label(cfg, cell.ks);
  out.row.scheme = cell.scheme;
  out.row.L = cell.L;
  out.row.precond = cell.precond;
  if (cell.family != OperatorFamily::quasi_optimal)
    out.row.note = "family=" + family_name(cell.family);

  BiopsCache cache;
  LayerStack stack = build_stack(cfg, cell.N, cell.eps, cell.ks);
  if (cell.scheme == Scheme::strip && !stack.strip_cuts)
    stack.strip_cuts = stack.default_strip_cuts();

  AssemblyOptions opts;
  opts.n = cfg.n;
  opts.A = cfg.A;
  opts.L = cell.L;
  opts.scheme = cell.scheme;
  opts.family = cell.family;
  opts.sigma = cfg.sigma;
  opts.cache = &cache;
  out.system = assemble_system(stack, opts);
  SweepFactors factors = SweepFactors::make(out.system, cell.precond);
  LinearOp op = [&](const Vector& x) { return preconditioned_apply(out.system, factors, x); };
  auto [x, report] = gmres(op, apply_sweep(factors, out.system.rhs), cfg.gmres);
  out.solution = x;
  out.row.iterations = report.iterations;
  out.row.converged = report.converged;
  out.expansion = rayleigh_amplitudes(out.system, x);
  out.row.energy_defect = energy_balance(out.expansion, stack);
  return out;
}

std::vector<std::string> emit_spectrum(const ExperimentConfig& cfg, const std::string& out_dir) {
  const auto cells = enumerate_cells(cfg);
  std::vector<std::string> files;
  BiopsCache cache;
  for (const auto& cell : cells) {
    LayerStack stack = build_stack(cfg, cell.N, cell.eps, cell.ks);
    if (cell.scheme == Scheme::strip && !stack.strip_cuts)
      stack.strip_cuts = stack.default_strip_cuts();
    AssemblyOptions opts;
    opts.n = cfg.n;
    opts.A = cfg.A;
    opts.L = cell.L;
    opts.scheme = cell.scheme;
    opts.family = cell.family;
    opts.sigma = cfg.sigma;
    opts.cache = &cache;
    const BlockTridiagonalSystem system = assemble_system(stack, opts);

    std::vector<Complex> eig;
    if (cell.precond == PrecondMode::none) {
      eig = dense_spectrum(system);
    } else {
      const SweepFactors factors = SweepFactors::make(system, cell.precond);
      Matrix dense = system.densify();
      Matrix pre(dense.rows(), dense.cols());
      for (Eigen::Index c = 0; c < dense.cols(); ++c)
        pre.col(c) = apply_sweep(factors, dense.col(c));
      if (pre.rows() > 20000) throw config_error("dense_spectrum limited to dimension 20000");
      Eigen::ComplexEigenSolver<Matrix> es(pre, false);
      eig.assign(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
    }

    std::ostringstream name;
    name << "spectrum_N" << cell.N << "_eps" << cell.eps << "_" << scheme_name(cell.scheme)
         << "_L" << cell.L << "_" << precond_name(cell.precond) << "_"
         << family_name(cell.family) << ".csv";
    std::ostringstream body;
    body.precision(16);
    body << "re,im\n";
    for (const auto& l : eig) body << l.real() << ',' << l.imag() << '\n';
    const std::string path = out_dir + "/" + name.str();
    write_file(path, body.str());
    files.push_back(path);
  }
  return files;
}

void write_file(const std::string& path, const std::string& contents) {
  const auto parent = std::filesystem::path(path).parent_path();
  if (!parent.empty()) std::filesystem::create_directories(parent);
  std::ofstream os(path);
  if (!os) throw config_error("cannot write " + path);
  os << contents;
}

}  // namespace qopdd
