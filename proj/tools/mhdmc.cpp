// mhdmc command line: single runs, deterministic refinement tables, Monte Carlo studies
// and reference ensembles.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "mhdmc/diagnostics.hpp"
#include "mhdmc/io.hpp"
#include "mhdmc/montecarlo.hpp"
#include "mhdmc/scheme.hpp"
#include "mhdmc/stochastic.hpp"

namespace fs = std::filesystem;
using namespace mhdmc;

namespace {

constexpr int kExitConfig = 2;
constexpr int kExitSolver = 3;
constexpr int kExitMonitor = 4;

// Monitor thresholds of `run`
constexpr double kMassTol = 1e-10;
constexpr double kDivTol = 1e-11;

struct Common {
  std::string experiment = "sine";
  int nx = 32;
  double T = -1.0;  // < 0: preset final time
  std::uint64_t seed = 0;
  bool deterministic = false;
  int sample = 0;
  int jobs = 1;
  std::string out;
  std::string solver = "iterative";
  NumParams num;
};

void add_common(CLI::App* app, Common& c) {
  app->add_option("--experiment", c.experiment, "Preset: sine, kh or ot")
      ->check(CLI::IsMember(experiment_names()));
  app->add_option("--nx", c.nx, "Cells in x1 (h = L1 / nx)")->check(CLI::PositiveNumber);
  app->add_option("--T", c.T, "Final time (default: preset)");
  app->add_option("--seed", c.seed, "Master seed");
  app->add_flag("--deterministic", c.deterministic, "Replace both random inputs by 0");
  app->add_option("--sample", c.sample, "Sample index n for a single run")->check(CLI::NonNegativeNumber);
  app->add_option("--jobs", c.jobs, "Concurrent samples")->check(CLI::PositiveNumber);
  app->add_option("--out", c.out, "Output directory (default: $MHDMC_OUT or ./out)");
  app->add_option("--dt-factor", c.num.dt_factor, "dt = dt_factor * h");
  app->add_option("--eps", c.num.eps_flux, "Artificial diffusion exponent, > -1");
  app->add_option("--picard-tol", c.num.picard_tol, "Relative Picard increment tolerance");
  app->add_option("--picard-max", c.num.picard_max, "Picard sweeps per step");
  app->add_option("--lin-tol", c.num.lin_tol, "Relative linear residual tolerance");
  app->add_option("--lin-max", c.num.lin_max, "Linear iterations");
  app->add_option("--max-halvings", c.num.max_halvings, "Step halvings after a failed step");
  app->add_option("--solver", c.solver, "iterative or dense")->check(CLI::IsMember({"iterative", "dense"}));
  app->configurable();
}

fs::path out_dir(const Common& c) {
  if (!c.out.empty()) return c.out;
  if (const char* env = std::getenv("MHDMC_OUT"); env && *env) return env;
  return "out";
}

// Validates everything that can be checked before any computation.
ExperimentSpec prepare(Common& c) {
  c.num.solver = c.solver == "dense" ? LinearSolver::Dense : LinearSolver::Iterative;
  c.num.validate();
  ExperimentSpec spec = make_experiment(c.experiment);
  if (c.T >= 0.0) {
    if (c.T == 0.0) throw std::invalid_argument("--T must be positive");
    spec.T = c.T;
  }
  if (c.deterministic) spec = with_degenerate(spec);
  spec.phys.validate();
  build_mesh_for_width(c.nx, spec.bounds);
  return spec;
}

std::ofstream open_csv(const fs::path& p) {
  fs::create_directories(p.parent_path());
  std::ofstream os(p, std::ios::trunc);
  if (!os) throw IoError("cannot write " + p.string());
  return os;
}

std::string stamp(int k) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d", k);
  return buf;
}

int nx_for_width(double h, const Bounds& b) {
  const double n = b.length1() / h;
  const int r = static_cast<int>(std::lround(n));
  if (r < 2 || std::abs(n - r) > 1e-9 * n) {
    throw std::invalid_argument("mesh width does not divide the x1 period");
  }
  return r;
}

// --- run -------------------------------------------------------------------

struct RunCmd {
  Common c;
  std::vector<double> snapshots;
  bool vtk = true;
};

int cmd_run(RunCmd& rc) {
  const ExperimentSpec spec = prepare(rc.c);
  const SampleId id{rc.c.seed, 0, static_cast<std::uint32_t>(rc.c.sample)};
  const Draw d = draw(spec, id);
  const Mesh mesh = build_mesh_for_width(rc.c.nx, spec.bounds);
  const PhysParams phys = spec.phys_for(d);
  const Stepper st(mesh, phys, rc.c.num);
  const State s0 = realize_initial_state(spec, d, mesh);
  const fs::path out = out_dir(rc.c);

  std::ofstream csv = open_csv(out / "diagnostics.csv");
  write_diagnostics_header(csv);
  write_diagnostics_row(csv, make_record(0, 0.0, s0, st.reference_field(), phys));
  const double mass0 = integrate(s0.rho);
  std::string monitor_failure;
  int last_step = 0;

  RunOptions opt;
  opt.snapshot_times = rc.snapshots;
  opt.observer = [&](const State& prev, const State& next, const StepReport& rep) {
    last_step = rep.step;
    DiagnosticsRecord r = make_record(rep.step, rep.time, next, st.reference_field(), phys);
    r.dnum = numerical_dissipation(prev, next, rep.dt, phys, rc.c.num.eps_flux);
    r.energy_residual = rep.energy_residual;
    r.picard_iters = rep.picard_iters;
    write_diagnostics_row(csv, r);
    if (!monitor_failure.empty()) return;
    if (std::abs(r.mass - mass0) > kMassTol * mass0) {
      monitor_failure = "mass drift at step " + std::to_string(rep.step);
    } else if (r.div_b_max > kDivTol * r.b_max) {
      monitor_failure = "div B at step " + std::to_string(rep.step);
    }
  };

  RunResult res;
  try {
    res = run(st, s0, spec.T, opt);
  } catch (const SolverError& e) {
    std::cerr << "mhdmc: step " << last_step + 1 << " of seed=" << id.master_seed
              << " n=" << id.index << " failed: " << e.what() << '\n';
    return kExitSolver;
  }

  const BoundaryTraces& t = st.traces();
  for (std::size_t k = 0; k < res.snapshots.size(); ++k) {
    const Snapshot& sn = res.snapshots[k];
    const fs::path base = out / ("snapshot_" + stamp(static_cast<int>(k)));
    write_state_binary(base.string() + ".bin", sn.state);
    if (rc.vtk) write_vtk(base.string() + ".vtk", sn.state, t, spec.name + " t=" + std::to_string(sn.time));
  }
  write_state_binary(out / "final.bin", res.final_state);
  if (rc.vtk) write_vtk(out / "final.vtk", res.final_state, t, spec.name + " final");

  std::cout << spec.name << ": " << res.reports.size() << " steps to T=" << spec.T << ", wrote "
            << out.string() << '\n';
  if (!monitor_failure.empty()) {
    std::cerr << "mhdmc: monitor failed: " << monitor_failure << '\n';
    return kExitMonitor;
  }
  return 0;
}

// --- convergence -----------------------------------------------------------

struct ConvCmd {
  Common c;
  std::vector<int> grids{16, 32, 64};
  double href = 0.0;  // 0: half of the finest grid width
};

int cmd_convergence(ConvCmd& cc) {
  const ExperimentSpec spec = prepare(cc.c);
  if (cc.grids.empty()) throw std::invalid_argument("--grids needs at least one mesh");
  const int nx_ref = cc.href > 0.0 ? nx_for_width(cc.href, spec.bounds)
                                   : 2 * *std::max_element(cc.grids.begin(), cc.grids.end());
  const Draw d = draw(spec, SampleId{cc.c.seed, 0, static_cast<std::uint32_t>(cc.c.sample)});
  const ErrorProblem prob{spec.bounds, spec.phys_for(d), spec.T,
                          [&](const Mesh& m) { return realize_initial_state(spec, d, m); }};
  std::vector<ErrorTableRow> rows;
  try {
    rows = deterministic_error_table(prob, cc.c.num, cc.grids, nx_ref);
  } catch (const SolverError& e) {
    std::cerr << "mhdmc: convergence run failed: " << e.what() << '\n';
    return kExitSolver;
  }
  std::ofstream csv = open_csv(out_dir(cc.c) / "error_table.csv");
  write_error_table(csv, rows);
  write_error_table(std::cout, rows);
  return 0;
}

// --- mc ----------------------------------------------------------------------

struct McCmd {
  Common c;
  std::vector<int> N_list{10, 20, 40, 80};
  int L = 8;
  int M_ref = 50;
  double href = 0.0;  // 0: half of the study width
  std::vector<std::string> schedule;  // "nx:N" pairs for the total-error study
  std::string cache;
};

fs::path cache_root(const Common& c, const std::string& cache) {
  return cache.empty() ? out_dir(c) / "references" : fs::path(cache);
}

std::vector<std::pair<int, int>> parse_schedule(const std::vector<std::string>& items) {
  std::vector<std::pair<int, int>> out;
  for (const std::string& s : items) {
    const auto colon = s.find(':');
    if (colon == std::string::npos) throw std::invalid_argument("schedule entries are nx:N, got " + s);
    out.emplace_back(std::stoi(s.substr(0, colon)), std::stoi(s.substr(colon + 1)));
    if (out.back().first < 2 || out.back().second < 1) throw std::invalid_argument("bad schedule entry " + s);
  }
  return out;
}

int cmd_mc(McCmd& mc) {
  const ExperimentSpec spec = prepare(mc.c);
  if (mc.L < 1) throw std::invalid_argument("--L must be at least 1");
  if (mc.M_ref < 2) throw std::invalid_argument("--Mref must be at least 2");
  for (int N : mc.N_list) {
    if (N < 1) throw std::invalid_argument("--N-list entries must be positive");
  }
  const auto schedule = parse_schedule(mc.schedule);
  int nx_ref = 2 * mc.c.nx;
  for (const auto& [nx, N] : schedule) nx_ref = std::max(nx_ref, 2 * nx);
  if (mc.href > 0.0) nx_ref = nx_for_width(mc.href, spec.bounds);

  const fs::path out = out_dir(mc.c);
  try {
    bool hit = false;
    const Reference ref = load_or_build_reference(cache_root(mc.c, mc.cache), spec, nx_ref, mc.M_ref,
                                                  mc.c.seed, mc.c.num, mc.c.jobs, &hit);
    std::cerr << "mhdmc: reference nx=" << nx_ref << " M=" << mc.M_ref << (hit ? " (cached)" : " (built)")
              << '\n';
    if (schedule.empty()) {
      McStudyConfig cfg;
      cfg.N_list = mc.N_list;
      cfg.L = mc.L;
      cfg.M_ref = mc.M_ref;
      cfg.nx1 = mc.c.nx;
      cfg.nx1_ref = nx_ref;
      cfg.seed = mc.c.seed;
      cfg.jobs = mc.c.jobs;
      const auto rows = statistical_study(spec, cfg, mc.c.num, ref);
      std::ofstream t = open_csv(out / "mc_errors.csv");
      write_mc_table(t, rows);
      if (rows.size() >= 2) {
        std::ofstream r = open_csv(out / "mc_rates.csv");
        write_rate_report(r, fit_rates(rows));
        write_rate_report(std::cout, fit_rates(rows));
      }
    } else {
      const auto rows = total_error_study(spec, schedule, mc.L, mc.c.seed, mc.c.num, ref, mc.c.jobs);
      std::ofstream t = open_csv(out / "total_errors.csv");
      write_mc_table(t, rows);
      write_mc_table(std::cout, rows);
    }
  } catch (const SolverError& e) {
    std::cerr << "mhdmc: " << e.what() << '\n';
    return kExitSolver;
  }
  return 0;
}

// --- reference ---------------------------------------------------------------

struct RefCmd {
  Common c;
  int M_ref = 50;
  double href = 0.0;  // 0: --nx
  std::string cache;
};

int cmd_reference(RefCmd& rc) {
  const ExperimentSpec spec = prepare(rc.c);
  if (rc.M_ref < 2) throw std::invalid_argument("--Mref must be at least 2");
  const int nx_ref = rc.href > 0.0 ? nx_for_width(rc.href, spec.bounds) : rc.c.nx;
  const fs::path root = cache_root(rc.c, rc.cache);
  try {
    bool hit = false;
    load_or_build_reference(root, spec, nx_ref, rc.M_ref, rc.c.seed, rc.c.num, rc.c.jobs, &hit);
    std::cout << reference_dir(root, spec, nx_ref, rc.M_ref, rc.c.seed, rc.c.num).string()
              << (hit ? " (cached)" : " (built)") << '\n';
  } catch (const SolverError& e) {
    std::cerr << "mhdmc: " << e.what() << '\n';
    return kExitSolver;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Implicit FV solver for viscous compressible MHD with random data"};
  app.set_config("--config", "", "TOML file; [run], [convergence], [mc], [reference] sections");
  app.require_subcommand(1);
  app.set_version_flag("--version", MHDMC_VERSION);

  RunCmd run_cmd;
  CLI::App* run = app.add_subcommand("run", "Run one sample and write diagnostics and fields");
  add_common(run, run_cmd.c);
  run->add_option("--snapshots", run_cmd.snapshots, "Snapshot times");
  run->add_flag("!--no-vtk", run_cmd.vtk, "Skip VTK output");

  ConvCmd conv_cmd;
  CLI::App* conv = app.add_subcommand("convergence", "Deterministic refinement error table");
  add_common(conv, conv_cmd.c);
  conv->add_option("--grids", conv_cmd.grids, "Coarse nx values");
  conv->add_option("--href", conv_cmd.href, "Reference mesh width");

  McCmd mc_cmd;
  CLI::App* mc = app.add_subcommand("mc", "Monte Carlo E1/E2 study");
  add_common(mc, mc_cmd.c);
  mc->add_option("--N-list", mc_cmd.N_list, "Sample counts N");
  mc->add_option("--L", mc_cmd.L, "Outer repetitions");
  mc->add_option("--Mref", mc_cmd.M_ref, "Reference ensemble size");
  mc->add_option("--href", mc_cmd.href, "Reference mesh width");
  mc->add_option("--schedule", mc_cmd.schedule, "Total-error schedule of nx:N pairs");
  mc->add_option("--cache", mc_cmd.cache, "Reference cache (default: <out>/references)");

  RefCmd ref_cmd;
  CLI::App* ref = app.add_subcommand("reference", "Build or load a reference ensemble");
  add_common(ref, ref_cmd.c);
  ref->add_option("--Mref", ref_cmd.M_ref, "Reference ensemble size");
  ref->add_option("--href", ref_cmd.href, "Reference mesh width");
  ref->add_option("--cache", ref_cmd.cache, "Reference cache (default: <out>/references)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run->parsed()) return cmd_run(run_cmd);
    if (conv->parsed()) return cmd_convergence(conv_cmd);
    if (mc->parsed()) return cmd_mc(mc_cmd);
    if (ref->parsed()) return cmd_reference(ref_cmd);
  } catch (const std::invalid_argument& e) {
    std::cerr << "mhdmc: invalid configuration: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "mhdmc: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
