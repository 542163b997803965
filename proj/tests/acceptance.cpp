// Acceptance checks. Prints one PASS/FAIL line per criterion.
//
//   acceptance [--cli PATH] [--cache DIR] [--only 1,4,9] [--known-failures 10] [--seed S]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "mhdmc/diagnostics.hpp"
#include "mhdmc/discrete_ops.hpp"
#include "mhdmc/montecarlo.hpp"
#include "mhdmc/physics.hpp"
#include "mhdmc/projections.hpp"
#include "mhdmc/scheme.hpp"
#include "mhdmc/stochastic.hpp"
#include "oracle.hpp"
#include "support.hpp"

namespace fs = std::filesystem;
using namespace mhdmc;
using mhdmc::testing::random_field;
using mhdmc::testing::random_vector;

namespace {

// ---- tolerances and sizes ---------------------------------------------------

constexpr double kIdentityTol = 1e-13;     // 1
constexpr double kIbpTol = 1e-12;          // 2
constexpr double kProjectionDivTol = 1e-9; // 3
constexpr double kMassTol = 1e-10;         // 4
constexpr double kDivTol = 1e-11;          // 6
constexpr double kEnergyFactor = 10.0;     // 7: residual <= 10 picard_tol E
constexpr double kOracleFactor = 10.0;     // 8: <= 10 lin_tol
constexpr double kSlopeLo = -0.65, kSlopeHi = -0.35;  // 10

struct Options {
  std::string cli;
  fs::path cache;
  std::set<int> only;
  std::set<int> known;  // still reported as FAIL, but do not set the exit code
  std::uint64_t seed = 1;
};

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

WallRule random_rule(std::mt19937_64& gen) {
  std::uniform_int_distribution<int> pick(0, 2);
  std::uniform_real_distribution<double> val(-2.0, 2.0);
  switch (pick(gen)) {
    case 0: return rules::odd();
    case 1: return rules::even();
    default: return rules::average(val(gen), val(gen));
  }
}

template <class G>
double wall_sum(const Mesh& m, G g) {
  double s = 0.0;
  for (int i = 0; i < m.nx1(); ++i) {
    s += m.h() * g(FaceIndex{2, i, 0, FaceKind::Exterior}, -1.0);
    s += m.h() * g(FaceIndex{2, i, m.nx2(), FaceKind::Exterior}, 1.0);
  }
  return s;
}

struct Case {
  ExperimentSpec spec;
  Mesh mesh;
  PhysParams phys;
  State initial;
};

Case make_case(const std::string& name, int nx1, bool deterministic, Draw d = {}) {
  ExperimentSpec spec = make_experiment(name);
  if (deterministic) spec = with_degenerate(spec);
  const Mesh m = build_mesh_for_width(nx1, spec.bounds);
  return {spec, m, spec.phys_for(d), realize_initial_state(spec, d, m)};
}

// ---- 1 ----------------------------------------------------------------------

Outcome discrete_identities() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 gen(101);
  const Mesh m = build_mesh(32, 32, Bounds{-1, 1, -1, 1});
  double dc = 0.0, cg = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const CellField s = random_field(m, gen);
    const WallRule r = trial % 2 == 0 ? rules::even() : rules::odd();
    dc = std::max(dc, div_cells(curl_scal(s, r), {random_rule(gen), r}).max_abs());
    cg = std::max(cg, curl_vec(grad_cells(s, r), {r, random_rule(gen)}).max_abs());
  }
  const double t = seconds_since(t0);
  return {dc <= kIdentityTol && cg <= kIdentityTol && t < 1.0,
          "max|div curl| " + num(dc) + ", max|curl grad| " + num(cg) + ", " + num(t) + " s"};
}

// ---- 2 ----------------------------------------------------------------------

Outcome integration_by_parts() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 gen(202);
  const Mesh m = build_mesh(24, 16, Bounds{0, 1.5, 0, 1});
  double worst = 0.0;
  auto rel = [&](double residual, double a, double b) {
    worst = std::max(worst, std::abs(residual) / (std::abs(a) + std::abs(b)));
  };
  for (int trial = 0; trial < 50; ++trial) {
    const CellField f = random_field(m, gen), w = random_field(m, gen);
    const CellVector v = random_vector(m, gen), F = random_vector(m, gen);

    // gradient against divergence
    for (const auto& [rf, rv2] : {std::pair{rules::even(), rules::odd()}, std::pair{rules::odd(), rules::even()}}) {
      const double a = inner(grad_cells(f, rf), v);
      const double b = inner(f, div_cells(v, {random_rule(gen), rv2}));
      rel(a + b, a, b);
    }
    // Laplacian against face gradients
    for (const auto& [rf, rw] : {std::pair{rules::even(), random_rule(gen)}, std::pair{random_rule(gen), rules::odd()}}) {
      const double a = inner(laplace_cells(f, rf), w);
      const double b = -dual_inner(grad_faces(f, rf), grad_faces(w, rw));
      rel(a - b, a, b);
    }
    // the two curls, admissible pair and general rules with their wall terms
    {
      const VectorRule rF{rules::even(), random_rule(gen)};
      const double a = inner(curl_vec(F, rF), w);
      const double b = inner(F, curl_scal(w, rules::odd()));
      rel(a - b, a, b);
    }
    const VectorRule rF{random_rule(gen), random_rule(gen)};
    const WallRule rw = random_rule(gen);
    const double a = inner(curl_vec(F, rF), w);
    const double b = inner(F, curl_scal(w, rw));
    const double wall = wall_sum(m, [&](const FaceIndex& s, double n2) {
      const Traces t = trace_in_out(w, s, rw);
      return -n2 * avg(F.c1, s, rF.c1) * t.in - 0.5 * n2 * jump(t) * trace_in_out(F.c1, s, rF.c1).in;
    });
    rel(a - b - wall, a, b);
  }
  const double t = seconds_since(t0);
  return {worst <= kIbpTol && t < 1.0, "max relative residual " + num(worst) + ", " + num(t) + " s"};
}

// ---- 3 ----------------------------------------------------------------------

// Random superposition of stream functions with zero normal derivative on the walls.
AnalyticVector random_stream(const Bounds& b, std::mt19937_64& gen) {
  std::uniform_int_distribution<int> k(0, 4), q(0, 4);
  std::uniform_real_distribution<double> c(-1, 1);
  std::vector<AnalyticVector> modes;
  for (int n = 0; n < 4; ++n) {
    const int kk = k(gen), qq = q(gen);
    if (kk == 0 && qq == 0) continue;
    modes.push_back(mhdmc::testing::stream_field(b, kk, qq, c(gen), c(gen)));
  }
  auto sum = [modes](int comp) {
    return AnalyticScalar{[modes, comp](double x1, double x2) {
      double s = 0.0;
      for (const AnalyticVector& v : modes) s += comp == 0 ? v.c1(x1, x2) : v.c2(x1, x2);
      return s;
    }};
  };
  return {sum(0), sum(1)};
}

Outcome projection_divergence() {
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 gen(303);
  double worst = 0.0;
  for (const auto& [nx, b] : {std::pair{32, Bounds{-1, 1, -1, 1}}, std::pair{24, Bounds{0, 2, -0.5, 0.5}}}) {
    const Mesh m = build_mesh_for_width(nx, b);
    const BoundaryTraces t = BoundaryTraces::mhd(0.0, 0.0);
    for (int n = 0; n < 10; ++n) {
      worst = std::max(worst, div_cells(project_line_avg(m, random_stream(b, gen)), t.magnetic).max_abs());
    }
    PhysParams p;
    p.b_minus = -1.3;
    p.b_plus = 0.4;
    const BoundaryTraces tb = BoundaryTraces::mhd(p.b_minus, p.b_plus);
    worst = std::max(worst, div_cells(wall_extension_field(m, p), tb.magnetic).max_abs());
  }
  const double t = seconds_since(t0);
  return {worst <= kProjectionDivTol && t < 5.0, "max|div Pi_B| " + num(worst) + ", " + num(t) + " s"};
}

// ---- 4 ----------------------------------------------------------------------

Outcome mass_conservation() {
  const Case c = make_case("sine", 64, true);
  const double m0 = integrate(c.initial.rho);
  double worst = 0.0, div = 0.0;
  RunOptions opt;
  opt.observer = [&](const State&, const State& s, const StepReport&) {
    worst = std::max(worst, std::abs(integrate(s.rho) - m0) / m0);
    const BoundaryTraces t = BoundaryTraces::mhd(c.phys.b_minus, c.phys.b_plus);
    div = std::max(div, div_cells(s.B, t.magnetic).max_abs() / s.B.max_abs());
  };
  const RunResult r = run(c.initial, c.phys, NumParams{}, c.spec.T, opt);
  return {worst <= kMassTol && div <= kDivTol,
          std::to_string(r.reports.size()) + " steps, max relative mass drift " + num(worst) +
              ", max div B/|B| " + num(div)};
}

// ---- 5, 6 -------------------------------------------------------------------

struct PresetRuns {
  double min_rho = INFINITY;
  double div_ratio = 0.0;
  int steps = 0;
  std::string where;
};

PresetRuns preset_runs(std::uint64_t seed) {
  static PresetRuns cached;
  static bool done = false;
  if (done) return cached;
  for (const std::string& name : experiment_names()) {
    const ExperimentSpec spec = make_experiment(name);
    const Draw d = draw(spec, SampleId{seed, 0, 0});
    const Case c = make_case(name, 32, false, d);
    const BoundaryTraces t = BoundaryTraces::mhd(c.phys.b_minus, c.phys.b_plus);
    RunOptions opt;
    opt.observer = [&](const State&, const State& s, const StepReport&) {
      ++cached.steps;
      cached.min_rho = std::min(cached.min_rho, s.rho.min());
      const double r = div_cells(s.B, t.magnetic).max_abs() / s.B.max_abs();
      if (r > cached.div_ratio) {
        cached.div_ratio = r;
        cached.where = name;
      }
    };
    run(c.initial, c.phys, NumParams{}, spec.T, opt);
  }
  done = true;
  return cached;
}

Outcome positivity(std::uint64_t seed) {
  const PresetRuns p = preset_runs(seed);
  return {p.min_rho > 0.0, "sine/kh/ot at nx=32 to T: " + std::to_string(p.steps) + " steps, min rho " + num(p.min_rho)};
}

Outcome divergence_free(std::uint64_t seed) {
  const PresetRuns p = preset_runs(seed);
  return {p.div_ratio <= kDivTol, "max div B/|B| " + num(p.div_ratio) + " (" + p.where + ")"};
}

// ---- 7 ----------------------------------------------------------------------

Outcome energy_balance_check(std::uint64_t seed) {
  const ExperimentSpec sine = make_experiment("sine");
  Case c = make_case("sine", 16, false, draw(sine, SampleId{seed, 0, 0}));
  const NumParams num_p;
  const double dt = num_p.dt_factor * c.mesh.h();
  double worst = 0.0, min_part = INFINITY;
  {
    const Stepper st(c.mesh, c.phys, num_p);
    State s = c.initial;
    for (int k = 0; k < 20; ++k) {
      const State n = st.advance(s, dt).state;
      const EnergyBalance e = energy_balance(s, n, dt, c.phys, num_p);
      worst = std::max(worst, e.residual / (num_p.picard_tol * e.energy_next));
      const DissipationParts d = numerical_dissipation(s, n, dt, c.phys, num_p.eps_flux);
      min_part = std::min({min_part, d.time, d.density_jump, d.velocity_jump});
      s = n;
    }
  }
  bool nonincreasing = true;
  for (const std::string& name : experiment_names()) {
    Case h = make_case(name, 16, false, draw(make_experiment(name), SampleId{seed, 0, 0}));
    h.phys.b_minus = h.phys.b_plus = 0.0;
    h.phys.g = {0.0, 0.0};
    const Stepper st(h.mesh, h.phys, num_p);
    State s = h.initial;
    double E = total_energy(s, st.reference_field(), h.phys);
    for (int k = 0; k < 20; ++k) {
      s = st.advance(s, num_p.dt_factor * h.mesh.h()).state;
      const double En = total_energy(s, st.reference_field(), h.phys);
      nonincreasing = nonincreasing && En <= E * (1 + 1e-12);
      E = En;
    }
  }
  return {worst <= kEnergyFactor && min_part >= 0.0 && nonincreasing,
          "max residual/(picard_tol E) " + num(worst) + ", min D_num part " + num(min_part) +
              ", energy nonincreasing without data " + (nonincreasing ? "yes" : "no")};
}

// ---- 8 ----------------------------------------------------------------------

Outcome single_step_oracle(std::uint64_t seed) {
  const ExperimentSpec sine = make_experiment("sine");
  const Case c = make_case("sine", 8, false, draw(sine, SampleId{seed, 0, 0}));
  NumParams num_p;
  num_p.picard_tol = 1e-13;
  const double dt = num_p.dt_factor * c.mesh.h();
  const Stepper st(c.mesh, c.phys, num_p);
  const State a = st.advance(c.initial, dt).state;
  const State o = mhdmc::testing::oracle_step(c.initial, dt, c.phys, num_p.eps_flux, 1e-14);
  const double dist = mhdmc::testing::relative_distance(a, o);
  const double res = mhdmc::testing::scheme_residual(c.initial, a, dt, c.phys, num_p.eps_flux).max();
  const double tol = kOracleFactor * num_p.lin_tol;
  return {dist <= tol && res <= tol, "distance to dense oracle " + num(dist) + ", balance residual " + num(res)};
}

// ---- 9 ----------------------------------------------------------------------

Outcome deterministic_convergence() {
  const ExperimentSpec spec = with_degenerate(make_experiment("sine"));
  const ErrorProblem prob{spec.bounds, spec.phys_for(Draw{}), spec.T,
                          [&](const Mesh& m) { return realize_initial_state(spec, Draw{}, m); }};
  const auto rows = deterministic_error_table(prob, NumParams{}, {16, 32, 64}, 128);
  bool ok = true;
  std::string d;
  for (std::size_t k = 0; k < 6; ++k) {
    d += (k ? " " : "") + observable_name(kObservables[k]) + ":";
    for (std::size_t r = 0; r < rows.size(); ++r) {
      d += (r ? ">" : "") + num(rows[r].errors[k]);
      if (r > 0) ok = ok && rows[r].errors[k] < rows[r - 1].errors[k];
    }
  }
  return {ok, d};
}

// ---- 10 ---------------------------------------------------------------------

Outcome statistical_rate(const Options& o) {
  const ExperimentSpec spec = make_experiment("sine");
  const NumParams num_p;
  McStudyConfig cfg;
  cfg.N_list = {10, 20, 40, 80};
  cfg.L = 8;
  cfg.M_ref = 50;
  cfg.nx1 = 32;
  cfg.nx1_ref = 64;
  cfg.seed = o.seed;
  const Reference ref = load_or_build_reference(o.cache, spec, cfg.nx1_ref, cfg.M_ref, o.seed, num_p);
  const auto rows = statistical_study(spec, cfg, num_p, ref);
  const RateReport rep = fit_rates(rows);
  bool ok = true;
  std::string d = "E1 slopes";
  for (std::size_t k = 0; k < 6; ++k) {
    ok = ok && rep.slope_e1[k] >= kSlopeLo && rep.slope_e1[k] <= kSlopeHi;
    d += " " + observable_name(kObservables[k]) + " " + num(rep.slope_e1[k]);
  }
  d += "; E2 slopes";
  for (std::size_t k = 0; k < 6; ++k) d += " " + num(rep.slope_e2[k]);
  return {ok, d};
}

// ---- 11 ---------------------------------------------------------------------

Outcome total_error(const Options& o) {
  const ExperimentSpec spec = make_experiment("sine");
  const NumParams num_p;
  const int nx_ref = 128, M_ref = 16;
  const Reference ref = load_or_build_reference(o.cache, spec, nx_ref, M_ref, o.seed, num_p);
  const auto rows = total_error_study(spec, {{16, 10}, {32, 20}, {64, 40}}, 4, o.seed, num_p, ref);
  bool ok = true;
  std::string d;
  for (std::size_t k = 0; k < 3; ++k) {
    d += (k ? " " : "") + observable_name(kObservables[k]) + ":";
    for (std::size_t r = 0; r < rows.size(); ++r) {
      d += (r ? ">" : "") + num(rows[r].err.e1[k]);
      if (r > 0) ok = ok && rows[r].err.e1[k] < rows[r - 1].err.e1[k];
    }
  }
  return {ok, d + " (reference nx=128, M=16)"};
}

// ---- 12 ---------------------------------------------------------------------

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::string((std::istreambuf_iterator<char>(in)), {});
}

Outcome reproducibility(const Options& o) {
  if (o.cli.empty()) return {false, "no --cli given"};
  const fs::path base = fs::temp_directory_path() / "mhdmc_acceptance_repro";
  fs::remove_all(base);
  const std::vector<std::string> files = {"run/diagnostics.csv", "mc/mc_errors.csv", "mc/mc_rates.csv"};
  std::vector<std::string> first;
  for (int pass = 0; pass < 2; ++pass) {
    const fs::path out = base / std::to_string(pass);
    const std::string common = " --seed " + std::to_string(o.seed) + " --jobs 2 --T 0.1";
    const std::string run = o.cli + " run --experiment sine --nx 16 --no-vtk" + common + " --out " +
                            (out / "run").string() + " > /dev/null";
    const std::string mc = o.cli + " mc --experiment sine --nx 8 --N-list 2 4 --L 2 --Mref 3" + common +
                           " --out " + (out / "mc").string() + " > /dev/null 2>&1";
    if (std::system(run.c_str()) != 0 || std::system(mc.c_str()) != 0) return {false, "CLI invocation failed"};
    for (std::size_t k = 0; k < files.size(); ++k) {
      const std::string s = slurp(out / files[k]);
      if (s.empty()) return {false, files[k] + " missing"};
      if (pass == 0) {
        first.push_back(s);
      } else if (s != first[k]) {
        return {false, files[k] + " differs between invocations"};
      }
    }
  }
  fs::remove_all(base);
  return {true, "run and mc CSVs bit-identical across two invocations with --jobs 2"};
}

}  // namespace

int main(int argc, char** argv) {
  Options o;
  o.cache = fs::temp_directory_path() / "mhdmc_acceptance_cache";
  for (int k = 1; k < argc; ++k) {
    const std::string a = argv[k];
    const bool has = k + 1 < argc;
    if (a == "--cli" && has) {
      o.cli = argv[++k];
    } else if (a == "--cache" && has) {
      o.cache = argv[++k];
    } else if (a == "--seed" && has) {
      o.seed = std::stoull(argv[++k]);
    } else if (a == "--only" && has) {
      std::stringstream ss(argv[++k]);
      for (std::string item; std::getline(ss, item, ',');) o.only.insert(std::stoi(item));
    } else if (a == "--known-failures" && has) {
      std::stringstream ss(argv[++k]);
      for (std::string item; std::getline(ss, item, ',');) o.known.insert(std::stoi(item));
    } else {
      std::cerr << "usage: acceptance [--cli PATH] [--cache DIR] [--only 1,2,...] [--known-failures 10,...] [--seed S]\n";
      return 2;
    }
  }

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"discrete identities", [] { return discrete_identities(); }},
      {"integration by parts", [] { return integration_by_parts(); }},
      {"Pi_B divergence-free", [] { return projection_divergence(); }},
      {"mass conservation", [] { return mass_conservation(); }},
      {"positivity", [&] { return positivity(o.seed); }},
      {"divergence-free evolution", [&] { return divergence_free(o.seed); }},
      {"energy balance", [&] { return energy_balance_check(o.seed); }},
      {"single-step oracle", [&] { return single_step_oracle(o.seed); }},
      {"deterministic convergence", [] { return deterministic_convergence(); }},
      {"statistical rate", [&] { return statistical_rate(o); }},
      {"total-error monotonicity", [&] { return total_error(o); }},
      {"reproducibility", [&] { return reproducibility(o); }},
  };

  int failed = 0, known = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const int id = static_cast<int>(k) + 1;
    if (!o.only.empty() && !o.only.count(id)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome r;
    try {
      r = criteria[k].second();
    } catch (const std::exception& e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    if (!r.pass) (o.known.count(id) ? known : failed) += 1;
    std::cout << (r.pass ? "PASS" : "FAIL") << " " << id << " " << criteria[k].first << ": " << r.detail << " ["
              << num(seconds_since(t0)) << " s]" << std::endl;
  }
  std::cout << failed << " unexpected failure(s), " << known << " known failure(s)" << std::endl;
  return failed == 0 ? 0 : 1;
}
