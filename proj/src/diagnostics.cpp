#include "mhdmc/diagnostics.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <memory>
#include <stdexcept>

#include "mhdmc/scheme.hpp"

namespace mhdmc {

namespace {

const BoundaryTraces& traces_for(const PhysParams& phys, BoundaryTraces& storage) {
  storage = BoundaryTraces::mhd(phys.b_minus, phys.b_plus);
  return storage;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

struct ErrorAccumulator {
  std::array<double, 6> value{};
  void add(const std::array<Observation, 6>& coarse, const std::array<Observation, 6>& ref,
           double dt, const PhysParams& phys, bool include_l2) {
    for (std::size_t k = 0; k < 6; ++k) {
      const Observation r = restrict_to(ref[k], coarse[k].mesh);
      const double e = norm(difference(coarse[k], r), observable_exponent(kObservables[k], phys.gamma));
      if (k < 3) {
        value[k] = std::max(value[k], e);
      } else if (include_l2) {
        value[k] += dt * e * e;
      }
    }
  }
  std::array<double, 6> finish() const {
    std::array<double, 6> out = value;
    for (std::size_t k = 3; k < 6; ++k) out[k] = std::sqrt(out[k]);
    return out;
  }
};

void fill_rates(std::vector<ErrorTableRow>& rows) {
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t k = 0; k < 6; ++k) {
      rows[r].rates[k] = r == 0 ? std::numeric_limits<double>::quiet_NaN()
                                : observed_rate(rows[r - 1].errors[k], rows[r].errors[k]);
    }
  }
}

}  // namespace

DissipationParts numerical_dissipation(const State& prev, const State& next, double dt,
                                       const PhysParams& phys, double eps) {
  const Mesh& m = next.mesh();
  const double h = m.h();
  const double he = std::pow(h, eps);
  DissipationParts d;

  std::vector<double> t(m.cell_count());
  for (std::size_t k = 0; k < t.size(); ++k) {
    const double du1 = next.u.c1[k] - prev.u.c1[k];
    const double du2 = next.u.c2[k] - prev.u.c2[k];
    const double dB1 = next.B.c1[k] - prev.B.c1[k];
    const double dB2 = next.B.c2[k] - prev.B.c2[k];
    t[k] = potential_remainder(prev.rho[k], next.rho[k], phys) / dt +
           0.5 * prev.rho[k] * (du1 * du1 + du2 * du2) / dt + 0.5 * (dB1 * dB1 + dB2 * dB2) / dt;
  }
  d.time = m.cell_area() * pairwise_sum(t);

  std::vector<double> rj, uj;
  for (int dir = 1; dir <= 2; ++dir) {
    for (const FaceIndex& f : m.faces(dir)) {
      if (f.kind != FaceKind::Interior) continue;
      const Traces r = trace_in_out(next.rho, f, WallRule{});
      const Traces v1 = trace_in_out(next.u.c1, f, WallRule{});
      const Traces v2 = trace_in_out(next.u.c2, f, WallRule{});
      const double v = normal_velocity(next.u, f);
      const double a = r.in;
      const double c = r.out;
      const double bregman = v >= 0.0 ? potential_remainder(a, c, phys)
                                      : potential_remainder(c, a, phys);
      const double dP = pressure_potential_derivative(c, phys) - pressure_potential_derivative(a, phys);
      rj.push_back(h * (he * (c - a) * dP + std::abs(v) * bregman));
      const double up = v >= 0.0 ? a : c;
      const double ju = jump(v1) * jump(v1) + jump(v2) * jump(v2);
      uj.push_back(h * (0.5 * up * std::abs(v) + he * 0.5 * (a + c)) * ju);
    }
  }
  d.density_jump = pairwise_sum(rj);
  d.velocity_jump = pairwise_sum(uj);
  return d;
}

EnergyBalance energy_balance(const State& prev, const State& next, double dt,
                             const PhysParams& phys, const NumParams& num, const CellVector& bref) {
  BoundaryTraces storage;
  const BoundaryTraces& tr = traces_for(phys, storage);
  EnergyBalance e;
  e.energy_prev = total_energy(prev, bref, phys);
  e.energy_next = total_energy(next, bref, phys);
  e.rate = (e.energy_next - e.energy_prev) / dt;

  const FaceGradient g1 = grad_faces(next.u.c1, tr.velocity.c1);
  const FaceGradient g2 = grad_faces(next.u.c2, tr.velocity.c2);
  e.viscous = phys.mu * (dual_inner(g1, g1) + dual_inner(g2, g2));
  const CellField dv = div_cells(next.u, tr.velocity);
  e.bulk = phys.nu() * inner(dv, dv);
  const CellField s = curl_vec(next.B, tr.magnetic);
  e.resistive = phys.zeta * inner(s, s);
  e.dnum = numerical_dissipation(prev, next, dt, phys, num.eps_flux);

  CellField f(next.mesh());
  for (std::size_t k = 0; k < f.size(); ++k) {
    f[k] = next.u.c1[k] * next.B.c2[k] - next.u.c2[k] * next.B.c1[k] - phys.zeta * s[k];
  }
  e.boundary_work = -inner(f, curl_vec(bref, tr.magnetic));
  CellField gw(next.mesh());
  for (std::size_t k = 0; k < gw.size(); ++k) {
    gw[k] = next.rho[k] * (next.u.c1[k] * phys.g[0] + next.u.c2[k] * phys.g[1]);
  }
  e.gravity_work = integrate(gw);
  e.residual = std::abs(e.lhs() - e.rhs());
  return e;
}

EnergyBalance energy_balance(const State& prev, const State& next, double dt,
                             const PhysParams& phys, const NumParams& num) {
  return energy_balance(prev, next, dt, phys, num, wall_extension_field(next.mesh(), phys));
}

double energy_residual(const State& prev, const State& next, double dt, const PhysParams& phys,
                       const NumParams& num) {
  return energy_balance(prev, next, dt, phys, num).residual;
}

RenormalizedBalance renormalized_continuity(const State& prev, const State& next, double dt,
                                            double eps) {
  const Mesh& m = next.mesh();
  const double h = m.h();
  const double he = std::pow(h, eps);
  const CellField dv = div_cells(next.u, {rules::odd(), rules::odd()});
  std::vector<double> l(m.cell_count()), r(m.cell_count());
  for (std::size_t k = 0; k < l.size(); ++k) {
    const double rho = next.rho[k];
    const double dtr = (rho - prev.rho[k]) / dt;
    l[k] = (rho * rho - prev.rho[k] * prev.rho[k]) / dt + rho * rho * dv[k];
    r[k] = -dt * dtr * dtr;
  }
  RenormalizedBalance b;
  b.lhs = m.cell_area() * pairwise_sum(l);
  std::vector<double> fj;
  for (int dir = 1; dir <= 2; ++dir) {
    for (const FaceIndex& f : m.faces(dir)) {
      if (f.kind != FaceKind::Interior) continue;
      const double jr = jump(next.rho, f, WallRule{});
      fj.push_back(-h * 2.0 * jr * jr * (he + 0.5 * std::abs(normal_velocity(next.u, f))));
    }
  }
  b.rhs = m.cell_area() * pairwise_sum(r) + pairwise_sum(fj);
  return b;
}

UniformBounds uniform_bounds(const State& s, const PhysParams& phys) {
  const BoundaryTraces tr = BoundaryTraces::mhd(phys.b_minus, phys.b_plus);
  UniformBounds b;
  b.rho_lgamma = lp_norm(s.rho, phys.gamma);
  b.momentum = lp_norm(s.momentum(), 2.0 * phys.gamma / (phys.gamma + 1.0));
  b.u = lp_norm(s.u, 2.0);
  const FaceGradient g[2] = {grad_faces(s.u.c1, tr.velocity.c1), grad_faces(s.u.c2, tr.velocity.c2)};
  b.grad_u = dual_l2_norm(std::span<const FaceGradient>(g, 2));
  b.div_u = lp_norm(div_cells(s.u, tr.velocity), 2.0);
  b.B = lp_norm(s.B, 2.0);
  b.curl_B = lp_norm(curl_vec(s.B, tr.magnetic), 2.0);
  return b;
}

DiagnosticsRecord make_record(int step, double time, const State& s, const CellVector& bref,
                              const PhysParams& phys) {
  const BoundaryTraces tr = BoundaryTraces::mhd(phys.b_minus, phys.b_plus);
  DiagnosticsRecord r;
  r.step = step;
  r.time = time;
  r.mass = integrate(s.rho);
  r.energy = total_energy(s, bref, phys);
  r.min_rho = s.rho.min();
  r.max_rho = s.rho.max();
  r.div_b_max = div_cells(s.B, tr.magnetic).max_abs();
  r.b_max = s.B.max_abs();
  r.bounds = uniform_bounds(s, phys);
  return r;
}

std::vector<std::string> diagnostics_columns() {
  return {"step",          "time",          "mass",         "energy",       "dnum_time",
          "dnum_density",  "dnum_velocity", "energy_residual", "min_rho",   "max_rho",
          "div_b_max",     "b_max",         "picard_iters", "norm_rho_lgamma", "norm_m",
          "norm_u",        "norm_grad_u",   "norm_div_u",   "norm_B",       "norm_curl_B"};
}

void write_diagnostics_header(std::ostream& os) {
  const auto cols = diagnostics_columns();
  for (std::size_t k = 0; k < cols.size(); ++k) os << (k ? "," : "") << cols[k];
  os << '\n';
}

void write_diagnostics_row(std::ostream& os, const DiagnosticsRecord& r) {
  os << r.step << ',' << fmt(r.time) << ',' << fmt(r.mass) << ',' << fmt(r.energy) << ','
     << fmt(r.dnum.time) << ',' << fmt(r.dnum.density_jump) << ',' << fmt(r.dnum.velocity_jump)
     << ',' << fmt(r.energy_residual) << ',' << fmt(r.min_rho) << ',' << fmt(r.max_rho) << ','
     << fmt(r.div_b_max) << ',' << fmt(r.b_max) << ',' << r.picard_iters;
  for (double v : r.bounds.values()) os << ',' << fmt(v);
  os << '\n';
}

double observed_rate(double e_coarse, double e_fine) { return std::log2(e_coarse / e_fine); }

std::vector<ErrorTableRow> deterministic_error_table(const ErrorProblem& problem,
                                                     const NumParams& num,
                                                     const std::vector<int>& nx1_list,
                                                     int nx1_ref) {
  const Mesh ref_mesh = build_mesh_for_width(nx1_ref, problem.bounds);
  const Stepper ref_stepper(ref_mesh, problem.phys, num);
  const TimeGrid ref_grid = time_grid(ref_mesh, num, problem.T);

  struct Level {
    Mesh mesh;
    std::unique_ptr<Stepper> stepper;
    TimeGrid grid;
    int stride = 1;
    State state;
    ErrorAccumulator acc;
  };
  std::vector<Level> levels;
  for (int nx : nx1_list) {
    Level L;
    L.mesh = build_mesh_for_width(nx, problem.bounds);
    refinement_ratio(ref_mesh, L.mesh);
    L.stepper = std::make_unique<Stepper>(L.mesh, problem.phys, num);
    L.grid = time_grid(L.mesh, num, problem.T);
    if (ref_grid.steps % L.grid.steps != 0) {
      throw std::invalid_argument("coarse and reference time grids are not aligned");
    }
    L.stride = ref_grid.steps / L.grid.steps;
    L.state = problem.initial(L.mesh);
    levels.push_back(std::move(L));
  }

  State ref = problem.initial(ref_mesh);
  const BoundaryTraces& tr = ref_stepper.traces();
  {
    const auto ro = observe_all(ref, tr);
    for (Level& L : levels) L.acc.add(observe_all(L.state, tr), ro, L.grid.dt, problem.phys, false);
  }
  for (int k = 1; k <= ref_grid.steps; ++k) {
    ref = ref_stepper.advance(ref, ref_grid.dt).state;
    std::array<Observation, 6> ro;
    bool observed = false;
    for (Level& L : levels) {
      if (k % L.stride != 0) continue;
      L.state = L.stepper->advance(L.state, L.grid.dt).state;
      if (!observed) {
        ro = observe_all(ref, tr);
        observed = true;
      }
      L.acc.add(observe_all(L.state, tr), ro, L.grid.dt, problem.phys, true);
    }
  }

  std::vector<ErrorTableRow> rows;
  for (const Level& L : levels) {
    ErrorTableRow row;
    row.nx1 = L.mesh.nx1();
    row.h = L.mesh.h();
    row.errors = L.acc.finish();
    rows.push_back(row);
  }
  fill_rates(rows);
  return rows;
}

std::vector<ErrorTableRow> error_table_from_trajectories(
    const std::vector<std::vector<State>>& coarse, const std::vector<State>& reference,
    const std::vector<double>& dts, const PhysParams& phys) {
  if (coarse.size() != dts.size()) throw std::invalid_argument("one time step per trajectory");
  const BoundaryTraces tr = BoundaryTraces::mhd(phys.b_minus, phys.b_plus);
  const std::size_t n_ref = reference.size() - 1;
  std::vector<ErrorTableRow> rows;
  for (std::size_t g = 0; g < coarse.size(); ++g) {
    const std::size_t n = coarse[g].size() - 1;
    if (n == 0 || n_ref % n != 0) throw std::invalid_argument("trajectories are not aligned in time");
    const std::size_t stride = n_ref / n;
    ErrorAccumulator acc;
    for (std::size_t k = 0; k <= n; ++k) {
      acc.add(observe_all(coarse[g][k], tr), observe_all(reference[k * stride], tr), dts[g], phys,
              k > 0);
    }
    ErrorTableRow row;
    row.nx1 = coarse[g][0].mesh().nx1();
    row.h = coarse[g][0].mesh().h();
    row.errors = acc.finish();
    rows.push_back(row);
  }
  fill_rates(rows);
  return rows;
}

void write_error_table(std::ostream& os, const std::vector<ErrorTableRow>& rows) {
  os << "nx1,h";
  for (Observable o : kObservables) os << ",err_" << observable_name(o);
  for (Observable o : kObservables) os << ",rate_" << observable_name(o);
  os << '\n';
  for (const ErrorTableRow& r : rows) {
    os << r.nx1 << ',' << fmt(r.h);
    for (double e : r.errors) os << ',' << fmt(e);
    for (double q : r.rates) os << ',' << (std::isnan(q) ? std::string() : fmt(q));
    os << '\n';
  }
}

std::vector<TimedValue> relative_energy_curve(const std::vector<std::pair<double, State>>& traj,
                                              const std::vector<std::pair<double, State>>& ref,
                                              const PhysParams& phys) {
  std::vector<TimedValue> out;
  std::size_t j = 0;
  for (const auto& [t, s] : traj) {
    const double tol = 1e-9 * std::max(1.0, std::abs(t));
    while (j < ref.size() && ref[j].first < t - tol) ++j;
    if (j == ref.size() || std::abs(ref[j].first - t) > tol) {
      throw std::invalid_argument("reference has no snapshot at time " + fmt(t));
    }
    out.push_back({t, relative_energy(s, restrict_to(ref[j].second, s.mesh()), phys)});
  }
  return out;
}

}  // namespace mhdmc
