#include "mhdmc/scheme.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>
#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseLU>

#include "mhdmc/diagnostics.hpp"

namespace mhdmc {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;
using Vec = Eigen::VectorXd;

constexpr std::size_t kDenseCellLimit = 16 * 16;

// Rows of a linear cell stencil; neighbors past a wall fold back onto the inside cell
// according to the ghost rule (the affine part of Average rules is not needed here).
class StencilBuilder {
 public:
  explicit StencilBuilder(const Mesh& m) : m_(m) {}

  void add(std::size_t row, int i, int j, double coeff, const WallRule& rule) {
    if (j < 0 || j >= m_.nx2()) {
      const int jin = j < 0 ? 0 : m_.nx2() - 1;
      const double fold = rule.homogenized().outside(1.0, j < 0 ? Wall::Bottom : Wall::Top);
      t_.emplace_back(row, m_.index(m_.wrap1(i), jin), fold * coeff);
      return;
    }
    t_.emplace_back(row, m_.index(m_.wrap1(i), j), coeff);
  }

  SparseMat build() const {
    const auto n = static_cast<Eigen::Index>(m_.cell_count());
    SparseMat A(n, n);
    A.setFromTriplets(t_.begin(), t_.end());
    return A;
  }

 private:
  const Mesh& m_;
  Triplets t_;
};

SparseMat d1_matrix(const Mesh& m) {
  StencilBuilder b(m);
  const double c = 0.5 / m.h();
  for (int j = 0; j < m.nx2(); ++j) {
    for (int i = 0; i < m.nx1(); ++i) {
      const std::size_t row = m.index(i, j);
      b.add(row, i + 1, j, c, WallRule{});
      b.add(row, i - 1, j, -c, WallRule{});
    }
  }
  return b.build();
}

SparseMat d2_matrix(const Mesh& m, const WallRule& rule) {
  StencilBuilder b(m);
  const double c = 0.5 / m.h();
  for (int j = 0; j < m.nx2(); ++j) {
    for (int i = 0; i < m.nx1(); ++i) {
      const std::size_t row = m.index(i, j);
      b.add(row, i, j + 1, c, rule);
      b.add(row, i, j - 1, -c, rule);
    }
  }
  return b.build();
}

SparseMat laplace_matrix(const Mesh& m, const WallRule& rule) {
  StencilBuilder b(m);
  const double c = 1.0 / (m.h() * m.h());
  for (int j = 0; j < m.nx2(); ++j) {
    for (int i = 0; i < m.nx1(); ++i) {
      const std::size_t row = m.index(i, j);
      b.add(row, i, j, -4.0 * c, rule);
      b.add(row, i + 1, j, c, rule);
      b.add(row, i - 1, j, c, rule);
      b.add(row, i, j + 1, c, rule);
      b.add(row, i, j - 1, c, rule);
    }
  }
  return b.build();
}

void append(Triplets& t, const SparseMat& A, Eigen::Index r0, Eigen::Index c0, double s = 1.0) {
  for (Eigen::Index k = 0; k < A.outerSize(); ++k) {
    for (SparseMat::InnerIterator it(A, k); it; ++it) {
      t.emplace_back(r0 + it.row(), c0 + it.col(), s * it.value());
    }
  }
}

SparseMat from_blocks(Eigen::Index rows, Eigen::Index cols, const Triplets& t) {
  SparseMat A(rows, cols);
  A.setFromTriplets(t.begin(), t.end());
  return A;
}

Vec to_vec(const CellField& f) { return Eigen::Map<const Vec>(f.data().data(), f.size()); }

Vec to_vec(const CellVector& v) {
  Vec x(2 * v.size());
  x << to_vec(v.c1), to_vec(v.c2);
  return x;
}

CellField to_field(const Mesh& m, const Vec& x, Eigen::Index offset = 0) {
  CellField f(m);
  for (std::size_t k = 0; k < f.size(); ++k) f[k] = x[offset + static_cast<Eigen::Index>(k)];
  return f;
}

CellVector to_vector(const Mesh& m, const Vec& x) {
  return {to_field(m, x, 0), to_field(m, x, static_cast<Eigen::Index>(m.cell_count()))};
}

}  // namespace

void NumParams::validate() const {
  check_flux_exponent(eps_flux);
  if (!(dt_factor > 0.0)) throw std::invalid_argument("dt_factor must be positive");
  if (!(picard_tol > 0.0)) throw std::invalid_argument("picard_tol must be positive");
  if (!(lin_tol > 0.0)) throw std::invalid_argument("lin_tol must be positive");
  if (picard_max < 1) throw std::invalid_argument("picard_max must be at least 1");
  if (lin_max < 1) throw std::invalid_argument("lin_max must be at least 1");
  if (max_halvings < 0) throw std::invalid_argument("max_halvings must be nonnegative");
}

NumParams NumParams::rate_study() {
  NumParams n;
  n.eps_flux = -6.0 / 13.0;
  return n;
}

Stepper::Stepper(const Mesh& mesh, const PhysParams& phys, const NumParams& num)
    : mesh_(mesh),
      phys_(phys),
      num_(num),
      traces_(BoundaryTraces::mhd(phys.b_minus, phys.b_plus)),
      bref_(wall_extension_field(mesh, phys)) {
  phys_.validate();
  num_.validate();
  if (num_.solver == LinearSolver::Dense && mesh.cell_count() > kDenseCellLimit) {
    throw std::invalid_argument("dense linear solves are limited to grids of at most 16x16 cells");
  }
  const auto n = static_cast<Eigen::Index>(mesh.cell_count());
  const WallRule odd = rules::odd();
  const WallRule even = rules::even();

  d1e_ = d1_matrix(mesh);
  d2e_ = d2_matrix(mesh, even);
  const SparseMat d2o = d2_matrix(mesh, odd);
  const SparseMat lap_odd = laplace_matrix(mesh, odd);

  // grad (even ghosts) of div (odd ghosts): blocks [d1 d1, d1 d2o; d2e d1, d2e d2o]
  const SparseMat g11 = d1e_ * d1e_;
  const SparseMat g12 = d1e_ * d2o;
  const SparseMat g21 = d2e_ * d1e_;
  const SparseMat g22 = d2e_ * d2o;
  Triplets t;
  append(t, lap_odd, 0, 0, -phys_.mu);
  append(t, lap_odd, n, n, -phys_.mu);
  append(t, g11, 0, 0, -phys_.nu());
  append(t, g12, 0, n, -phys_.nu());
  append(t, g21, n, 0, -phys_.nu());
  append(t, g22, n, n, -phys_.nu());
  visc_ = from_blocks(2 * n, 2 * n, t);

  t.clear();
  append(t, d2e_, 0, 0, 1.0);
  append(t, d1e_, n, 0, -1.0);
  curl_s_ = from_blocks(2 * n, n, t);

  // homogenized curl_vec: d1 B2 (even) - d2 B1 (odd)
  t.clear();
  append(t, d2o, 0, 0, -1.0);
  append(t, d1e_, 0, n, 1.0);
  const SparseMat kc = from_blocks(n, 2 * n, t);
  kc_c_ = kc * curl_s_;
}

SparseMat Stepper::transport_matrix(const CellVector& u, double dt) const {
  const Mesh& m = mesh_;
  const double he = std::pow(m.h(), num_.eps_flux);
  const double s = dt / m.h();
  Triplets t;
  t.reserve(5 * m.cell_count());
  for (std::size_t k = 0; k < m.cell_count(); ++k) t.emplace_back(k, k, 1.0);
  for (int dir = 1; dir <= 2; ++dir) {
    for (const FaceIndex& f : m.faces(dir)) {
      if (f.kind != FaceKind::Interior) continue;
      const auto cells = m.face_cells(f);
      const std::size_t K = m.index(cells[0].i, cells[0].j);
      const std::size_t L = m.index(cells[1].i, cells[1].j);
      const double v = normal_velocity(u, f);
      const double cin = s * (std::max(v, 0.0) + he);   // coefficient of rho_K in the flux
      const double cout = s * (std::min(v, 0.0) - he);  // coefficient of rho_L
      t.emplace_back(K, K, cin);
      t.emplace_back(K, L, cout);
      t.emplace_back(L, K, -cin);
      t.emplace_back(L, L, -cout);
    }
  }
  const auto n = static_cast<Eigen::Index>(m.cell_count());
  return from_blocks(n, n, t);
}

Vec Stepper::solve(const SparseMat& A, const Vec& b, const Vec& x0, int* iters) const {
  if (num_.solver == LinearSolver::Dense) {
    const Eigen::MatrixXd D(A);
    Vec x = D.partialPivLu().solve(b);
    if (!x.allFinite()) throw LinearSolveFailed("dense LU produced non-finite values");
    return x;
  }
  if (b.squaredNorm() == 0.0) return Vec::Zero(b.size());
  Eigen::BiCGSTAB<SparseMat, Eigen::DiagonalPreconditioner<double>> solver;
  solver.setTolerance(num_.lin_tol);
  solver.setMaxIterations(num_.lin_max);
  solver.compute(A);
  Vec x = solver.solveWithGuess(b, x0);
  if (iters) *iters += static_cast<int>(solver.iterations());
  if (solver.info() == Eigen::Success && x.allFinite()) return x;

  // BiCGSTAB can break down on the nonsymmetric systems; fall back to a sparse LU.
  Eigen::SparseLU<SparseMat> lu;
  lu.compute(A);
  if (lu.info() != Eigen::Success) throw LinearSolveFailed("sparse LU factorization failed");
  x = lu.solve(b);
  if (lu.info() != Eigen::Success || !x.allFinite()) {
    throw LinearSolveFailed("sparse LU solve failed");
  }
  return x;
}

State Stepper::picard_sweep(const State& iterate, const State& prev, double dt,
                            int* linear_iters) const {
  const Mesh& m = mesh_;
  const auto n = static_cast<Eigen::Index>(m.cell_count());

  // density with frozen transporting velocity
  const SparseMat A = transport_matrix(iterate.u, dt);
  const Vec rho = solve(A, to_vec(prev.rho), to_vec(iterate.rho), linear_iters);
  if (!(rho.minCoeff() > 0.0)) throw PositivityLost("density lost positivity in the continuity solve");
  const CellField rho_f = to_field(m, rho);

  // momentum: A diag(rho) (rho u) + dt (viscous) u = rho0 u0 + dt (forces)
  const CellVector gp = grad_cells(pressure(rho_f, phys_), traces_.pressure);
  const CellField s = curl_vec(iterate.B, traces_.magnetic);
  Vec rhs(2 * n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto kk = static_cast<std::size_t>(k);
    const double lor1 = -s[kk] * iterate.B.c2[kk];
    const double lor2 = s[kk] * iterate.B.c1[kk];
    rhs[k] = prev.rho[kk] * prev.u.c1[kk] + dt * (-gp.c1[kk] + lor1 + rho[k] * phys_.g[0]);
    rhs[n + k] = prev.rho[kk] * prev.u.c2[kk] + dt * (-gp.c2[kk] + lor2 + rho[k] * phys_.g[1]);
  }
  const SparseMat Ar = A * rho.asDiagonal();
  Triplets t;
  t.reserve(2 * Ar.nonZeros() + visc_.nonZeros());
  append(t, Ar, 0, 0);
  append(t, Ar, n, n);
  append(t, visc_, 0, 0, dt);
  const SparseMat M = from_blocks(2 * n, 2 * n, t);
  const Vec u = solve(M, rhs, to_vec(iterate.u), linear_iters);
  CellVector u_f = to_vector(m, u);

  // induction for the electric field f = u x B - zeta curl B, then B = B0 + dt curl f
  const Vec u1 = u.head(n);
  const Vec u2 = u.tail(n);
  SparseMat I(n, n);
  I.setIdentity();
  const SparseMat XC = u2.asDiagonal() * d2e_ + u1.asDiagonal() * d1e_;
  const SparseMat F = I + dt * XC + (dt * phys_.zeta) * kc_c_;
  const CellField c0 = curl_vec(prev.B, traces_.magnetic);
  Vec frhs(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto kk = static_cast<std::size_t>(k);
    frhs[k] = u1[k] * prev.B.c2[kk] - u2[k] * prev.B.c1[kk] - phys_.zeta * c0[kk];
  }
  Vec f0(n);
  {
    const CellField ci = curl_vec(iterate.B, traces_.magnetic);
    for (Eigen::Index k = 0; k < n; ++k) {
      const auto kk = static_cast<std::size_t>(k);
      f0[k] = u1[k] * iterate.B.c2[kk] - u2[k] * iterate.B.c1[kk] - phys_.zeta * ci[kk];
    }
  }
  const Vec f = solve(F, frhs, f0, linear_iters);
  const Vec B = to_vec(prev.B) + dt * (curl_s_ * f);

  return State(rho_f, std::move(u_f), to_vector(m, B));
}

StepResult Stepper::step(const State& prev, double dt) const {
  if (!(dt > 0.0)) throw std::invalid_argument("time step must be positive");
  if (!(prev.rho.min() > 0.0)) throw PositivityLost("step called with nonpositive density");
  StepResult out;
  StepReport& r = out.report;
  r.dt = dt;
  r.mass_before = integrate(prev.rho);

  State it = prev;
  bool converged = false;
  for (int k = 1; k <= num_.picard_max; ++k) {
    State next = picard_sweep(it, prev, dt, &r.linear_iters);
    const double scale = std::max(state_l2(next), std::numeric_limits<double>::min());
    r.increment = state_l2_distance(next, it) / scale;
    r.picard_iters = k;
    it = std::move(next);
    if (!std::isfinite(r.increment)) break;
    if (r.increment <= num_.picard_tol) {
      converged = true;
      break;
    }
  }
  if (!converged) {
    throw PicardDiverged("Picard iteration stalled at relative increment " +
                         std::to_string(r.increment) + " after " +
                         std::to_string(r.picard_iters) + " sweeps");
  }
  r.mass_after = integrate(it.rho);
  r.min_rho = it.rho.min();
  r.div_b_max = div_cells(it.B, traces_.magnetic).max_abs();
  r.energy_residual = energy_balance(prev, it, dt, phys_, num_, bref_).residual;
  out.state = std::move(it);
  return out;
}

StepResult Stepper::advance_level(const State& prev, double dt, int level) const {
  try {
    return step(prev, dt);
  } catch (const PicardDiverged&) {
    if (level >= num_.max_halvings) throw;
  } catch (const LinearSolveFailed&) {
    if (level >= num_.max_halvings) throw;
  }
  StepResult a = advance_level(prev, 0.5 * dt, level + 1);
  StepResult b = advance_level(a.state, 0.5 * dt, level + 1);
  StepReport r = b.report;
  r.dt = dt;
  r.substeps = a.report.substeps + b.report.substeps;
  r.picard_iters = a.report.picard_iters + b.report.picard_iters;
  r.linear_iters = a.report.linear_iters + b.report.linear_iters;
  r.increment = std::max(a.report.increment, b.report.increment);
  r.mass_before = a.report.mass_before;
  r.min_rho = std::min(a.report.min_rho, b.report.min_rho);
  r.div_b_max = std::max(a.report.div_b_max, b.report.div_b_max);
  r.energy_residual = std::max(a.report.energy_residual, b.report.energy_residual);
  return {std::move(b.state), r};
}

StepResult Stepper::advance(const State& prev, double dt) const { return advance_level(prev, dt, 0); }

TimeGrid time_grid(const Mesh& mesh, const NumParams& num, double T_final) {
  if (!(T_final > 0.0)) throw std::invalid_argument("final time must be positive");
  const double dt = num.dt_factor * mesh.h();
  const int steps = std::max(1, static_cast<int>(std::ceil(T_final / dt - 1e-10)));
  return {steps, T_final / steps};
}

StepResult advance(const State& prev, const PhysParams& phys, const NumParams& num) {
  const Stepper stepper(prev.mesh(), phys, num);
  return stepper.advance(prev, num.dt_factor * prev.mesh().h());
}

RunResult run(const State& initial, const PhysParams& phys, const NumParams& num, double T_final,
              const RunOptions& options) {
  const Stepper stepper(initial.mesh(), phys, num);
  return run(stepper, initial, T_final, options);
}

RunResult run(const Stepper& stepper, const State& initial, double T_final,
              const RunOptions& options) {
  const TimeGrid tg = time_grid(stepper.mesh(), stepper.num(), T_final);
  std::vector<double> snaps = options.snapshot_times;
  std::sort(snaps.begin(), snaps.end());
  std::size_t next_snap = 0;

  RunResult out;
  out.reports.reserve(static_cast<std::size_t>(tg.steps));
  auto take_snapshots = [&](double t, const State& s) {
    while (next_snap < snaps.size() && snaps[next_snap] <= t + 1e-9 * tg.dt) {
      out.snapshots.push_back({t, s});
      ++next_snap;
    }
  };

  State s = initial;
  take_snapshots(0.0, s);
  for (int k = 1; k <= tg.steps; ++k) {
    StepResult res = stepper.advance(s, tg.dt);
    res.report.step = k;
    res.report.time = k * tg.dt;
    if (options.observer) options.observer(s, res.state, res.report);
    take_snapshots(res.report.time, res.state);
    out.reports.push_back(res.report);
    s = std::move(res.state);
  }
  out.final_state = std::move(s);
  return out;
}

double state_l2(const State& s) {
  std::vector<double> t(s.rho.size());
  for (std::size_t k = 0; k < t.size(); ++k) {
    t[k] = s.rho[k] * s.rho[k] + s.u.c1[k] * s.u.c1[k] + s.u.c2[k] * s.u.c2[k] +
           s.B.c1[k] * s.B.c1[k] + s.B.c2[k] * s.B.c2[k];
  }
  return std::sqrt(s.mesh().cell_area() * pairwise_sum(t));
}

double state_l2_distance(const State& a, const State& b) {
  std::vector<double> t(a.rho.size());
  for (std::size_t k = 0; k < t.size(); ++k) {
    const double d0 = a.rho[k] - b.rho[k];
    const double d1 = a.u.c1[k] - b.u.c1[k];
    const double d2 = a.u.c2[k] - b.u.c2[k];
    const double d3 = a.B.c1[k] - b.B.c1[k];
    const double d4 = a.B.c2[k] - b.B.c2[k];
    t[k] = d0 * d0 + d1 * d1 + d2 * d2 + d3 * d3 + d4 * d4;
  }
  return std::sqrt(a.mesh().cell_area() * pairwise_sum(t));
}

}  // namespace mhdmc
