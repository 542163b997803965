#include "mhdmc/stochastic.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mhdmc {

namespace {

constexpr double kPi = std::numbers::pi;

AnalyticScalar scalar(std::function<double(double, double)> f) { return {std::move(f), Smoothness::C1}; }

ExperimentSpec sine() {
  ExperimentSpec e;
  e.name = "sine";
  e.bounds = {-1.0, 1.0, -1.0, 1.0};
  e.phys.mu = 0.01;
  e.phys.lambda = 0.0;
  e.phys.zeta = 0.01;
  e.phys.gamma = 5.0 / 3.0;
  e.phys.a = 1.0;
  e.phys.b = 0.0;
  e.T = 0.6;
  e.y1 = RandomVariableSpec::uniform(-0.1, 0.1);
  e.y2 = RandomVariableSpec::uniform(-0.1, 0.1);
  e.rho0 = [](const Draw&) {
    return scalar([](double x1, double x2) { return 2.0 + std::cos(2.0 * kPi * (x1 + x2)); });
  };
  e.u0 = [](const Draw& d) {
    return AnalyticVector{scalar([](double, double) { return 0.0; }),
                          scalar([y = d.y1](double, double x2) { return y * std::sin(2.0 * kPi * x2); })};
  };
  e.B0 = [](const Draw& d) {
    return AnalyticVector{
        scalar([y = d.y2](double, double x2) { return x2 + y * std::sin(0.5 * kPi * x2); }),
        scalar([](double, double) { return 0.0; })};
  };
  e.walls = [](const Draw& d) { return std::pair{-1.0 - d.y2, 1.0 + d.y2}; };
  return e;
}

ExperimentSpec kh() {
  ExperimentSpec e;
  e.name = "kh";
  e.bounds = {0.0, 2.0, -0.5, 0.5};
  e.phys.mu = 0.001;
  e.phys.lambda = 0.0;
  e.phys.zeta = 0.001;
  e.phys.gamma = 5.0 / 3.0;
  e.phys.a = 1.0;
  e.phys.b = 0.0;
  e.T = 2.2;
  e.y1 = RandomVariableSpec::uniform(-0.05, 0.05);
  e.y2 = RandomVariableSpec::uniform(-0.05, 0.05);
  const double gamma = e.phys.gamma;
  e.rho0 = [gamma](const Draw&) { return scalar([gamma](double, double) { return gamma; }); };
  e.u0 = [](const Draw& d) {
    return AnalyticVector{
        scalar([y = d.y1](double x1, double x2) {
          return -0.1 * std::cos(2.0 * kPi * x1) * std::sin(2.0 * kPi * x2) +
                 y * std::sin(2.0 * kPi * x2);
        }),
        scalar([](double x1, double x2) {
          return 0.1 * std::sin(2.0 * kPi * x1) * (1.0 + std::cos(2.0 * kPi * x2));
        })};
  };
  e.B0 = [](const Draw& d) {
    return AnalyticVector{scalar([y = d.y2](double, double x2) { return 0.1 + y * std::sin(kPi * x2); }),
                          scalar([](double, double) { return 0.0; })};
  };
  e.walls = [](const Draw& d) { return std::pair{0.1 - d.y2, 0.1 + d.y2}; };
  return e;
}

ExperimentSpec ot() {
  ExperimentSpec e;
  e.name = "ot";
  e.bounds = {0.0, 2.0 * kPi, 0.0, 2.0 * kPi};
  e.phys.mu = 0.01;
  e.phys.lambda = 0.0;
  e.phys.zeta = 0.01;
  e.phys.gamma = 5.0 / 3.0;
  e.phys.a = 1.0;
  e.phys.b = 0.0;
  e.T = 3.0;
  // N(0, 0.1) read as variance 0.1
  e.y1 = RandomVariableSpec::gaussian(0.0, std::sqrt(0.1));
  e.y2 = RandomVariableSpec::gaussian(0.0, std::sqrt(0.1));
  const double g2 = e.phys.gamma * e.phys.gamma;
  e.rho0 = [g2](const Draw&) { return scalar([g2](double, double) { return g2; }); };
  e.u0 = [](const Draw& d) {
    return AnalyticVector{
        scalar([y = d.y1](double, double x2) { return -std::sin(x2) + y * std::sin(x2); }),
        scalar([](double, double) { return 0.0; })};
  };
  e.B0 = [](const Draw& d) {
    return AnalyticVector{
        scalar([y = d.y2](double, double x2) { return -std::sin(x2) + y * std::sin(0.25 * x2); }),
        scalar([](double x1, double) { return std::sin(2.0 * x1); })};
  };
  e.walls = [](const Draw& d) { return std::pair{0.0, d.y2}; };
  return e;
}

}  // namespace

RandomVariableSpec RandomVariableSpec::uniform(double lo, double hi) {
  RandomVariableSpec r{Kind::Uniform, lo, hi};
  r.validate();
  return r;
}

RandomVariableSpec RandomVariableSpec::gaussian(double mean, double stddev) {
  RandomVariableSpec r{Kind::Gaussian, mean, stddev};
  r.validate();
  return r;
}

RandomVariableSpec RandomVariableSpec::degenerate(double value) {
  return {Kind::Degenerate, value, 0.0};
}

void RandomVariableSpec::validate() const {
  if (kind == Kind::Uniform && !(p1 < p2)) throw std::invalid_argument("uniform needs lo < hi");
  if (kind == Kind::Gaussian && !(p2 >= 0.0)) throw std::invalid_argument("gaussian needs std >= 0");
}

double RandomVariableSpec::sample(std::mt19937_64& gen) const {
  switch (kind) {
    case Kind::Uniform: return std::uniform_real_distribution<double>(p1, p2)(gen);
    case Kind::Gaussian:
      return p2 == 0.0 ? p1 : std::normal_distribution<double>(p1, p2)(gen);
    case Kind::Degenerate: return p1;
  }
  return p1;
}

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t substream_seed(const SampleId& id) {
  const std::uint64_t counter = (static_cast<std::uint64_t>(id.repetition) << 32) | id.index;
  return splitmix64(counter + splitmix64(id.master_seed));
}

PhysParams ExperimentSpec::phys_for(const Draw& d) const {
  PhysParams p = phys;
  const auto [lo, hi] = walls(d);
  p.b_minus = lo;
  p.b_plus = hi;
  return p;
}

Draw draw(const ExperimentSpec& spec, const SampleId& id) {
  std::mt19937_64 gen(substream_seed(id));
  Draw d;
  d.y1 = spec.y1.sample(gen);
  d.y2 = spec.y2.sample(gen);
  return d;
}

std::vector<std::string> experiment_names() { return {"sine", "kh", "ot"}; }

ExperimentSpec make_experiment(const std::string& name) {
  if (name == "sine") return sine();
  if (name == "kh") return kh();
  if (name == "ot") return ot();
  throw std::invalid_argument("unknown experiment preset '" + name + "'");
}

ExperimentSpec with_degenerate(ExperimentSpec spec) {
  spec.y1 = RandomVariableSpec::degenerate(0.0);
  spec.y2 = RandomVariableSpec::degenerate(0.0);
  return spec;
}

State realize_initial_state(const ExperimentSpec& spec, const Draw& d, const Mesh& mesh) {
  if (!(mesh.bounds() == spec.bounds)) {
    throw std::invalid_argument("mesh does not cover the domain of experiment " + spec.name);
  }
  State s(project_cell_mean(mesh, spec.rho0(d)), project_cell_mean(mesh, spec.u0(d)),
          project_line_avg(mesh, spec.B0(d)));
  if (!(s.rho.min() > 0.0)) throw std::invalid_argument("projected initial density is not positive");
  return s;
}

}  // namespace mhdmc
