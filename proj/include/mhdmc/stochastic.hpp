#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include "mhdmc/physics.hpp"
#include "mhdmc/projections.hpp"

namespace mhdmc {

struct RandomVariableSpec {
  enum class Kind { Uniform, Gaussian, Degenerate };
  Kind kind = Kind::Degenerate;
  double p1 = 0.0;  // lo, mean or value
  double p2 = 0.0;  // hi or standard deviation

  static RandomVariableSpec uniform(double lo, double hi);
  static RandomVariableSpec gaussian(double mean, double stddev);
  static RandomVariableSpec degenerate(double value);

  void validate() const;
  double sample(std::mt19937_64& gen) const;
};

struct Draw {
  double y1 = 0.0;
  double y2 = 0.0;
  bool operator==(const Draw&) const = default;
};

/// Identifies sample n of outer repetition l under a master seed.
struct SampleId {
  std::uint64_t master_seed = 0;
  std::uint32_t repetition = 0;
  std::uint32_t index = 0;
};

/// Repetition index reserved for reference ensembles.
inline constexpr std::uint32_t kReferenceRepetition = 0xFFFFFFFFu;

std::uint64_t splitmix64(std::uint64_t x);
/// Seed of the substream owned by id.
std::uint64_t substream_seed(const SampleId& id);

struct ExperimentSpec {
  std::string name;
  Bounds bounds;
  PhysParams phys;  // wall values are overwritten per draw
  double T = 0.0;
  RandomVariableSpec y1;
  RandomVariableSpec y2;
  std::function<AnalyticScalar(const Draw&)> rho0;
  std::function<AnalyticVector(const Draw&)> u0;
  std::function<AnalyticVector(const Draw&)> B0;
  /// B1 on the walls x2 = x2a and x2 = x2b.
  std::function<std::pair<double, double>(const Draw&)> walls;

  PhysParams phys_for(const Draw& d) const;
};

Draw draw(const ExperimentSpec& spec, const SampleId& id);

std::vector<std::string> experiment_names();
/// Presets "sine", "kh" and "ot"; throws std::invalid_argument for other names.
ExperimentSpec make_experiment(const std::string& name);
/// Same experiment with both random inputs replaced by degenerate(0).
ExperimentSpec with_degenerate(ExperimentSpec spec);

/// (Pi_Q rho0, Pi_Q u0, Pi_B B0) on mesh; throws if the mesh domain differs from the
/// experiment's or the projected density is not positive.
State realize_initial_state(const ExperimentSpec& spec, const Draw& d, const Mesh& mesh);

}  // namespace mhdmc
