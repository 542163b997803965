#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <utility>
#include <vector>

#include "mhdmc/observables.hpp"
#include "mhdmc/scheme.hpp"
#include "mhdmc/stochastic.hpp"

namespace mhdmc {

using ObservationSet = std::array<Observation, 6>;

struct SampleResult {
  SampleId id;
  Draw draw;
  ObservationSet obs;
};

/// Terminal observables of independent runs sharing mesh and final time.
struct Ensemble {
  std::string experiment;
  int nx1 = 0;
  int nx2 = 0;
  double h = 0.0;
  double T = 0.0;
  std::vector<SampleResult> samples;
};

class SampleFailed : public SolverError {
 public:
  SampleFailed(const SampleId& id, const std::string& what);
  SampleId id;
};

/// Terminal state of one sample run.
State run_sample(const ExperimentSpec& spec, const Draw& d, const Mesh& mesh, const NumParams& num);

/// Runs every id to spec.T with up to `jobs` concurrent workers (static round-robin);
/// samples are stored in id order. Throws SampleFailed for the first failing id.
Ensemble run_ensemble(const ExperimentSpec& spec, int nx1, const NumParams& num,
                      const std::vector<SampleId>& ids, int jobs = 1);
/// ids (seed, repetition, 0..count-1)
Ensemble run_ensemble(const ExperimentSpec& spec, int nx1, const NumParams& num, int count,
                      std::uint64_t seed, std::uint32_t repetition = 0, int jobs = 1);

/// Mean field and mean absolute deviation field of a reference ensemble.
struct Reference {
  std::string experiment;
  int nx1 = 0;
  int M = 0;
  std::uint64_t seed = 0;
  ObservationSet mean;
  ObservationSet dev;
};

Reference reduce_reference(const Ensemble& e, std::uint64_t seed);

/// build_reference runs M samples with repetition kReferenceRepetition. M >= 2.
Reference build_reference(const ExperimentSpec& spec, int nx1_ref, int M, std::uint64_t seed,
                          const NumParams& num, int jobs = 1, Ensemble* members = nullptr);

/// Binary ensemble container; see docs/formats.md.
void write_ensemble(const std::filesystem::path& path, const Ensemble& e);
Ensemble read_ensemble(const std::filesystem::path& path);

/// Directory layout: manifest.json, members.bin, statistics.bin.
void save_reference(const std::filesystem::path& dir, const Reference& ref, const Ensemble& members,
                    const ExperimentSpec& spec, const NumParams& num);
Reference load_reference(const std::filesystem::path& dir);
/// Cache directory name for a reference configuration under root.
std::filesystem::path reference_dir(const std::filesystem::path& root, const ExperimentSpec& spec,
                                    int nx1_ref, int M, std::uint64_t seed, const NumParams& num);
/// Loads the cached reference when its manifest matches, otherwise builds and saves it.
/// cache_hit (if given) reports which path was taken.
Reference load_or_build_reference(const std::filesystem::path& root, const ExperimentSpec& spec,
                                  int nx1_ref, int M, std::uint64_t seed, const NumParams& num,
                                  int jobs = 1, bool* cache_hit = nullptr);

/// Samples grouped by outer repetition l, inner samples in order n.
using Repetitions = std::vector<std::vector<const ObservationSet*>>;

/// E1 and E2 per observable, using the first N samples of every repetition.
struct McErrors {
  std::array<double, 6> e1{};
  std::array<double, 6> e2{};
};
McErrors mc_errors(const Repetitions& reps, std::size_t N, const Reference& ref, double gamma);

struct McRow {
  int nx1 = 0;
  double h = 0.0;
  int N = 0;
  McErrors err;
};

struct RateReport {
  std::string abscissa;  // "N"
  std::array<double, 6> slope_e1{};
  std::array<double, 6> stderr_e1{};
  std::array<double, 6> slope_e2{};
  std::array<double, 6> stderr_e2{};
  double expected = -0.5;
};

/// Least-squares slope of log E against log N with its standard error.
std::pair<double, double> fit_loglog(const std::vector<double>& x, const std::vector<double>& y);
RateReport fit_rates(const std::vector<McRow>& rows);

struct McStudyConfig {
  std::vector<int> N_list;
  int L = 1;
  int M_ref = 2;
  int nx1 = 32;
  int nx1_ref = 64;
  std::uint64_t seed = 0;
  int jobs = 1;
};

/// Sample ids of repetition l = 0..L-1 and n = 0..N_max-1.
std::vector<SampleId> study_ids(std::uint64_t seed, int L, int N_max);

/// E1/E2 at fixed h for each N of cfg.N_list.
std::vector<McRow> statistical_study(const ExperimentSpec& spec, const McStudyConfig& cfg,
                                     const NumParams& num, const Reference& ref);

/// E1/E2 along a coupled (nx1, N) schedule with L repetitions.
std::vector<McRow> total_error_study(const ExperimentSpec& spec,
                                     const std::vector<std::pair<int, int>>& schedule, int L,
                                     std::uint64_t seed, const NumParams& num,
                                     const Reference& ref, int jobs = 1);

void write_mc_table(std::ostream& os, const std::vector<McRow>& rows);
void write_rate_report(std::ostream& os, const RateReport& r);

}  // namespace mhdmc
