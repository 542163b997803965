#include "mhdmc/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <exception>
#include <fstream>
#include <limits>
#include <thread>
#include <tuple>

#include <json.hpp>

#include "mhdmc/io.hpp"

namespace mhdmc {

namespace {

using json = nlohmann::json;

constexpr char kEnsembleMagic[8] = {'M', 'H', 'D', 'M', 'C', 'E', 'N', '1'};
constexpr std::uint32_t kSchemaVersion = 1;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string id_string(const SampleId& id) {
  return "sample(seed=" + std::to_string(id.master_seed) + ", l=" + std::to_string(id.repetition) +
         ", n=" + std::to_string(id.index) + ")";
}

template <class T>
void put(std::ostream& os, const T& v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

template <class T>
T get(std::istream& is) {
  T v{};
  is.read(reinterpret_cast<char*>(&v), sizeof v);
  if (!is) throw IoError("truncated ensemble container");
  return v;
}

void put_set(std::ostream& os, const ObservationSet& s) {
  for (const Observation& o : s) {
    put<std::uint32_t>(os, static_cast<std::uint32_t>(o.comps.size()));
    for (const auto& c : o.comps) {
      put<std::uint64_t>(os, c.size());
      os.write(reinterpret_cast<const char*>(c.data()), static_cast<std::streamsize>(c.size() * sizeof(double)));
    }
  }
}

ObservationSet get_set(std::istream& is, const Mesh& mesh) {
  ObservationSet s;
  for (std::size_t k = 0; k < 6; ++k) {
    s[k].kind = kObservables[k];
    s[k].mesh = mesh;
    const auto nc = get<std::uint32_t>(is);
    for (std::uint32_t c = 0; c < nc; ++c) {
      const auto n = get<std::uint64_t>(is);
      std::vector<double> v(n);
      is.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(n * sizeof(double)));
      if (!is) throw IoError("truncated ensemble container");
      s[k].comps.push_back(std::move(v));
    }
    if (s[k].value_count() != zero_observation(kObservables[k], mesh).value_count()) {
      throw IoError("ensemble container layout does not match its mesh");
    }
  }
  return s;
}

json rv_json(const RandomVariableSpec& r) {
  const char* kind = r.kind == RandomVariableSpec::Kind::Uniform    ? "uniform"
                     : r.kind == RandomVariableSpec::Kind::Gaussian ? "gaussian"
                                                                    : "degenerate";
  return {{"kind", kind}, {"p1", r.p1}, {"p2", r.p2}};
}

// Everything that determines the reference fields.
json reference_key(const ExperimentSpec& spec, int nx1_ref, int M, std::uint64_t seed,
                   const NumParams& num) {
  return {{"experiment", spec.name},
          {"nx1", nx1_ref},
          {"M", M},
          {"master_seed", seed},
          {"T", spec.T},
          {"bounds", {spec.bounds.x1a, spec.bounds.x1b, spec.bounds.x2a, spec.bounds.x2b}},
          {"phys",
           {{"mu", spec.phys.mu},
            {"lambda", spec.phys.lambda},
            {"zeta", spec.phys.zeta},
            {"gamma", spec.phys.gamma},
            {"a", spec.phys.a},
            {"b", spec.phys.b},
            {"g", {spec.phys.g[0], spec.phys.g[1]}}}},
          {"y1", rv_json(spec.y1)},
          {"y2", rv_json(spec.y2)},
          {"num",
           {{"eps_flux", num.eps_flux},
            {"dt_factor", num.dt_factor},
            {"picard_tol", num.picard_tol},
            {"picard_max", num.picard_max},
            {"lin_tol", num.lin_tol},
            {"lin_max", num.lin_max},
            {"max_halvings", num.max_halvings}}},
          {"code_version", MHDMC_VERSION},
          {"schema_version", kSchemaVersion}};
}

std::uint64_t fnv1a(const std::string& s) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

ObservationSet restrict_set(const ObservationSet& s, const Mesh& coarse) {
  ObservationSet out;
  for (std::size_t k = 0; k < 6; ++k) out[k] = restrict_to(s[k], coarse);
  return out;
}

}  // namespace

SampleFailed::SampleFailed(const SampleId& id_, const std::string& what)
    : SolverError(id_string(id_) + ": " + what), id(id_) {}

State run_sample(const ExperimentSpec& spec, const Draw& d, const Mesh& mesh, const NumParams& num) {
  const PhysParams phys = spec.phys_for(d);
  const Stepper stepper(mesh, phys, num);
  return run(stepper, realize_initial_state(spec, d, mesh), spec.T).final_state;
}

Ensemble run_ensemble(const ExperimentSpec& spec, int nx1, const NumParams& num,
                      const std::vector<SampleId>& ids, int jobs) {
  if (ids.empty()) throw std::invalid_argument("ensemble needs at least one sample");
  const Mesh mesh = build_mesh_for_width(nx1, spec.bounds);
  Ensemble e;
  e.experiment = spec.name;
  e.nx1 = mesh.nx1();
  e.nx2 = mesh.nx2();
  e.h = mesh.h();
  e.T = spec.T;
  e.samples.resize(ids.size());

  const int workers = std::max(1, std::min<int>(jobs, static_cast<int>(ids.size())));
  std::vector<std::exception_ptr> errors(ids.size());
  auto work = [&](int w) {
    for (std::size_t k = static_cast<std::size_t>(w); k < ids.size(); k += workers) {
      try {
        SampleResult& r = e.samples[k];
        r.id = ids[k];
        r.draw = draw(spec, ids[k]);
        const State final_state = run_sample(spec, r.draw, mesh, num);
        const PhysParams phys = spec.phys_for(r.draw);
        r.obs = observe_all(final_state, BoundaryTraces::mhd(phys.b_minus, phys.b_plus));
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  if (workers == 1) {
    work(0);
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(work, w);
    for (auto& t : pool) t.join();
  }
  for (std::size_t k = 0; k < ids.size(); ++k) {
    if (!errors[k]) continue;
    try {
      std::rethrow_exception(errors[k]);
    } catch (const std::exception& ex) {
      throw SampleFailed(ids[k], ex.what());
    }
  }
  return e;
}

Ensemble run_ensemble(const ExperimentSpec& spec, int nx1, const NumParams& num, int count,
                      std::uint64_t seed, std::uint32_t repetition, int jobs) {
  if (count < 1) throw std::invalid_argument("ensemble count must be at least 1");
  std::vector<SampleId> ids;
  for (int n = 0; n < count; ++n) ids.push_back({seed, repetition, static_cast<std::uint32_t>(n)});
  return run_ensemble(spec, nx1, num, ids, jobs);
}

Reference reduce_reference(const Ensemble& e, std::uint64_t seed) {
  if (e.samples.empty()) throw std::invalid_argument("empty reference ensemble");
  Reference r;
  r.experiment = e.experiment;
  r.nx1 = e.nx1;
  r.M = static_cast<int>(e.samples.size());
  r.seed = seed;
  for (std::size_t k = 0; k < 6; ++k) {
    std::vector<const Observation*> col;
    for (const SampleResult& s : e.samples) col.push_back(&s.obs[k]);
    r.mean[k] = mean_of(col);
    r.dev[k] = mean_abs_deviation(col, r.mean[k]);
  }
  return r;
}

Reference build_reference(const ExperimentSpec& spec, int nx1_ref, int M, std::uint64_t seed,
                          const NumParams& num, int jobs, Ensemble* members) {
  if (M < 2) throw std::invalid_argument("reference ensembles need M >= 2");
  Ensemble e = run_ensemble(spec, nx1_ref, num, M, seed, kReferenceRepetition, jobs);
  Reference r = reduce_reference(e, seed);
  if (members) *members = std::move(e);
  return r;
}

void write_ensemble(const std::filesystem::path& path, const Ensemble& e) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw IoError("cannot open " + path.string() + " for writing");
  if (e.samples.empty()) throw std::invalid_argument("cannot write an empty ensemble");
  const Mesh& m = e.samples.front().obs[0].mesh;
  os.write(kEnsembleMagic, sizeof kEnsembleMagic);
  put<std::uint32_t>(os, kSchemaVersion);
  put<std::int32_t>(os, m.nx1());
  put<std::int32_t>(os, m.nx2());
  put<double>(os, m.bounds().x1a);
  put<double>(os, m.bounds().x1b);
  put<double>(os, m.bounds().x2a);
  put<double>(os, m.bounds().x2b);
  put<double>(os, e.T);
  put<std::uint32_t>(os, static_cast<std::uint32_t>(e.experiment.size()));
  os.write(e.experiment.data(), static_cast<std::streamsize>(e.experiment.size()));
  put<std::uint64_t>(os, e.samples.size());
  for (const SampleResult& s : e.samples) {
    put<std::uint64_t>(os, s.id.master_seed);
    put<std::uint32_t>(os, s.id.repetition);
    put<std::uint32_t>(os, s.id.index);
    put<double>(os, s.draw.y1);
    put<double>(os, s.draw.y2);
    put_set(os, s.obs);
  }
  if (!os) throw IoError("failed writing " + path.string());
}

Ensemble read_ensemble(const std::filesystem::path& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw IoError("cannot open " + path.string());
  char magic[8];
  is.read(magic, sizeof magic);
  if (!is || std::memcmp(magic, kEnsembleMagic, sizeof magic) != 0) {
    throw IoError(path.string() + " is not an ensemble container");
  }
  if (get<std::uint32_t>(is) != kSchemaVersion) throw IoError("unsupported ensemble schema version");
  const auto nx1 = get<std::int32_t>(is);
  const auto nx2 = get<std::int32_t>(is);
  Bounds b;
  b.x1a = get<double>(is);
  b.x1b = get<double>(is);
  b.x2a = get<double>(is);
  b.x2b = get<double>(is);
  const Mesh mesh = build_mesh(nx1, nx2, b);
  Ensemble e;
  e.nx1 = nx1;
  e.nx2 = nx2;
  e.h = mesh.h();
  e.T = get<double>(is);
  const auto len = get<std::uint32_t>(is);
  e.experiment.resize(len);
  is.read(e.experiment.data(), len);
  const auto count = get<std::uint64_t>(is);
  for (std::uint64_t k = 0; k < count; ++k) {
    SampleResult s;
    s.id.master_seed = get<std::uint64_t>(is);
    s.id.repetition = get<std::uint32_t>(is);
    s.id.index = get<std::uint32_t>(is);
    s.draw.y1 = get<double>(is);
    s.draw.y2 = get<double>(is);
    s.obs = get_set(is, mesh);
    e.samples.push_back(std::move(s));
  }
  return e;
}

void save_reference(const std::filesystem::path& dir, const Reference& ref, const Ensemble& members,
                    const ExperimentSpec& spec, const NumParams& num) {
  std::filesystem::create_directories(dir);
  write_ensemble(dir / "members.bin", members);
  Ensemble stats = members;
  stats.samples.clear();
  stats.samples.push_back({SampleId{ref.seed, kReferenceRepetition, 0}, Draw{}, ref.mean});
  stats.samples.push_back({SampleId{ref.seed, kReferenceRepetition, 1}, Draw{}, ref.dev});
  write_ensemble(dir / "statistics.bin", stats);

  json manifest;
  manifest["key"] = reference_key(spec, ref.nx1, ref.M, ref.seed, num);
  manifest["members"] = "members.bin";
  manifest["statistics"] = "statistics.bin";
  json samples = json::array();
  for (const SampleResult& s : members.samples) {
    samples.push_back({{"repetition", s.id.repetition}, {"index", s.id.index}, {"y1", s.draw.y1},
                       {"y2", s.draw.y2}});
  }
  manifest["samples"] = samples;
  std::ofstream os(dir / "manifest.json", std::ios::trunc);
  if (!os) throw IoError("cannot write manifest in " + dir.string());
  os << manifest.dump(2) << '\n';
}

Reference load_reference(const std::filesystem::path& dir) {
  std::ifstream is(dir / "manifest.json");
  if (!is) throw IoError("no reference manifest in " + dir.string());
  const json manifest = json::parse(is);
  const json& key = manifest.at("key");
  const Ensemble stats = read_ensemble(dir / manifest.at("statistics").get<std::string>());
  if (stats.samples.size() != 2) throw IoError("reference statistics must hold mean and deviation");
  Reference r;
  r.experiment = key.at("experiment").get<std::string>();
  r.nx1 = key.at("nx1").get<int>();
  r.M = key.at("M").get<int>();
  r.seed = key.at("master_seed").get<std::uint64_t>();
  r.mean = stats.samples[0].obs;
  r.dev = stats.samples[1].obs;
  return r;
}

std::filesystem::path reference_dir(const std::filesystem::path& root, const ExperimentSpec& spec,
                                    int nx1_ref, int M, std::uint64_t seed, const NumParams& num) {
  const std::string key = reference_key(spec, nx1_ref, M, seed, num).dump();
  char hash[17];
  std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(fnv1a(key)));
  return root / ("ref_" + spec.name + "_nx" + std::to_string(nx1_ref) + "_M" + std::to_string(M) +
                 "_" + hash);
}

Reference load_or_build_reference(const std::filesystem::path& root, const ExperimentSpec& spec,
                                  int nx1_ref, int M, std::uint64_t seed, const NumParams& num,
                                  int jobs, bool* cache_hit) {
  const auto dir = reference_dir(root, spec, nx1_ref, M, seed, num);
  const json key = reference_key(spec, nx1_ref, M, seed, num);
  if (std::filesystem::exists(dir / "manifest.json")) {
    std::ifstream is(dir / "manifest.json");
    const json manifest = json::parse(is, nullptr, false);
    if (!manifest.is_discarded() && manifest.contains("key") && manifest["key"] == key) {
      if (cache_hit) *cache_hit = true;
      return load_reference(dir);
    }
  }
  if (cache_hit) *cache_hit = false;
  Ensemble members;
  Reference r = build_reference(spec, nx1_ref, M, seed, num, jobs, &members);
  save_reference(dir, r, members, spec, num);
  return r;
}

McErrors mc_errors(const Repetitions& reps, std::size_t N, const Reference& ref, double gamma) {
  if (reps.empty()) throw std::invalid_argument("no repetitions");
  if (N < 1) throw std::invalid_argument("N must be at least 1");
  for (const auto& r : reps) {
    if (r.size() < N) throw std::invalid_argument("repetition holds fewer than N samples");
  }
  const Mesh& mesh = (*reps.front().front())[0].mesh;
  const ObservationSet ref_mean = restrict_set(ref.mean, mesh);
  const ObservationSet ref_dev = restrict_set(ref.dev, mesh);
  McErrors out;
  std::vector<double> e1(reps.size()), e2(reps.size());
  for (std::size_t k = 0; k < 6; ++k) {
    const double p = observable_exponent(kObservables[k], gamma);
    for (std::size_t l = 0; l < reps.size(); ++l) {
      std::vector<const Observation*> col;
      for (std::size_t n = 0; n < N; ++n) col.push_back(&(*reps[l][n])[k]);
      const Observation mean = mean_of(col);
      e1[l] = norm(difference(mean, ref_mean[k]), p);
      e2[l] = norm(difference(mean_abs_deviation(col, mean), ref_dev[k]), p);
    }
    out.e1[k] = pairwise_sum(e1) / static_cast<double>(reps.size());
    out.e2[k] = pairwise_sum(e2) / static_cast<double>(reps.size());
  }
  return out;
}

std::pair<double, double> fit_loglog(const std::vector<double>& x, const std::vector<double>& y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("fit needs two or more points");
  const std::size_t n = x.size();
  double mx = 0.0, my = 0.0;
  std::vector<double> lx(n), ly(n);
  for (std::size_t k = 0; k < n; ++k) {
    lx[k] = std::log(x[k]);
    ly[k] = std::log(y[k]);
    mx += lx[k];
    my += ly[k];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    sxx += (lx[k] - mx) * (lx[k] - mx);
    sxy += (lx[k] - mx) * (ly[k] - my);
  }
  const double slope = sxy / sxx;
  double se = std::numeric_limits<double>::quiet_NaN();
  if (n > 2) {
    double ss = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double r = ly[k] - my - slope * (lx[k] - mx);
      ss += r * r;
    }
    se = std::sqrt(ss / static_cast<double>(n - 2) / sxx);
  }
  return {slope, se};
}

RateReport fit_rates(const std::vector<McRow>& rows) {
  RateReport r;
  r.abscissa = "N";
  std::vector<double> x;
  for (const McRow& row : rows) x.push_back(row.N);
  for (std::size_t k = 0; k < 6; ++k) {
    std::vector<double> y1, y2;
    for (const McRow& row : rows) {
      y1.push_back(row.err.e1[k]);
      y2.push_back(row.err.e2[k]);
    }
    std::tie(r.slope_e1[k], r.stderr_e1[k]) = fit_loglog(x, y1);
    std::tie(r.slope_e2[k], r.stderr_e2[k]) = fit_loglog(x, y2);
  }
  return r;
}

std::vector<SampleId> study_ids(std::uint64_t seed, int L, int N_max) {
  std::vector<SampleId> ids;
  for (int l = 0; l < L; ++l) {
    for (int n = 0; n < N_max; ++n) {
      ids.push_back({seed, static_cast<std::uint32_t>(l), static_cast<std::uint32_t>(n)});
    }
  }
  return ids;
}

namespace {

Repetitions group(const Ensemble& e, int L, int N_max) {
  Repetitions reps(static_cast<std::size_t>(L));
  for (int l = 0; l < L; ++l) {
    for (int n = 0; n < N_max; ++n) {
      reps[l].push_back(&e.samples[static_cast<std::size_t>(l) * N_max + n].obs);
    }
  }
  return reps;
}

}  // namespace

std::vector<McRow> statistical_study(const ExperimentSpec& spec, const McStudyConfig& cfg,
                                     const NumParams& num, const Reference& ref) {
  if (cfg.N_list.empty() || cfg.L < 1) throw std::invalid_argument("study needs N values and L >= 1");
  const int N_max = *std::max_element(cfg.N_list.begin(), cfg.N_list.end());
  const Ensemble e = run_ensemble(spec, cfg.nx1, num, study_ids(cfg.seed, cfg.L, N_max), cfg.jobs);
  const Repetitions reps = group(e, cfg.L, N_max);
  std::vector<McRow> rows;
  for (int N : cfg.N_list) {
    rows.push_back({e.nx1, e.h, N, mc_errors(reps, static_cast<std::size_t>(N), ref, spec.phys.gamma)});
  }
  return rows;
}

std::vector<McRow> total_error_study(const ExperimentSpec& spec,
                                     const std::vector<std::pair<int, int>>& schedule, int L,
                                     std::uint64_t seed, const NumParams& num,
                                     const Reference& ref, int jobs) {
  std::vector<McRow> rows;
  for (const auto& [nx1, N] : schedule) {
    const Ensemble e = run_ensemble(spec, nx1, num, study_ids(seed, L, N), jobs);
    rows.push_back({e.nx1, e.h, N, mc_errors(group(e, L, N), static_cast<std::size_t>(N), ref,
                                             spec.phys.gamma)});
  }
  return rows;
}

void write_mc_table(std::ostream& os, const std::vector<McRow>& rows) {
  os << "nx1,h,N";
  for (Observable o : kObservables) os << ",E1_" << observable_name(o);
  for (Observable o : kObservables) os << ",E2_" << observable_name(o);
  os << '\n';
  for (const McRow& r : rows) {
    os << r.nx1 << ',' << fmt(r.h) << ',' << r.N;
    for (double v : r.err.e1) os << ',' << fmt(v);
    for (double v : r.err.e2) os << ',' << fmt(v);
    os << '\n';
  }
}

void write_rate_report(std::ostream& os, const RateReport& r) {
  os << "observable,slope_E1,stderr_E1,slope_E2,stderr_E2,expected\n";
  for (std::size_t k = 0; k < 6; ++k) {
    os << observable_name(kObservables[k]) << ',' << fmt(r.slope_e1[k]) << ','
       << (std::isnan(r.stderr_e1[k]) ? std::string() : fmt(r.stderr_e1[k])) << ','
       << fmt(r.slope_e2[k]) << ','
       << (std::isnan(r.stderr_e2[k]) ? std::string() : fmt(r.stderr_e2[k])) << ','
       << fmt(r.expected) << '\n';
  }
}

}  // namespace mhdmc
