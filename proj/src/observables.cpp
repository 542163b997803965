#include "mhdmc/observables.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace mhdmc {

namespace {

bool is_face_kind(Observable k) { return k == Observable::VelocityGradient; }

std::size_t component_count(Observable k) {
  switch (k) {
    case Observable::Rho:
    case Observable::Current: return 1;
    case Observable::VelocityGradient: return 4;
    default: return 2;
  }
}

double overlap(double a0, double a1, double b0, double b1) {
  return std::max(0.0, std::min(a1, b1) - std::max(a0, b0));
}

void check_same_layout(const Observation& a, const Observation& b) {
  if (a.kind != b.kind || !(a.mesh == b.mesh) || a.comps.size() != b.comps.size()) {
    throw std::invalid_argument("observations differ in kind or mesh");
  }
}

// Coarse face component restricted from the fine one by dual-cell overlap weights.
std::vector<double> restrict_faces(const std::vector<double>& fine, int dir, const Mesh& fm,
                                   const Mesh& cm, int r) {
  const FaceField coarse_shape(cm, dir);
  std::vector<double> out(coarse_shape.size(), 0.0);
  const int nf1 = fm.nx1();
  const int nf2 = fm.nx2();
  for (std::size_t k = 0; k < out.size(); ++k) {
    const FaceIndex cf = cm.face(dir, k);
    double acc = 0.0;
    if (dir == 1) {
      const double lo = cf.i * r - 0.5 * r;
      const double hi = cf.i * r + 0.5 * r;
      for (int i = cf.i * r - r; i <= cf.i * r + r; ++i) {
        const double w1 = overlap(lo, hi, i - 0.5, i + 0.5);
        if (w1 == 0.0) continue;
        const int iw = ((i % nf1) + nf1) % nf1;
        for (int j = cf.j * r; j < (cf.j + 1) * r; ++j) {
          acc += w1 * fine[static_cast<std::size_t>(j) * nf1 + iw];
        }
      }
      out[k] = acc / (static_cast<double>(r) * r);
    } else {
      const double lo = std::max(0.0, cf.j * r - 0.5 * r);
      const double hi = std::min(static_cast<double>(nf2), cf.j * r + 0.5 * r);
      for (int j = std::max(0, cf.j * r - r); j <= std::min(nf2, cf.j * r + r); ++j) {
        const double w2 = overlap(lo, hi, std::max(0.0, j - 0.5), std::min<double>(nf2, j + 0.5));
        if (w2 == 0.0) continue;
        for (int i = cf.i * r; i < (cf.i + 1) * r; ++i) {
          acc += w2 * fine[static_cast<std::size_t>(j) * nf1 + i];
        }
      }
      out[k] = acc / (r * (hi - lo));
    }
  }
  return out;
}

std::vector<double> restrict_cells(const std::vector<double>& fine, const Mesh& fm,
                                   const Mesh& cm, int r) {
  std::vector<double> out(cm.cell_count(), 0.0);
  const double w = 1.0 / (static_cast<double>(r) * r);
  for (int J = 0; J < cm.nx2(); ++J) {
    for (int I = 0; I < cm.nx1(); ++I) {
      double acc = 0.0;
      for (int b = 0; b < r; ++b) {
        for (int a = 0; a < r; ++a) acc += fine[fm.index(I * r + a, J * r + b)];
      }
      out[cm.index(I, J)] = w * acc;
    }
  }
  return out;
}

}  // namespace

std::string observable_name(Observable o) {
  switch (o) {
    case Observable::Rho: return "rho";
    case Observable::Momentum: return "m";
    case Observable::MagneticField: return "B";
    case Observable::Velocity: return "u";
    case Observable::VelocityGradient: return "grad_u";
    case Observable::Current: return "curl_B";
  }
  return "?";
}

double observable_exponent(Observable o, double gamma) {
  switch (o) {
    case Observable::Rho: return gamma;
    case Observable::Momentum: return 2.0 * gamma / (gamma + 1.0);
    default: return 2.0;
  }
}

std::size_t Observation::value_count() const {
  std::size_t n = 0;
  for (const auto& c : comps) n += c.size();
  return n;
}

Observation zero_observation(Observable kind, const Mesh& mesh) {
  Observation o{kind, mesh, {}};
  for (std::size_t c = 0; c < component_count(kind); ++c) {
    const std::size_t n = is_face_kind(kind)
                              ? mesh.face_count(gradient_direction(c))
                              : mesh.cell_count();
    o.comps.emplace_back(n, 0.0);
  }
  return o;
}

Observation observe(const State& s, Observable kind, const BoundaryTraces& traces) {
  Observation o{kind, s.mesh(), {}};
  switch (kind) {
    case Observable::Rho: o.comps = {s.rho.data()}; break;
    case Observable::Momentum: {
      const CellVector m = s.momentum();
      o.comps = {m.c1.data(), m.c2.data()};
      break;
    }
    case Observable::MagneticField: o.comps = {s.B.c1.data(), s.B.c2.data()}; break;
    case Observable::Velocity: o.comps = {s.u.c1.data(), s.u.c2.data()}; break;
    case Observable::VelocityGradient: {
      const FaceGradient g1 = grad_faces(s.u.c1, traces.velocity.c1);
      const FaceGradient g2 = grad_faces(s.u.c2, traces.velocity.c2);
      o.comps = {g1[0].data(), g1[1].data(), g2[0].data(), g2[1].data()};
      break;
    }
    case Observable::Current: o.comps = {curl_vec(s.B, traces.magnetic).data()}; break;
  }
  return o;
}

std::array<Observation, 6> observe_all(const State& s, const BoundaryTraces& traces) {
  std::array<Observation, 6> out;
  for (std::size_t k = 0; k < kObservables.size(); ++k) out[k] = observe(s, kObservables[k], traces);
  return out;
}

int refinement_ratio(const Mesh& fine, const Mesh& coarse) {
  if (!(fine.bounds() == coarse.bounds())) throw std::invalid_argument("meshes cover different domains");
  if (fine.nx1() % coarse.nx1() != 0 || fine.nx2() % coarse.nx2() != 0) {
    throw std::invalid_argument("meshes are not nested");
  }
  const int r = fine.nx1() / coarse.nx1();
  if (fine.nx2() / coarse.nx2() != r) throw std::invalid_argument("meshes are not nested");
  return r;
}

Observation restrict_to(const Observation& fine, const Mesh& coarse) {
  const int r = refinement_ratio(fine.mesh, coarse);
  Observation o{fine.kind, coarse, {}};
  for (std::size_t c = 0; c < fine.comps.size(); ++c) {
    if (is_face_kind(fine.kind)) {
      o.comps.push_back(restrict_faces(fine.comps[c], gradient_direction(c), fine.mesh, coarse, r));
    } else {
      o.comps.push_back(restrict_cells(fine.comps[c], fine.mesh, coarse, r));
    }
  }
  return o;
}

CellField restrict_to(const CellField& fine, const Mesh& coarse) {
  const int r = refinement_ratio(fine.mesh(), coarse);
  return CellField(coarse, restrict_cells(fine.data(), fine.mesh(), coarse, r));
}

State restrict_to(const State& fine, const Mesh& coarse) {
  return State(restrict_to(fine.rho, coarse),
               CellVector(restrict_to(fine.u.c1, coarse), restrict_to(fine.u.c2, coarse)),
               CellVector(restrict_to(fine.B.c1, coarse), restrict_to(fine.B.c2, coarse)));
}

double norm(const Observation& o, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("L^p norm needs p >= 1");
  const Mesh& m = o.mesh;
  double total = 0.0;
  if (is_face_kind(o.kind)) {
    for (int dir = 1; dir <= 2; ++dir) {
      const std::size_t n = m.face_count(dir);
      std::vector<double> t(n);
      for (std::size_t k = 0; k < n; ++k) {
        double s2 = 0.0;
        for (std::size_t c = 0; c < o.comps.size(); ++c) {
          if (gradient_direction(c) == dir) s2 += o.comps[c][k] * o.comps[c][k];
        }
        t[k] = m.dual_area(m.face(dir, k)) * std::pow(s2, 0.5 * p);
      }
      total += pairwise_sum(t);
    }
  } else {
    const std::size_t n = m.cell_count();
    std::vector<double> t(n);
    for (std::size_t k = 0; k < n; ++k) {
      double s2 = 0.0;
      for (const auto& c : o.comps) s2 += c[k] * c[k];
      t[k] = p == 2.0 ? s2 : std::pow(s2, 0.5 * p);
    }
    total = m.cell_area() * pairwise_sum(t);
  }
  return p == 2.0 ? std::sqrt(total) : std::pow(total, 1.0 / p);
}

void axpy(Observation& y, double a, const Observation& x) {
  check_same_layout(y, x);
  for (std::size_t c = 0; c < y.comps.size(); ++c) {
    for (std::size_t k = 0; k < y.comps[c].size(); ++k) y.comps[c][k] += a * x.comps[c][k];
  }
}

void scale(Observation& y, double a) {
  for (auto& c : y.comps) {
    for (double& v : c) v *= a;
  }
}

Observation difference(const Observation& a, const Observation& b) {
  Observation d = a;
  axpy(d, -1.0, b);
  return d;
}

Observation abs_values(const Observation& a) {
  Observation o = a;
  for (auto& c : o.comps) {
    for (double& v : c) v = std::abs(v);
  }
  return o;
}

Observation mean_of(const std::vector<const Observation*>& samples) {
  if (samples.empty()) throw std::invalid_argument("mean of an empty sample set");
  Observation out = *samples.front();
  for (const Observation* s : samples) check_same_layout(out, *s);
  std::vector<double> col(samples.size());
  const double inv = 1.0 / static_cast<double>(samples.size());
  for (std::size_t c = 0; c < out.comps.size(); ++c) {
    for (std::size_t k = 0; k < out.comps[c].size(); ++k) {
      for (std::size_t n = 0; n < samples.size(); ++n) col[n] = samples[n]->comps[c][k];
      out.comps[c][k] = inv * pairwise_sum(col);
    }
  }
  return out;
}

Observation mean_abs_deviation(const std::vector<const Observation*>& samples,
                               const Observation& mean) {
  if (samples.empty()) throw std::invalid_argument("deviation of an empty sample set");
  Observation out = mean;
  std::vector<double> col(samples.size());
  const double inv = 1.0 / static_cast<double>(samples.size());
  for (std::size_t c = 0; c < out.comps.size(); ++c) {
    for (std::size_t k = 0; k < out.comps[c].size(); ++k) {
      for (std::size_t n = 0; n < samples.size(); ++n) {
        col[n] = std::abs(samples[n]->comps[c][k] - mean.comps[c][k]);
      }
      out.comps[c][k] = inv * pairwise_sum(col);
    }
  }
  return out;
}

}  // namespace mhdmc
