#include "mhdmc/discrete_ops.hpp"

#include <cmath>
#include <vector>

namespace mhdmc {

namespace {

struct Stencil {
  double c, w, e, s, n;
};

Stencil gather(const CellField& f, int i, int j, const WallRule& rule) {
  const Mesh& m = f.mesh();
  Stencil st{};
  st.c = f(i, j);
  st.w = f(m.wrap1(i - 1), j);
  st.e = f(m.wrap1(i + 1), j);
  st.s = j == 0 ? rule.outside(st.c, Wall::Bottom) : f(i, j - 1);
  st.n = j == m.nx2() - 1 ? rule.outside(st.c, Wall::Top) : f(i, j + 1);
  return st;
}

double power_abs(double x, double p) {
  const double a = std::abs(x);
  return p == 2.0 ? a * a : std::pow(a, p);
}

}  // namespace

BoundaryTraces BoundaryTraces::mhd(double b_bottom, double b_top) {
  BoundaryTraces t;
  t.velocity = {rules::odd(), rules::odd()};
  t.magnetic = {rules::average(b_bottom, b_top), rules::even()};
  t.pressure = rules::even();
  t.velocity_divergence = rules::even();
  t.electric = rules::even();
  return t;
}

Traces trace_in_out(const CellField& f, const FaceIndex& face, const WallRule& rule) {
  const Mesh& m = f.mesh();
  if (face.direction == 1) {
    return {f(m.wrap1(face.i - 1), face.j), f(face.i, face.j)};
  }
  if (face.j == 0) {
    const double in = f(face.i, 0);
    return {in, rule.outside(in, Wall::Bottom)};
  }
  if (face.j == m.nx2()) {
    const double in = f(face.i, m.nx2() - 1);
    return {in, rule.outside(in, Wall::Top)};
  }
  return {f(face.i, face.j - 1), f(face.i, face.j)};
}

double jump(const CellField& f, const FaceIndex& face, const WallRule& rule) {
  return jump(trace_in_out(f, face, rule));
}

double avg(const CellField& f, const FaceIndex& face, const WallRule& rule) {
  return avg(trace_in_out(f, face, rule));
}

void check_flux_exponent(double eps) {
  if (!(eps > -1.0)) {
    throw std::invalid_argument("flux exponent eps must satisfy eps > -1");
  }
}

double diffusive_flux(double r_in, double r_out, double u_sigma, double h, double eps) {
  return upwind(r_in, r_out, u_sigma) - std::pow(h, eps) * (r_out - r_in);
}

double normal_velocity(const CellVector& u, const FaceIndex& face) {
  if (face.kind != FaceKind::Interior) {
    throw std::invalid_argument("upwind fluxes live on interior faces only");
  }
  const CellField& un = face.direction == 1 ? u.c1 : u.c2;
  return avg(trace_in_out(un, face, WallRule{}));
}

double upwind(const CellField& r, const CellVector& u, const FaceIndex& face) {
  const double u_sigma = normal_velocity(u, face);
  const Traces t = trace_in_out(r, face, WallRule{});
  return upwind(t.in, t.out, u_sigma);
}

double diffusive_flux(const CellField& r, const CellVector& u, const FaceIndex& face,
                      double eps) {
  const double u_sigma = normal_velocity(u, face);
  const Traces t = trace_in_out(r, face, WallRule{});
  return diffusive_flux(t.in, t.out, u_sigma, r.mesh().h(), eps);
}

FaceGradient grad_faces(const CellField& f, const WallRule& rule) {
  const Mesh& m = f.mesh();
  const double inv_h = 1.0 / m.h();
  FaceGradient g{FaceField(m, 1), FaceField(m, 2)};
  for (int j = 0; j < m.nx2(); ++j) {
    for (int i = 0; i < m.nx1(); ++i) {
      g[0].at(i, j) = (f(i, j) - f(m.wrap1(i - 1), j)) * inv_h;
    }
  }
  for (int j = 0; j <= m.nx2(); ++j) {
    for (int i = 0; i < m.nx1(); ++i) {
      double lower, upper;
      if (j == 0) {
        upper = f(i, 0);
        lower = rule.outside(upper, Wall::Bottom);
      } else if (j == m.nx2()) {
        lower = f(i, j - 1);
        upper = rule.outside(lower, Wall::Top);
      } else {
        lower = f(i, j - 1);
        upper = f(i, j);
      }
      g[1].at(i, j) = (upper - lower) * inv_h;
    }
  }
  return g;
}

CellVector grad_cells(const CellField& f, const WallRule& rule) {
  const Mesh& m = f.mesh();
  const double inv_2h = 0.5 / m.h();
  CellVector g(m);
  for (int j = 0; j < m.nx2(); ++j) {
    for (int i = 0; i < m.nx1(); ++i) {
      const Stencil s = gather(f, i, j, rule);
      g.c1(i, j) = (s.e - s.w) * inv_2h;
      g.c2(i, j) = (s.n - s.s) * inv_2h;
    }
  }
  return g;
}

CellField div_cells(const CellVector& v, const VectorRule& rule) {
  const Mesh& m = v.mesh();
  const double inv_2h = 0.5 / m.h();
  CellField d(m);
  for (int j = 0; j < m.nx2(); ++j) {
    for (int i = 0; i < m.nx1(); ++i) {
      const Stencil a = gather(v.c1, i, j, rule.c1);
      const Stencil b = gather(v.c2, i, j, rule.c2);
      d(i, j) = (a.e - a.w) * inv_2h + (b.n - b.s) * inv_2h;
    }
  }
  return d;
}

CellField curl_vec(const CellVector& v, const VectorRule& rule) {
  const Mesh& m = v.mesh();
  const double inv_2h = 0.5 / m.h();
  CellField c(m);
  for (int j = 0; j < m.nx2(); ++j) {
    for (int i = 0; i < m.nx1(); ++i) {
      const Stencil a = gather(v.c1, i, j, rule.c1);
      const Stencil b = gather(v.c2, i, j, rule.c2);
      c(i, j) = (b.e - b.w) * inv_2h - (a.n - a.s) * inv_2h;
    }
  }
  return c;
}

CellVector curl_scal(const CellField& s, const WallRule& rule) {
  const Mesh& m = s.mesh();
  const double inv_2h = 0.5 / m.h();
  CellVector c(m);
  for (int j = 0; j < m.nx2(); ++j) {
    for (int i = 0; i < m.nx1(); ++i) {
      const Stencil st = gather(s, i, j, rule);
      c.c1(i, j) = (st.n - st.s) * inv_2h;
      c.c2(i, j) = -(st.e - st.w) * inv_2h;
    }
  }
  return c;
}

CellField laplace_cells(const CellField& f, const WallRule& rule) {
  const Mesh& m = f.mesh();
  const double inv_h2 = 1.0 / (m.h() * m.h());
  CellField l(m);
  for (int j = 0; j < m.nx2(); ++j) {
    for (int i = 0; i < m.nx1(); ++i) {
      const Stencil s = gather(f, i, j, rule);
      l(i, j) = ((s.e - s.c) + (s.w - s.c) + (s.n - s.c) + (s.s - s.c)) * inv_h2;
    }
  }
  return l;
}

double pairwise_sum(std::span<const double> values) {
  constexpr std::size_t kBlock = 16;
  if (values.size() <= kBlock) {
    double s = 0.0;
    for (double v : values) s += v;
    return s;
  }
  const std::size_t mid = values.size() / 2;
  return pairwise_sum(values.first(mid)) + pairwise_sum(values.subspan(mid));
}

double integrate(const CellField& f) { return f.mesh().cell_area() * pairwise_sum(f.values()); }

double inner(const CellField& a, const CellField& b) {
  std::vector<double> prod(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) prod[k] = a[k] * b[k];
  return a.mesh().cell_area() * pairwise_sum(prod);
}

double inner(const CellVector& a, const CellVector& b) {
  std::vector<double> prod(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) prod[k] = a.c1[k] * b.c1[k] + a.c2[k] * b.c2[k];
  return a.mesh().cell_area() * pairwise_sum(prod);
}

double dual_inner(const FaceGradient& a, const FaceGradient& b) {
  const Mesh& m = a[0].mesh();
  double total = 0.0;
  for (int d = 0; d < 2; ++d) {
    std::vector<double> prod(a[d].size());
    for (std::size_t k = 0; k < prod.size(); ++k) {
      prod[k] = m.dual_area(m.face(d + 1, k)) * a[d][k] * b[d][k];
    }
    total += pairwise_sum(prod);
  }
  return total;
}

double lp_norm(const CellField& f, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("L^p norm needs p >= 1");
  std::vector<double> terms(f.size());
  for (std::size_t k = 0; k < f.size(); ++k) terms[k] = power_abs(f[k], p);
  const double s = f.mesh().cell_area() * pairwise_sum(terms);
  return p == 2.0 ? std::sqrt(s) : std::pow(s, 1.0 / p);
}

double lp_norm(const CellVector& f, double p) {
  if (!(p >= 1.0)) throw std::invalid_argument("L^p norm needs p >= 1");
  std::vector<double> terms(f.size());
  for (std::size_t k = 0; k < f.size(); ++k) {
    terms[k] = power_abs(std::hypot(f.c1[k], f.c2[k]), p);
  }
  const double s = f.mesh().cell_area() * pairwise_sum(terms);
  return p == 2.0 ? std::sqrt(s) : std::pow(s, 1.0 / p);
}

double dual_l2_norm(std::span<const FaceGradient> grads) {
  double total = 0.0;
  for (const FaceGradient& g : grads) total += dual_inner(g, g);
  return std::sqrt(total);
}

double dual_l2_norm(const FaceGradient& grad) {
  return dual_l2_norm(std::span<const FaceGradient>(&grad, 1));
}

}  // namespace mhdmc
