#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "mhdmc/observables.hpp"
#include "support.hpp"

using namespace mhdmc;
using mhdmc::testing::random_field;
using mhdmc::testing::random_vector;

namespace {

Observation random_observation(Observable kind, const Mesh& m, std::mt19937_64& gen) {
  Observation o = zero_observation(kind, m);
  std::uniform_real_distribution<double> d(-1, 1);
  for (auto& c : o.comps) {
    for (double& v : c) v = d(gen);
  }
  return o;
}

double max_diff(const Observation& a, const Observation& b) {
  double e = 0.0;
  for (std::size_t c = 0; c < a.comps.size(); ++c) {
    for (std::size_t k = 0; k < a.comps[c].size(); ++k) e = std::max(e, std::abs(a.comps[c][k] - b.comps[c][k]));
  }
  return e;
}

Observation constant_observation(Observable kind, const Mesh& m, double v) {
  Observation o = zero_observation(kind, m);
  for (auto& c : o.comps) std::fill(c.begin(), c.end(), v);
  return o;
}

}  // namespace

TEST_CASE("observable names and exponents") {
  const double g = 5.0 / 3.0;
  CHECK(observable_exponent(Observable::Rho, g) == g);
  CHECK(observable_exponent(Observable::Momentum, g) == doctest::Approx(1.25));
  for (Observable o : {Observable::MagneticField, Observable::Velocity, Observable::VelocityGradient,
                       Observable::Current}) {
    CHECK(observable_exponent(o, g) == 2.0);
  }
  CHECK(observable_name(Observable::Rho) == "rho");
  CHECK(observable_name(Observable::Current) == "curl_B");
}

TEST_CASE("observations of a state") {
  std::mt19937_64 gen(11);
  const Mesh m = build_mesh(6, 4, Bounds{0, 3, 0, 2});
  const State s(random_field(m, gen, 0.5, 2.0), random_vector(m, gen), random_vector(m, gen));
  const BoundaryTraces t = BoundaryTraces::mhd(0.2, -0.1);
  const auto all = observe_all(s, t);
  for (std::size_t k = 0; k < all.size(); ++k) {
    CHECK(all[k].kind == kObservables[k]);
    CHECK(all[k].value_count() == zero_observation(kObservables[k], m).value_count());
  }
  CHECK(all[0].comps[0] == s.rho.data());
  CHECK(all[1].comps[1] == hadamard(s.rho, s.u.c2).data());
  CHECK(all[3].comps[0] == s.u.c1.data());
  CHECK(all[5].comps[0] == curl_vec(s.B, t.magnetic).data());
  const FaceGradient g2 = grad_faces(s.u.c2, t.velocity.c2);
  CHECK(all[4].comps[3] == g2[1].data());
  CHECK(all[4].comps[0].size() == m.face_count(1));
  CHECK(all[4].comps[1].size() == m.face_count(2));
}

TEST_CASE("norms of constant observations") {
  const Mesh m = build_mesh(8, 4, Bounds{0, 2, 0, 1});
  const double area = 2.0;
  CHECK(norm(constant_observation(Observable::Rho, m, 3.0), 1.5) ==
        doctest::Approx(3.0 * std::pow(area, 1 / 1.5)));
  CHECK(norm(constant_observation(Observable::Velocity, m, 1.0), 2.0) ==
        doctest::Approx(std::sqrt(2.0 * area)));
  // four unit entries of the gradient matrix: Frobenius norm 2 on every dual cell
  CHECK(norm(constant_observation(Observable::VelocityGradient, m, 1.0), 2.0) ==
        doctest::Approx(2.0 * std::sqrt(area)));
  CHECK(norm(constant_observation(Observable::VelocityGradient, m, 1.0), 3.0) ==
        doctest::Approx(std::pow(2.0 * area * std::pow(2.0, 1.5), 1.0 / 3.0)));
  CHECK_THROWS_AS(norm(constant_observation(Observable::Rho, m, 1.0), 0.5), std::invalid_argument);
}

TEST_CASE("norm is homogeneous and satisfies the triangle inequality") {
  std::mt19937_64 gen(4);
  const Mesh m = build_mesh(8, 8, Bounds{-1, 1, -1, 1});
  for (Observable k : kObservables) {
    for (int trial = 0; trial < 10; ++trial) {
      const Observation a = random_observation(k, m, gen);
      const Observation b = random_observation(k, m, gen);
      for (double p : {1.25, 5.0 / 3.0, 2.0}) {
        Observation s = a;
        axpy(s, 1.0, b);
        CHECK(norm(s, p) <= norm(a, p) + norm(b, p) + 1e-12);
        Observation c = a;
        scale(c, -2.5);
        CHECK(norm(c, p) == doctest::Approx(2.5 * norm(a, p)).epsilon(1e-13));
      }
    }
  }
}

TEST_CASE("restriction") {
  std::mt19937_64 gen(8);
  const Mesh fine = build_mesh(16, 8, Bounds{0, 2, 0, 1});
  const Mesh coarse = build_mesh(4, 2, Bounds{0, 2, 0, 1});
  CHECK(refinement_ratio(fine, coarse) == 4);
  CHECK_THROWS_AS(refinement_ratio(fine, build_mesh(6, 3, Bounds{0, 2, 0, 1})), std::invalid_argument);
  CHECK_THROWS_AS(refinement_ratio(fine, build_mesh(4, 2, Bounds{0, 2, 0, 2})), std::invalid_argument);
  CHECK_THROWS_AS(refinement_ratio(fine, build_mesh(8, 2, Bounds{0, 2, 0, 1})), std::invalid_argument);

  for (Observable k : kObservables) {
    // constants are preserved, including the clipped wall dual cells
    const Observation r = restrict_to(constant_observation(k, fine, 1.7), coarse);
    CHECK(max_diff(r, constant_observation(k, coarse, 1.7)) <= 1e-14);

    // a linear operation commutes with the sample mean
    std::vector<Observation> samples;
    for (int n = 0; n < 5; ++n) samples.push_back(random_observation(k, fine, gen));
    std::vector<const Observation*> fp, cp;
    std::vector<Observation> restricted;
    for (const Observation& s : samples) restricted.push_back(restrict_to(s, coarse));
    for (std::size_t n = 0; n < samples.size(); ++n) {
      fp.push_back(&samples[n]);
      cp.push_back(&restricted[n]);
    }
    CHECK(max_diff(restrict_to(mean_of(fp), coarse), mean_of(cp)) <= 1e-14);
  }

  // cell averages of cell averages are cell averages
  const AnalyticScalar f{[](double x1, double x2) { return std::sin(3 * x1) * x2 * x2; }};
  const CellField rf = restrict_to(project_cell_mean(fine, f), coarse);
  CHECK(mhdmc::testing::max_abs_diff(rf, project_cell_mean(coarse, f)) <= 1e-12);

  // a gradient observation of x1-independent data (4 face comps): the interior E^2 dual
  // means restrict to the coarse dual means for data linear in x2
  Observation g = zero_observation(Observable::VelocityGradient, fine);
  for (std::size_t k = 0; k < fine.face_count(2); ++k) {
    const FaceIndex fc = fine.face(2, k);
    g.comps[1][k] = fine.bounds().x2a + fc.j * fine.h();
  }
  const Observation gc = restrict_to(g, coarse);
  for (std::size_t k = 0; k < coarse.face_count(2); ++k) {
    const FaceIndex fc = coarse.face(2, k);
    if (fc.kind == FaceKind::Interior) {
      CHECK(gc.comps[1][k] == doctest::Approx(coarse.bounds().x2a + fc.j * coarse.h()).epsilon(1e-14));
    }
  }
}

TEST_CASE("sample mean and mean absolute deviation") {
  std::mt19937_64 gen(21);
  const Mesh m = build_mesh(8, 8, Bounds{0, 1, 0, 1});
  const Observation a = random_observation(Observable::MagneticField, m, gen);
  const Observation b = random_observation(Observable::MagneticField, m, gen);
  const Observation mean = mean_of({&a, &b});
  const Observation dev = mean_abs_deviation({&a, &b}, mean);
  for (std::size_t c = 0; c < 2; ++c) {
    for (std::size_t k = 0; k < m.cell_count(); ++k) {
      CHECK(mean.comps[c][k] == doctest::Approx(0.5 * (a.comps[c][k] + b.comps[c][k])));
      CHECK(dev.comps[c][k] == doctest::Approx(0.5 * std::abs(a.comps[c][k] - b.comps[c][k])));
    }
  }
  CHECK(max_diff(mean_abs_deviation({&a}, a), zero_observation(Observable::MagneticField, m)) == 0.0);
  CHECK(max_diff(abs_values(difference(a, b)), abs_values(difference(b, a))) == 0.0);

  // the mean does not depend on the sample order beyond rounding
  std::vector<Observation> s;
  for (int n = 0; n < 40; ++n) s.push_back(random_observation(Observable::VelocityGradient, m, gen));
  std::vector<const Observation*> p;
  for (const Observation& o : s) p.push_back(&o);
  const Observation m0 = mean_of(p);
  const Observation d0 = mean_abs_deviation(p, m0);
  for (int trial = 0; trial < 5; ++trial) {
    std::shuffle(p.begin(), p.end(), gen);
    CHECK(max_diff(mean_of(p), m0) <= 1e-12);
    CHECK(max_diff(mean_abs_deviation(p, m0), d0) <= 1e-12);
  }

  CHECK_THROWS_AS(mean_of({}), std::invalid_argument);
  const Observation other = zero_observation(Observable::Rho, m);
  CHECK_THROWS_AS(mean_of({&a, &other}), std::invalid_argument);
}
