#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "brownmap/domain.hpp"

using namespace brownmap;

namespace {

Law delta1() { return Law::delta(1.0); }
Law two_atoms() { return Law({{1.0, 0.2}, {2.0, 0.8}}, {}); }
Law half_half() { return Law({{0.0, 0.5}, {1.0, 0.5}}, {}); }
Law cusp() { return Law({}, {{1.0, 2.0, {3.0, -6.0, 3.0}}}); }

// closed form for mu = delta_1: |1-lambda|^2 log(1/r^2)/(1-r^2)
double T_delta1(cplx lam) {
  double r2 = std::norm(lam);
  double n = std::norm(cplx(1, 0) - lam);
  if (std::abs(r2 - 1.0) < 1e-12) return n;
  return n * std::log(1.0 / r2) / (1.0 - r2);
}

}  // namespace

TEST_CASE("delta_1 closed form on a grid") {
  Law l = delta1();
  for (int i = 0; i < 10; ++i)
    for (int j = 1; j <= 10; ++j) {
      cplx lam = std::polar(0.25 + 0.35 * i, j * M_PI / 10.0);
      CHECK(lifetime_T(l, lam).value() ==
            doctest::Approx(T_delta1(lam)).epsilon(1e-10));
    }
  CHECK(lifetime_T(l, {-1, 0}).value() == doctest::Approx(4.0).epsilon(1e-12));
  CHECK(lifetime_T(l, {0, 1}).value() == doctest::Approx(2.0).epsilon(1e-12));
}

TEST_CASE("lifetime edge cases") {
  CHECK_THROWS(lifetime_T(delta1(), {0, 0}));
  CHECK(lifetime_at_origin(delta1()).is_pos_inf());
  CHECK(lifetime_at_origin(cusp()).is_pos_inf());
  CHECK_THROWS(lifetime_at_origin(half_half()));
  // divergent moment => immediate lifetime 0
  CHECK(lifetime_T(delta1(), {1, 0}).value() == 0.0);
}

TEST_CASE("conjugation symmetry is exact") {
  for (const Law& l : {two_atoms(), half_half()})
    for (cplx lam : {cplx(0.7, 0.3), cplx(-1.2, 0.5), cplx(2.5, 1.0)})
      CHECK(lifetime_T(l, lam).value() ==
            lifetime_T(l, std::conj(lam)).value());
}

TEST_CASE("monotone in |theta|") {
  Law l = two_atoms();
  for (double r : {0.5, 1.0, 1.5, 2.5}) {
    double prev = -1.0;
    for (int j = 1; j <= 20; ++j) {
      double T = lifetime_T(l, std::polar(r, j * M_PI / 20.0)).as_double();
      CHECK(T >= prev - 1e-12);
      prev = T;
    }
  }
}

TEST_CASE("theta_t") {
  Law l = delta1();
  ThetaT th = theta_t(l, 1.0, 2.0);
  CHECK(!th.pi_plus);
  CHECK(th.theta == doctest::Approx(M_PI / 2).epsilon(1e-8));

  th = theta_t(l, 1.0, 4.02);
  CHECK(th.pi_plus);

  double T10 = lifetime_T(l, {10, 0}).value();
  th = theta_t(l, 10.0, 0.5 * T10);
  CHECK(!th.pi_plus);
  CHECK(th.theta == 0.0);
}

TEST_CASE("in_sigma") {
  Law l = delta1();
  CHECK(in_sigma(l, {-1, 0}, 4.02));
  CHECK(!in_sigma(l, {-1, 0}, 3.9));
  CHECK(!in_sigma(l, {0, 0}, 100.0));
  // consistency with the angular description
  for (cplx lam : {cplx(0.9, 0.1), cplx(-0.5, 0.5), cplx(1.5, -0.2)}) {
    double t = 1.0;
    ThetaT th = theta_t(l, std::abs(lam), t);
    bool angular = th.pi_plus || std::abs(std::arg(lam)) < th.theta;
    CHECK(in_sigma(l, lam, t) == angular);
  }
}

TEST_CASE("boundary components") {
  BoundaryTrace tr = boundary_sigma(delta1(), 0.1, 256);
  CHECK(tr.components.size() == 1);

  tr = boundary_sigma(two_atoms(), 0.1, 512);
  CHECK(tr.components.size() == 2);

  tr = boundary_sigma(two_atoms(), 0.4, 512);
  CHECK(tr.components.size() == 1);
}

TEST_CASE("boundary vertices sit on the level set") {
  Law l = two_atoms();
  double t = 0.1;
  BoundaryTrace tr = boundary_sigma(l, t, 256);
  for (const auto& comp : tr.components)
    for (const auto& v : comp) {
      if (l.support_distance(v.pos) == 0.0) continue;
      CHECK(lifetime_T(l, v.pos).value() == doctest::Approx(t).epsilon(1e-6));
    }
}

TEST_CASE("support is inside the closure") {
  for (const Law& l : {delta1(), two_atoms(), cusp()}) {
    for (double t : {0.1, 0.5, 2.0}) {
      for (const auto& a : l.atoms()) {
        if (a.x == 0.0) continue;
        CHECK(in_sigma(l, cplx(a.x, a.x * 1e-7), t));
      }
      for (const auto& p : l.pieces()) {
        double mid = 0.5 * (p.a + p.b);
        CHECK(in_sigma(l, cplx(mid, 1e-7), t));
      }
    }
  }
}

TEST_CASE("trace serialization") {
  BoundaryTrace tr = boundary_sigma(delta1(), 0.5, 64);
  std::string csv = tr.to_csv();
  CHECK(csv.rfind("component_id,re,im,r,theta\n", 0) == 0);
  CHECK(tr.to_json_text().find("components") != std::string::npos);
  CHECK(tr.resolution > 0.0);
}
