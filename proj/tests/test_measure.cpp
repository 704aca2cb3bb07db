#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "brownmap/measure.hpp"

using namespace brownmap;

namespace {

Law delta1() { return Law::delta(1.0); }
Law half_half() { return Law({{0.0, 0.5}, {1.0, 0.5}}, {}); }
Law uniform12() { return Law({}, {{1.0, 2.0, {1.0}}}); }
// density 3(xi-1)^2 on [1,2]: vanishes to second order at 1
Law cusp() { return Law({}, {{1.0, 2.0, {3.0, -6.0, 3.0}}}); }

}  // namespace

TEST_CASE("law validation") {
  CHECK_THROWS(Law({{1.0, 0.5}}, {}));                  // mass 1/2
  CHECK_THROWS(Law({{-1.0, 1.0}}, {}));                 // negative location
  CHECK_THROWS(Law({{0.0, 1.0}}, {}));                  // delta_0 excluded
  CHECK_THROWS(Law({}, {{1.0, 2.0, {2.0, -2.0}}}));     // negative density
  CHECK_THROWS(Law({{1.5, 0.5}}, {{1.0, 2.0, {0.5}}})); // atom inside piece
  CHECK_NOTHROW(half_half());
  CHECK_NOTHROW(cusp());
}

TEST_CASE("json round trip and loader normalization") {
  Law l = Law::from_json_text(
      R"({"atoms":[{"x":1.0,"w":0.2},{"x":2.0,"w":0.8}],"densities":[]})");
  CHECK(l.atoms().size() == 2);
  Law l2 = Law::from_json_text(l.to_json_text());
  CHECK(l2.atoms()[1].w == doctest::Approx(0.8).epsilon(1e-14));

  // off by 1e-10: normalized; off by 1e-3: rejected
  CHECK_NOTHROW(Law::from_json_text(
      R"({"atoms":[{"x":1.0,"w":1.0000000001}],"densities":[]})"));
  CHECK_THROWS(Law::from_json_text(
      R"({"atoms":[{"x":1.0,"w":1.001}],"densities":[]})"));
}

TEST_CASE("support distance") {
  CHECK(delta1().support_distance({2, 0}) == doctest::Approx(1.0));
  CHECK(delta1().support_distance({0, 1}) == doctest::Approx(std::sqrt(2.0)));
  CHECK(uniform12().support_distance({3, 0}) == doctest::Approx(1.0));
  CHECK(uniform12().support_distance({1.5, 0}) == 0.0);
}

TEST_CASE("moment integrals, atomic") {
  CHECK(moment_pk(delta1(), {2, 0}, 0.0, 0).value() == doctest::Approx(1.0));
  CHECK(moment_pk(delta1(), {2, 0}, 0.0, 2).value() == doctest::Approx(1.0));
  CHECK(moment_pk(half_half(), {0, 2}, 0.0, 0).value() ==
        doctest::Approx(0.225));
  // divergence on an atom
  CHECK(moment_pk(delta1(), {1, 0}, 0.0, 0).is_pos_inf());
  // precondition on eps0
  CHECK_THROWS(moment_pk(delta1(), {2, 0}, -1.0, 0));
}

TEST_CASE("moment integrals, density") {
  // density vanishes to second order at 1: the integral is exactly
  // int 3(xi-1)^2/(xi-1)^2 = 3
  CHECK(moment_pk(cusp(), {1, 0}, 0.0, 0).value() ==
        doctest::Approx(3.0).epsilon(1e-9));
  // density positive at the endpoint 2: divergent
  CHECK(moment_pk(cusp(), {2, 0}, 0.0, 0).is_pos_inf());
  CHECK(moment_pk(uniform12(), {1.5, 0}, 0.0, 0).is_pos_inf());
}

TEST_CASE("quadrature vs trapezoid oracle") {
  Law l = cusp();
  for (cplx lam : {cplx(3, 1), cplx(0.5, 0.2), cplx(-1, 0)}) {
    for (int k : {0, 2}) {
      double got = moment_pk(l, lam, 0.0, k).value();
      const std::size_t n = 1000000;
      double h = 1.0 / n, acc = 0.0;
      auto f = [&](double xi) {
        double w = 3 * (xi - 1) * (xi - 1);
        return w * (k == 0 ? 1.0 : xi * xi) / std::norm(cplx(xi, 0) - lam);
      };
      for (std::size_t i = 0; i <= n; ++i) {
        double xi = 1.0 + i * h;
        acc += (i == 0 || i == n ? 0.5 : 1.0) * f(xi);
      }
      acc *= h;
      CHECK(got == doctest::Approx(acc).epsilon(1e-8));
    }
  }
}

TEST_CASE("moment symmetry under conjugation") {
  Law l = half_half();
  for (cplx lam : {cplx(2, 1), cplx(-0.3, 0.7), cplx(0.1, -0.4)}) {
    CHECK(moment_pk(l, lam, 0.0, 0).value() ==
          doctest::Approx(moment_pk(l, std::conj(lam), 0.0, 0).value())
              .epsilon(1e-14));
  }
}

TEST_CASE("initial momenta") {
  auto m = initial_momenta(delta1(), {2, 0}, 0.0);
  CHECK(m.p_rho0 == doctest::Approx(4.0));
  CHECK(m.p_theta0 == doctest::Approx(0.0));
  CHECK(m.p_eps0 == doctest::Approx(1.0));

  m = initial_momenta(delta1(), {0, 1}, 0.0);
  CHECK(m.p_rho0 == doctest::Approx(1.0));
  CHECK(m.p_theta0 == doctest::Approx(1.0));
  CHECK(m.p_eps0 == doctest::Approx(0.5));

  m = initial_momenta(cusp(), {5, 0}, 0.1);
  CHECK(m.p_theta0 == doctest::Approx(0.0));

  CHECK_THROWS(initial_momenta(delta1(), {0, 0}, 0.0));
}

TEST_CASE("herglotz integral") {
  CHECK(herglotz_integral(delta1(), {0, 0}).real() == doctest::Approx(1.0));
  CHECK(herglotz_integral(delta1(), {2, 0}).real() == doctest::Approx(-3.0));
  CHECK(std::abs(herglotz_integral(delta1(), {1e6, 0}) - cplx(-1, 0)) < 1e-5);
  // 0 as isolated atom: 1 - 2 mu({0})
  CHECK(herglotz_integral(half_half(), {0, 0}).real() == doctest::Approx(0.0));
  CHECK_THROWS(herglotz_integral(uniform12(), {1.5, 0}));

  for (cplx lam : {cplx(3, 1), cplx(-0.5, 2)}) {
    cplx a = herglotz_integral(half_half(), std::conj(lam));
    cplx b = std::conj(herglotz_integral(half_half(), lam));
    CHECK(std::abs(a - b) < 1e-12);
  }
}

TEST_CASE("cauchy kernel") {
  CHECK(cauchy_kernel(delta1(), {2, 0}).real() == doctest::Approx(1.0));
  CHECK(cauchy_kernel(delta1(), {0, 0}).real() == doctest::Approx(-1.0));
  CHECK(cauchy_kernel(half_half(), {2, 0}).real() == doctest::Approx(0.75));
}

TEST_CASE("log potential") {
  CHECK(log_potential(delta1(), {0, 0}, 0.0).value() == doctest::Approx(0.0));
  CHECK(log_potential(delta1(), {1, 0}, 1.0).value() == doctest::Approx(0.0));
  CHECK(log_potential(delta1(), {1, 0}, 0.0).is_neg_inf());

  // monotone non-increasing as eps decreases
  Law l = half_half();
  for (cplx lam : {cplx(0.5, 0.1), cplx(2, 1), cplx(-1, 0)}) {
    double prev = log_potential(l, lam, 1.0).value();
    for (double eps : {0.5, 0.1, 0.01}) {
      double cur = log_potential(l, lam, eps).value();
      CHECK(cur <= prev + 1e-12);
      prev = cur;
    }
  }
}

TEST_CASE("sampling") {
  auto v = delta1().sample(3, SampleMode::Iid, 42);
  CHECK(v == std::vector<double>{1, 1, 1});
  v = half_half().sample(4, SampleMode::Quantile);
  CHECK(v == std::vector<double>{0, 0, 1, 1});
  v = uniform12().sample(2, SampleMode::Quantile);
  CHECK(v[0] == doctest::Approx(1.25).epsilon(1e-10));
  CHECK(v[1] == doctest::Approx(1.75).epsilon(1e-10));
  // iid draws are reproducible
  auto a = half_half().sample(16, SampleMode::Iid, 7);
  auto b = half_half().sample(16, SampleMode::Iid, 7);
  CHECK(a == b);
}
