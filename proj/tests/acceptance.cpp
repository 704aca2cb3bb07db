// Acceptance gate: one pass/fail line per criterion, tolerances pinned
// below. Run with "--only N" to execute a single criterion.
#include <chrono>
#include <cmath>
#include <cstring>
#include <iostream>
#include <random>
#include <vector>

#include "brownmap/domain.hpp"
#include "brownmap/hamilton.hpp"
#include "brownmap/map.hpp"
#include "brownmap/measure.hpp"
#include "brownmap/rmt.hpp"

using namespace brownmap;

namespace {

Law delta1() { return Law::delta(1.0); }
Law two_atoms() { return Law({{1.0, 0.2}, {2.0, 0.8}}, {}); }
Law half_half() { return Law({{0.0, 0.5}, {1.0, 0.5}}, {}); }

double T_delta1(cplx lam) {
  double r2 = std::norm(lam);
  double n = std::norm(cplx(1, 0) - lam);
  if (std::abs(r2 - 1.0) < 1e-12) return n;
  return n * std::log(1.0 / r2) / (1.0 - r2);
}

struct Timer {
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
  }
};

// 1. closed-form lifetime for the unit atom, 1e-10 on a 100-point grid
bool criterion1(std::string& detail) {
  Law l = delta1();
  double worst = 0;
  for (int i = 0; i < 10; ++i)
    for (int j = 1; j <= 10; ++j) {
      cplx lam = std::polar(0.3 + 0.3 * i, j * M_PI / 10.0);
      worst = std::max(worst,
                       std::abs(lifetime_T(l, lam).value() - T_delta1(lam)));
    }
  bool grid_ok = worst <= 1e-10;
  bool tneg1_ok = std::abs(lifetime_T(l, {-1, 0}).value() - 4.0) <= 1e-10;
  bool circle_ok = theta_t(l, 1.0, 4.02).pi_plus &&
                   !theta_t(l, 1.0, 3.99).pi_plus &&
                   theta_t(l, 1.0, 4.0 + 1e-6).pi_plus;
  detail = "grid max err " + std::to_string(worst);
  return grid_ok && tneg1_ok && circle_ok;
}

// 2. numeric blow-up vs closed form (1e-4 rel, 20 cases); eps0 = 1e-10
//    blow-up vs lifetime (1e-6 rel)
bool criterion2(std::string& detail) {
  std::vector<Law> laws = {delta1(), two_atoms(), half_half()};
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> ur(0.3, 4.0), ua(-M_PI, M_PI);
  double eps_grid[3] = {0.01, 0.1, 1.0};
  int done = 0, pass = 0;
  double worst = 0;
  while (done < 20) {
    const Law& law = laws[done % laws.size()];
    cplx lam0 = std::polar(ur(rng), ua(rng));
    if (law.support_distance(lam0) < 0.1) continue;
    double eps0 = eps_grid[done % 3];
    double ts = blowup(law, lam0, eps0).t_star.value();
    double tn = numeric_blowup_time(law, lam0, eps0);
    double rel = std::abs(tn - ts) / ts;
    worst = std::max(worst, rel);
    if (rel <= 1e-4) ++pass;
    ++done;
  }
  bool limit_ok = true;
  for (const Law& law : laws)
    for (cplx lam0 : {cplx(3.2, 0.4), cplx(-0.9, 0.3)}) {
      double T = lifetime_T(law, lam0).value();
      double ts = blowup(law, lam0, 1e-10).t_star.value();
      if (std::abs(ts - T) > 1e-6 * T) limit_ok = false;
    }
  detail = std::to_string(pass) + "/20 numeric matches, worst rel " +
           std::to_string(worst);
  return pass == 20 && limit_ok;
}

// 3. H, phi conserved to 1e-8; eps*p_eps^2 decay law to 1e-6 relative
bool criterion3(std::string& detail) {
  struct Case {
    Law law;
    cplx lam0;
    double eps0;
  };
  std::vector<Case> cases = {{delta1(), {2, 0}, 0.1},
                             {delta1(), {0, 1}, 0.5},
                             {two_atoms(), {3, 0.5}, 0.5},
                             {two_atoms(), {-0.8, 0.2}, 0.01},
                             {half_half(), {2.5, -0.5}, 1.0}};
  double worst_H = 0, worst_phi = 0, worst_ep2 = 0;
  for (const auto& c : cases) {
    double ts = blowup(c.law, c.lam0, c.eps0).t_star.value();
    FlowConstants fc = constants(c.law, c.lam0, c.eps0);
    auto traj = flow(c.law, c.lam0, c.eps0, 0.9 * ts);
    double p0 = traj.front().p_eps;
    for (const auto& st : traj) {
      worst_H = std::max(worst_H, std::abs(hamiltonian(st) - fc.H0) /
                                      (1 + std::abs(fc.H0)));
      worst_phi = std::max(worst_phi, std::abs(phi_invariant(st) - fc.phi0));
      double rhs = c.eps0 * p0 * p0 * std::exp(-fc.C * st.t);
      worst_ep2 = std::max(
          worst_ep2,
          std::abs(st.eps * st.p_eps * st.p_eps - rhs) / std::abs(rhs));
    }
  }
  detail = "max|H-H0| " + std::to_string(worst_H) + ", max|phi-phi0| " +
           std::to_string(worst_phi) + ", decay-law rel " +
           std::to_string(worst_ep2);
  return worst_H <= 1e-8 && worst_phi <= 1e-8 && worst_ep2 <= 1e-6;
}

// 4. every traced vertex of the s=2, tau=0 image lies on the unit circle
bool criterion4(std::string& detail) {
  BoundaryTrace tr = boundary_D(delta1(), 2.0, {0, 0}, 512);
  double worst = 0;
  std::size_t count = 0;
  for (const auto& comp : tr.components)
    for (const auto& v : comp) {
      worst = std::max(worst, std::abs(std::abs(v.pos) - 1.0));
      ++count;
    }
  detail = std::to_string(count) + " vertices, max ||w|-1| = " +
           std::to_string(worst);
  return count > 0 && worst <= 1e-8;
}

// 5. 10^3 sampled pairs map to distinct values; inversion round-trips
bool criterion5(std::string& detail) {
  Law law = two_atoms();
  double s = 0.2;
  std::mt19937_64 rng(77);
  std::uniform_real_distribution<double> ur(0.05, 4.0), ua(-M_PI, M_PI);
  auto sample_out = [&]() {
    for (;;) {
      cplx z = std::polar(ur(rng), ua(rng));
      if (law.support_distance(z) > 1e-6 &&
          lifetime_T(law, z) > ExtReal(s * 1.0001))
        return z;
    }
  };
  for (cplx tau : {cplx(0.2, 0), cplx(0.1, 0), cplx(0.2, -0.19)}) {
    cplx alpha = cplx(s, 0) - tau;
    for (int k = 0; k < 1000; ++k) {
      cplx z1 = sample_out(), z2 = sample_out();
      if (std::abs(z1 - z2) < 1e-6) continue;
      cplx f1 = f_alpha(law, alpha, z1), f2 = f_alpha(law, alpha, z2);
      if (std::abs(f1 - f2) <= 1e-9 * (1 + std::abs(f1))) {
        detail = "collision";
        return false;
      }
    }
    for (int k = 0; k < 50; ++k) {
      cplx z = sample_out();
      auto zi = invert_f(law, s, tau, f_alpha(law, alpha, z));
      if (!zi || std::abs(*zi - z) > 1e-10 * (1 + std::abs(z))) {
        detail = "round-trip failure";
        return false;
      }
    }
  }
  detail = "3000 pairs distinct, 150 round-trips within 1e-10";
  return true;
}

// 6. figure-scale eigenvalue containment: N=1000, k=1000, dilation 0.05,
//    inside_fraction >= 0.97 for eight (s,tau)/t settings; total < 300 s
bool criterion6(std::string& detail) {
  Law law = two_atoms();
  Timer timer;
  struct Setting {
    double s;
    cplx tau;
  };
  std::vector<Setting> settings = {
      // four boundary times with tau = s
      {0.1, {0.1, 0}},
      {0.1319, {0.1319, 0}},
      {0.2, {0.2, 0}},
      {0.4, {0.4, 0}},
      // four tau values at s = 0.2
      {0.2, {0.2, 0}},
      {0.2, {0.2, 0.1}},
      {0.2, {0.1, 0}},
      {0.2, {0.2, -0.19}},
  };
  bool fractions_ok = true;
  std::string fr;
  for (std::size_t i = 0; i < settings.size(); ++i) {
    SimConfig cfg;
    cfg.N = 1000;
    cfg.steps = 1000;
    cfg.s = settings[i].s;
    cfg.tau = settings[i].tau;
    cfg.scheme =
        cfg.tau == cplx(cfg.s, 0) ? Scheme::Product : Scheme::Euler;
    cfg.seed = 4242 + i;
    CMatrix B = simulate_b(cfg);
    auto x = law.sample(cfg.N, SampleMode::Quantile);
    auto eig = spectrum(x, B);
    SpectrumReport rep = containment(eig, law, cfg.s, cfg.tau, 0.05);
    if (rep.inside_fraction < 0.97) fractions_ok = false;
    fr += (i ? " " : "") + std::to_string(rep.inside_fraction);
  }
  double secs = timer.seconds();
  bool runtime_ok = secs < 300.0;
  detail = "fractions [" + fr + "], runtime " + std::to_string(secs) +
           " s (budget 300 s)";
  return fractions_ok && runtime_ok;
}

// 7. half the mass at the origin: exact zero count and atom recovery
bool criterion7(std::string& detail) {
  Law law = half_half();
  SimConfig cfg;
  cfg.N = 200;
  cfg.steps = 200;
  cfg.s = 0.2;
  cfg.tau = {0.2, 0};
  cfg.seed = 31;
  CMatrix B = simulate_b(cfg);
  auto x = law.sample(cfg.N, SampleMode::Quantile);
  auto eig = spectrum(x, B);
  std::size_t zeros = 0;
  for (cplx w : eig)
    if (std::abs(w) <= 1e-10) ++zeros;
  bool zero_ok = zeros == (std::size_t)cfg.N / 2;

  bool mass_ok = true;
  for (cplx tau : {cplx(0.2, 0), cplx(0.1, 0)}) {
    auto m = mass_at_origin(law, 0.2, tau);
    if (!m || *m != 0.5) mass_ok = false;
  }
  detail = "zero_count " + std::to_string(zeros) + "/" +
           std::to_string(cfg.N / 2) + ", atom mass recovered: " +
           (mass_ok ? "yes" : "no");
  return zero_ok && mass_ok;
}

// 8. the value function is harmonic outside the domain: 5-point Laplacian
//    decays as O(h^2) over h in {1e-2, 5e-3, 2.5e-3}
bool criterion8(std::string& detail) {
  bool ok = true;
  std::string rep;
  for (const Law& law : {delta1(), two_atoms()}) {
    double t = 0.3;
    for (cplx base : {cplx(3.5, 0.8), cplx(-1.5, 0.6)}) {
      double prev = 0;
      std::vector<double> laps;
      for (double h : {1e-2, 5e-3, 2.5e-3}) {
        double c = hj_value_outside(law, base, t).value();
        double lap = (hj_value_outside(law, base + cplx(h, 0), t).value() +
                      hj_value_outside(law, base - cplx(h, 0), t).value() +
                      hj_value_outside(law, base + cplx(0, h), t).value() +
                      hj_value_outside(law, base - cplx(0, h), t).value() -
                      4 * c) /
                     (h * h);
        laps.push_back(std::abs(lap));
        (void)prev;
      }
      // successive halving of h should shrink the residual ~4x
      for (int i = 0; i + 1 < 3; ++i) {
        double ratio = laps[i] / std::max(laps[i + 1], 1e-18);
        if (laps[i] > 1e-3 && (ratio < 2.5 || ratio > 6.0)) ok = false;
      }
      if (laps[2] > 1e-4) ok = false;
      rep += " " + std::to_string(laps[2]);
    }
  }
  detail = "finest-grid residuals" + rep;
  return ok;
}

// 9. lifetime increases with |theta| (finite differences) and is exactly
//    conjugation symmetric
bool criterion9(std::string& detail) {
  std::mt19937_64 rng(5150);
  std::uniform_real_distribution<double> ur(0.2, 3.5), ut(1e-3, M_PI - 1e-3);
  int bad_mono = 0, bad_conj = 0;
  for (const Law& law : {delta1(), two_atoms(), half_half()}) {
    for (int k = 0; k < 334; ++k) {
      double r = ur(rng), th = ut(rng);
      cplx lam = std::polar(r, th);
      if (law.support_distance(lam) < 1e-3) continue;
      double dth = 1e-6;
      double Tm = lifetime_T(law, std::polar(r, th - dth)).as_double();
      double Tp = lifetime_T(law, std::polar(r, th + dth)).as_double();
      if (!(Tp >= Tm - 1e-12)) ++bad_mono;
      if (lifetime_T(law, lam).as_double() !=
          lifetime_T(law, std::conj(lam)).as_double())
        ++bad_conj;
    }
  }
  detail = std::to_string(bad_mono) + " monotonicity violations, " +
           std::to_string(bad_conj) + " conjugation mismatches";
  return bad_mono == 0 && bad_conj == 0;
}

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i + 1 < argc; ++i)
    if (std::strcmp(argv[i], "--only") == 0) only = std::atoi(argv[i + 1]);

  using Fn = bool (*)(std::string&);
  struct Entry {
    int id;
    const char* name;
    Fn fn;
  };
  const Entry entries[] = {
      {1, "closed-form lifetime (unit atom)", criterion1},
      {2, "blow-up time agreement", criterion2},
      {3, "conservation laws", criterion3},
      {4, "unit-circle collapse", criterion4},
      {5, "injectivity and inversion round-trip", criterion5},
      {6, "eigenvalue containment at figure scale", criterion6},
      {7, "mass at the origin", criterion7},
      {8, "harmonicity outside the domain", criterion8},
      {9, "angular monotonicity and conjugation symmetry", criterion9},
  };

  int failures = 0;
  for (const auto& e : entries) {
    if (only != 0 && e.id != only) continue;
    Timer timer;
    std::string detail;
    bool pass = false;
    try {
      pass = e.fn(detail);
    } catch (const std::exception& ex) {
      detail = std::string("exception: ") + ex.what();
    }
    std::cout << (pass ? "[PASS] " : "[FAIL] ") << "criterion " << e.id
              << " (" << e.name << "): " << detail << "  [" << timer.seconds()
              << " s]" << std::endl;
    if (!pass) ++failures;
  }
  return failures == 0 ? 0 : 1;
}
