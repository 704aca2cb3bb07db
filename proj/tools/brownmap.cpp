#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "brownmap/domain.hpp"
#include "brownmap/hamilton.hpp"
#include "brownmap/map.hpp"
#include "brownmap/measure.hpp"
#include "brownmap/rmt.hpp"

extern "C" void openblas_set_num_threads(int);

namespace {

using namespace brownmap;
using nlohmann::json;

constexpr const char* kVersion = "1.0.0";

// exit-code contract: 0 ok, 1 verification failure, 2 input error,
// 3 degenerate output, 4 numerical failure
enum ExitCode { kOk = 0, kVerifyFail = 1, kInputError = 2, kDegenerate = 3, kNumerical = 4 };

struct CliError {
  int code;
  std::string msg;
};

cplx parse_complex(const std::string& raw) {
  std::string s;
  for (char c : raw)
    if (!isspace((unsigned char)c)) s += c;
  if (s.empty()) throw CliError{kInputError, "empty complex literal"};
  auto parse_num = [](const std::string& t) {
    if (t == "" || t == "+") return 1.0;
    if (t == "-") return -1.0;
    std::size_t used = 0;
    double v = std::stod(t, &used);
    if (used != t.size()) throw std::invalid_argument(t);
    return v;
  };
  try {
    if (s.back() == 'i') {
      std::string body = s.substr(0, s.size() - 1);
      // split at the last +/- that is not a leading sign or exponent sign
      for (std::size_t p = body.size(); p-- > 1;) {
        if ((body[p] == '+' || body[p] == '-') &&
            body[p - 1] != 'e' && body[p - 1] != 'E') {
          return cplx(parse_num(body.substr(0, p)),
                      parse_num(body.substr(p)));
        }
      }
      return cplx(0.0, parse_num(body));
    }
    std::size_t used = 0;
    double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return cplx(v, 0.0);
  } catch (const std::exception&) {
    throw CliError{kInputError, "malformed complex literal: " + raw};
  }
}

Law load_law(const std::string& path) {
  try {
    return Law::from_json_file(path);
  } catch (const std::exception& e) {
    throw CliError{kInputError, std::string("invalid measure: ") + e.what()};
  }
}

void write_atomic(const std::string& path, const std::string& content) {
  std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary);
    if (!out) throw CliError{kInputError, "cannot write " + tmp};
    out << content;
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0)
    throw CliError{kInputError, "cannot rename into " + path};
}

struct Manifest {
  std::string command;
  json params = json::object();
  std::uint64_t seed = 0;
  std::vector<std::string> outputs;
  std::chrono::steady_clock::time_point start =
      std::chrono::steady_clock::now();

  void write(const std::string& path) {
    json j;
    j["command"] = command;
    j["params"] = params;
    j["seed"] = seed;
    j["versions"] = {{"tool", kVersion}, {"format", 1}};
    j["outputs"] = outputs;
    j["wall_time_s"] =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start)
            .count();
    write_atomic(path, j.dump(2) + "\n");
  }
};

int cmd_domain(const std::string& measure, double t, int n_radii,
               const std::string& out) {
  Manifest man;
  man.command = "domain";
  man.params = {{"measure", measure}, {"t", t}, {"n_radii", n_radii}};
  if (t <= 0) throw CliError{kInputError, "t must be > 0"};
  Law law = load_law(measure);
  BoundaryTrace tr = boundary_sigma(law, t, n_radii);
  if (tr.components.empty())
    throw CliError{kDegenerate, "empty boundary trace"};
  write_atomic(out + "_boundary.csv", tr.to_csv());
  man.outputs = {out + "_boundary.csv"};
  man.write(out + "_manifest.json");
  return kOk;
}

int cmd_mapD(const std::string& measure, double s, const std::string& tau_s,
             int n_radii, const std::string& out) {
  Manifest man;
  man.command = "mapD";
  man.params = {{"measure", measure}, {"s", s}, {"tau", tau_s},
                {"n_radii", n_radii}};
  cplx tau = parse_complex(tau_s);
  Law law = load_law(measure);
  BoundaryTrace tr;
  try {
    tr = boundary_D(law, s, tau, n_radii);
  } catch (const std::invalid_argument& e) {
    throw CliError{kInputError, e.what()};
  }
  if (tr.components.empty())
    throw CliError{kDegenerate, "empty boundary trace"};
  write_atomic(out + "_boundary.csv", tr.to_csv());
  man.outputs = {out + "_boundary.csv"};
  man.write(out + "_manifest.json");
  return kOk;
}

int cmd_tstar(const std::string& measure, const std::string& lambda0_s,
              double eps0, const std::string& out) {
  Manifest man;
  man.command = "tstar";
  man.params = {{"measure", measure}, {"lambda0", lambda0_s}, {"eps0", eps0}};
  cplx lambda0 = parse_complex(lambda0_s);
  Law law = load_law(measure);
  json j;
  try {
    BlowupResult b = blowup(law, lambda0, eps0);
    j["t_star"] = b.t_star.finite() ? json(b.t_star.value()) : json("inf");
    j["delta"] = b.delta;
    j["C"] = b.C;
    j["a_squared"] = b.a_squared;
    j["branch"] =
        b.branch == BlowupBranch::Hyperbolic ? "hyperbolic" : "trigonometric";
    if (lambda0 != cplx(0, 0)) {
      ExtReal T = lifetime_T(law, lambda0);
      j["lifetime_T"] = T.finite() ? json(T.value()) : json("inf");
    }
  } catch (const std::domain_error& e) {
    throw CliError{kInputError, e.what()};
  }
  write_atomic(out + "_tstar.json", j.dump(2) + "\n");
  std::cout << j.dump(2) << "\n";
  man.outputs = {out + "_tstar.json"};
  man.write(out + "_manifest.json");
  return kOk;
}

int cmd_flow(const std::string& measure, const std::string& lambda0_s,
             double eps0, double t_end, double dt, const std::string& out) {
  Manifest man;
  man.command = "flow";
  man.params = {{"measure", measure}, {"lambda0", lambda0_s},
                {"eps0", eps0},      {"t_end", t_end},
                {"dt", dt}};
  cplx lambda0 = parse_complex(lambda0_s);
  Law law = load_law(measure);
  std::vector<CharState> traj;
  try {
    traj = flow(law, lambda0, eps0, t_end, dt);
  } catch (const std::overflow_error& e) {
    throw CliError{kNumerical, e.what()};
  } catch (const std::domain_error& e) {
    throw CliError{kInputError, e.what()};
  }
  write_atomic(out + "_trajectory.csv", trajectory_csv(traj));
  man.outputs = {out + "_trajectory.csv"};
  man.write(out + "_manifest.json");
  return kOk;
}

int cmd_rmt(const std::string& measure, double s, const std::string& tau_s,
            int N, int steps, std::uint64_t seed, const std::string& scheme,
            const std::string& x_mode, double dilation,
            const std::string& out) {
  Manifest man;
  man.command = "rmt";
  man.seed = seed;
  man.params = {{"measure", measure}, {"s", s},         {"tau", tau_s},
                {"N", N},             {"steps", steps}, {"scheme", scheme},
                {"x_mode", x_mode},   {"dilation", dilation}};
  cplx tau = parse_complex(tau_s);
  Law law = load_law(measure);
  SimConfig cfg;
  cfg.N = N;
  cfg.steps = steps;
  cfg.s = s;
  cfg.tau = tau;
  cfg.seed = seed;
  if (scheme == "product")
    cfg.scheme = Scheme::Product;
  else if (scheme == "euler")
    cfg.scheme = Scheme::Euler;
  else
    throw CliError{kInputError, "scheme must be product or euler"};
  cfg.x_mode = x_mode == "iid" ? SampleMode::Iid : SampleMode::Quantile;

  SpectrumReport rep;
  BoundaryTrace tr;
  try {
    CMatrix B = simulate_b(cfg);
    auto x = law.sample((std::size_t)N, cfg.x_mode, seed ^ 0x5eedULL);
    auto eig = spectrum(x, B);
    tr = boundary_D(law, s, tau);
    rep = containment(eig, law, s, tau, dilation, tr);
  } catch (const std::invalid_argument& e) {
    throw CliError{kInputError, e.what()};
  } catch (const std::runtime_error& e) {
    throw CliError{kNumerical, e.what()};
  }
  write_atomic(out + "_eigenvalues.csv", rep.eigenvalues_csv());
  write_atomic(out + "_boundary.csv", tr.to_csv());
  write_atomic(out + "_report.json", rep.to_json_text() + "\n");
  man.outputs = {out + "_eigenvalues.csv", out + "_boundary.csv",
                 out + "_report.json"};
  man.write(out + "_manifest.json");
  return kOk;
}

// --- verification suites -------------------------------------------------

struct Check {
  std::string name;
  bool pass;
  std::string detail;
};

void suite_conservation(std::vector<Check>& checks) {
  struct Case {
    Law law;
    cplx lam0;
    double eps0;
  };
  std::vector<Case> cases = {
      {Law::delta(1.0), {2, 0}, 0.1},
      {Law({{1.0, 0.2}, {2.0, 0.8}}, {}), {3, 0.5}, 0.5},
      {Law({{0.0, 0.5}, {1.0, 0.5}}, {}), {-0.8, 0.3}, 0.01},
  };
  int idx = 0;
  for (const auto& c : cases) {
    ++idx;
    double ts = blowup(c.law, c.lam0, c.eps0).t_star.value();
    FlowConstants fc = constants(c.law, c.lam0, c.eps0);
    auto traj = flow(c.law, c.lam0, c.eps0, 0.9 * ts);
    double p0 = traj.front().p_eps;
    double worst_H = 0, worst_phi = 0, worst_ep2 = 0;
    for (const auto& st : traj) {
      worst_H = std::max(worst_H, std::abs(hamiltonian(st) - fc.H0));
      worst_phi = std::max(worst_phi, std::abs(phi_invariant(st) - fc.phi0));
      double rhs = c.eps0 * p0 * p0 * std::exp(-fc.C * st.t);
      worst_ep2 = std::max(
          worst_ep2,
          std::abs(st.eps * st.p_eps * st.p_eps - rhs) / std::abs(rhs));
    }
    bool ok = worst_H <= 1e-8 * (1 + std::abs(fc.H0)) && worst_phi <= 1e-8 &&
              worst_ep2 <= 1e-6;
    checks.push_back({"conservation_case_" + std::to_string(idx), ok,
                      "max|H-H0|=" + std::to_string(worst_H) +
                          " max|phi-phi0|=" + std::to_string(worst_phi)});
  }
}

void suite_blowup(std::vector<Check>& checks) {
  std::vector<Law> laws = {Law::delta(1.0),
                           Law({{1.0, 0.2}, {2.0, 0.8}}, {}),
                           Law({{0.0, 0.5}, {1.0, 0.5}}, {})};
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> ur(0.3, 4.0), ua(-M_PI, M_PI);
  double eps_grid[3] = {0.01, 0.1, 1.0};
  int done = 0, pass = 0;
  while (done < 20) {
    const Law& law = laws[done % laws.size()];
    double eps0 = eps_grid[done % 3];
    cplx lam0 = std::polar(ur(rng), ua(rng));
    if (law.support_distance(lam0) < 0.1) continue;
    double ts = blowup(law, lam0, eps0).t_star.value();
    double tn = numeric_blowup_time(law, lam0, eps0);
    if (std::abs(tn - ts) <= 1e-4 * ts) ++pass;
    ++done;
  }
  checks.push_back({"blowup_matches_closed_form", pass == 20,
                    std::to_string(pass) + "/20 within 1e-4 relative"});
}

void suite_injectivity(std::vector<Check>& checks) {
  Law law({{1.0, 0.2}, {2.0, 0.8}}, {});
  double s = 0.2;
  std::vector<cplx> taus = {{0.2, 0}, {0.1, 0}, {0.2, -0.19}};
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
  for (cplx tau : taus) {
    cplx alpha = cplx(s, 0) - tau;
    bool ok = true;
    for (int k = 0; k < 1000 && ok; ++k) {
      cplx z1 = sample_out(), z2 = sample_out();
      if (std::abs(z1 - z2) < 1e-6) continue;
      cplx f1 = f_alpha(law, alpha, z1), f2 = f_alpha(law, alpha, z2);
      if (std::abs(f1 - f2) <= 1e-9 * (1 + std::abs(f1))) ok = false;
    }
    bool rt = true;
    for (int k = 0; k < 50 && rt; ++k) {
      cplx z = sample_out();
      auto zi = invert_f(law, s, tau, f_alpha(law, alpha, z));
      if (!zi || std::abs(*zi - z) > 1e-10 * (1 + std::abs(z))) rt = false;
    }
    std::ostringstream name;
    name << "injectivity_tau_" << tau.real() << "_" << tau.imag();
    checks.push_back({name.str(), ok && rt,
                      ok ? (rt ? "distinct + round-trip" : "round-trip failed")
                         : "collision found"});
  }
}

void suite_containment(std::vector<Check>& checks) {
  Law law({{1.0, 0.2}, {2.0, 0.8}}, {});
  SimConfig cfg;
  cfg.N = 300;
  cfg.steps = 200;
  cfg.s = 0.2;
  cfg.tau = {0.2, 0};
  cfg.seed = 11;
  CMatrix B = simulate_b(cfg);
  auto x = law.sample(cfg.N, SampleMode::Quantile);
  auto eig = spectrum(x, B);
  SpectrumReport rep = containment(eig, law, cfg.s, cfg.tau, 0.05);
  checks.push_back({"containment_fraction", rep.inside_fraction >= 0.95,
                    "inside_fraction=" + std::to_string(rep.inside_fraction)});

  // unit-circle collapse for the deterministic unitary initial condition
  BoundaryTrace circ = boundary_D(Law::delta(1.0), 2.0, {0, 0}, 256);
  double worst = 0;
  for (const auto& comp : circ.components)
    for (const auto& v : comp)
      worst = std::max(worst, std::abs(std::abs(v.pos) - 1.0));
  checks.push_back({"unit_circle_collapse", worst <= 1e-8,
                    "max||w|-1|=" + std::to_string(worst)});
}

int cmd_verify(const std::string& suite, const std::string& out) {
  std::vector<Check> checks;
  bool known = false;
  if (suite == "conservation" || suite == "all") {
    suite_conservation(checks);
    known = true;
  }
  if (suite == "blowup" || suite == "all") {
    suite_blowup(checks);
    known = true;
  }
  if (suite == "injectivity" || suite == "all") {
    suite_injectivity(checks);
    known = true;
  }
  if (suite == "containment" || suite == "all") {
    suite_containment(checks);
    known = true;
  }
  if (!known) throw CliError{kInputError, "unknown suite: " + suite};

  json j;
  j["suite"] = suite;
  j["checks"] = json::array();
  int failed = 0;
  for (const auto& c : checks) {
    j["checks"].push_back(
        {{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    if (!c.pass) ++failed;
    std::cout << (c.pass ? "[PASS] " : "[FAIL] ") << c.name << " — "
              << c.detail << "\n";
  }
  j["failed"] = failed;
  write_atomic(out + "_verify.json", j.dump(2) + "\n");
  Manifest man;
  man.command = "verify";
  man.params = {{"suite", suite}};
  man.outputs = {out + "_verify.json"};
  man.write(out + "_manifest.json");
  return failed == 0 ? kOk : kVerifyFail;
}

}  // namespace

int main(int argc, char** argv) {
  if (const char* env = std::getenv("BROWNMAP_THREADS")) {
    int n = std::atoi(env);
    if (n > 0) openblas_set_num_threads(n);
  }

  CLI::App app{"Brown-measure support domains, characteristic flows, and "
               "random-matrix verification"};
  app.require_subcommand(1);

  std::string measure, tau_s = "0", lambda0_s = "1", scheme = "product",
              x_mode = "quantile", suite = "all", out = "brownmap";
  double t = 1.0, s = 0.2, eps0 = 0.0, t_end = 0.1, dt = 0.0,
         dilation = 0.05;
  int n_radii = 512, N = 1000, steps = 1000;
  std::uint64_t seed = 0;

  auto* cdom = app.add_subcommand("domain", "trace the time-t boundary");
  cdom->add_option("--measure", measure)->required();
  cdom->add_option("--t", t)->required();
  cdom->add_option("--n-radii", n_radii);
  cdom->add_option("--out", out);

  auto* cmap = app.add_subcommand("mapD", "trace the (s,tau) boundary");
  cmap->add_option("--measure", measure)->required();
  cmap->add_option("--s", s)->required();
  cmap->add_option("--tau", tau_s)->required();
  cmap->add_option("--n-radii", n_radii);
  cmap->add_option("--out", out);

  auto* cts = app.add_subcommand("tstar", "blow-up time and lifetime");
  cts->add_option("--measure", measure)->required();
  cts->add_option("--lambda0", lambda0_s)->required();
  cts->add_option("--eps0", eps0);
  cts->add_option("--out", out);

  auto* cflow = app.add_subcommand("flow", "integrate a characteristic");
  cflow->add_option("--measure", measure)->required();
  cflow->add_option("--lambda0", lambda0_s)->required();
  cflow->add_option("--eps0", eps0)->required();
  cflow->add_option("--t-end", t_end)->required();
  cflow->add_option("--dt", dt);
  cflow->add_option("--out", out);

  auto* crmt = app.add_subcommand("rmt", "simulate and check eigenvalues");
  crmt->add_option("--measure", measure)->required();
  crmt->add_option("--s", s)->required();
  crmt->add_option("--tau", tau_s)->required();
  crmt->add_option("--N", N);
  crmt->add_option("--steps", steps);
  crmt->add_option("--seed", seed);
  crmt->add_option("--scheme", scheme);
  crmt->add_option("--x-mode", x_mode);
  crmt->add_option("--dilation", dilation);
  crmt->add_option("--out", out);

  auto* cver = app.add_subcommand("verify", "run invariant suites");
  cver->add_option("--suite", suite);
  cver->add_option("--out", out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? kOk : kInputError;
  }

  try {
    if (cdom->parsed()) return cmd_domain(measure, t, n_radii, out);
    if (cmap->parsed()) return cmd_mapD(measure, s, tau_s, n_radii, out);
    if (cts->parsed()) return cmd_tstar(measure, lambda0_s, eps0, out);
    if (cflow->parsed())
      return cmd_flow(measure, lambda0_s, eps0, t_end, dt, out);
    if (crmt->parsed())
      return cmd_rmt(measure, s, tau_s, N, steps, seed, scheme, x_mode,
                     dilation, out);
    if (cver->parsed()) return cmd_verify(suite, out);
  } catch (const CliError& e) {
    std::cerr << "error: " << e.msg << "\n";
    return e.code;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kNumerical;
  }
  return kOk;
}
