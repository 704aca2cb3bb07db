#pragma once

#include <string>
#include <vector>

#include "brownmap/measure.hpp"

namespace brownmap {

/// Characteristic-flow state in log-polar coordinates (r = e^rho).
struct CharState {
  double t = 0.0;
  double rho = 0.0;
  double theta = 0.0;
  double eps = 0.0;
  double p_rho = 0.0;
  double p_theta = 0.0;
  double p_eps = 0.0;
};

/// H = -eps * p_eps * (1 + (r^2 - eps) p_eps - p_rho).
double hamiltonian(const CharState& s);

/// phi = eps * p_eps + p_rho / 2, conserved along the flow.
double phi_invariant(const CharState& s);

/// Conserved quantities fixed by the initial data: H0 = -eps0 p0 p2,
/// phi0, and C = 2 phi0 - 1 = p0 (r0^2 + eps0) - p2.
struct FlowConstants {
  double H0 = 0.0;
  double C = 0.0;
  double phi0 = 0.0;
};
FlowConstants constants(const Law& law, cplx lambda0, double eps0);

/// Initial state of the characteristic system at (lambda0, eps0).
CharState initial_state(const Law& law, cplx lambda0, double eps0);

/// RK4 trajectory up to t_end (must be below the blow-up time). dt <= 0
/// selects the default 1e-4 * t_star; the step halves when p_eps grows
/// too fast within a step. Throws overflow_error at |p_eps| > 1e12.
std::vector<CharState> flow(const Law& law, cplx lambda0, double eps0,
                            double t_end, double dt = 0.0);

/// Time at which the integrated trajectory crosses |p_eps| = guard.
double numeric_blowup_time(const Law& law, cplx lambda0, double eps0,
                           double guard = 1e12);

/// Closed-form p_eps(t) and eps(t); valid for t < blow-up time.
double p_eps_closed(const Law& law, cplx lambda0, double eps0, double t);
double eps_closed(const Law& law, cplx lambda0, double eps0, double t);

enum class BlowupBranch { Hyperbolic, Trigonometric };

struct BlowupResult {
  ExtReal t_star;
  double delta = 0.0;
  double C = 0.0;
  double a_squared = 0.0;
  BlowupBranch branch = BlowupBranch::Hyperbolic;
};

/// Blow-up time of the characteristic from (lambda0, eps0); +inf at
/// lambda0 = 0 when 0 is off the support. Trigonometric branch applies
/// only when a^2 < 0 (slightly negative eps0).
BlowupResult blowup(const Law& law, cplx lambda0, double eps0);

/// s_t(lambda) outside the closed domain: the log potential at eps = 0.
ExtReal hj_value_outside(const Law& law, cplx lambda, double t);

/// CSV with columns t,rho,theta,eps,p_rho,p_theta,p_eps,H,phi.
std::string trajectory_csv(const std::vector<CharState>& traj);

}  // namespace brownmap
