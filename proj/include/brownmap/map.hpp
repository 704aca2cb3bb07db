#pragma once

#include <optional>
#include <vector>

#include "brownmap/domain.hpp"
#include "brownmap/measure.hpp"

namespace brownmap {

/// Parameters (s, tau) of a Brownian motion; requires |tau - s| <= s.
struct DomainParams {
  double s;
  cplx tau;
  DomainParams(double s_, cplx tau_);
};

/// f_alpha(lambda) = lambda * exp[(alpha/2) int (xi+lambda)/(xi-lambda) dmu],
/// extended by f_alpha(0) = 0 when 0 is off the support or an isolated atom.
cplx f_alpha(const Law& law, cplx alpha, cplx lambda);

/// f' = f * (1/lambda + alpha * int xi/(xi-lambda)^2 dmu); lambda != 0.
cplx f_alpha_prime(const Law& law, cplx alpha, cplx lambda);

/// Local inverse of f_{s-tau} on the complement of the closed time-s
/// domain: Newton from the far-field seed target*e^{(s-tau)/2} plus
/// perturbed copies (and any caller seeds). Returns nullopt when no seed
/// converges to an admissible root (target presumed inside D); throws
/// runtime_error if two distinct admissible roots appear.
std::optional<cplx> invert_f(const Law& law, double s, cplx tau, cplx target,
                             const std::vector<cplx>& seeds = {});

/// Image of the time-s boundary under f_{s-tau}; component structure and
/// per-vertex (r, theta) metadata preserved.
BoundaryTrace boundary_D(const Law& law, double s, cplx tau,
                         int n_radii = 512);

/// Even-odd crossing test against the traced boundary; points closer to
/// the trace than its resolution are resolved by invert_f (inside iff the
/// inversion fails).
bool in_D(const Law& law, double s, cplx tau, cplx lambda,
          const BoundaryTrace& trace);
bool in_D(const Law& law, double s, cplx tau, cplx lambda);

/// Exponential characteristic curves in the tau direction, evaluated at
/// tau from the initial point (lambda0, eps0) at tau = s.
struct TauCurves {
  cplx lambda_tau;
  double eps_tau;
  cplx p_lambda_tau;
  double p_eps_tau;
};
TauCurves tau_curves(const Law& law, double s, cplx tau, cplx lambda0,
                     double eps0);

/// dS/dlambda outside D: (f^{-1}(lambda)/lambda) * cauchy_kernel(f^{-1});
/// nullopt when the inversion fails.
std::optional<cplx> dS_dlambda(const Law& law, double s, cplx tau,
                               cplx lambda);

/// mu({0}) when 0 is outside D; nullopt otherwise.
std::optional<double> mass_at_origin(const Law& law, double s, cplx tau);

}  // namespace brownmap
