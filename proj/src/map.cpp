#include "brownmap/map.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace brownmap {

DomainParams::DomainParams(double s_, cplx tau_) : s(s_), tau(tau_) {
  if (s <= 0) throw std::invalid_argument("DomainParams: s <= 0");
  if (std::abs(tau - cplx(s, 0)) > s * (1.0 + 1e-12))
    throw std::invalid_argument("DomainParams: |tau - s| > s");
}

cplx f_alpha(const Law& law, cplx alpha, cplx lambda) {
  if (lambda == cplx(0, 0)) {
    if (!law.zero_in_support() || law.zero_isolated_atom()) return cplx(0, 0);
    throw std::domain_error("f_alpha: 0 in non-atomic supp");
  }
  return lambda * std::exp(0.5 * alpha * herglotz_integral(law, lambda));
}

cplx f_alpha_prime(const Law& law, cplx alpha, cplx lambda) {
  if (lambda == cplx(0, 0)) throw std::domain_error("f_alpha_prime: lambda = 0");
  cplx f = f_alpha(law, alpha, lambda);
  cplx kernel = integrate_kernel(
      law, [&](double xi) { return xi / ((xi - lambda) * (xi - lambda)); },
      {lambda.real()});
  return f * (1.0 / lambda + alpha * kernel);
}

namespace {

// A preimage counts only when it lies strictly past the time-s closure.
bool admissible_root(const Law& law, double s, cplx z) {
  if (z == cplx(0, 0)) {
    try {
      return lifetime_limit_at_zero(law) > ExtReal(s);
    } catch (const std::domain_error&) {
      return false;
    }
  }
  if (law.support_distance(z) == 0.0) return false;
  return lifetime_T(law, z) > ExtReal(s);
}

}  // namespace

std::optional<cplx> invert_f(const Law& law, double s, cplx tau, cplx target,
                             const std::vector<cplx>& seeds) {
  DomainParams params(s, tau);
  cplx alpha = cplx(s, 0) - tau;
  if (alpha == cplx(0, 0)) {  // f is the identity
    if (admissible_root(law, s, target)) return target;
    return std::nullopt;
  }

  std::vector<cplx> starts;
  cplx base = target * std::exp(0.5 * alpha);
  starts.push_back(base);
  double rad = 0.25 * (1.0 + std::abs(base));
  for (int k = 0; k < 8; ++k)
    starts.push_back(base + std::polar(rad, k * M_PI / 4.0));
  starts.insert(starts.end(), seeds.begin(), seeds.end());

  const double res_tol = 1e-12 * (1.0 + std::abs(target));
  std::optional<cplx> found;
  for (cplx z : starts) {
    bool ok = false;
    try {
      for (int it = 0; it < 80; ++it) {
        cplx r = f_alpha(law, alpha, z) - target;
        if (std::abs(r) < 0.5 * res_tol) {
          ok = true;
          break;
        }
        cplx fp = f_alpha_prime(law, alpha, z);
        if (fp == cplx(0, 0)) break;
        cplx step = r / fp;
        // damp wild steps so Newton stays in the holomorphy region
        double cap = 0.5 * (1.0 + std::abs(z));
        if (std::abs(step) > cap) step *= cap / std::abs(step);
        z -= step;
      }
    } catch (const std::domain_error&) {
      continue;  // iterate wandered onto the support
    }
    if (!ok) continue;
    if (!admissible_root(law, s, z)) continue;
    if (found && std::abs(*found - z) > 1e-8 * (1.0 + std::abs(z)))
      throw std::runtime_error("invert_f: two distinct admissible roots");
    found = z;
  }
  return found;
}

BoundaryTrace boundary_D(const Law& law, double s, cplx tau, int n_radii) {
  DomainParams params(s, tau);
  cplx alpha = cplx(s, 0) - tau;
  BoundaryTrace trace = boundary_sigma(law, s, n_radii);
  if (alpha == cplx(0, 0)) return trace;
  for (auto& comp : trace.components)
    for (auto& v : comp) v.pos = f_alpha(law, alpha, v.pos);
  double res = 0.0;
  for (const auto& comp : trace.components)
    for (std::size_t k = 0; k + 1 < comp.size(); ++k)
      res = std::max(res, std::abs(comp[k + 1].pos - comp[k].pos));
  trace.resolution = res;
  return trace;
}

namespace {

bool even_odd_inside(const BoundaryTrace& trace, cplx p) {
  bool inside = false;
  for (const auto& comp : trace.components) {
    std::size_t n = comp.size();
    for (std::size_t i = 0; i < n; ++i) {
      cplx a = comp[i].pos, b = comp[(i + 1) % n].pos;
      if ((a.imag() > p.imag()) == (b.imag() > p.imag())) continue;
      double x_cross = a.real() + (p.imag() - a.imag()) /
                                      (b.imag() - a.imag()) *
                                      (b.real() - a.real());
      if (x_cross > p.real()) inside = !inside;
    }
  }
  return inside;
}

}  // namespace

bool in_D(const Law& law, double s, cplx tau, cplx lambda,
          const BoundaryTrace& trace) {
  if (trace_distance(trace, lambda) < trace.resolution) {
    // too close to the polyline to trust crossing parity
    return !invert_f(law, s, tau, lambda).has_value();
  }
  return even_odd_inside(trace, lambda);
}

bool in_D(const Law& law, double s, cplx tau, cplx lambda) {
  return in_D(law, s, tau, lambda, boundary_D(law, s, tau));
}

TauCurves tau_curves(const Law& law, double s, cplx tau, cplx lambda0,
                     double eps0) {
  DomainParams params(s, tau);
  if (eps0 < 0) throw std::invalid_argument("tau_curves: eps0 < 0");
  if (law.support_distance(lambda0) == 0.0)
    throw std::domain_error("tau_curves: lambda0 on supp");

  double p_eps0;
  cplx p_lambda0;
  if (eps0 == 0.0) {
    p_eps0 = 0.0;
    p_lambda0 = cauchy_kernel(law, lambda0);
  } else {
    p_eps0 = 2.0 * eps0 * moment_pk(law, lambda0, eps0 * eps0, 0).value();
    p_lambda0 = integrate_kernel(
        law,
        [&](double xi) {
          return (std::conj(lambda0) - xi) /
                 (std::norm(xi - lambda0) + eps0 * eps0);
        },
        {lambda0.real()});
  }

  cplx E = 0.5 * (tau - cplx(s, 0)) *
           (eps0 * p_eps0 + 2.0 * lambda0 * p_lambda0 - 1.0);
  cplx eE = std::exp(E);
  double eReE = std::exp(E.real());
  TauCurves out;
  out.lambda_tau = lambda0 * eE;
  out.eps_tau = eps0 * eReE;
  out.p_lambda_tau = p_lambda0 / eE;
  out.p_eps_tau = p_eps0 / eReE;
  return out;
}

std::optional<cplx> dS_dlambda(const Law& law, double s, cplx tau,
                               cplx lambda) {
  if (lambda == cplx(0, 0)) throw std::domain_error("dS_dlambda: lambda = 0");
  std::optional<cplx> z = invert_f(law, s, tau, lambda);
  if (!z) return std::nullopt;
  return (*z / lambda) * cauchy_kernel(law, *z);
}

std::optional<double> mass_at_origin(const Law& law, double s, cplx tau) {
  if (in_D(law, s, tau, cplx(0, 0))) return std::nullopt;
  return law.mass_at_zero();
}

}  // namespace brownmap
