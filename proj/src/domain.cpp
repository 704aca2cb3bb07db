#include "brownmap/domain.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace brownmap {

ExtReal lifetime_T(const Law& law, cplx lambda0) {
  if (lambda0 == cplx(0, 0))
    throw std::domain_error("lifetime_T: lambda0 = 0");
  ExtReal p0 = moment_pk(law, lambda0, 0.0, 0);
  if (p0.is_pos_inf()) return ExtReal(0.0);
  ExtReal p2e = moment_pk(law, lambda0, 0.0, 2);
  double p2 = p2e.value();
  double r0sq = std::norm(lambda0);
  double R = p0.value() * r0sq / p2;
  double u = R - 1.0;
  if (std::abs(u) < 1e-4) {
    // log(1+u)/u expanded; the direct quotient loses ~8 digits here
    return ExtReal((1.0 - u / 2 + u * u / 3 - u * u * u / 4) / p2);
  }
  return ExtReal(std::log(R) / (p2 * u));
}

ExtReal lifetime_at_origin(const Law& law) {
  if (law.zero_in_support())
    throw std::domain_error("lifetime_at_origin: 0 in supp");
  return ExtReal::pos_inf();
}

ExtReal lifetime_limit_at_zero(const Law& law) {
  if (!law.zero_in_support()) return ExtReal::pos_inf();
  if (!law.zero_isolated_atom())
    throw std::domain_error("lifetime_limit_at_zero: 0 not isolated");
  // As lambda0 -> 0: p0 |lambda0|^2 -> w0 (the atom dominates) and
  // p2 -> 1 - w0, so the lifetime quotient has a finite radial limit.
  double w0 = law.mass_at_zero();
  double p2 = 1.0 - w0;
  double R = w0 / p2;
  double u = R - 1.0;
  if (std::abs(u) < 1e-4)
    return ExtReal((1.0 - u / 2 + u * u / 3 - u * u * u / 4) / p2);
  return ExtReal(std::log(R) / (p2 * u));
}

ThetaT theta_t(const Law& law, double r, double t, double tol) {
  if (r <= 0 || t <= 0) throw std::invalid_argument("theta_t: need r,t > 0");
  ThetaT out;
  out.r = r;
  out.t = t;
  if (lifetime_T(law, cplx(-r, 0)) < ExtReal(t)) {
    out.pi_plus = true;
    out.theta = M_PI;
    return out;
  }
  if (lifetime_T(law, cplx(r, 0)) >= ExtReal(t)) {
    out.theta = 0.0;
    return out;
  }
  // T is monotone in |theta|: bisect for the first angle with T >= t.
  double lo = 0.0, hi = M_PI;
  while (hi - lo > tol) {
    double mid = 0.5 * (lo + hi);
    (lifetime_T(law, std::polar(r, mid)) < ExtReal(t) ? lo : hi) = mid;
  }
  out.theta = hi;
  return out;
}

bool in_sigma(const Law& law, cplx lambda, double t) {
  if (lambda == cplx(0, 0)) return false;
  return lifetime_T(law, lambda) < ExtReal(t);
}

std::string BoundaryTrace::to_csv() const {
  std::ostringstream os;
  os.precision(17);
  os << "component_id,re,im,r,theta\n";
  for (std::size_t c = 0; c < components.size(); ++c)
    for (const auto& v : components[c])
      os << c << ',' << v.pos.real() << ',' << v.pos.imag() << ',' << v.r
         << ',' << v.theta << '\n';
  return os.str();
}

std::string BoundaryTrace::to_json_text() const {
  nlohmann::json j;
  j["resolution"] = resolution;
  j["components"] = nlohmann::json::array();
  for (const auto& comp : components) {
    nlohmann::json jc = nlohmann::json::array();
    for (const auto& v : comp)
      jc.push_back({{"re", v.pos.real()},
                    {"im", v.pos.imag()},
                    {"r", v.r},
                    {"theta", v.theta}});
    j["components"].push_back(std::move(jc));
  }
  return j.dump(2);
}

BoundaryTrace boundary_sigma(const Law& law, double t, int n_radii) {
  if (t <= 0) throw std::invalid_argument("boundary_sigma: t <= 0");
  if (n_radii < 8) throw std::invalid_argument("boundary_sigma: n_radii < 8");

  // Outer bracket: double until the positive axis (where T is smallest on
  // its circle) has left the domain.
  double R = std::max(2.0 * law.max_support(), 1.0);
  while (lifetime_T(law, cplx(R, 0)) <= ExtReal(t)) R *= 2.0;
  // Inner bracket: quarter below the support until the circle is fully
  // outside. T is smallest at theta = 0 on each circle.
  double r_lo = law.min_positive_support() / 4.0;
  while (r_lo > 1e-12 && lifetime_T(law, cplx(r_lo, 0)) < ExtReal(t))
    r_lo /= 4.0;

  BoundaryTrace trace;
  double lr = std::log(r_lo), dlr = (std::log(R) - lr) / (n_radii - 1);
  std::map<double, ThetaT> pts;
  for (int i = 0; i < n_radii; ++i) {
    double key = lr + i * dlr;
    pts.emplace(key, theta_t(law, std::exp(key), t));
  }

  // Refine radii where the trace is under-resolved: between vertex-bearing
  // neighbours whose polygon edge is long relative to the radial spacing,
  // and across category changes (entering/leaving the domain or the
  // full-circle regime), where theta varies steeply.
  auto category = [](const ThetaT& v) {
    return v.pi_plus ? 2 : (v.theta > 0.0 ? 1 : 0);
  };
  std::size_t budget = 16u * (std::size_t)n_radii;
  std::vector<std::array<double, 3>> stack;  // {key_a, key_b, depth}
  for (auto it = pts.begin(); std::next(it) != pts.end(); ++it)
    stack.push_back({it->first, std::next(it)->first, 0.0});
  while (!stack.empty() && budget > 0) {
    auto [ka, kb, depth] = stack.back();
    stack.pop_back();
    if (depth >= 12 || kb - ka < 1e-14) continue;
    const ThetaT& A = pts.at(ka);
    const ThetaT& B = pts.at(kb);
    int ca = category(A), cb = category(B);
    bool refine;
    if (ca == 1 && cb == 1) {
      double gap = std::abs(std::polar(A.r, A.theta) - std::polar(B.r, B.theta));
      refine = gap > 2.0 * std::max(A.r, B.r) * dlr;
    } else {
      refine = ca != cb;
    }
    if (!refine) continue;
    double km = 0.5 * (ka + kb);
    pts.emplace(km, theta_t(law, std::exp(km), t));
    --budget;
    stack.push_back({ka, km, depth + 1});
    stack.push_back({km, kb, depth + 1});
  }

  // Components: maximal runs of radii whose circle meets the domain with a
  // proper angular boundary (theta in (0,pi], not pi-plus). Each run closes
  // into a polygon: upper arc outward, conjugate lower arc back.
  std::vector<ThetaT> sweep;
  sweep.reserve(pts.size());
  for (const auto& [key, v] : pts) sweep.push_back(v);
  int n_sweep = (int)sweep.size();
  int i = 0;
  while (i < n_sweep) {
    if (sweep[i].pi_plus || sweep[i].theta <= 0.0) {
      ++i;
      continue;
    }
    int j = i;
    while (j < n_sweep && !sweep[j].pi_plus && sweep[j].theta > 0.0) ++j;
    std::vector<BoundaryTrace::Vertex> comp;
    for (int k = i; k < j; ++k)
      comp.push_back({std::polar(sweep[k].r, sweep[k].theta), sweep[k].r,
                      sweep[k].theta});
    for (int k = j - 1; k >= i; --k)
      comp.push_back({std::polar(sweep[k].r, -sweep[k].theta), sweep[k].r,
                      sweep[k].theta});
    if (comp.size() >= 3) trace.components.push_back(std::move(comp));
    i = j;
  }

  double res = 0.0;
  for (const auto& comp : trace.components)
    for (std::size_t k = 0; k + 1 < comp.size(); ++k)
      res = std::max(res, std::abs(comp[k + 1].pos - comp[k].pos));
  trace.resolution = res;
  return trace;
}

double trace_distance(const BoundaryTrace& trace, cplx p) {
  double d = std::numeric_limits<double>::infinity();
  for (const auto& comp : trace.components) {
    std::size_t n = comp.size();
    for (std::size_t i = 0; i < n; ++i) {
      cplx a = comp[i].pos, b = comp[(i + 1) % n].pos;
      cplx ab = b - a;
      double len2 = std::norm(ab);
      double t = len2 > 0 ? std::clamp(((p - a) * std::conj(ab)).real() / len2,
                                       0.0, 1.0)
                          : 0.0;
      d = std::min(d, std::abs(p - (a + t * ab)));
    }
  }
  return d;
}

}  // namespace brownmap
