#include "brownmap/measure.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "brownmap/quadrature.hpp"

namespace brownmap {

namespace {
constexpr double kMassTol = 1e-12;
constexpr double kLoaderMassTol = 1e-9;
constexpr double kQuadAbsTol = 1e-10;
constexpr double kQuadRelTol = 1e-10;
}  // namespace

double DensityPiece::eval(double xi) const {
  double v = 0.0;
  for (std::size_t i = coeffs.size(); i-- > 0;) v = v * xi + coeffs[i];
  return v;
}

double DensityPiece::eval_derivative(double xi) const {
  double v = 0.0;
  for (std::size_t i = coeffs.size(); i-- > 1;) v = v * xi + coeffs[i] * (double)i;
  return v;
}

double DensityPiece::mass() const { return mass_up_to(b); }

double DensityPiece::mass_up_to(double x) const {
  double hi = std::min(x, b);
  if (hi <= a) return 0.0;
  double lo_v = 0.0, hi_v = 0.0;
  for (std::size_t i = coeffs.size(); i-- > 0;) {
    lo_v = lo_v * a + coeffs[i] / (double)(i + 1);
    hi_v = hi_v * hi + coeffs[i] / (double)(i + 1);
  }
  return hi_v * hi - lo_v * a;
}

Law::Law(std::vector<Atom> atoms, std::vector<DensityPiece> pieces)
    : atoms_(std::move(atoms)), pieces_(std::move(pieces)) {
  std::sort(atoms_.begin(), atoms_.end(),
            [](const Atom& u, const Atom& v) { return u.x < v.x; });
  std::sort(pieces_.begin(), pieces_.end(),
            [](const DensityPiece& u, const DensityPiece& v) { return u.a < v.a; });
  validate();
}

void Law::validate() const {
  double mass = 0.0;
  for (const auto& at : atoms_) {
    if (at.x < 0) throw std::invalid_argument("Law: atom location < 0");
    if (at.w <= 0) throw std::invalid_argument("Law: atom weight <= 0");
    mass += at.w;
  }
  for (const auto& p : pieces_) {
    if (p.a < 0 || p.b <= p.a)
      throw std::invalid_argument("Law: bad density interval");
    // nonnegativity probe on a Chebyshev-like grid plus endpoints
    for (int i = 0; i <= 64; ++i) {
      double xi = p.a + (p.b - p.a) * i / 64.0;
      if (p.eval(xi) < -1e-12)
        throw std::invalid_argument("Law: density negative on its interval");
    }
    mass += p.mass();
  }
  for (std::size_t i = 0; i + 1 < pieces_.size(); ++i)
    if (pieces_[i + 1].a < pieces_[i].b - 1e-15)
      throw std::invalid_argument("Law: overlapping density intervals");
  for (const auto& at : atoms_)
    for (const auto& p : pieces_)
      if (at.x > p.a + 1e-15 && at.x < p.b - 1e-15)
        throw std::invalid_argument("Law: atom inside a density interval");
  if (std::abs(mass - 1.0) > kMassTol)
    throw std::invalid_argument("Law: total mass != 1");
  if (atoms_.size() == 1 && pieces_.empty() && atoms_[0].x == 0.0)
    throw std::invalid_argument("Law: delta_0 is excluded");
}

Law Law::from_json_text(const std::string& text) {
  nlohmann::json j = nlohmann::json::parse(text);
  std::vector<Atom> atoms;
  std::vector<DensityPiece> pieces;
  for (const auto& a : j.value("atoms", nlohmann::json::array()))
    atoms.push_back({a.at("x").get<double>(), a.at("w").get<double>()});
  for (const auto& d : j.value("densities", nlohmann::json::array())) {
    DensityPiece p;
    p.a = d.at("a").get<double>();
    p.b = d.at("b").get<double>();
    p.coeffs = d.at("coeffs").get<std::vector<double>>();
    pieces.push_back(std::move(p));
  }
  double mass = 0.0;
  for (const auto& a : atoms) mass += a.w;
  for (const auto& p : pieces) mass += p.mass();
  if (std::abs(mass - 1.0) > kLoaderMassTol)
    throw std::invalid_argument("Law JSON: total mass differs from 1 by more than 1e-9");
  if (std::abs(mass - 1.0) > 0) {
    for (auto& a : atoms) a.w /= mass;
    for (auto& p : pieces)
      for (auto& c : p.coeffs) c /= mass;
  }
  return Law(std::move(atoms), std::move(pieces));
}

Law Law::from_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("Law: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

std::string Law::to_json_text() const {
  nlohmann::json j;
  j["atoms"] = nlohmann::json::array();
  for (const auto& a : atoms_) j["atoms"].push_back({{"x", a.x}, {"w", a.w}});
  j["densities"] = nlohmann::json::array();
  for (const auto& p : pieces_)
    j["densities"].push_back({{"a", p.a}, {"b", p.b}, {"coeffs", p.coeffs}});
  return j.dump(2);
}

double Law::atom_mass_at(double x) const {
  double w = 0.0;
  for (const auto& a : atoms_)
    if (a.x == x) w += a.w;
  return w;
}

bool Law::zero_in_support() const {
  if (atom_mass_at(0.0) > 0) return true;
  for (const auto& p : pieces_)
    if (p.a == 0.0) return true;
  return false;
}

bool Law::zero_isolated_atom() const {
  if (atom_mass_at(0.0) <= 0) return false;
  return min_positive_support() > 0;
}

double Law::min_positive_support() const {
  double m = std::numeric_limits<double>::infinity();
  for (const auto& a : atoms_)
    if (a.x > 0) m = std::min(m, a.x);
  for (const auto& p : pieces_) m = std::min(m, p.a > 0 ? p.a : p.b);
  return m;
}

double Law::max_support() const {
  double m = 0.0;
  for (const auto& a : atoms_) m = std::max(m, a.x);
  for (const auto& p : pieces_) m = std::max(m, p.b);
  return m;
}

double Law::support_distance(cplx lambda) const {
  double d = std::numeric_limits<double>::infinity();
  for (const auto& a : atoms_) d = std::min(d, std::abs(lambda - cplx(a.x, 0)));
  for (const auto& p : pieces_) {
    double dx = std::max({p.a - lambda.real(), lambda.real() - p.b, 0.0});
    d = std::min(d, std::hypot(dx, lambda.imag()));
  }
  return d;
}

double Law::quantile(double q) const {
  if (q < 0 || q > 1) throw std::invalid_argument("quantile: q outside [0,1]");
  // Walk support items in location order, accumulating mass.
  struct Item {
    double lo;   // location (atom) or interval start
    bool atom;
    std::size_t idx;
  };
  std::vector<Item> items;
  for (std::size_t i = 0; i < atoms_.size(); ++i)
    items.push_back({atoms_[i].x, true, i});
  for (std::size_t i = 0; i < pieces_.size(); ++i)
    items.push_back({pieces_[i].a, false, i});
  std::sort(items.begin(), items.end(),
            [](const Item& u, const Item& v) { return u.lo < v.lo; });
  double acc = 0.0;
  for (const auto& it : items) {
    double m = it.atom ? atoms_[it.idx].w : pieces_[it.idx].mass();
    if (q <= acc + m || &it == &items.back()) {
      if (it.atom) return atoms_[it.idx].x;
      const auto& p = pieces_[it.idx];
      double target = std::clamp(q - acc, 0.0, m);
      double lo = p.a, hi = p.b;
      for (int iter = 0; iter < 80; ++iter) {
        double mid = 0.5 * (lo + hi);
        (p.mass_up_to(mid) < target ? lo : hi) = mid;
      }
      return 0.5 * (lo + hi);
    }
    acc += m;
  }
  return max_support();
}

std::vector<double> Law::sample(std::size_t n, SampleMode mode,
                                std::uint64_t seed) const {
  if (n < 1) throw std::invalid_argument("sample: n < 1");
  std::vector<double> out(n);
  if (mode == SampleMode::Quantile) {
    for (std::size_t j = 0; j < n; ++j)
      out[j] = quantile(((double)j + 0.5) / (double)n);
  } else {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (std::size_t j = 0; j < n; ++j) out[j] = quantile(u(rng));
  }
  return out;
}

namespace {

// True when int p(xi)/(xi-r)^2 dxi diverges at r inside [a,b]: the density
// must vanish to second order at r for the integral to stay finite.
bool divergent_at(const DensityPiece& p, double r) {
  if (r < p.a || r > p.b) return false;
  double scale = 0.0;
  for (double c : p.coeffs) scale = std::max(scale, std::abs(c));
  double tol = 1e-13 * std::max(1.0, scale);
  return std::abs(p.eval(r)) > tol || std::abs(p.eval_derivative(r)) > tol;
}

void check_eps_range(const Law& law, cplx lambda0, double eps0) {
  if (eps0 >= 0) return;
  double d = law.support_distance(lambda0);
  if (eps0 <= -d * d)
    throw std::domain_error("moment integral: eps0 <= -dist(lambda0, supp)^2");
}

}  // namespace

ExtReal moment_pk(const Law& law, cplx lambda0, double eps0, int k) {
  if (k != 0 && k != 2) throw std::invalid_argument("moment_pk: k must be 0 or 2");
  check_eps_range(law, lambda0, eps0);
  const double x0 = lambda0.real();
  const double y2 = lambda0.imag() * lambda0.imag();

  if (eps0 == 0.0 && y2 == 0.0) {
    for (const auto& a : law.atoms())
      if (a.x == x0) return ExtReal::pos_inf();
    for (const auto& p : law.pieces())
      if (divergent_at(p, x0)) return ExtReal::pos_inf();
  }

  auto kernel = [&](double xi) {
    double den = (xi - x0) * (xi - x0) + y2 + eps0;
    double num = (k == 0) ? 1.0 : xi * xi;
    return num / den;
  };
  double total = 0.0;
  for (const auto& a : law.atoms()) {
    double den = (a.x - x0) * (a.x - x0) + y2 + eps0;
    if (den == 0.0) return ExtReal::pos_inf();
    total += a.w * ((k == 0) ? 1.0 : a.x * a.x) / den;
  }
  for (const auto& p : law.pieces())
    total += quad::adaptive_split<double>(
        [&](double xi) { return p.eval(xi) * kernel(xi); }, p.a, p.b, {x0},
        kQuadAbsTol, kQuadRelTol);
  return ExtReal(total);
}

InitialMomenta initial_momenta(const Law& law, cplx lambda0, double eps0) {
  if (lambda0 == cplx(0, 0))
    throw std::domain_error("initial_momenta: lambda0 = 0");
  check_eps_range(law, lambda0, eps0);
  const double r0 = std::abs(lambda0);
  const double th = std::arg(lambda0);
  const double x0 = lambda0.real();
  const double y2 = lambda0.imag() * lambda0.imag();
  const double cs = std::cos(th), sn = std::sin(th);

  auto denom = [&](double xi) { return (xi - x0) * (xi - x0) + y2 + eps0; };

  double prho = 0, ptheta = 0, peps = 0;
  for (const auto& a : law.atoms()) {
    double den = denom(a.x);
    if (den == 0.0) throw std::domain_error("initial_momenta: divergent integral");
    prho += a.w * (2 * r0 * r0 - 2 * a.x * r0 * cs) / den;
    ptheta += a.w * 2 * r0 * a.x * sn / den;
    peps += a.w / den;
  }
  if (eps0 == 0.0 && y2 == 0.0)
    for (const auto& p : law.pieces())
      if (divergent_at(p, x0))
        throw std::domain_error("initial_momenta: divergent integral");
  for (const auto& p : law.pieces()) {
    prho += quad::adaptive_split<double>(
        [&](double xi) {
          return p.eval(xi) * (2 * r0 * r0 - 2 * xi * r0 * cs) / denom(xi);
        },
        p.a, p.b, {x0}, kQuadAbsTol, kQuadRelTol);
    ptheta += quad::adaptive_split<double>(
        [&](double xi) { return p.eval(xi) * 2 * r0 * xi * sn / denom(xi); },
        p.a, p.b, {x0}, kQuadAbsTol, kQuadRelTol);
    peps += quad::adaptive_split<double>(
        [&](double xi) { return p.eval(xi) / denom(xi); }, p.a, p.b, {x0},
        kQuadAbsTol, kQuadRelTol);
  }
  return {prho, ptheta, peps};
}

cplx herglotz_integral(const Law& law, cplx lambda) {
  if (lambda == cplx(0, 0) && law.mass_at_zero() > 0) {
    if (!law.zero_isolated_atom())
      throw std::domain_error("herglotz_integral: 0 not isolated in supp");
    // (xi + 0)/(xi - 0) = 1 away from 0; the atom at 0 contributes -mu({0}).
    return cplx(1.0 - 2.0 * law.mass_at_zero(), 0.0);
  }
  if (law.support_distance(lambda) == 0.0) {
    double aw = 0;
    for (const auto& a : law.atoms())
      if (cplx(a.x, 0) == lambda) aw = a.w;
    (void)aw;
    throw std::domain_error("herglotz_integral: lambda on supp");
  }
  cplx total = 0;
  for (const auto& a : law.atoms())
    total += a.w * (cplx(a.x, 0) + lambda) / (cplx(a.x, 0) - lambda);
  for (const auto& p : law.pieces())
    total += quad::adaptive_split<cplx>(
        [&](double xi) {
          return p.eval(xi) * (xi + lambda) / (xi - lambda);
        },
        p.a, p.b, {lambda.real()}, kQuadAbsTol, kQuadRelTol);
  return total;
}

cplx cauchy_kernel(const Law& law, cplx lambda) {
  if (law.support_distance(lambda) == 0.0)
    throw std::domain_error("cauchy_kernel: lambda on supp");
  cplx total = 0;
  for (const auto& a : law.atoms()) total += a.w / (lambda - cplx(a.x, 0));
  for (const auto& p : law.pieces())
    total += quad::adaptive_split<cplx>(
        [&](double xi) { return p.eval(xi) / (lambda - xi); }, p.a, p.b,
        {lambda.real()}, kQuadAbsTol, kQuadRelTol);
  return total;
}

ExtReal log_potential(const Law& law, cplx lambda, double eps) {
  if (eps < 0) throw std::invalid_argument("log_potential: eps < 0");
  const double x0 = lambda.real();
  const double y2 = lambda.imag() * lambda.imag();
  double total = 0;
  for (const auto& a : law.atoms()) {
    double arg = (a.x - x0) * (a.x - x0) + y2 + eps;
    if (arg == 0.0) return ExtReal::neg_inf();
    total += a.w * std::log(arg);
  }
  for (const auto& p : law.pieces())
    total += quad::adaptive_split<double>(
        [&](double xi) {
          double arg = (xi - x0) * (xi - x0) + y2 + eps;
          return p.eval(xi) * std::log(arg);
        },
        p.a, p.b, {x0}, kQuadAbsTol, kQuadRelTol);
  return ExtReal(total);
}

cplx integrate_kernel(const Law& law, const std::function<cplx(double)>& f,
                      const std::vector<double>& splits) {
  cplx total = 0;
  for (const auto& a : law.atoms()) total += a.w * f(a.x);
  for (const auto& p : law.pieces())
    total += quad::adaptive_split<cplx>(
        [&](double xi) { return p.eval(xi) * f(xi); }, p.a, p.b, splits,
        kQuadAbsTol, kQuadRelTol);
  return total;
}

}  // namespace brownmap
