#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "brownmap/extreal.hpp"

namespace brownmap {

using cplx = std::complex<double>;

/// Point mass: weight w at location x >= 0.
struct Atom {
  double x = 0.0;
  double w = 0.0;
};

/// Polynomial density c0 + c1*xi + ... on [a,b]; must be >= 0 there.
struct DensityPiece {
  double a = 0.0;
  double b = 0.0;
  std::vector<double> coeffs;

  double eval(double xi) const;
  double eval_derivative(double xi) const;
  double mass() const;               // integral of the polynomial over [a,b]
  double mass_up_to(double x) const; // integral over [a, min(x,b)]
};

enum class SampleMode { Iid, Quantile };

/// A probability law on [0, inf): atoms plus piecewise-polynomial density.
/// Total mass must be 1 within 1e-12 after construction; the JSON loader
/// renormalizes when the raw mass is within 1e-9 of 1 and rejects otherwise.
/// The law may not be a point mass at 0.
class Law {
 public:
  Law(std::vector<Atom> atoms, std::vector<DensityPiece> pieces);

  static Law delta(double x) { return Law({{x, 1.0}}, {}); }
  static Law from_json_text(const std::string& text);
  static Law from_json_file(const std::string& path);
  std::string to_json_text() const;

  const std::vector<Atom>& atoms() const { return atoms_; }
  const std::vector<DensityPiece>& pieces() const { return pieces_; }

  double atom_mass_at(double x) const;
  double mass_at_zero() const { return atom_mass_at(0.0); }
  bool zero_in_support() const;
  /// True when 0 is an atom of the law with (0,c) outside the support.
  bool zero_isolated_atom() const;
  double min_positive_support() const;
  double max_support() const;

  /// Euclidean distance from lambda to the closed support.
  double support_distance(cplx lambda) const;
  bool on_support(cplx lambda, double tol = 0.0) const {
    return support_distance(lambda) <= tol;
  }

  /// n draws from the law: iid (seeded) or deterministic quantiles
  /// F^{-1}((j - 1/2)/n).
  std::vector<double> sample(std::size_t n, SampleMode mode,
                             std::uint64_t seed = 0) const;

  /// Inverse CDF; q in [0,1].
  double quantile(double q) const;

 private:
  void validate() const;
  std::vector<Atom> atoms_;
  std::vector<DensityPiece> pieces_;
};

/// p_k(lambda0, eps0) = int xi^k / (|xi - lambda0|^2 + eps0) dmu, k in {0,2}.
/// Returns +inf when eps0 = 0 and the integral diverges (lambda0 on an atom
/// or on a density interval where the density does not vanish to second
/// order). Requires eps0 > -support_distance(lambda0)^2 or eps0 >= 0.
ExtReal moment_pk(const Law& law, cplx lambda0, double eps0, int k);

/// Initial momenta (p_rho0, p_theta0, p_eps0) for the characteristic system,
/// with lambda0 = r0 e^{i theta}. Requires lambda0 != 0 and finite moments.
struct InitialMomenta {
  double p_rho0;
  double p_theta0;
  double p_eps0;
};
InitialMomenta initial_momenta(const Law& law, cplx lambda0, double eps0);

/// int (xi + lambda)/(xi - lambda) dmu. Defined off the support, and at
/// lambda = 0 when 0 is not in the support or is an isolated atom (value
/// 1 - 2 mu({0})).
cplx herglotz_integral(const Law& law, cplx lambda);

/// int 1/(lambda - xi) dmu, lambda off the support.
cplx cauchy_kernel(const Law& law, cplx lambda);

/// S(0, lambda, eps) = int log(|xi - lambda|^2 + eps) dmu; may be -inf at
/// eps = 0.
ExtReal log_potential(const Law& law, cplx lambda, double eps);

/// Generic complex-kernel integral int f(xi) dmu(xi); f must be bounded on
/// the support. Used by the map module for derivative kernels.
cplx integrate_kernel(const Law& law, const std::function<cplx(double)>& f,
                      const std::vector<double>& splits = {});

}  // namespace brownmap
