#pragma once

#include <string>
#include <vector>

#include "brownmap/measure.hpp"

namespace brownmap {

/// Lifetime of the characteristic starting at lambda0: the time at which
/// lambda0 enters the growing domain. T(conj lambda) = T(lambda) exactly;
/// T = +inf at infinity, 0 where the defining moment integral diverges.
ExtReal lifetime_T(const Law& law, cplx lambda0);

/// T(0) = +inf; requires 0 off the support.
ExtReal lifetime_at_origin(const Law& law);

/// Radial limit of T at the origin: +inf when 0 is off the support,
/// log(R)/(p2 (R-1)) with R = w0/(1-w0), p2 = 1-w0 when 0 is an isolated
/// atom of weight w0; throws when 0 is a non-isolated support point.
ExtReal lifetime_limit_at_zero(const Law& law);

/// Angular extent of the domain at radius r and time t: the smallest
/// theta in (0, pi] with T(r e^{i theta}) >= t, 0 when already T(r) >= t,
/// or the pi-plus marker (whole circle inside) when T(-r) < t.
struct ThetaT {
  double r = 0.0;
  double t = 0.0;
  double theta = 0.0;
  bool pi_plus = false;
};
ThetaT theta_t(const Law& law, double r, double t, double tol = 1e-10);

/// lambda != 0 and T(lambda) < t.
bool in_sigma(const Law& law, cplx lambda, double t);

/// Polyline approximation of a domain boundary. Each component is a closed
/// polygon; vertices carry the radius/angle they were traced at.
struct BoundaryTrace {
  struct Vertex {
    cplx pos;
    double r = 0.0;
    double theta = 0.0;
  };
  std::vector<std::vector<Vertex>> components;
  double resolution = 0.0;

  std::string to_csv() const;
  std::string to_json_text() const;
};

/// Trace the boundary of the time-t domain on a log-spaced radius sweep.
BoundaryTrace boundary_sigma(const Law& law, double t, int n_radii = 512);

/// Distance from a point to the traced polylines (closed polygons).
double trace_distance(const BoundaryTrace& trace, cplx p);

}  // namespace brownmap
