#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <vector>

namespace brownmap {

/// Adaptive Gauss-Kronrod (G7,K15) quadrature by interval bisection.
/// Integrands may be real or complex valued; the error estimate is
/// |K15 - G7| per panel. Caller-supplied split points partition the
/// interval before adaptation so near-singular points sit on panel
/// boundaries (Kronrod nodes are interior, so the integrand is never
/// evaluated exactly at a split).
namespace quad {

// 15-point Kronrod nodes/weights on [-1,1] and the embedded 7-point Gauss
// weights (nodes 1,3,...,13 of the Kronrod rule).
inline constexpr double kNodes[15] = {
    -0.991455371120812639206854697526329,
    -0.949107912342758524526189684047851,
    -0.864864423359769072789712788640926,
    -0.741531185599394439863864773280788,
    -0.586087235467691130294144838258730,
    -0.405845151377397166906606412076961,
    -0.207784955007898467600689403773245,
    0.0,
    0.207784955007898467600689403773245,
    0.405845151377397166906606412076961,
    0.586087235467691130294144838258730,
    0.741531185599394439863864773280788,
    0.864864423359769072789712788640926,
    0.949107912342758524526189684047851,
    0.991455371120812639206854697526329};

inline constexpr double kWeights[15] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
    0.204432940075298892414161999234649,
    0.190350578064785409913256402421014,
    0.169004726639267902826583426598550,
    0.140653259715525918745189590510238,
    0.104790010322250183839876322541518,
    0.063092092629978553290700663189204,
    0.022935322010529224963732008058970};

inline constexpr double gWeights[7] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
    0.381830050505118944950369775488975,
    0.279705391489276667901467771423780,
    0.129484966168869693270611432679082};

inline double norm_of(double v) { return std::abs(v); }
inline double norm_of(const std::complex<double>& v) { return std::abs(v); }

template <typename T, typename F>
void gk15(const F& f, double a, double b, T& integral, double& err) {
  const double h = 0.5 * (b - a);
  const double c = 0.5 * (a + b);
  T k{};
  T g{};
  for (int i = 0; i < 15; ++i) {
    T fv = f(c + h * kNodes[i]);
    k += kWeights[i] * fv;
    if (i % 2 == 1) g += gWeights[i / 2] * fv;
  }
  integral = h * k;
  err = norm_of(h * (k - g));
}

struct Panel {
  double a, b, err;
};

/// Integrate f over [a,b] with absolute/relative tolerances; worst-panel
/// refinement, capped at max_panels subdivisions.
template <typename T, typename F>
T adaptive(const F& f, double a, double b, double abs_tol = 1e-12,
           double rel_tol = 1e-12, int max_panels = 2000) {
  if (a >= b) return T{};
  std::vector<Panel> panels;
  std::vector<T> vals;
  T total;
  double err0;
  gk15(f, a, b, total, err0);
  panels.push_back({a, b, err0});
  vals.push_back(total);

  auto total_err = [&] {
    double e = 0;
    for (const auto& p : panels) e += p.err;
    return e;
  };
  auto total_val = [&] {
    T v{};
    for (const auto& x : vals) v += x;
    return v;
  };

  while ((int)panels.size() < max_panels) {
    double te = total_err();
    if (te <= abs_tol || te <= rel_tol * norm_of(total_val())) break;
    std::size_t worst = 0;
    for (std::size_t i = 1; i < panels.size(); ++i)
      if (panels[i].err > panels[worst].err) worst = i;
    Panel p = panels[worst];
    if (p.b - p.a < 1e-300) break;  // cannot refine further
    double m = 0.5 * (p.a + p.b);
    T v1, v2;
    double e1, e2;
    gk15(f, p.a, m, v1, e1);
    gk15(f, m, p.b, v2, e2);
    panels[worst] = {p.a, m, e1};
    vals[worst] = v1;
    panels.push_back({m, p.b, e2});
    vals.push_back(v2);
  }
  return total_val();
}

/// Integrate over [a,b] split at the given interior points (outside
/// points are ignored; near-duplicate splits are merged).
template <typename T, typename F>
T adaptive_split(const F& f, double a, double b,
                 const std::vector<double>& splits, double abs_tol = 1e-12,
                 double rel_tol = 1e-12, int max_panels = 2000) {
  std::vector<double> pts{a, b};
  for (double s : splits)
    if (s > a && s < b) pts.push_back(s);
  std::sort(pts.begin(), pts.end());
  T total{};
  for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
    if (pts[i + 1] - pts[i] < 1e-15 * (1.0 + std::abs(pts[i]))) continue;
    total += adaptive<T>(f, pts[i], pts[i + 1], abs_tol, rel_tol, max_panels);
  }
  return total;
}

}  // namespace quad
}  // namespace brownmap
