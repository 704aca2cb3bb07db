#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "brownmap/domain.hpp"
#include "brownmap/measure.hpp"

namespace brownmap {

/// Column-major dense complex matrix.
struct CMatrix {
  int n = 0;
  std::vector<cplx> a;

  explicit CMatrix(int n_) : n(n_), a((std::size_t)n_ * n_) {}
  cplx& at(int i, int j) { return a[(std::size_t)j * n + i]; }
  const cplx& at(int i, int j) const { return a[(std::size_t)j * n + i]; }
  static CMatrix identity(int n);
};

/// Deterministic RNG stream: splitmix64-mixed counter seeding, own
/// Box-Muller normals so output is identical across platforms.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream = 0);
  double uniform();  // (0,1)
  double normal();   // N(0,1)

 private:
  std::uint64_t next_raw();
  std::uint64_t state_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// (a, b, theta) of the rotated elliptic increment element for (s, tau).
struct EllipticParams {
  double a;
  double b;
  double theta;
};
EllipticParams rotated_elliptic_params(double s, cplx tau);

/// sqrt(dt) e^{i theta} (a X + i b Y) with X, Y independent GUE
/// (off-diagonal complex variance 1/N, diagonal real variance 1/N).
CMatrix sample_increment(double s, cplx tau, double dt, int N,
                         RngStream& rng);

enum class Scheme { Product, Euler };

struct SimConfig {
  int N = 1000;
  int steps = 1000;
  double s = 0.2;
  cplx tau = cplx(0.2, 0);
  Scheme scheme = Scheme::Product;
  std::uint64_t seed = 0;
  SampleMode x_mode = SampleMode::Quantile;
};

/// Approximate the Brownian motion at time 1: product scheme
/// prod_j (I + sqrt(s/steps) Z_j) with Ginibre Z_j (requires tau = s), or
/// Euler steps B <- B (I + i dW - (s - tau)/2 * dr).
CMatrix simulate_b(const SimConfig& config);

/// Eigenvalues of diag(x) * B (general non-Hermitian solve).
std::vector<cplx> spectrum(const std::vector<double>& x_diag,
                           const CMatrix& B);

struct SpectrumReport {
  std::vector<cplx> eigenvalues;
  double inside_fraction = 0.0;
  std::size_t zero_count = 0;
  double dilation = 0.0;

  std::string eigenvalues_csv() const;
  std::string to_json_text() const;
};

/// Fraction of eigenvalues inside the predicted domain, allowing the
/// dilation margin around the traced boundary and around the origin.
SpectrumReport containment(const std::vector<cplx>& eigenvalues,
                           const Law& law, double s, cplx tau,
                           double dilation,
                           const BoundaryTrace& trace);
SpectrumReport containment(const std::vector<cplx>& eigenvalues,
                           const Law& law, double s, cplx tau,
                           double dilation);

}  // namespace brownmap
