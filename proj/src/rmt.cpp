#include "brownmap/rmt.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include <cblas.h>
#define lapack_complex_float std::complex<float>
#define lapack_complex_double std::complex<double>
#include <lapacke.h>

#include <json.hpp>

#include "brownmap/map.hpp"

namespace brownmap {

CMatrix CMatrix::identity(int n) {
  CMatrix m(n);
  for (int i = 0; i < n; ++i) m.at(i, i) = 1.0;
  return m;
}

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream) {
  state_ = splitmix64(splitmix64(seed) ^ splitmix64(stream * 0xda942042e4dd58b5ULL + 1));
}

std::uint64_t RngStream::next_raw() {
  state_ += 0x9e3779b97f4a7c15ULL;
  std::uint64_t x = state_;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

double RngStream::uniform() {
  // 53-bit mantissa, shifted to avoid exact 0
  return ((next_raw() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1 = uniform(), u2 = uniform();
  double m = std::sqrt(-2.0 * std::log(u1));
  spare_ = m * std::sin(2.0 * M_PI * u2);
  has_spare_ = true;
  return m * std::cos(2.0 * M_PI * u2);
}

EllipticParams rotated_elliptic_params(double s, cplx tau) {
  if (s <= 0) throw std::domain_error("rotated_elliptic_params: s <= 0");
  double d = std::abs(tau - cplx(s, 0));
  if (d > s * (1.0 + 1e-12))
    throw std::domain_error("rotated_elliptic_params: |tau - s| > s");
  EllipticParams p;
  p.a = std::sqrt(0.5 * (s + d));
  p.b = std::sqrt(0.5 * std::max(s - d, 0.0));
  p.theta = (tau == cplx(s, 0)) ? 0.0 : 0.5 * std::arg(cplx(s, 0) - tau);
  return p;
}

namespace {

// GUE normalization: off-diagonal entries complex with variance 1/N,
// diagonal real with variance 1/N.
CMatrix gue(int N, RngStream& rng) {
  CMatrix X(N);
  double off = 1.0 / std::sqrt(2.0 * N);
  double diag = 1.0 / std::sqrt((double)N);
  for (int i = 0; i < N; ++i) {
    X.at(i, i) = diag * rng.normal();
    for (int j = i + 1; j < N; ++j) {
      cplx z(off * rng.normal(), off * rng.normal());
      X.at(i, j) = z;
      X.at(j, i) = std::conj(z);
    }
  }
  return X;
}

CMatrix ginibre(int N, RngStream& rng) {
  CMatrix Z(N);
  double sc = 1.0 / std::sqrt(2.0 * N);
  for (auto& z : Z.a) z = cplx(sc * rng.normal(), sc * rng.normal());
  return Z;
}

void zgemm_into(const CMatrix& A, const CMatrix& B, CMatrix& C) {
  cplx one(1, 0), zero(0, 0);
  cblas_zgemm(CblasColMajor, CblasNoTrans, CblasNoTrans, A.n, A.n, A.n, &one,
              A.a.data(), A.n, B.a.data(), B.n, &zero, C.a.data(), C.n);
}

}  // namespace

CMatrix sample_increment(double s, cplx tau, double dt, int N,
                         RngStream& rng) {
  if (dt <= 0) throw std::invalid_argument("sample_increment: dt <= 0");
  EllipticParams p = rotated_elliptic_params(s, tau);
  CMatrix X = gue(N, rng);
  CMatrix Y = gue(N, rng);
  cplx rot = std::sqrt(dt) * std::polar(1.0, p.theta);
  CMatrix W(N);
  for (std::size_t i = 0; i < W.a.size(); ++i)
    W.a[i] = rot * (p.a * X.a[i] + cplx(0, p.b) * Y.a[i]);
  return W;
}

CMatrix simulate_b(const SimConfig& config) {
  if (config.N < 2) throw std::invalid_argument("simulate_b: N < 2");
  if (config.steps < 1) throw std::invalid_argument("simulate_b: steps < 1");
  const int N = config.N;
  const int k = config.steps;
  CMatrix B = CMatrix::identity(N);
  CMatrix tmp(N);

  if (config.scheme == Scheme::Product) {
    if (config.tau != cplx(config.s, 0))
      throw std::invalid_argument("simulate_b: product scheme needs tau = s");
    double c = std::sqrt(config.s / k);
    for (int j = 0; j < k; ++j) {
      RngStream rng(config.seed, (std::uint64_t)j);
      CMatrix M = ginibre(N, rng);
      for (auto& z : M.a) z *= c;
      for (int i = 0; i < N; ++i) M.at(i, i) += 1.0;
      zgemm_into(B, M, tmp);
      std::swap(B.a, tmp.a);
    }
  } else {
    double dr = 1.0 / k;
    cplx drift = 1.0 - 0.5 * (cplx(config.s, 0) - config.tau) * dr;
    for (int j = 0; j < k; ++j) {
      RngStream rng(config.seed, (std::uint64_t)j);
      CMatrix M = sample_increment(config.s, config.tau, dr, N, rng);
      for (auto& z : M.a) z *= cplx(0, 1);
      for (int i = 0; i < N; ++i) M.at(i, i) += drift;
      zgemm_into(B, M, tmp);
      std::swap(B.a, tmp.a);
    }
  }
  return B;
}

std::vector<cplx> spectrum(const std::vector<double>& x_diag,
                           const CMatrix& B) {
  const int N = B.n;
  if ((int)x_diag.size() != N)
    throw std::invalid_argument("spectrum: dimension mismatch");
  CMatrix A = B;
  for (int j = 0; j < N; ++j)
    for (int i = 0; i < N; ++i) A.at(i, j) *= x_diag[i];
  std::vector<cplx> w(N);
  int info = LAPACKE_zgeev(
      LAPACK_COL_MAJOR, 'N', 'N', N,
      reinterpret_cast<lapack_complex_double*>(A.a.data()), N,
      reinterpret_cast<lapack_complex_double*>(w.data()), nullptr, 1, nullptr,
      1);
  if (info != 0)
    throw std::runtime_error("spectrum: eigensolver failed, info = " +
                             std::to_string(info));
  return w;
}

std::string SpectrumReport::eigenvalues_csv() const {
  std::ostringstream os;
  os.precision(17);
  os << "re,im\n";
  for (cplx w : eigenvalues) os << w.real() << ',' << w.imag() << '\n';
  return os.str();
}

std::string SpectrumReport::to_json_text() const {
  nlohmann::json j;
  j["inside_fraction"] = inside_fraction;
  j["zero_count"] = zero_count;
  j["dilation"] = dilation;
  j["n_eigenvalues"] = eigenvalues.size();
  return j.dump(2);
}

SpectrumReport containment(const std::vector<cplx>& eigenvalues,
                           const Law& law, double s, cplx tau,
                           double dilation, const BoundaryTrace& trace) {
  if (dilation < 0) throw std::invalid_argument("containment: dilation < 0");
  SpectrumReport rep;
  rep.eigenvalues = eigenvalues;
  rep.dilation = dilation;
  std::size_t inside = 0;
  for (cplx w : eigenvalues) {
    if (std::abs(w) <= 1e-10) ++rep.zero_count;
    if (std::abs(w) <= dilation || trace_distance(trace, w) <= dilation ||
        in_D(law, s, tau, w, trace))
      ++inside;
  }
  rep.inside_fraction =
      eigenvalues.empty() ? 1.0 : (double)inside / eigenvalues.size();
  return rep;
}

SpectrumReport containment(const std::vector<cplx>& eigenvalues,
                           const Law& law, double s, cplx tau,
                           double dilation) {
  return containment(eigenvalues, law, s, tau, dilation,
                     boundary_D(law, s, tau));
}

}  // namespace brownmap
