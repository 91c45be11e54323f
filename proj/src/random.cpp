#include "modent/random.hpp"

#include <cmath>

#include "modent/numkit.hpp"

namespace modent {

namespace {

std::uint64_t splitmix64(std::uint64_t& x) {
  x += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = x;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

Rng::Rng(std::uint64_t master_seed, std::uint64_t stream) {
  // Decorrelate substreams by folding the stream index into the master seed
  // before the scrambler; stream 0 is the plain single-seed construction.
  std::uint64_t x = master_seed;
  std::uint64_t a = splitmix64(x);
  x ^= (stream + 1) * 0xD1B54A32D192ED03ULL;
  std::uint64_t b = splitmix64(x);
  std::uint64_t c = splitmix64(x);
  std::seed_seq seq{std::uint32_t(a), std::uint32_t(a >> 32),
                    std::uint32_t(b), std::uint32_t(b >> 32),
                    std::uint32_t(c), std::uint32_t(c >> 32)};
  gen_.seed(seq);
}

double Rng::uniform() {
  return double(gen_() >> 11) * 0x1.0p-53;
}

double Rng::gauss() {
  if (have_spare_) {
    have_spare_ = false;
    return spare_;
  }
  double u1 = 0.0;
  while (u1 <= 0.0) u1 = uniform();
  double r = std::sqrt(-2.0 * std::log(u1));
  double t = 2.0 * M_PI * uniform();
  spare_ = r * std::sin(t);
  have_spare_ = true;
  return r * std::cos(t);
}

cplx Rng::cgauss() {
  double re = gauss();
  double im = gauss();
  return cplx(re, im) / std::sqrt(2.0);
}

int Rng::uniform_int(int lo, int hi) {
  // Small ranges only; modulo bias is irrelevant at these sizes but avoid it
  // anyway with rejection.
  std::uint64_t span = std::uint64_t(hi - lo) + 1;
  std::uint64_t limit = (~std::uint64_t(0) / span) * span;
  std::uint64_t v;
  do {
    v = gen_();
  } while (v >= limit);
  return lo + int(v % span);
}

CMat Rng::gaussian(int rows, int cols) {
  CMat g(rows, cols);
  for (int j = 0; j < cols; ++j)
    for (int i = 0; i < rows; ++i) g(i, j) = cgauss();
  return g;
}

CMat Rng::hermitian(int n) {
  CMat g = gaussian(n, n);
  return (g + g.adjoint()) / 2.0;
}

CMat Rng::psd(int n) {
  CMat g = gaussian(n, n);
  return g * g.adjoint();
}

CMat Rng::density(int n) {
  CMat p = psd(n);
  return p / p.trace().real();
}

CMat Rng::density_rank(int n, int r) {
  CMat g = gaussian(n, r);
  CMat p = g * g.adjoint();
  return p / p.trace().real();
}

CMat Rng::unitary(int n) {
  CMat g = gaussian(n, n);
  Eigen::HouseholderQR<CMat> qr(g);
  CMat q = qr.householderQ();
  CMat r = qr.matrixQR().triangularView<Eigen::Upper>();
  // Fix the diagonal phases so the distribution does not depend on the QR
  // sign conventions.
  for (int i = 0; i < n; ++i) {
    cplx d = r(i, i);
    cplx phase = std::abs(d) > 0 ? d / std::abs(d) : cplx(1, 0);
    q.col(i) *= phase;
  }
  return q;
}

CMat Rng::isometry(int rows, int cols) {
  if (cols > rows) throw data_error("Rng::isometry: cols exceeds rows");
  CMat g = gaussian(rows, cols);
  Eigen::HouseholderQR<CMat> qr(g);
  CMat q = qr.householderQ() * CMat::Identity(rows, cols);
  CMat r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < cols; ++i) {
    cplx d = r(i, i);
    cplx phase = std::abs(d) > 0 ? d / std::abs(d) : cplx(1, 0);
    q.col(i) *= phase;
  }
  return q;
}

CMat Rng::contraction(int n) {
  CMat g = gaussian(n, n);
  Eigen::JacobiSVD<CMat> svd(g, Eigen::ComputeFullU | Eigen::ComputeFullV);
  RVec s = svd.singularValues();
  for (int i = 0; i < n; ++i) s(i) = std::min(s(i), 1.0);
  return svd.matrixU() * s.cast<cplx>().asDiagonal() * svd.matrixV().adjoint();
}

CVec Rng::state_vector(int n) {
  CVec v(n);
  for (int i = 0; i < n; ++i) v(i) = cgauss();
  double nrm = v.norm();
  while (nrm == 0.0) {  // essentially impossible, but stay total
    for (int i = 0; i < n; ++i) v(i) = cgauss();
    nrm = v.norm();
  }
  return v / nrm;
}

RVec Rng::probability(int n) {
  RVec p(n);
  for (int i = 0; i < n; ++i) p(i) = -std::log(1.0 - uniform());
  return p / p.sum();
}

}  // namespace modent
