#include "doctest.h"

#include <cmath>

#include "modent/numkit.hpp"
#include "modent/random.hpp"

using namespace modent;

namespace {

CMat cdiag(std::initializer_list<double> xs) {
  RVec v(Eigen::Index(xs.size()));
  int i = 0;
  for (double x : xs) v(i++) = x;
  return v.cast<cplx>().asDiagonal();
}

}  // namespace

TEST_CASE("eig_hermitian orders eigenvalues ascending") {
  auto d = eig_hermitian(cdiag({2, 1}));
  CHECK(d.eigenvalues(0) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(d.eigenvalues(1) == doctest::Approx(2.0).epsilon(1e-14));

  CMat pauli_x(2, 2);
  pauli_x << 0, 1, 1, 0;
  auto dx = eig_hermitian(pauli_x);
  CHECK(dx.eigenvalues(0) == doctest::Approx(-1.0).epsilon(1e-14));
  CHECK(dx.eigenvalues(1) == doctest::Approx(1.0).epsilon(1e-14));
}

TEST_CASE("eig_hermitian reconstructs and rejects non-Hermitian input") {
  Rng rng(11);
  CMat a = rng.hermitian(5);
  auto d = eig_hermitian(a);
  CMat rec = d.eigenvectors * d.eigenvalues.cast<cplx>().asDiagonal() *
             d.eigenvectors.adjoint();
  double n = 5;
  CHECK((a - rec).norm() <= n * tol::eig * (1.0 + a.norm()));
  CHECK((d.eigenvectors.adjoint() * d.eigenvectors - CMat::Identity(5, 5)).norm() <=
        n * tol::eig);

  CMat bad = rng.gaussian(3, 3);
  bad(0, 1) += cplx(0.5, 0.5);
  CHECK_THROWS_AS(eig_hermitian(bad), data_error);
}

TEST_CASE("spectral_apply: exp of diag(0, log 2)") {
  CMat a = cdiag({0.0, std::log(2.0)});
  CMat e = herm_exp(a);
  CHECK((e - cdiag({1, 2})).norm() <= 1e-14);
}

TEST_CASE("functional calculus is a homomorphism on the spectrum") {
  Rng rng(12);
  CMat a = rng.hermitian(6);
  CMat lhs = spectral_apply(spectral_apply(a, [](double x) { return x * x; }),
                            [](double y) { return std::exp(y); });
  CMat rhs = spectral_apply(a, [](double x) { return std::exp(x * x); });
  CHECK((lhs - rhs).norm() <= 1e-10 * (1.0 + rhs.norm()));

  // exp(log(.)) is the identity on positive definite matrices
  CMat p = rng.psd(5) + 0.1 * CMat::Identity(5, 5);
  CMat back = herm_exp(herm_log_on_support(p));
  CHECK((back - p).norm() <= 1e-10 * (1.0 + p.norm()));
}

TEST_CASE("range_projection keeps eigenvalues above the relative cutoff") {
  CMat p = range_projection(cdiag({3, 1e-15, -2}));
  CHECK((p - cdiag({1, 0, 1})).norm() <= 1e-12);
}

TEST_CASE("pinv_psd on diag(2, 0) and Moore-Penrose identities") {
  CMat a = cdiag({2, 0});
  CHECK((pinv_psd(a) - cdiag({0.5, 0})).norm() <= 1e-14);

  Rng rng(13);
  CMat p = 4.0 * rng.density_rank(5, 3);
  CMat pp = pinv_psd(p);
  CHECK((p * pp * p - p).norm() <= 1e-10 * (1.0 + p.norm()));
  CHECK((pp * p * pp - pp).norm() <= 1e-10 * (1.0 + pp.norm()));
  CMat pr = p * pp;
  CHECK((pr - pr.adjoint()).norm() <= 1e-10);
  CHECK((pr - range_projection(p)).norm() <= 1e-8);
}

TEST_CASE("tensor_product block convention and spectra") {
  CMat i2 = CMat::Identity(2, 2), i3 = CMat::Identity(3, 3);
  CHECK((tensor_product(i2, i3) - CMat::Identity(6, 6)).norm() == 0.0);

  CMat t = tensor_product(cdiag({1, 2}), cdiag({3, 4}));
  auto d = eig_hermitian(t);
  RVec expect(4);
  expect << 3, 4, 6, 8;
  CHECK((d.eigenvalues - expect).norm() <= 1e-12);

  Rng rng(14);
  CMat a = rng.gaussian(3, 3), b = rng.gaussian(2, 2);
  CHECK(std::abs(tensor_product(a, b).trace() - a.trace() * b.trace()) <= 1e-12);
  // mixed product rule
  CMat c = rng.gaussian(3, 3), e = rng.gaussian(2, 2);
  CMat lhs = tensor_product(a, b) * tensor_product(c, e);
  CMat rhs = tensor_product(CMat(a * c), CMat(b * e));
  CHECK((lhs - rhs).norm() <= 1e-10 * (1.0 + rhs.norm()));
}

TEST_CASE("partial_trace inverts tensoring and is adjoint to the unital lift") {
  Rng rng(15);
  CMat a = rng.gaussian(3, 3), b = rng.gaussian(2, 2);
  CMat x = tensor_product(a, b);
  CHECK((partial_trace(x, 3, 2, 2) - b.trace() * a).norm() <= 1e-12);
  CHECK((partial_trace(x, 3, 2, 1) - a.trace() * b).norm() <= 1e-12);

  // tr(tr_2(X) A) = tr(X (A tensor I))
  CMat y = rng.gaussian(6, 6);
  CMat a1 = rng.gaussian(3, 3);
  cplx lhs = (partial_trace(y, 3, 2, 2) * a1).trace();
  cplx rhs = (y * tensor_product(a1, CMat::Identity(2, 2))).trace();
  CHECK(std::abs(lhs - rhs) <= 1e-12);
}

TEST_CASE("vec dictionary: multiplication operators and the adjoint flattening") {
  Rng rng(16);
  int n = 4;
  CMat a = rng.gaussian(n, n), b = rng.gaussian(n, n), x = rng.gaussian(n, n);
  CVec v = left_mult_op(a) * right_mult_op(b) * vec(x);
  CHECK((unvec(v, n, n) - a * x * b).norm() <= 1e-12 * (1 + (a * x * b).norm()));
  CHECK((left_mult_op(a) * right_mult_op(b) -
         right_mult_op(b) * left_mult_op(a)).norm() <= 1e-12);

  CHECK((unvec(vec(x), n, n) - x).norm() == 0.0);
  CHECK((adjoint_vec(vec(x), n) - vec(CMat(x.adjoint()))).norm() == 0.0);
  CHECK((adjoint_vec(adjoint_vec(vec(x), n), n) - vec(x)).norm() == 0.0);
}

TEST_CASE("largest_principal_angle separates equal and orthogonal spans") {
  Rng rng(17);
  CMat q = rng.isometry(6, 2);
  CMat u = rng.unitary(2);
  CHECK(largest_principal_angle(q, CMat(q * u)) <= 1e-8);

  CMat q2(6, 2);
  q2.setZero();
  q2(2, 0) = 1;
  q2(3, 1) = 1;
  CMat q1(6, 2);
  q1.setZero();
  q1(0, 0) = 1;
  q1(1, 1) = 1;
  CHECK(largest_principal_angle(q1, q2) == doctest::Approx(M_PI / 2).epsilon(1e-12));
}

TEST_CASE("rng: unitarity, isometry, contraction, determinism of substreams") {
  Rng rng(900, 7);
  CMat u = rng.unitary(5);
  CHECK((u.adjoint() * u - CMat::Identity(5, 5)).norm() <= 1e-12);
  CMat v = rng.isometry(6, 3);
  CHECK((v.adjoint() * v - CMat::Identity(3, 3)).norm() <= 1e-12);
  CMat k = rng.contraction(4);
  CHECK(op_norm(k) <= 1.0 + 1e-12);
  CMat rho = rng.density(5);
  CHECK(std::abs(rho.trace().real() - 1.0) <= 1e-12);
  CHECK(min_eig_hermitian(rho) >= -1e-14);

  Rng r1(900, 7), r2(900, 7), r3(900, 8);
  CMat m1 = r1.gaussian(3, 3), m2 = r2.gaussian(3, 3), m3 = r3.gaussian(3, 3);
  CHECK((m1 - m2).norm() == 0.0);
  CHECK((m1 - m3).norm() > 0.0);
}
