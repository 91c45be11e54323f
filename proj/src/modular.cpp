#include "modent/modular.hpp"

#include <cmath>
#include <complex>

namespace modent {

DensityMatrix::DensityMatrix(const CMat& m) {
  require_hermitian(m, "DensityMatrix");
  double scale = std::max(1.0, max_entry_norm(m));
  CMat sym = symmetrize(m);
  eig_ = eig_hermitian(sym);
  if (eig_.eigenvalues(0) < -tol::herm * scale)
    throw data_error("DensityMatrix: negative eigenvalue " +
                     std::to_string(eig_.eigenvalues(0)));
  double tr = sym.trace().real();
  if (std::abs(tr - 1.0) > 1e-10 * scale)
    throw data_error("DensityMatrix: trace " + std::to_string(tr) +
                     " is not 1");
  m_ = sym;
}

bool DensityMatrix::faithful() const {
  return eig_.eigenvalues(0) > tol::rank * eig_.max_abs_eigenvalue();
}

CMat gns_vector(const DensityMatrix& rho) { return herm_sqrt_psd(rho.eig()); }

CVec apply_adjoint_conjugation(const CVec& v, int n) {
  return adjoint_vec(v, n);
}

ModularData modular_data(const DensityMatrix& rho) {
  if (!rho.faithful())
    throw data_error("modular_data: state is not faithful");
  ModularData d;
  d.n = rho.dim();
  d.rho = rho.matrix();
  d.omega = gns_vector(rho);
  CMat rho_inv = pinv_psd(rho.eig());
  d.delta = left_mult_op(d.rho) * right_mult_op(rho_inv);
  CMat log_rho = herm_log_on_support(rho.eig());
  d.log_delta = left_mult_op(log_rho) - right_mult_op(log_rho);
  d.delta_eig = eig_hermitian(d.delta);
  return d;
}

RelativeModularData relative_modular(const CMat& rho_left, const CMat& rho_right) {
  require_hermitian(rho_left, "relative_modular");
  require_hermitian(rho_right, "relative_modular");
  if (rho_left.rows() != rho_right.rows())
    throw data_error("relative_modular: dimension mismatch");
  auto el = eig_hermitian(rho_left);
  auto er = eig_hermitian(rho_right);
  double scale_l = std::max(1.0, el.max_abs_eigenvalue());
  double scale_r = std::max(1.0, er.max_abs_eigenvalue());
  if (el.eigenvalues(0) < -tol::herm * scale_l ||
      er.eigenvalues(0) < -tol::herm * scale_r)
    throw data_error("relative_modular: inputs must be positive semidefinite");

  RelativeModularData d;
  d.n = int(rho_left.rows());
  d.delta = left_mult_op(symmetrize(rho_left)) * right_mult_op(pinv_psd(er));
  d.support = tensor_product(CMat(range_projection(er).transpose()),
                             range_projection(el));
  d.delta_eig = eig_hermitian(d.delta);
  return d;
}

RelativeModularData vector_relative_modular(const CMat& phi, const CMat& psi) {
  return relative_modular(CMat(phi * phi.adjoint()), CMat(psi.adjoint() * psi));
}

namespace {

// Composition of two antilinear maps with coefficient matrices C, D,
// (x -> C conj(x)) after (x -> D conj(x)), is the linear map C conj(D).
CMat antilinear_twice(const CMat& c, const CMat& d) { return c * d.conjugate(); }

}  // namespace

TomitaReport verify_tomita(const StarAlgebra& m, const DensityMatrix& rho,
                           const std::vector<double>& t_samples) {
  if (m.ambient_dim != rho.dim())
    throw data_error("verify_tomita: algebra and state dimensions differ");
  TomitaReport r;
  const int n = m.ambient_dim;
  const int k = m.dim();
  CMat omega = gns_vector(rho);

  // Orbit of the implementing vector; its closure carries the GNS
  // representation. Columns stay attached to basis elements, the orthonormal
  // frame q only defines coordinates.
  CMat orbit(n * n, k), orbit_adj(n * n, k);
  for (int i = 0; i < k; ++i) {
    orbit.col(i) = vec(CMat(m.basis[i] * omega));
    orbit_adj.col(i) = vec(CMat(m.basis[i].adjoint() * omega));
  }
  CMat q = orthonormalize_columns(orbit);
  const int d = int(q.cols());
  r.gns_dim = d;
  r.separating = (d == k);
  r.spans_everything = (d == n * n);
  if (!r.separating) return r;  // pass stays false

  CMat a = q.adjoint() * orbit;      // coordinates of B_i Omega
  CMat b = q.adjoint() * orbit_adj;  // coordinates of B_i^H Omega

  // The closing operator S maps B Omega to B^H Omega and is antilinear;
  // its coefficient matrix solves N conj(a_i) = b_i.
  CMat ac = a.conjugate();
  CMat nmat = ac.transpose()
                  .colPivHouseholderQr()
                  .solve(b.transpose())
                  .transpose();
  r.involution_residual =
      (antilinear_twice(nmat, nmat) - CMat::Identity(d, d)).norm() /
      std::sqrt(double(d));

  // Delta = S^* S; for antilinear S with matrix N the product is N^T conj(N).
  CMat delta = symmetrize(CMat(nmat.transpose() * nmat.conjugate()));
  auto de = eig_hermitian(delta);
  r.delta_spectrum = de.eigenvalues;
  if (de.eigenvalues(0) <= tol::rank * de.max_abs_eigenvalue())
    throw data_error("verify_tomita: modular operator lost strict positivity");

  CMat half = herm_pow_psd(de, 0.5);
  CMat inv_half = herm_pow_psd(de, -0.5);
  CMat inv = herm_pow_psd(de, -1.0);
  CMat cj = nmat * inv_half.conjugate();  // J x = cj conj(x)

  double conj_res =
      (antilinear_twice(cj, cj) - CMat::Identity(d, d)).norm() / std::sqrt(double(d));
  CMat jdj = cj * delta.conjugate() * cj.conjugate();
  conj_res = std::max(conj_res, (jdj - inv).norm() / (1.0 + inv.norm()));
  r.conjugation_residual = conj_res;

  for (int i = 0; i < k; ++i) {
    CVec lhs = cj * CVec(half * a.col(i)).conjugate();
    double res = (lhs - b.col(i)).norm() / (1.0 + b.col(i).norm());
    r.polar_residual = std::max(r.polar_residual, res);
  }

  // Compressed left action and its J-conjugates.
  std::vector<CMat> pi(k), jpij(k);
  for (int i = 0; i < k; ++i) {
    pi[i] = q.adjoint() * left_mult_op(m.basis[i]) * q;
    jpij[i] = cj * pi[i].conjugate() * cj.conjugate();
  }
  for (int i = 0; i < k; ++i)
    for (int j = 0; j < k; ++j) {
      double res = (jpij[i] * pi[j] - pi[j] * jpij[i]).norm() /
                   (1.0 + pi[i].norm() * pi[j].norm());
      r.commutant_residual = std::max(r.commutant_residual, res);
    }

  CMat pi_frame(d * d, k);
  for (int i = 0; i < k; ++i) pi_frame.col(i) = vec(pi[i]);
  pi_frame = orthonormalize_columns(pi_frame);
  for (double t : t_samples) {
    CMat ut = spectral_apply(de, [t](double x) {
      return std::exp(cplx(0, t * std::log(x)));
    });
    CMat ut_inv = ut.adjoint();
    for (int i = 0; i < k; ++i) {
      CVec v = vec(CMat(ut * pi[i] * ut_inv));
      CVec proj = pi_frame * (pi_frame.adjoint() * v);
      double res = (v - proj).norm() / v.norm();
      r.flow_residual = std::max(r.flow_residual, res);
    }
  }

  r.pass = r.involution_residual <= 1e-7 && r.polar_residual <= 1e-8 &&
           r.conjugation_residual <= 1e-7 && r.commutant_residual <= 1e-7 &&
           r.flow_residual <= 1e-7;
  return r;
}

}  // namespace modent
