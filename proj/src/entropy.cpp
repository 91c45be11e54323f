#include "modent/entropy.hpp"

#include <cmath>

namespace modent {

namespace {

constexpr double kSupportLeakTol = 1e-8;

// Clamp a conditional expectation image back to exact PSD before reuse.
CMat clamp_psd(const CMat& a) {
  auto d = eig_hermitian(symmetrize(a));
  return spectral_apply(d, [](double x) { return x > 0 ? x : 0.0; });
}

}  // namespace

EntropyValue kl_divergence(const RVec& p, const RVec& q) {
  if (p.size() != q.size())
    throw data_error("kl_divergence: length mismatch");
  for (Eigen::Index i = 0; i < p.size(); ++i)
    if (p(i) < -1e-12 || q(i) < -1e-12)
      throw data_error("kl_divergence: negative entry");
  if (std::abs(p.sum() - 1.0) > 1e-10 || std::abs(q.sum() - 1.0) > 1e-10)
    throw data_error("kl_divergence: inputs must sum to 1");

  EntropyValue r;
  double cut = tol::rank;
  for (Eigen::Index i = 0; i < p.size(); ++i) {
    double pi = std::max(p(i), 0.0), qi = std::max(q(i), 0.0);
    if ((pi > cut && pi <= 10 * cut) || (qi > cut && qi <= 10 * cut))
      r.conditioning_warning = true;
    if (pi <= cut) continue;  // 0 log 0
    if (qi <= cut) {
      r.infinite = true;
      r.support_condition_met = false;
      return r;
    }
    r.value += pi * std::log(pi / qi);
  }
  return r;
}

SupportCheck support_condition(const CMat& p_psi, const CMat& p_phi) {
  SupportCheck c;
  CMat s_psi = range_projection(p_psi);
  CMat s_phi = range_projection(p_phi);
  c.leakage = ((CMat::Identity(s_phi.rows(), s_phi.cols()) - s_phi) * s_psi).norm();
  c.met = c.leakage <= kSupportLeakTol;
  return c;
}

EntropyValue umegaki_raw(const CMat& p, const CMat& q) {
  require_hermitian(p, "umegaki");
  require_hermitian(q, "umegaki");
  if (p.rows() != q.rows()) throw data_error("umegaki: dimension mismatch");
  auto ep = eig_hermitian(symmetrize(p));
  auto eq = eig_hermitian(symmetrize(q));
  if (ep.eigenvalues(0) < -tol::herm * std::max(1.0, ep.max_abs_eigenvalue()) ||
      eq.eigenvalues(0) < -tol::herm * std::max(1.0, eq.max_abs_eigenvalue()))
    throw data_error("umegaki: inputs must be positive semidefinite");

  EntropyValue r;
  r.conditioning_warning = near_rank_boundary(ep) || near_rank_boundary(eq);
  SupportCheck sc = support_condition(p, q);
  r.support_condition_met = sc.met;
  if (!sc.met) {
    r.infinite = true;
    return r;
  }

  double cut = tol::rank * ep.max_abs_eigenvalue();
  double s = 0;
  for (Eigen::Index i = 0; i < ep.dim(); ++i) {
    double lam = ep.eigenvalues(i);
    if (lam > cut) s += lam * std::log(lam);
  }
  CMat log_q = herm_log_on_support(eq);
  s -= (symmetrize(p) * log_q).trace().real();
  r.value = s;
  return r;
}

EntropyValue umegaki(const DensityMatrix& rho, const DensityMatrix& sigma) {
  return umegaki_raw(rho.matrix(), sigma.matrix());
}

EntropyValue araki_spectral_raw(const CMat& p_psi, const CMat& p_phi) {
  EntropyValue r;
  SupportCheck sc = support_condition(p_psi, p_phi);
  r.support_condition_met = sc.met;
  if (!sc.met) {
    r.infinite = true;
    return r;
  }

  // Delta_{Phi,Psi}: the first state enters on the left, the second through
  // its generalized inverse on the right; the expectation is taken in the
  // GNS vector of the first argument of the entropy.
  RelativeModularData rel = relative_modular(p_phi, p_psi);
  auto epsi = eig_hermitian(symmetrize(p_psi));
  r.conditioning_warning = near_rank_boundary(rel.delta_eig) ||
                           near_rank_boundary(epsi) ||
                           near_rank_boundary(eig_hermitian(symmetrize(p_phi)));
  CVec psi_vec = vec(herm_sqrt_psd(epsi));
  RVec w = (rel.delta_eig.eigenvectors.adjoint() * psi_vec).cwiseAbs2();

  // An eigenpair contributes when it lies in the support subspace. Magnitude
  // alone cannot separate the kernel from genuinely tiny supported
  // eigenvalues once the two spectra span many decades.
  RVec in_support = (rel.delta_eig.eigenvectors.adjoint() * rel.support *
                     rel.delta_eig.eigenvectors)
                        .diagonal()
                        .real();
  double s = 0;
  for (Eigen::Index k = 0; k < w.size(); ++k) {
    if (in_support(k) < 0.5) continue;
    double lam = rel.delta_eig.eigenvalues(k);
    if (lam <= 0) {  // supported eigenvalue lost to round-off
      r.conditioning_warning = true;
      continue;
    }
    s -= w(k) * std::log(lam);
  }
  r.value = s;
  return r;
}

EntropyValue araki_spectral(const DensityMatrix& psi, const DensityMatrix& phi) {
  return araki_spectral_raw(psi.matrix(), phi.matrix());
}

EntropyValue entropy_on_subalgebra(const StarAlgebra& m, const CMat& p_psi,
                                   const CMat& p_phi) {
  CMat ep = clamp_psd(conditional_expectation(m, p_psi));
  CMat eq = clamp_psd(conditional_expectation(m, p_phi));
  return umegaki_raw(ep, eq);
}

std::vector<double> uhlmann_approximants(const DensityMatrix& psi,
                                         const DensityMatrix& phi,
                                         const std::vector<double>& ts) {
  RelativeModularData rel = relative_modular(phi.matrix(), psi.matrix());
  CVec psi_vec = vec(gns_vector(psi));
  RVec w = (rel.delta_eig.eigenvectors.adjoint() * psi_vec).cwiseAbs2();
  double norm_sq = w.sum();
  RVec in_support = (rel.delta_eig.eigenvectors.adjoint() * rel.support *
                     rel.delta_eig.eigenvectors)
                        .diagonal()
                        .real();

  std::vector<double> out;
  out.reserve(ts.size());
  for (double t : ts) {
    if (t <= 0) throw data_error("uhlmann_approximants: t must be positive");
    double moment = 0;
    for (Eigen::Index k = 0; k < w.size(); ++k) {
      double lam = rel.delta_eig.eigenvalues(k);
      if (in_support(k) >= 0.5 && lam > 0) moment += w(k) * std::pow(lam, t);
    }
    out.push_back((norm_sq - moment) / t);
  }
  return out;
}

}  // namespace modent
