#pragma once

// Gibbs states of finite quantum systems and their equilibrium structure:
// the boundary identity at inverse temperature beta, the flow generator on
// Hilbert-Schmidt space, bounded perturbations of the implementing vector
// with their entropy identities, expansionals, the product formula, and the
// exponential trace inequalities.

#include <cstdint>
#include <vector>

#include "modent/entropy.hpp"
#include "modent/modular.hpp"
#include "modent/random.hpp"

namespace modent {

struct FiniteQuantumSystem {
  CMat h;
  double beta = 0;
  double z = 0;  // tr exp(-beta h)
  CMat rho;      // exp(-beta h)/z, assembled from the shifted spectrum
  SpectralDecomposition<cplx> h_eig;

  int dim() const { return int(h.rows()); }
  DensityMatrix density() const { return DensityMatrix(rho); }
};

FiniteQuantumSystem gibbs_state(const CMat& h, double beta);

// |tr(state A e^{-bH} B e^{bH}) - tr(state B A)| / (1 + |A| |B|), evaluated
// entrywise in the energy eigenbasis so opposite weights cancel per term.
double kms_boundary_residual(const FiniteQuantumSystem& sys, const CMat& state,
                             const CMat& a, const CMat& b);

struct KmsBoundaryReport {
  int trials = 0;
  double worst_residual = 0;  // Gibbs state over all sampled pairs
  double impostor_peak = 0;   // largest residual of a non-Gibbs faithful state
  bool impostor_detected = false;  // peak above the soft threshold 1e-4
  bool pass = false;
};
KmsBoundaryReport kms_boundary_check(const FiniteQuantumSystem& sys, int trials,
                                     std::uint64_t seed);

struct LiouvillianRep {
  CMat l;      // vec(X) -> vec(HX - XH)
  CVec omega;  // vec(rho^{1/2})
  double kernel_residual = 0;       // |L omega|
  double anticommute_residual = 0;  // J L + L J probed on matrix units
  double modular_residual = 0;      // modular operator against exp(-beta L)
  bool pass = false;
};
LiouvillianRep standard_liouvillian(const FiniteQuantumSystem& sys);

struct PerturbationResult {
  CMat v;
  CMat omega_v;  // n x n, exp(-beta(h+v)/2)/sqrt(z); stays in the PSD cone
  CMat rho_v;    // omega_v omega_v^H / norm_sq
  CMat l_v;      // flow generator of the perturbed system on C^{n^2}
  double norm_sq = 0;              // HS norm^2 of omega_v, equals z_v / z
  double dual_path_residual = -1;  // closed form against dense expm, dim <= 4
  double gibbs_residual = 0;       // rho_v against the Gibbs state of h + v
  double flow_kernel_residual = 0;  // |l_v vec(omega_v)| / |omega_v|

  DensityMatrix perturbed_density() const { return DensityMatrix(rho_v); }
};
PerturbationResult perturb_state(const FiniteQuantumSystem& sys, const CMat& v);

struct PerturbationEntropyReport {
  double s_fwd = 0;  // S(unperturbed, perturbed) = ln norm_sq + beta omega(v)
  double s_bwd = 0;  // S(perturbed, unperturbed) = -ln norm_sq - beta omega_v(v)
  double s_fwd_residual = 0;  // identity value against the spectral entropy
  double s_bwd_residual = 0;
  double log_forward_residual = 0;   // log of the relative modular operator
  double log_backward_residual = 0;  // against its affine closed form
  double exp_forward_residual = 0;   // assembled relative modular operator
  double exp_backward_residual = 0;  // against the exponentiated closed form
  double identities_residual = 0;    // max of the six
  bool pass = false;
};
PerturbationEntropyReport perturbation_entropy_report(
    const FiniteQuantumSystem& sys, const CMat& v);

struct ExpansionalReport {
  CMat closed_form;  // exp(it(H+V)) exp(-itH)
  std::vector<double> truncation_errors;  // after each Dyson order, 0..order
  double unitarity_residual = 0;
  bool pass = false;
};
// Iterated time-ordered integrals by nested Gauss-Legendre quadrature (16
// nodes per level) against the closed form.
ExpansionalReport expansional(const FiniteQuantumSystem& sys, const CMat& v,
                              double t, int dyson_order);

struct TrotterReport {
  std::vector<int> steps;
  std::vector<double> errors;  // |(e^{itA/n} e^{itB/n})^n - e^{it(A+B)}|
  std::vector<double> ratios;  // errors[k] / errors[k+1], about 2 when O(1/n)
  bool commuting_exact = false;
  bool pass = false;
};
TrotterReport trotter_check(const CMat& a, const CMat& b, double t,
                            const std::vector<int>& n_list);

struct ExponentialBoundsReport {
  double trace_lhs = 0;   // tr exp(-beta(h+v))
  double trace_rhs = 0;   // tr(exp(-beta h) exp(-beta v))
  double vector_lhs = 0;  // |omega_v|
  double vector_rhs = 0;  // |exp(-beta v/2) omega| via the matrix product
  double lower_lhs = 0;   // exp(-beta omega(v))
  double lower_rhs = 0;   // norm_sq
  bool pass = false;
};
ExponentialBoundsReport golden_thompson_peierls_report(
    const FiniteQuantumSystem& sys, const CMat& v);

// Zeroes every eigenvalue with |lambda| > cutoff, keeping the eigenbasis.
CMat spectral_truncation(const CMat& v, double cutoff);

}  // namespace modent
