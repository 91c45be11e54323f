#pragma once

// Relative entropy in three equivalent guises: classical KL divergence,
// the trace formula tr(rho (log rho - log sigma)), and the spectral form
// -<Psi, log(Delta) Psi> through the relative modular operator. Natural
// logarithm throughout, 0 log 0 = 0, and +infinity is a tagged outcome
// rather than a floating point value.

#include <vector>

#include "modent/algebra.hpp"
#include "modent/modular.hpp"
#include "modent/types.hpp"

namespace modent {

struct EntropyValue {
  double value = 0.0;  // meaningful only when finite
  bool infinite = false;
  bool support_condition_met = true;
  bool conditioning_warning = false;  // a support decision sat near the cutoff

  bool finite() const { return !infinite; }
};

// Kullback-Leibler divergence of probability vectors.
EntropyValue kl_divergence(const RVec& p, const RVec& q);

EntropyValue umegaki(const DensityMatrix& rho, const DensityMatrix& sigma);
// Same formula on positive matrices without trace normalization.
EntropyValue umegaki_raw(const CMat& p, const CMat& q);

// Spectral route: eigenpairs of Delta_{Phi,Psi} weighted by the GNS vector
// of the first argument. Agrees with umegaki to working precision.
EntropyValue araki_spectral(const DensityMatrix& psi, const DensityMatrix& phi);
EntropyValue araki_spectral_raw(const CMat& p_psi, const CMat& p_phi);

// Relative entropy of the two functionals restricted to a subalgebra,
// computed through their conditional expectations.
EntropyValue entropy_on_subalgebra(const StarAlgebra& m, const CMat& p_psi,
                                   const CMat& p_phi);

struct SupportCheck {
  bool met = false;
  double leakage = 0;  // Frobenius norm of (1 - s(phi)) s(psi)
};
// Whether the support of p_psi sits inside the support of p_phi.
SupportCheck support_condition(const CMat& p_psi, const CMat& p_phi);

// F(t) = (<Psi,Psi> - <Psi, Delta^t Psi>)/t for the relative modular
// operator of (psi, phi). Non-decreasing as t drops to 0 with limit the
// relative entropy, so each value is a certified lower bound.
std::vector<double> uhlmann_approximants(const DensityMatrix& psi,
                                         const DensityMatrix& phi,
                                         const std::vector<double>& ts);

}  // namespace modent
