#pragma once

// Modular machinery for Mat(n) in its standard representation on the
// Hilbert-Schmidt space. States enter as density matrices, the implementing
// vector of tr(rho .) is Omega = rho^{1/2}, and flattened n^2 x n^2 operators
// realize conjugations X -> A X B through the vec dictionary.

#include <vector>

#include "modent/algebra.hpp"
#include "modent/numkit.hpp"
#include "modent/types.hpp"

namespace modent {

class DensityMatrix {
 public:
  // Validates Hermiticity, positivity (eigenvalues >= -herm tolerance,
  // clamped), and unit trace.
  explicit DensityMatrix(const CMat& m);

  const CMat& matrix() const { return m_; }
  int dim() const { return int(m_.rows()); }
  const SpectralDecomposition<cplx>& eig() const { return eig_; }
  bool faithful() const;

 private:
  CMat m_;
  SpectralDecomposition<cplx> eig_;
};

// rho^{1/2}, as a matrix; its flattening is the GNS vector of tr(rho .).
CMat gns_vector(const DensityMatrix& rho);

// X -> X^H on flattened vectors: the modular conjugation of Mat(n) with a
// faithful state. Antilinear, applied rather than materialized.
CVec apply_adjoint_conjugation(const CVec& v, int n);

struct ModularData {
  int n = 0;
  CMat rho;
  CMat omega;      // rho^{1/2}
  CMat delta;      // conjugation by rho, n^2 x n^2
  CMat log_delta;  // I tensor log(rho) - log(rho)^T tensor I
  SpectralDecomposition<cplx> delta_eig;
};
// Modular operator of (Mat(n), tr(rho .)); requires faithful rho.
ModularData modular_data(const DensityMatrix& rho);

struct RelativeModularData {
  int n = 0;
  CMat delta;    // left mult by rho_left, right mult by pinv(rho_right)
  CMat support;  // s(rho_right)^T tensor s(rho_left)
  SpectralDecomposition<cplx> delta_eig;
};
// Relative modular operator Delta_{Phi,Psi} for the GNS vectors of two
// positive matrices: Phi = rho_left^{1/2} enters by left multiplication,
// Psi = rho_right^{1/2} by the generalized inverse on the right. Inputs are
// PSD and may be non-normalized or rank deficient.
RelativeModularData relative_modular(const CMat& rho_left, const CMat& rho_right);

// Same operator from arbitrary implementing vectors, given as HS matrices:
// X -> (Phi Phi^H) X pinv(Psi^H Psi).
RelativeModularData vector_relative_modular(const CMat& phi, const CMat& psi);

struct TomitaReport {
  int gns_dim = 0;
  bool separating = false;     // B Omega = 0 forces B = 0
  bool spans_everything = false;  // orbit fills the ambient HS space
  double involution_residual = 0;   // S^2 = 1 on the closure of M Omega
  double polar_residual = 0;        // J Delta^{1/2} (B Omega) = B^H Omega
  double conjugation_residual = 0;  // J^2 = 1 and J Delta J = Delta^{-1}
  double commutant_residual = 0;    // J M J commutes with M
  double flow_residual = 0;         // Delta^{it} M Delta^{-it} stays in M
  RVec delta_spectrum;              // ascending, on the GNS subspace
  bool pass = false;
};
// Runs the modular verification for a *-subalgebra M of Mat(n) acting by
// left multiplication on HS, with cyclic vector Omega = rho^{1/2} of its
// GNS subspace. rho must induce a separating vector for M.
TomitaReport verify_tomita(const StarAlgebra& m, const DensityMatrix& rho,
                           const std::vector<double>& t_samples = {0.3, 1.0, 1.7});

}  // namespace modent
