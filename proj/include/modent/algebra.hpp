#pragma once

// Finite dimensional *-subalgebras of Mat(n), represented by an orthonormal
// basis in the Hilbert-Schmidt inner product <A,B> = tr(A^H B). All
// subspace-level operations (membership, expectation, angles) go through the
// flattened n^2 x dim frame of that basis.

#include <vector>

#include "modent/types.hpp"

namespace modent {

struct StarAlgebra {
  int ambient_dim = 0;
  std::vector<CMat> basis;  // HS-orthonormal, span closed under * and product

  int dim() const { return int(basis.size()); }
};

StarAlgebra full_matrix_algebra(int n);
StarAlgebra diagonal_algebra(int n);
StarAlgebra scalar_algebra(int n);  // C I

// Closes the generators under products and adjoints, adjoining the identity.
// Iterates Gram-Schmidt extension rounds until the span stabilizes.
StarAlgebra generate_star_algebra(const std::vector<CMat>& generators, int n);

StarAlgebra commutant(const StarAlgebra& m);

// Flattened orthonormal frame spanning the algebra, one column per basis element.
CMat algebra_frame(const StarAlgebra& m);

// Largest principal angle between the spans of two algebras.
double algebra_angle(const StarAlgebra& a, const StarAlgebra& b);

// HS-orthogonal projection onto the algebra; for a unital *-subalgebra this
// is the trace preserving conditional expectation.
CMat conditional_expectation(const StarAlgebra& m, const CMat& x);

double distance_to_algebra(const StarAlgebra& m, const CMat& x);

struct AlgebraInvariantReport {
  double orthonormality_residual = 0;
  double identity_residual = 0;  // distance from I/|I| to the span
  double adjoint_residual = 0;   // worst distance of B_i^H to the span
  double product_residual = 0;   // worst distance of B_i B_j to the span
  bool pass = false;
};
AlgebraInvariantReport algebra_invariant_report(const StarAlgebra& m);

struct BicommutantReport {
  int dim_m = 0;
  int dim_commutant = 0;
  int dim_bicommutant = 0;
  double angle = 0;  // between M and M''
  bool pass = false;
};
BicommutantReport bicommutant_check(const StarAlgebra& m);

struct SupportProjectionReport {
  CMat projection;  // element of M
  double mass = 0;  // tr(rho P); support property demands mass = tr(rho)
  double mass_defect = 0;
  double membership_residual = 0;
  bool minimal = false;  // every spectral cluster of E(rho) carries rho-mass
  bool pass = false;
};
// Smallest projection P in M with tr(rho P) = tr(rho), for PSD rho.
SupportProjectionReport support_projection_in(const StarAlgebra& m, const CMat& rho);

StarAlgebra center(const StarAlgebra& m);

struct CyclicSeparatingReport {
  int orbit_rank = 0;
  int commutant_orbit_rank = 0;
  bool cyclic = false;
  bool separating = false;
};
CyclicSeparatingReport cyclic_separating_report(const StarAlgebra& m, const CVec& xi);

// Orthonormalizes columns by modified Gram-Schmidt with a re-orthogonalization
// pass, dropping columns whose residual is shorter than tol::gs_drop.
CMat orthonormalize_columns(const CMat& f);

}  // namespace modent
