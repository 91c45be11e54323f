#pragma once

// Monotonicity of relative entropy under coarse graining, in two pictures.
// Channel picture: positive unital maps alpha: Mat(dom) -> Mat(cod) acting on
// observables, with states pulled back through the predual. Vector picture:
// implementing vectors moved by isometries between nested algebras, with
// the entropy evaluated through conditional expectations. Plus the operator
// inequality batteries (fractional powers, compressions, interpolation) that
// feed the same circle of results.

#include <cstdint>
#include <vector>

#include "modent/algebra.hpp"
#include "modent/entropy.hpp"
#include "modent/modular.hpp"
#include "modent/random.hpp"

namespace modent {

enum class MapKind {
  unitary_conjugation,
  isometry_conjugation,
  kraus_unital,
  subalgebra_embedding,
  contraction_hom,
};

// alpha: Mat(dom_dim) -> Mat(cod_dim) in the observable direction. For
// subalgebra_embedding the domain is a subalgebra of Mat(cod_dim) and alpha
// is the inclusion; for contraction_hom it is A -> V^H Q A V with Q a
// projection commuting with the domain algebra.
struct QuantumMap {
  MapKind kind = MapKind::unitary_conjugation;
  int dom_dim = 0;
  int cod_dim = 0;
  std::vector<CMat> kraus;     // dom x cod blocks, kraus_unital only
  CMat v;                      // unitary or isometry payload, dom x cod
  StarAlgebra domain_algebra;  // embedding and contraction_hom
  CMat q;                      // contraction_hom projection
};

QuantumMap make_unitary_conjugation(const CMat& u);
// v has orthonormal columns (dom x cod, cod <= dom); alpha is the compression.
QuantumMap make_isometry_conjugation(const CMat& v);
QuantumMap make_kraus_unital(const std::vector<CMat>& kraus);
// Embeds Mat(d1) into Mat(d1 d2) as A tensor I; the predual is the partial
// trace over the second factor.
QuantumMap make_partial_trace_map(int d1, int d2);
// Complete family of orthogonal projections; alpha is the pinching.
QuantumMap make_pinching(const std::vector<CMat>& projections);
QuantumMap make_subalgebra_embedding(const StarAlgebra& m);
QuantumMap make_contraction_hom(const StarAlgebra& m1, const CMat& q, const CMat& v);

// Random unital Kraus family: m Gaussian blocks whitened so the sum of
// K_i^H K_i is exactly the identity.
QuantumMap make_random_unital_kraus(Rng& rng, int dom, int cod, int m);

CMat apply_map(const QuantumMap& a, const CMat& x);
// State transport dual to alpha; defined for all kinds except contraction_hom.
CMat apply_predual(const QuantumMap& a, const CMat& sigma);

double unitality_defect(const QuantumMap& a);

struct PositivityReport {
  int trials = 0;
  double worst_margin = 0;  // smallest eigenvalue encountered
  bool pass = false;
};
// alpha(A^H A) - alpha(A)^H alpha(A) >= 0 on random domain elements.
PositivityReport schwarz_check(const QuantumMap& a, int trials, std::uint64_t seed);
// Blockwise application to random PSD 2x2 block matrices over the domain.
PositivityReport two_positive_check(const QuantumMap& a, int trials, std::uint64_t seed);

struct TransposeWitness {
  CMat input;
  CMat output;  // blockwise transpose of input
  RVec input_spectrum;
  RVec output_spectrum;
  double min_output_eigenvalue = 0;
};
// The transpose is positive but not 2-positive; on a PSD matrix with
// spectrum {0,0,2,4} the blockwise transpose has spectrum {-1,1,3,3}.
TransposeWitness transpose_two_positivity_witness();

struct MonotonicityReport {
  EntropyValue full;     // on the codomain, where the states live
  EntropyValue reduced;  // after the predual / restriction
  double margin = 0;     // full - reduced when both finite
  bool trivially_true = false;  // full side infinite
  bool pass = false;
};
// Data processing check: psi, phi are states on Mat(cod_dim).
MonotonicityReport monotonicity_report(const QuantumMap& a, const DensityMatrix& psi,
                                       const DensityMatrix& phi);

struct DpiBatteryResult {
  int trials = 0;
  double worst_margin = 0;            // over the strictly contracting kinds
  double worst_unitary_deviation = 0; // unitary kind must preserve entropy
  std::vector<int> failed_trials;
  bool pass = false;
};
// Cycles through partial trace, pinching, random unital Kraus, isometry and
// unitary conjugation with fresh states per trial. Replay a single failure
// with the same seed and trial index.
DpiBatteryResult dpi_battery(int trials, std::uint64_t seed);

enum class VectorMonotonicityMode {
  isometry_inclusion,      // V in M2, M1 inside M2
  subalgebra_restriction,  // V absent
  one_algebra_isometry,    // M1 = M2, V in the algebra
  isometry_in_small,       // V in M1 inside M2
  partial_isometry,        // V in M2 partial isometry, Omega in initial space
  unitary_reversed,        // R_{M1}(Omega,Phi) <= R_{M2}(U Omega, U Phi)
  automorphism_invariance, // unitary in M: equality
  contraction_hom,         // dominated *-hom composed with an isometry
};

struct VectorMonotonicityReport {
  EntropyValue small_side;  // restricted to M1 (the moved vectors)
  EntropyValue big_side;    // restricted to M2
  double margin = 0;        // big - small when both finite
  bool trivially_true = false;
  bool equality_expected = false;
  bool pass = false;
};
// Entropy of vector functionals xi -> <xi, A xi> restricted to algebras,
// under the stated preconditions for each mode (cyclicity, isometry,
// membership); violations raise data_error. q is only read by
// contraction_hom and carries the image projection of the dominated
// homomorphism A -> q A.
VectorMonotonicityReport vector_monotonicity_report(
    VectorMonotonicityMode mode, const StarAlgebra& m1, const StarAlgebra& m2,
    const CMat& v, const CVec& omega, const CVec& phi, const CMat& q = CMat());

struct OperatorInequalityReport {
  int trials = 0;
  double worst_margin = 0;  // smallest eigenvalue of the asserted difference
  bool pass = false;
};
// A >= B >= 0 implies A^t >= B^t for t in (0,1).
OperatorInequalityReport loewner_heinz_battery(int trials, int max_dim,
                                               std::uint64_t seed);
// K^H A^t K <= (K^H A K)^t for contractions K, PSD A, t in (0,1).
OperatorInequalityReport jensen_compression_battery(int trials, int max_dim,
                                                    std::uint64_t seed);
// T^H A2^2 T <= A1^2 and |T| <= 1 interpolate to T^H A2^{2t} T <= A1^{2t}.
OperatorInequalityReport interpolation_battery(int trials, int max_dim,
                                               std::uint64_t seed);

}  // namespace modent
