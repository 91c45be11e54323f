#pragma once

// Partitioned quantum systems H = H0 + U with uncoupled reference dynamics:
// relative free energy through three independent routes, the two-sided mean
// coupling bounds with their proof identities, the product-exponential lower
// band, and both variational principles (state side infimum, observable side
// supremum) with certified one-sided bounds at every evaluation.

#include <cstdint>
#include <vector>

#include "modent/entropy.hpp"
#include "modent/kms.hpp"
#include "modent/random.hpp"

namespace modent {

struct PartitionedSystem {
  std::vector<CMat> block_hamiltonians;  // local terms, one per factor
  CMat h0;        // sum of the lifted local terms
  CMat coupling;  // u
  CMat h;         // h0 + u
  double beta = 0;
  double z = 0;   // tr exp(-beta h)
  double z0 = 0;  // tr exp(-beta h0)

  int dim() const { return int(h0.rows()); }
};

struct ModelSpec {
  enum class Kind { two_level_pair, ising_chain, heisenberg_pair, custom };
  Kind kind = Kind::two_level_pair;
  double beta = 1.0;
  int sites = 2;           // ising_chain length
  double field = 1.0;      // local term strength
  double coupling = 1.0;   // interaction strength
  std::vector<CMat> custom_blocks;
  CMat custom_coupling;
};

// two_level_pair: two splittings diag(0, field) coupled by coupling X (x) X.
// ising_chain: transverse field*X per site, coupling Z_i Z_{i+1} down an
// open chain. heisenberg_pair: field*Z per site, coupling (XX + YY + ZZ).
// Total dimension above 64 is rejected.
PartitionedSystem build_partitioned_model(const ModelSpec& spec);

struct FreeEnergyPaths {
  double from_partition = 0;  // -ln(Z/Z0)/beta via shifted partition sums
  double from_vector = 0;     // -ln |Omega_U|^2 / beta
  double from_entropy = 0;    // E_rho[U] + S(rho, rho0)/beta
  double spread = 0;          // largest pairwise gap
  bool pass = false;          // spread <= 1e-8
};
FreeEnergyPaths relative_free_energy_paths(const PartitionedSystem& sys);

// The partition-sum value, after checking the three routes agree.
double relative_free_energy(const PartitionedSystem& sys);

struct BogoliubovReport {
  double lower = 0;     // coupling mean in the interacting state
  double delta_f = 0;
  double upper = 0;     // coupling mean in the reference state
  double gt_lower = 0;  // -ln of the reference mean of exp(-beta u), /beta
  double lower_margin = 0;  // delta_f - lower
  double upper_margin = 0;  // upper - delta_f
  double gt_margin = 0;     // delta_f - gt_lower
  double proof_identity_residual = 0;
  bool pass = false;
};
BogoliubovReport bogoliubov_report(const PartitionedSystem& sys);

struct VariationalConfig {
  enum class Start { warm, mixed, custom };
  Start start = Start::mixed;
  CMat custom_start;  // parameter matrix when start == custom
  int max_iters = 5000;
  double conv_tol = 1e-4;
  double grad_tol = 1e-9;
  std::uint64_t seed = 0;  // probe direction of the derivative cross-check
};

struct GibbsVariationalReport {
  double delta_f = 0;     // certified optimum, from relative_free_energy
  double best_value = 0;
  CMat best_state;        // density at the best iterate
  std::vector<double> trajectory;  // objective at every accepted iterate
  int iterations = 0;
  bool gradient_check_ok = false;  // analytic against central differences
  bool lower_bound_ok = false;     // every iterate >= delta_f - 1e-8
  bool converged = false;          // best within conv_tol of delta_f
};
// Minimizes the mean coupling plus scaled divergence from the reference
// state over exponential parametrizations gamma = e^A/tr e^A, descending
// along the analytic gradient with a Barzilai-Borwein step and backtracking.
GibbsVariationalReport gibbs_variational_inf(const PartitionedSystem& sys,
                                             const VariationalConfig& cfg = {});

struct DonskerVaradhanReport {
  double delta_f = 0;
  double best_value = 0;
  double best_s = 0;
  double best_c = 0;
  std::vector<double> trajectory;  // every evaluated objective
  double at_one_residual = 0;      // |value at s = 1 minus delta_f|
  double shift_invariance_residual = 0;  // spread over admissible shifts
  bool upper_bound_ok = false;     // every evaluation <= delta_f + 1e-8
  bool pass = false;
};
// Maximizes the mean of (u - v) in the interacting state minus the scaled
// log trace of exp(ln rho0 - beta v) over v = s u + c, c chosen to keep
// v positive semidefinite; grid scan on s in [0, 2] plus golden-section
// refinement around the best grid point.
DonskerVaradhanReport donsker_varadhan_sup(const PartitionedSystem& sys);

// Objective of the observable-side principle at an arbitrary test operator.
double donsker_varadhan_value(const PartitionedSystem& sys, const CMat& v);

}  // namespace modent
