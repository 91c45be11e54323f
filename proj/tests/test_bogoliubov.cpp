#include "modent/bogoliubov.hpp"

#include <cmath>

#include "doctest.h"
#include "modent/numkit.hpp"
#include "modent/random.hpp"

using namespace modent;

namespace {

ModelSpec ising2(double field, double coupling, double beta) {
  ModelSpec s;
  s.kind = ModelSpec::Kind::ising_chain;
  s.sites = 2;
  s.field = field;
  s.coupling = coupling;
  s.beta = beta;
  return s;
}

ModelSpec pair_spec(ModelSpec::Kind kind, double field, double coupling,
                    double beta) {
  ModelSpec s;
  s.kind = kind;
  s.field = field;
  s.coupling = coupling;
  s.beta = beta;
  return s;
}

// Scalar-sum free energy difference for a list of eigenvalues; independent
// of every matrix routine in the library.
double scalar_delta_f(const std::vector<double>& lam,
                      const std::vector<double>& lam0, double beta) {
  auto lse = [&](const std::vector<double>& xs) {
    double m = -beta * xs[0];
    for (double x : xs) m = std::max(m, -beta * x);
    double s = 0;
    for (double x : xs) s += std::exp(-beta * x - m);
    return m + std::log(s);
  };
  return -(lse(lam) - lse(lam0)) / beta;
}

}  // namespace

TEST_CASE("two site chain assembles the documented matrices") {
  PartitionedSystem sys = build_partitioned_model(ising2(0.7, 0.4, 1.3));
  REQUIRE(sys.dim() == 4);

  CMat x(2, 2), id2 = CMat::Identity(2, 2);
  x << 0, 1, 1, 0;
  CMat h0_ref = 0.7 * (tensor_product(x, id2) + tensor_product(id2, x));
  CHECK(max_entry_norm(sys.h0 - h0_ref) <= 1e-14);

  CMat u_ref = CMat::Zero(4, 4);
  u_ref(0, 0) = 0.4;
  u_ref(1, 1) = -0.4;
  u_ref(2, 2) = -0.4;
  u_ref(3, 3) = 0.4;
  CHECK(max_entry_norm(sys.coupling - u_ref) <= 1e-14);
  CHECK(max_entry_norm(sys.h - (sys.h0 + sys.coupling)) == 0.0);

  // partition sums against the trace of the matrix exponential
  CHECK(std::abs(sys.z - std::real(herm_exp(CMat(-1.3 * sys.h)).trace())) <=
        1e-10 * sys.z);
  CHECK(std::abs(sys.z0 - std::real(herm_exp(CMat(-1.3 * sys.h0)).trace())) <=
        1e-10 * sys.z0);
}

TEST_CASE("uncoupled blocks give equal partition sums and zero gap") {
  ModelSpec s = pair_spec(ModelSpec::Kind::two_level_pair, 0.9, 0.0, 2.1);
  PartitionedSystem sys = build_partitioned_model(s);
  CHECK(std::abs(sys.z - sys.z0) <= 1e-12 * sys.z);

  FreeEnergyPaths p = relative_free_energy_paths(sys);
  CHECK(p.pass);
  CHECK(std::abs(p.from_partition) <= 1e-12);

  BogoliubovReport r = bogoliubov_report(sys);
  CHECK(r.pass);
  CHECK(std::abs(r.lower) <= 1e-12);
  CHECK(std::abs(r.upper) <= 1e-12);
  CHECK(std::abs(r.gt_lower) <= 1e-12);
}

TEST_CASE("free energy routes agree and match closed form spectra") {
  SUBCASE("transverse chain on two sites") {
    // spectrum {±J, ±sqrt(4h^2+J^2)} against {±2h, 0, 0}
    PartitionedSystem sys = build_partitioned_model(ising2(0.7, 0.4, 1.3));
    FreeEnergyPaths p = relative_free_energy_paths(sys);
    CHECK(p.pass);
    double s = std::sqrt(4 * 0.7 * 0.7 + 0.4 * 0.4);
    double ref = scalar_delta_f({0.4, -0.4, s, -s}, {1.4, 0, 0, -1.4}, 1.3);
    CHECK(std::abs(ref - -0.064712004131517453) <= 1e-15);
    CHECK(std::abs(p.from_partition - ref) <= 1e-12);
  }
  SUBCASE("coupled two level pair") {
    // blocks {0,e} each; exchange block eigenvalues e ± sqrt(e^2+g^2), e ± g
    PartitionedSystem sys = build_partitioned_model(
        pair_spec(ModelSpec::Kind::two_level_pair, 0.9, 0.5, 2.1));
    FreeEnergyPaths p = relative_free_energy_paths(sys);
    CHECK(p.pass);
    double r = std::sqrt(0.9 * 0.9 + 0.5 * 0.5);
    double ref = scalar_delta_f({0.9 + r, 0.9 - r, 1.4, 0.4},
                                {0, 0.9, 0.9, 1.8}, 2.1);
    CHECK(std::abs(ref - -0.14976651827948176) <= 1e-15);
    CHECK(std::abs(p.from_partition - ref) <= 1e-12);
  }
  SUBCASE("exchange coupled pair") {
    // total-spin sectors: {2f+J, -2f+J, J, -3J} against {±2f, 0, 0}
    PartitionedSystem sys = build_partitioned_model(
        pair_spec(ModelSpec::Kind::heisenberg_pair, 0.6, 0.8, 0.9));
    FreeEnergyPaths p = relative_free_energy_paths(sys);
    CHECK(p.pass);
    double ref = scalar_delta_f({2.0, 0.8 - 1.2, 0.8, -2.4},
                                {1.2, 0, 0, -1.2}, 0.9);
    CHECK(std::abs(ref - -0.78975163653129854) <= 1e-15);
    CHECK(std::abs(p.from_partition - ref) <= 1e-12);
  }
}

TEST_CASE("commuting diagonal model matches the scalar oracle") {
  ModelSpec s;
  s.kind = ModelSpec::Kind::custom;
  s.beta = 1.7;
  CMat b1 = CMat::Zero(2, 2), b2 = CMat::Zero(2, 2);
  b1(1, 1) = 0.6;
  b2(0, 0) = 0.2;
  b2(1, 1) = -0.4;
  s.custom_blocks = {b1, b2};
  CMat u = CMat::Zero(4, 4);
  u(0, 0) = 0.3;
  u(1, 1) = -0.1;
  u(2, 2) = 0.5;
  u(3, 3) = 0.05;
  s.custom_coupling = u;

  PartitionedSystem sys = build_partitioned_model(s);
  CHECK(std::abs(relative_free_energy(sys) - 0.020232641639349264) <= 1e-13);

  BogoliubovReport r = bogoliubov_report(sys);
  CHECK(r.pass);
  CHECK(std::abs(r.lower - -0.0051554244437735427) <= 1e-12);
  CHECK(std::abs(r.upper - 0.049277046445091358) <= 1e-12);
  CHECK(std::abs(r.gt_lower - 0.020232641639349333) <= 1e-12);
  // everything commutes, so the product-exponential bound is tight
  CHECK(std::abs(r.gt_margin) <= 1e-12);
}

TEST_CASE("scalar coupling shifts the free energy exactly") {
  Rng rng(0x90210ULL);
  ModelSpec s;
  s.kind = ModelSpec::Kind::custom;
  s.beta = 1.1;
  s.custom_blocks = {CMat(rng.hermitian(3))};
  s.custom_coupling = 0.37 * CMat::Identity(3, 3);
  PartitionedSystem sys = build_partitioned_model(s);

  BogoliubovReport r = bogoliubov_report(sys);
  CHECK(r.pass);
  CHECK(std::abs(r.delta_f - 0.37) <= 1e-12);
  CHECK(std::abs(r.lower - 0.37) <= 1e-12);
  CHECK(std::abs(r.upper - 0.37) <= 1e-12);
  CHECK(std::abs(r.gt_lower - 0.37) <= 1e-12);
}

TEST_CASE("mean coupling bounds hold across random partitions") {
  const int dims_a[] = {2, 3, 4, 2, 3, 4, 2, 2};
  const int dims_b[] = {2, 2, 2, 3, 3, 4, 0, 4};
  double worst_lower = 1e300, worst_upper = 1e300, worst_gt = 1e300;
  double worst_proof = 0, worst_paths = 0;

  for (int trial = 0; trial < 100; ++trial) {
    Rng rng(0xb0601ULL, std::uint64_t(trial));
    int da = dims_a[trial % 8], db = dims_b[trial % 8];

    ModelSpec s;
    s.kind = ModelSpec::Kind::custom;
    s.beta = 0.1 + 2.0 * rng.uniform();
    CMat ba = rng.hermitian(da);
    s.custom_blocks = {CMat(ba / op_norm(ba))};
    int total = da;
    if (db > 0) {
      CMat bb = rng.hermitian(db);
      s.custom_blocks.push_back(CMat(bb / op_norm(bb)));
      total *= db;
    }
    CMat u = rng.hermitian(total);
    s.custom_coupling = 0.8 * u / op_norm(u);

    PartitionedSystem sys = build_partitioned_model(s);
    FreeEnergyPaths p = relative_free_energy_paths(sys);
    REQUIRE(p.pass);
    worst_paths = std::max(worst_paths, p.spread);

    BogoliubovReport r = bogoliubov_report(sys);
    REQUIRE(r.pass);
    worst_lower = std::min(worst_lower, r.lower_margin);
    worst_upper = std::min(worst_upper, r.upper_margin);
    worst_gt = std::min(worst_gt, r.gt_margin);
    worst_proof = std::max(worst_proof, r.proof_identity_residual);
  }

  CHECK(worst_lower >= -1e-8);
  CHECK(worst_upper >= -1e-8);
  CHECK(worst_gt >= -1e-8);
  CHECK(worst_proof <= 1e-8);
  CHECK(worst_paths <= 1e-8);
}

TEST_CASE("flow side perturbation identities match the coupling bounds") {
  PartitionedSystem sys = build_partitioned_model(
      pair_spec(ModelSpec::Kind::heisenberg_pair, 0.6, 0.8, 0.9));
  BogoliubovReport r = bogoliubov_report(sys);

  FiniteQuantumSystem ref = gibbs_state(sys.h0, sys.beta);
  PerturbationEntropyReport pe = perturbation_entropy_report(ref, sys.coupling);
  REQUIRE(pe.pass);
  CHECK(std::abs(pe.s_fwd - sys.beta * r.upper_margin) <= 1e-8);
  CHECK(std::abs(pe.s_bwd - sys.beta * r.lower_margin) <= 1e-8);

  ExponentialBoundsReport gb = golden_thompson_peierls_report(ref, sys.coupling);
  REQUIRE(gb.pass);
  CHECK(std::abs(gb.trace_lhs - sys.z) <= 1e-10 * sys.z);
  double gt_from_traces = -std::log(gb.trace_rhs / sys.z0) / sys.beta;
  CHECK(std::abs(gt_from_traces - r.gt_lower) <= 1e-10);
  CHECK(gt_from_traces <= r.delta_f + 1e-10);
}

TEST_CASE("state side principle reaches the free energy gap") {
  PartitionedSystem sys = build_partitioned_model(ising2(0.7, 0.4, 1.3));
  double df = relative_free_energy(sys);

  SUBCASE("warm start sits at the optimum") {
    VariationalConfig cfg;
    cfg.start = VariationalConfig::Start::warm;
    GibbsVariationalReport rep = gibbs_variational_inf(sys, cfg);
    CHECK(rep.gradient_check_ok);
    CHECK(rep.lower_bound_ok);
    CHECK(rep.converged);
    CHECK(std::abs(rep.best_value - df) <= 1e-9);
    CHECK((rep.best_state - gibbs_state(sys.h, sys.beta).rho).norm() <= 1e-8);
  }

  SUBCASE("maximally mixed start descends to the optimum") {
    VariationalConfig cfg;
    cfg.start = VariationalConfig::Start::mixed;
    GibbsVariationalReport rep = gibbs_variational_inf(sys, cfg);
    CHECK(rep.gradient_check_ok);
    CHECK(rep.lower_bound_ok);
    CHECK(rep.converged);
    CHECK(rep.iterations <= 5000);
    CHECK(rep.best_value - df <= 1e-4);
    CHECK(rep.best_value >= df - 1e-8);
    for (size_t i = 0; i + 1 < rep.trajectory.size(); ++i)
      CHECK(rep.trajectory[i + 1] <= rep.trajectory[i] + 1e-14);
    // the minimizer is the interacting Gibbs state
    CHECK((rep.best_state - gibbs_state(sys.h, sys.beta).rho).norm() <= 1e-2);
    double tr = std::real(rep.best_state.trace());
    CHECK(std::abs(tr - 1.0) <= 1e-12);
    CHECK(min_eig_hermitian(rep.best_state) >= -1e-12);
  }

  SUBCASE("random start stays above the certified floor") {
    Rng rng(0x7412ULL);
    VariationalConfig cfg;
    cfg.start = VariationalConfig::Start::custom;
    cfg.custom_start = rng.hermitian(4);
    GibbsVariationalReport rep = gibbs_variational_inf(sys, cfg);
    CHECK(rep.gradient_check_ok);
    CHECK(rep.lower_bound_ok);
    CHECK(rep.best_value >= df - 1e-8);
    CHECK(rep.converged);
  }
}

TEST_CASE("observable side principle peaks at the exact witness") {
  for (auto kind : {ModelSpec::Kind::heisenberg_pair, ModelSpec::Kind::ising_chain}) {
    PartitionedSystem sys = build_partitioned_model(
        kind == ModelSpec::Kind::heisenberg_pair
            ? pair_spec(kind, 0.6, 0.8, 0.9)
            : ising2(0.7, 0.4, 1.3));
    DonskerVaradhanReport rep = donsker_varadhan_sup(sys);
    CHECK(rep.pass);
    CHECK(rep.upper_bound_ok);
    CHECK(std::abs(rep.best_s - 1.0) <= 1e-2);
    CHECK(rep.at_one_residual <= 1e-9);
    CHECK(rep.shift_invariance_residual <= 1e-9);
    CHECK(std::abs(rep.best_value - rep.delta_f) <= 1e-6);
    for (double v : rep.trajectory) CHECK(v <= rep.delta_f + 1e-8);

    // the zero test operator reports the interacting mean of the coupling
    CMat z0m = CMat::Zero(sys.dim(), sys.dim());
    double lower = bogoliubov_report(sys).lower;
    CHECK(std::abs(donsker_varadhan_value(sys, z0m) - lower) <= 1e-10);
  }
}

TEST_CASE("model construction rejects malformed input") {
  ModelSpec s = ising2(1.0, 1.0, 1.0);
  s.sites = 7;  // dimension 128
  CHECK_THROWS_AS(build_partitioned_model(s), data_error);
  s.sites = 1;
  CHECK_THROWS_AS(build_partitioned_model(s), data_error);

  ModelSpec bad_beta = ising2(1.0, 1.0, 0.0);
  CHECK_THROWS_AS(build_partitioned_model(bad_beta), data_error);
  bad_beta.beta = -2.0;
  CHECK_THROWS_AS(build_partitioned_model(bad_beta), data_error);

  ModelSpec cust;
  cust.kind = ModelSpec::Kind::custom;
  cust.beta = 1.0;
  CHECK_THROWS_AS(build_partitioned_model(cust), data_error);  // no blocks

  cust.custom_blocks = {CMat::Identity(2, 2)};
  CMat skew = CMat::Zero(2, 2);
  skew(0, 1) = 1.0;
  cust.custom_coupling = skew;
  CHECK_THROWS_AS(build_partitioned_model(cust), data_error);

  cust.custom_coupling = CMat::Identity(3, 3);  // wrong dimension
  CHECK_THROWS_AS(build_partitioned_model(cust), data_error);
}

TEST_CASE("variational entry points validate their inputs") {
  PartitionedSystem sys = build_partitioned_model(
      pair_spec(ModelSpec::Kind::heisenberg_pair, 0.6, 0.8, 0.9));

  VariationalConfig cfg;
  cfg.start = VariationalConfig::Start::custom;
  cfg.custom_start = CMat::Identity(3, 3);
  CHECK_THROWS_AS(gibbs_variational_inf(sys, cfg), data_error);

  CMat skew = CMat::Zero(4, 4);
  skew(0, 1) = cplx(0, 1);
  cfg.custom_start = skew;
  CHECK_THROWS_AS(gibbs_variational_inf(sys, cfg), data_error);

  CHECK_THROWS_AS(donsker_varadhan_value(sys, skew), data_error);
  CHECK_THROWS_AS(donsker_varadhan_value(sys, CMat::Identity(3, 3)), data_error);
}
