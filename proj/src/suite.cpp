#include "modent/suite.hpp"

#include <algorithm>
#include <cmath>

#include "modent/algebra.hpp"
#include "modent/bogoliubov.hpp"
#include "modent/entropy.hpp"
#include "modent/io.hpp"
#include "modent/kms.hpp"
#include "modent/modular.hpp"
#include "modent/monotone.hpp"
#include "modent/numkit.hpp"
#include "modent/random.hpp"

namespace modent {

namespace {

// Stable per-battery stream constants; reordering batteries must not move
// anyone's random draws.
enum Stream : std::uint64_t {
  s_spectral = 11,
  s_pinv = 12,
  s_bicommutant = 21,
  s_cond_exp = 23,
  s_tomita = 31,
  s_rel_diag = 33,
  s_araki = 41,
  s_classical = 42,
  s_uhlmann = 43,
  s_zero = 44,
  s_dpi = 51,
  s_loewner = 53,
  s_jensen = 54,
  s_interp = 55,
  s_boundary = 61,
  s_liouville = 62,
  s_perturb = 63,
  s_expbounds = 64,
  s_partition = 71,
  s_dv = 73,
  s_gibbs_var = 74,
};

PropertyResult row(std::string module, std::string property, int trials,
                   double margin, bool pass, const SuiteConfig& cfg) {
  PropertyResult r;
  r.module = std::move(module);
  r.property = std::move(property);
  r.trials = trials;
  r.worst_margin = margin;
  r.pass = pass;
  if (!pass)
    r.replay = "rerun: modent suite --seed " + std::to_string(cfg.seed) +
               " --trials " + std::to_string(cfg.trials) + " (watch " +
               r.module + "/" + r.property + ")";
  return r;
}

int pick_dim(const SuiteConfig& cfg, int t, int cap) {
  int d = cfg.dims[size_t(t) % cfg.dims.size()];
  return std::min(d, cap);
}

CMat unit_hermitian(Rng& rng, int n) {
  CMat h = rng.hermitian(n);
  return h / std::max(1.0, op_norm(h));
}

PropertyResult spectral_reconstruction(const SuiteConfig& cfg) {
  double worst = 1e300;
  for (int t = 0; t < cfg.trials; ++t) {
    Rng rng(cfg.seed, s_spectral + 1000 * std::uint64_t(t));
    int d = pick_dim(cfg, t, 8);
    CMat a = rng.hermitian(d);
    auto dec = eig_hermitian(a);
    CMat back = spectral_apply(dec, [](double x) { return x; });
    double rel = (back - a).norm() / (1.0 + a.norm());
    worst = std::min(worst, 1e-10 - rel);
  }
  return row("numkit", "spectral_reconstruction", cfg.trials, worst, worst >= 0,
             cfg);
}

PropertyResult pseudoinverse_axioms(const SuiteConfig& cfg) {
  double worst = 1e300;
  for (int t = 0; t < cfg.trials; ++t) {
    Rng rng(cfg.seed, s_pinv + 1000 * std::uint64_t(t));
    int d = std::max(2, pick_dim(cfg, t, 6));
    int r = 1 + t % d;
    CMat a = rng.density_rank(d, r);
    CMat p = pinv_psd(a);
    double res = std::max({(a * p * a - a).norm(), (p * a * p - p).norm(),
                           hermiticity_defect(CMat(a * p))});
    worst = std::min(worst, 1e-9 - res / (1.0 + a.norm()));
  }
  return row("numkit", "pseudoinverse_axioms", cfg.trials, worst, worst >= 0,
             cfg);
}

PropertyResult bicommutant_closure(const SuiteConfig& cfg) {
  int trials = std::min(cfg.trials, 8);
  double worst = 1e300;
  bool ok = true;
  for (int t = 0; t < trials; ++t) {
    Rng rng(cfg.seed, s_bicommutant + 1000 * std::uint64_t(t));
    int d = pick_dim(cfg, t, 4);
    std::vector<CMat> gens{rng.gaussian(d, d)};
    if (t % 2) gens.push_back(rng.hermitian(d));
    StarAlgebra m = generate_star_algebra(gens, d);
    BicommutantReport rep = bicommutant_check(m);
    ok = ok && rep.pass;
    worst = std::min(worst, tol::subspace - rep.angle);
  }
  return row("algebra", "bicommutant_closure", trials, worst, ok && worst >= 0,
             cfg);
}

PropertyResult full_commutant_scalar(const SuiteConfig& cfg) {
  bool ok = true;
  int trials = 0;
  for (int d : cfg.dims) {
    if (d > 6) continue;
    ++trials;
    ok = ok && commutant(full_matrix_algebra(d)).dim() == 1;
  }
  return row("algebra", "full_commutant_scalar", trials, ok ? 1.0 : -1.0, ok,
             cfg);
}

PropertyResult conditional_expectation_projection(const SuiteConfig& cfg) {
  double worst = 1e300;
  for (int t = 0; t < cfg.trials; ++t) {
    Rng rng(cfg.seed, s_cond_exp + 1000 * std::uint64_t(t));
    int d = pick_dim(cfg, t, 5);
    StarAlgebra m = generate_star_algebra({rng.hermitian(d)}, d);
    CMat x = rng.gaussian(d, d), y = rng.gaussian(d, d);
    CMat ex = conditional_expectation(m, x);
    double res = std::max(
        {(conditional_expectation(m, ex) - ex).norm(),
         std::abs(cplx(ex.trace() - x.trace())),
         std::abs(hs_inner(ex, y) - hs_inner(x, conditional_expectation(m, y)))});
    worst = std::min(worst, 1e-9 - res / (1.0 + x.norm()));
  }
  return row("algebra", "conditional_expectation_projection", cfg.trials, worst,
             worst >= 0, cfg);
}

PropertyResult tomita_polar(const SuiteConfig& cfg) {
  int trials = std::min(cfg.trials, 6);
  double worst = 1e300;
  bool ok = true;
  for (int t = 0; t < trials; ++t) {
    Rng rng(cfg.seed, s_tomita + 1000 * std::uint64_t(t));
    int d = pick_dim(cfg, t, 4);
    TomitaReport rep =
        verify_tomita(full_matrix_algebra(d), DensityMatrix(rng.density(d)));
    ok = ok && rep.pass;
    worst = std::min(worst,
                     1e-8 - std::max({rep.involution_residual, rep.polar_residual,
                                      rep.conjugation_residual}));
  }
  return row("modular", "tomita_polar_identity", trials, worst, ok && worst >= 0,
             cfg);
}

PropertyResult tomita_flow(const SuiteConfig& cfg) {
  int trials = std::min(cfg.trials, 6);
  double worst = 1e300;
  bool ok = true;
  for (int t = 0; t < trials; ++t) {
    Rng rng(cfg.seed, s_tomita + 1000 * std::uint64_t(t));
    int d = pick_dim(cfg, t, 4);
    TomitaReport rep =
        verify_tomita(full_matrix_algebra(d), DensityMatrix(rng.density(d)));
    ok = ok && rep.pass;
    worst = std::min(worst,
                     1e-7 - std::max(rep.commutant_residual, rep.flow_residual));
  }
  return row("modular", "flow_and_commutant", trials, worst, ok && worst >= 0,
             cfg);
}

PropertyResult relative_modular_diagonal(const SuiteConfig& cfg) {
  double worst = 1e300;
  for (int t = 0; t < cfg.trials; ++t) {
    Rng rng(cfg.seed, s_rel_diag + 1000 * std::uint64_t(t));
    int d = pick_dim(cfg, t, 5);
    CMat rho = rng.density(d);
    RelativeModularData rel = relative_modular(rho, rho);
    ModularData md = modular_data(DensityMatrix(rho));
    double res = (rel.delta - md.delta).norm() / (1.0 + md.delta.norm());
    worst = std::min(worst, 1e-9 - res);
  }
  return row("modular", "relative_modular_diagonal", cfg.trials, worst,
             worst >= 0, cfg);
}

PropertyResult araki_matches_umegaki(const SuiteConfig& cfg) {
  int trials = 3 * cfg.trials;
  double worst = 1e300;
  bool ok = true;
  for (int t = 0; t < trials; ++t) {
    Rng rng(cfg.seed, s_araki + 1000 * std::uint64_t(t));
    int d = 2 + t % 5;
    CMat p = rng.density(d);
    CMat q = t % 4 == 3 ? rng.density_rank(d, d - 1) : rng.density(d);
    EntropyValue a = araki_spectral_raw(p, q);
    EntropyValue u = umegaki_raw(p, q);
    if (a.infinite != u.infinite) {
      ok = false;
      continue;
    }
    if (a.infinite) continue;
    worst = std::min(worst,
                     1e-8 - std::abs(a.value - u.value) / (1.0 + std::abs(u.value)));
  }
  return row("entropy", "araki_matches_umegaki", trials, worst, ok && worst >= 0,
             cfg);
}

PropertyResult classical_diagonal_match(const SuiteConfig& cfg) {
  double worst = 1e300;
  for (int t = 0; t < cfg.trials; ++t) {
    Rng rng(cfg.seed, s_classical + 1000 * std::uint64_t(t));
    int d = pick_dim(cfg, t, 8);
    RVec p(d), q(d);
    for (int i = 0; i < d; ++i) {
      p(i) = 0.05 + rng.uniform();
      q(i) = 0.05 + rng.uniform();
    }
    p /= p.sum();
    q /= q.sum();
    CMat dp = p.cast<cplx>().asDiagonal();
    CMat dq = q.cast<cplx>().asDiagonal();
    EntropyValue mat = umegaki_raw(dp, dq);
    EntropyValue cls = kl_divergence(p, q);
    worst = std::min(worst, 1e-10 - std::abs(mat.value - cls.value));
  }
  return row("entropy", "classical_diagonal_match", cfg.trials, worst,
             worst >= 0, cfg);
}

PropertyResult uhlmann_limit(const SuiteConfig& cfg) {
  int trials = std::max(3, cfg.trials / 3);
  double worst = 1e300;
  std::vector<double> ts;
  for (int k = 0; k <= 14; ++k) ts.push_back(std::pow(2.0, -k));
  for (int t = 0; t < trials; ++t) {
    Rng rng(cfg.seed, s_uhlmann + 1000 * std::uint64_t(t));
    int d = pick_dim(cfg, t, 5);
    DensityMatrix psi(rng.density(d)), phi(rng.density(d));
    double s = araki_spectral(psi, phi).value;
    std::vector<double> f = uhlmann_approximants(psi, phi, ts);
    for (size_t k = 0; k + 1 < f.size(); ++k)
      worst = std::min(worst, f[k + 1] - f[k] + 1e-10);
    worst = std::min(worst, 1e-3 - std::abs(f.back() - s));
  }
  return row("entropy", "uhlmann_limit_monotone", trials, worst, worst >= 0,
             cfg);
}

PropertyResult zero_on_equal_states(const SuiteConfig& cfg) {
  double worst = 1e300;
  for (int t = 0; t < cfg.trials; ++t) {
    Rng rng(cfg.seed, s_zero + 1000 * std::uint64_t(t));
    CMat p = rng.density(pick_dim(cfg, t, 6));
    worst = std::min(worst, 1e-10 - std::abs(araki_spectral_raw(p, p).value));
  }
  return row("entropy", "zero_on_equal_states", cfg.trials, worst, worst >= 0,
             cfg);
}

PropertyResult dpi_contracting(const SuiteConfig& cfg, bool inject) {
  DpiBatteryResult rep = dpi_battery(5 * cfg.trials, cfg.seed + s_dpi);
  double margin = rep.worst_margin;
  bool pass = rep.pass;
  PropertyResult r;
  if (inject) {
    // self test fixture: flip the contracting-side inequality and make sure
    // the harness notices and emits a replay line
    margin = -(std::abs(margin) + 10 * cfg.margin_tol);
    pass = false;
    r = row("monotone", "dpi_contracting_maps", rep.trials, margin, pass, cfg);
    r.replay = "injected-bug self test tripped on purpose; " + r.replay;
    return r;
  }
  r = row("monotone", "dpi_contracting_maps", rep.trials, margin,
          pass && margin >= -cfg.margin_tol, cfg);
  if (!rep.failed_trials.empty())
    r.replay += "; first failing trial " + std::to_string(rep.failed_trials[0]);
  return r;
}

PropertyResult dpi_unitary(const SuiteConfig& cfg) {
  DpiBatteryResult rep = dpi_battery(5 * cfg.trials, cfg.seed + s_dpi);
  double margin = cfg.margin_tol - rep.worst_unitary_deviation;
  return row("monotone", "dpi_unitary_equality", rep.trials, margin, margin >= 0,
             cfg);
}

PropertyResult transpose_witness(const SuiteConfig& cfg) {
  TransposeWitness w = transpose_two_positivity_witness();
  RVec expect(4);
  expect << -1, 1, 3, 3;
  double dev = (w.output_spectrum - expect).cwiseAbs().maxCoeff();
  return row("monotone", "transpose_positivity_witness", 1, 1e-12 - dev,
             dev <= 1e-12, cfg);
}

PropertyResult operator_inequality(const SuiteConfig& cfg, const char* name,
                                   OperatorInequalityReport (*battery)(
                                       int, int, std::uint64_t),
                                   std::uint64_t stream) {
  OperatorInequalityReport rep = battery(4 * cfg.trials, 6, cfg.seed + stream);
  return row("monotone", name, rep.trials, rep.worst_margin,
             rep.pass && rep.worst_margin >= -cfg.margin_tol, cfg);
}

PropertyResult kms_boundary(const SuiteConfig& cfg) {
  double worst = 1e300;
  bool ok = true;
  for (int t = 0; t < cfg.trials; ++t) {
    Rng rng(cfg.seed, s_boundary + 1000 * std::uint64_t(t));
    int d = pick_dim(cfg, t, 5);
    double beta = 0.1 + 4.9 * rng.uniform();
    FiniteQuantumSystem sys = gibbs_state(unit_hermitian(rng, d), beta);
    KmsBoundaryReport rep = kms_boundary_check(sys, 25, cfg.seed + 7 * t);
    ok = ok && rep.pass && rep.impostor_detected;
    worst = std::min(worst, 1e-9 - rep.worst_residual);
  }
  return row("kms", "boundary_identity", cfg.trials, worst, ok && worst >= 0,
             cfg);
}

PropertyResult liouvillian_modular(const SuiteConfig& cfg) {
  double worst = 1e300;
  bool ok = true;
  for (int t = 0; t < cfg.trials; ++t) {
    Rng rng(cfg.seed, s_liouville + 1000 * std::uint64_t(t));
    int d = pick_dim(cfg, t, 5);
    FiniteQuantumSystem sys =
        gibbs_state(unit_hermitian(rng, d), 0.2 + 2.0 * rng.uniform());
    LiouvillianRep rep = standard_liouvillian(sys);
    ok = ok && rep.pass;
    worst = std::min(worst, 1e-7 - rep.modular_residual);
  }
  return row("kms", "liouvillian_modular_match", cfg.trials, worst,
             ok && worst >= 0, cfg);
}

PropertyResult perturbation_identities(const SuiteConfig& cfg) {
  double worst = 1e300;
  bool ok = true;
  for (int t = 0; t < cfg.trials; ++t) {
    Rng rng(cfg.seed, s_perturb + 1000 * std::uint64_t(t));
    int d = 2 + t % 3;
    double beta = 0.1 + 3.9 * rng.uniform();
    FiniteQuantumSystem sys = gibbs_state(unit_hermitian(rng, d), beta);
    PerturbationEntropyReport rep =
        perturbation_entropy_report(sys, unit_hermitian(rng, d));
    ok = ok && rep.pass;
    worst = std::min(worst, 1e-7 - rep.identities_residual);
  }
  return row("kms", "perturbation_identities", cfg.trials, worst,
             ok && worst >= 0, cfg);
}

PropertyResult exponential_bounds(const SuiteConfig& cfg) {
  double worst = 1e300;
  bool ok = true;
  for (int t = 0; t < cfg.trials; ++t) {
    Rng rng(cfg.seed, s_expbounds + 1000 * std::uint64_t(t));
    int d = pick_dim(cfg, t, 6);
    FiniteQuantumSystem sys =
        gibbs_state(unit_hermitian(rng, d), 0.1 + 3.0 * rng.uniform());
    ExponentialBoundsReport rep =
        golden_thompson_peierls_report(sys, unit_hermitian(rng, d));
    ok = ok && rep.pass;
    double gt = (rep.trace_rhs - rep.trace_lhs) / (1.0 + std::abs(rep.trace_rhs));
    double pb = (rep.lower_rhs - rep.lower_lhs) / (1.0 + std::abs(rep.lower_rhs));
    worst = std::min({worst, gt, pb});
  }
  return row("kms", "exponential_bounds", cfg.trials, worst,
             ok && worst >= -1e-9, cfg);
}

PropertyResult trotter_decay(const SuiteConfig& cfg) {
  CMat x(2, 2), z(2, 2);
  x << 0, 1, 1, 0;
  z << 1, 0, 0, -1;
  TrotterReport rep = trotter_check(x, CMat(0.7 * z), 1.0, {16, 32, 64});
  double r = rep.ratios.back();
  double margin = std::min(r - 1.7, 2.3 - r);
  return row("kms", "trotter_error_decay", int(rep.steps.size()), margin,
             rep.pass && margin >= 0, cfg);
}

PropertyResult expansional_series(const SuiteConfig& cfg) {
  CMat z(2, 2), x(2, 2);
  z << 0.9, 0, 0, -0.4;
  x << 0, 0.5, 0.5, 0;
  FiniteQuantumSystem sys = gibbs_state(z, 1.0);
  ExpansionalReport rep = expansional(sys, x, 0.6, 4);
  double margin = 1e-9 - rep.unitarity_residual;
  return row("kms", "expansional_series", int(rep.truncation_errors.size()),
             margin, rep.pass && margin >= 0, cfg);
}

PartitionedSystem random_partitioned(Rng& rng, int variant) {
  const int da[] = {2, 3, 2, 4, 3};
  const int db[] = {2, 2, 4, 2, 3};
  ModelSpec s;
  s.kind = ModelSpec::Kind::custom;
  s.beta = 0.1 + 2.0 * rng.uniform();
  int a = da[variant % 5], b = db[variant % 5];
  s.custom_blocks = {unit_hermitian(rng, a), unit_hermitian(rng, b)};
  s.custom_coupling = 0.8 * unit_hermitian(rng, a * b);
  return build_partitioned_model(s);
}

PropertyResult free_energy_routes(const SuiteConfig& cfg) {
  double worst = 1e300;
  for (int t = 0; t < cfg.trials; ++t) {
    Rng rng(cfg.seed, s_partition + 1000 * std::uint64_t(t));
    FreeEnergyPaths p = relative_free_energy_paths(random_partitioned(rng, t));
    worst = std::min(worst, 1e-8 - p.spread);
  }
  return row("bogoliubov", "free_energy_routes", cfg.trials, worst, worst >= 0,
             cfg);
}

PropertyResult coupling_bounds(const SuiteConfig& cfg) {
  double worst = 1e300;
  bool ok = true;
  for (int t = 0; t < cfg.trials; ++t) {
    Rng rng(cfg.seed, s_partition + 1000 * std::uint64_t(t));
    BogoliubovReport rep = bogoliubov_report(random_partitioned(rng, t));
    ok = ok && rep.pass;
    worst = std::min({worst, rep.lower_margin, rep.upper_margin, rep.gt_margin});
  }
  return row("bogoliubov", "coupling_bounds", cfg.trials, worst,
             ok && worst >= -cfg.margin_tol, cfg);
}

PropertyResult dv_upper(const SuiteConfig& cfg) {
  Rng rng(cfg.seed, s_dv);
  ModelSpec s;
  s.kind = ModelSpec::Kind::heisenberg_pair;
  s.field = 0.4 + 0.4 * rng.uniform();
  s.coupling = 0.5 + 0.5 * rng.uniform();
  s.beta = 0.5 + rng.uniform();
  DonskerVaradhanReport rep = donsker_varadhan_sup(build_partitioned_model(s));
  double worst = 1e300;
  for (double v : rep.trajectory)
    worst = std::min(worst, rep.delta_f + 1e-8 - v);
  worst = std::min(worst, 1e-9 - rep.at_one_residual);
  return row("bogoliubov", "dv_upper_bound", int(rep.trajectory.size()), worst,
             rep.pass && worst >= 0, cfg);
}

PropertyResult gibbs_variational(const SuiteConfig& cfg) {
  Rng rng(cfg.seed, s_gibbs_var);
  ModelSpec s;
  s.kind = ModelSpec::Kind::ising_chain;
  s.sites = 2;
  s.field = 0.5 + 0.5 * rng.uniform();
  s.coupling = 0.3 + 0.4 * rng.uniform();
  s.beta = 0.5 + rng.uniform();
  GibbsVariationalReport rep = gibbs_variational_inf(build_partitioned_model(s));
  double worst = 1e300;
  for (double v : rep.trajectory)
    worst = std::min(worst, v - rep.delta_f + 1e-8);
  return row("bogoliubov", "variational_descent", rep.iterations + 1, worst,
             rep.converged && rep.lower_bound_ok && rep.gradient_check_ok &&
                 worst >= 0,
             cfg);
}

}  // namespace

std::vector<PropertyResult> run_suite(const SuiteConfig& cfg) {
  if (cfg.trials < 1) throw data_error("suite needs at least one trial");
  if (cfg.dims.empty()) throw data_error("suite needs a non-empty dims list");
  for (int d : cfg.dims)
    if (d < 2 || d > 8)
      throw data_error("suite dims must lie in [2, 8]");

  std::vector<PropertyResult> rows;
  rows.push_back(spectral_reconstruction(cfg));
  rows.push_back(pseudoinverse_axioms(cfg));
  rows.push_back(bicommutant_closure(cfg));
  rows.push_back(full_commutant_scalar(cfg));
  rows.push_back(conditional_expectation_projection(cfg));
  rows.push_back(tomita_polar(cfg));
  rows.push_back(tomita_flow(cfg));
  rows.push_back(relative_modular_diagonal(cfg));
  rows.push_back(araki_matches_umegaki(cfg));
  rows.push_back(classical_diagonal_match(cfg));
  rows.push_back(uhlmann_limit(cfg));
  rows.push_back(zero_on_equal_states(cfg));
  rows.push_back(dpi_contracting(cfg, cfg.inject_bug));
  rows.push_back(dpi_unitary(cfg));
  rows.push_back(transpose_witness(cfg));
  rows.push_back(operator_inequality(cfg, "loewner_heinz", loewner_heinz_battery,
                                     s_loewner));
  rows.push_back(operator_inequality(cfg, "jensen_compression",
                                     jensen_compression_battery, s_jensen));
  rows.push_back(operator_inequality(cfg, "operator_interpolation",
                                     interpolation_battery, s_interp));
  rows.push_back(kms_boundary(cfg));
  rows.push_back(liouvillian_modular(cfg));
  rows.push_back(perturbation_identities(cfg));
  rows.push_back(exponential_bounds(cfg));
  rows.push_back(trotter_decay(cfg));
  rows.push_back(expansional_series(cfg));
  rows.push_back(free_energy_routes(cfg));
  rows.push_back(coupling_bounds(cfg));
  rows.push_back(dv_upper(cfg));
  rows.push_back(gibbs_variational(cfg));
  return rows;
}

bool all_pass(const std::vector<PropertyResult>& rows) {
  for (const PropertyResult& r : rows)
    if (!r.pass) return false;
  return true;
}

std::string suite_to_csv(const std::vector<PropertyResult>& rows) {
  std::string out = "module,property,trials,worst_margin,pass\n";
  for (const PropertyResult& r : rows) {
    out += r.module + "," + r.property + "," + std::to_string(r.trials) + "," +
           format_double(r.worst_margin) + "," + (r.pass ? "1" : "0") + "\n";
  }
  return out;
}

}  // namespace modent
