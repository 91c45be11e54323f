// Acceptance gate: one line per criterion, each verifying a structural
// property of the library at the tolerances the checks are documented to
// meet. Exits 0 only when every criterion passes. argv[1] names the CLI
// binary used by the determinism criterion.

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "modent/algebra.hpp"
#include "modent/bogoliubov.hpp"
#include "modent/entropy.hpp"
#include "modent/io.hpp"
#include "modent/kms.hpp"
#include "modent/modular.hpp"
#include "modent/monotone.hpp"
#include "modent/numkit.hpp"
#include "modent/random.hpp"

using namespace modent;

namespace {

constexpr std::uint64_t kSeed = 0xacce97ULL;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3g", x);
  return buf;
}

CMat unit_hermitian(Rng& rng, int n) {
  CMat h = rng.hermitian(n);
  return h / std::max(1.0, op_norm(h));
}

Outcome entropy_cross_validation() {
  double worst_gap = 0, worst_kl = 0;
  for (int t = 0; t < 300; ++t) {
    Rng rng(kSeed, 100 + std::uint64_t(t));
    int d = 2 + t % 7;
    CMat p, q;
    if (t % 3 == 0) {
      RVec dp(d), dq(d);
      for (int i = 0; i < d; ++i) {
        dp(i) = 0.05 + rng.uniform();
        dq(i) = 0.05 + rng.uniform();
      }
      dp /= dp.sum();
      dq /= dq.sum();
      p = dp.cast<cplx>().asDiagonal();
      q = dq.cast<cplx>().asDiagonal();
      EntropyValue kl = kl_divergence(dp, dq);
      worst_kl = std::max(worst_kl,
                          std::abs(kl.value - umegaki_raw(p, q).value));
    } else {
      p = rng.density(d);
      q = rng.density(d);
    }
    EntropyValue a = araki_spectral_raw(p, q);
    EntropyValue u = umegaki_raw(p, q);
    if (a.infinite || u.infinite) return {false, "unexpected infinite value"};
    worst_gap = std::max(worst_gap,
                         std::abs(a.value - u.value) / (1.0 + std::abs(u.value)));
  }
  bool ok = worst_gap <= 1e-8 && worst_kl <= 1e-10;
  return {ok, "worst spectral/trace gap " + fmt(worst_gap) +
                  ", worst classical gap " + fmt(worst_kl)};
}

Outcome bicommutant_closure() {
  double worst = 0;
  for (int t = 0; t < 50; ++t) {
    Rng rng(kSeed, 200 + std::uint64_t(t));
    int d = 2 + t % 5;
    std::vector<CMat> gens{rng.gaussian(d, d)};
    if (t % 2) gens.push_back(rng.hermitian(d));
    BicommutantReport rep = bicommutant_check(generate_star_algebra(gens, d));
    if (!rep.pass) return {false, "double commutant drifted"};
    worst = std::max(worst, rep.angle);
  }
  for (int n = 2; n <= 6; ++n)
    if (commutant(full_matrix_algebra(n)).dim() != 1)
      return {false, "full algebra commutant is not scalar"};
  bool ok = worst <= 1e-8;
  return {ok, "50 algebras, worst principal angle " + fmt(worst)};
}

Outcome tomita_standard_form() {
  double worst_polar = 0, worst_struct = 0;
  for (int d = 2; d <= 5; ++d) {
    Rng rng(kSeed, 300 + std::uint64_t(d));
    DensityMatrix rho(rng.density(d));
    ModularData md = modular_data(rho);
    CMat half = spectral_apply(md.delta_eig, [](double x) {
      return std::sqrt(std::max(0.0, x));
    });
    for (int t = 0; t < 100; ++t) {
      CMat a = rng.gaussian(d, d);
      a /= std::max(1.0, op_norm(a));
      CVec lhs = apply_adjoint_conjugation(CVec(half * vec(CMat(a * md.omega))), d);
      double res = (lhs - vec(CMat(a.adjoint() * md.omega))).norm();
      worst_polar = std::max(worst_polar, res);
    }
    TomitaReport rep = verify_tomita(full_matrix_algebra(d), rho);
    if (!rep.pass) return {false, "standard form verification failed"};
    worst_struct = std::max({worst_struct, rep.commutant_residual,
                             rep.flow_residual});
  }
  bool ok = worst_polar <= 1e-8 && worst_struct <= 1e-7;
  return {ok, "worst polar residual " + fmt(worst_polar) +
                  ", worst conjugated/flow residual " + fmt(worst_struct)};
}

Outcome dpi_battery_criterion() {
  DpiBatteryResult rep = dpi_battery(500, kSeed + 400);
  if (!rep.pass || rep.worst_margin < -1e-8 ||
      rep.worst_unitary_deviation > 1e-8)
    return {false, "entropy rose across a contracting map"};
  TransposeWitness w = transpose_two_positivity_witness();
  RVec expect(4);
  expect << -1, 1, 3, 3;
  double dev = (w.output_spectrum - expect).cwiseAbs().maxCoeff();
  bool ok = dev <= 1e-12;
  return {ok, "500 trials, worst margin " + fmt(rep.worst_margin) +
                  ", witness spectrum deviation " + fmt(dev)};
}

Outcome operator_inequalities() {
  OperatorInequalityReport lh = loewner_heinz_battery(200, 6, kSeed + 500);
  OperatorInequalityReport jc = jensen_compression_battery(200, 6, kSeed + 501);
  OperatorInequalityReport ip = interpolation_battery(200, 6, kSeed + 502);
  double worst =
      std::min({lh.worst_margin, jc.worst_margin, ip.worst_margin});
  bool ok = lh.pass && jc.pass && ip.pass && worst >= -1e-8;
  return {ok, "600 instances, worst eigenvalue margin " + fmt(worst)};
}

Outcome kms_boundary() {
  double worst_boundary = 0, worst_modular = 0;
  for (int t = 0; t < 20; ++t) {
    Rng rng(kSeed, 600 + std::uint64_t(t));
    int d = 2 + t % 4;
    double beta = 0.1 + 4.9 * rng.uniform();
    FiniteQuantumSystem sys = gibbs_state(unit_hermitian(rng, d), beta);
    KmsBoundaryReport rep = kms_boundary_check(sys, 100, kSeed + 600 + t);
    if (!rep.pass) return {false, "boundary identity failed or impostor missed"};
    worst_boundary = std::max(worst_boundary, rep.worst_residual);
    LiouvillianRep lr = standard_liouvillian(sys);
    if (!lr.pass) return {false, "flow generator checks failed"};
    worst_modular = std::max(worst_modular, lr.modular_residual);
  }
  bool ok = worst_boundary <= 1e-9 && worst_modular <= 1e-7;
  return {ok, "2000 pairs, worst residual " + fmt(worst_boundary) +
                  "; worst generator mismatch " + fmt(worst_modular)};
}

Outcome perturbation_identities() {
  double worst_dual = 0, worst_id = 0, worst_gibbs = 0;
  for (int t = 0; t < 100; ++t) {
    Rng rng(kSeed, 700 + std::uint64_t(t));
    int d = 2 + t % 3;
    double beta = 0.1 + 4.9 * rng.uniform();
    FiniteQuantumSystem sys = gibbs_state(unit_hermitian(rng, d), beta);
    CMat v = unit_hermitian(rng, d);
    PerturbationResult pr = perturb_state(sys, v);
    worst_dual = std::max(worst_dual, pr.dual_path_residual);
    worst_gibbs = std::max(worst_gibbs, pr.gibbs_residual);
    PerturbationEntropyReport rep = perturbation_entropy_report(sys, v);
    if (!rep.pass) return {false, "entropy identity failed"};
    worst_id = std::max(worst_id, rep.identities_residual);
  }
  bool ok = worst_dual <= 1e-8 && worst_id <= 1e-7 && worst_gibbs <= 1e-9;
  return {ok, "dual path " + fmt(worst_dual) + ", identities " + fmt(worst_id) +
                  ", equilibrium drift " + fmt(worst_gibbs)};
}

Outcome exponential_bounds() {
  double worst_slack = 1e300, worst_eq = 0;
  for (int t = 0; t < 200; ++t) {
    Rng rng(kSeed, 800 + std::uint64_t(t));
    int d = 2 + t % 5;
    double beta = 0.1 + 3.9 * rng.uniform();
    FiniteQuantumSystem sys = gibbs_state(unit_hermitian(rng, d), beta);
    ExponentialBoundsReport rep =
        golden_thompson_peierls_report(sys, unit_hermitian(rng, d));
    if (!rep.pass) return {false, "trace or vector bound failed"};
    worst_slack = std::min(
        {worst_slack,
         (rep.trace_rhs - rep.trace_lhs) / (1.0 + std::abs(rep.trace_rhs)),
         (rep.lower_rhs - rep.lower_lhs) / (1.0 + std::abs(rep.lower_rhs))});
  }
  for (int t = 0; t < 20; ++t) {
    Rng rng(kSeed, 850 + std::uint64_t(t));
    int d = 2 + t % 4;
    RVec a(d), b(d);
    for (int i = 0; i < d; ++i) {
      a(i) = 2.0 * rng.uniform() - 1.0;
      b(i) = 2.0 * rng.uniform() - 1.0;
    }
    CMat h = a.cast<cplx>().asDiagonal();
    CMat v = b.cast<cplx>().asDiagonal();
    double beta = 0.3 + 2.0 * rng.uniform();
    FiniteQuantumSystem sys = gibbs_state(h, beta);
    // commuting pair: the trace bound is tight; the vector bound only
    // tightens for scalar shifts, checked separately
    ExponentialBoundsReport rep = golden_thompson_peierls_report(sys, v);
    worst_eq = std::max(worst_eq, std::abs(rep.trace_rhs - rep.trace_lhs) /
                                      (1.0 + std::abs(rep.trace_rhs)));
    ExponentialBoundsReport sh = golden_thompson_peierls_report(
        sys, CMat(0.4 * CMat::Identity(d, d)));
    worst_eq = std::max(worst_eq, std::abs(sh.lower_rhs - sh.lower_lhs) /
                                      (1.0 + std::abs(sh.lower_rhs)));
  }
  bool ok = worst_slack >= -1e-9 && worst_eq <= 1e-10;
  return {ok, "200 pairs, smallest slack " + fmt(worst_slack) +
                  "; commuting equality gap " + fmt(worst_eq)};
}

Outcome two_sided_bounds() {
  const int da[] = {2, 3, 2, 4, 3};
  const int db[] = {2, 2, 4, 2, 3};
  double worst_margin = 1e300, worst_spread = 0;
  for (int t = 0; t < 100; ++t) {
    Rng rng(kSeed, 900 + std::uint64_t(t));
    ModelSpec s;
    s.kind = ModelSpec::Kind::custom;
    s.beta = 0.1 + 2.0 * rng.uniform();
    int a = da[t % 5], b = db[t % 5];
    s.custom_blocks = {unit_hermitian(rng, a), unit_hermitian(rng, b)};
    s.custom_coupling = 0.8 * unit_hermitian(rng, a * b);
    PartitionedSystem sys = build_partitioned_model(s);
    FreeEnergyPaths p = relative_free_energy_paths(sys);
    if (!p.pass) return {false, "free energy routes disagreed"};
    worst_spread = std::max(worst_spread, p.spread);
    BogoliubovReport rep = bogoliubov_report(sys);
    if (!rep.pass) return {false, "bound or proof identity failed"};
    worst_margin = std::min({worst_margin, rep.lower_margin, rep.upper_margin,
                             rep.gt_margin});
  }

  // diagonal fixture with the closed scalar form
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
  double h0s[] = {0.2, -0.4, 0.8, 0.2};
  double us[] = {0.3, -0.1, 0.5, 0.05};
  double z = 0, z0 = 0;
  for (int i = 0; i < 4; ++i) {
    z += std::exp(-1.7 * (h0s[i] + us[i]));
    z0 += std::exp(-1.7 * h0s[i]);
  }
  double analytic = -std::log(z / z0) / 1.7;
  double fixture_gap =
      std::abs(relative_free_energy(build_partitioned_model(s)) - analytic);

  bool ok = worst_margin >= -1e-8 && worst_spread <= 1e-8 &&
            fixture_gap <= 1e-10;
  return {ok, "100 systems, smallest margin " + fmt(worst_margin) +
                  ", route spread " + fmt(worst_spread) + ", fixture gap " +
                  fmt(fixture_gap)};
}

Outcome variational_principles() {
  ModelSpec s;
  s.kind = ModelSpec::Kind::ising_chain;
  s.sites = 2;
  s.field = 0.7;
  s.coupling = 0.4;
  s.beta = 1.3;
  PartitionedSystem sys = build_partitioned_model(s);
  double df = relative_free_energy(sys);

  VariationalConfig cfg;
  cfg.start = VariationalConfig::Start::mixed;
  GibbsVariationalReport gv = gibbs_variational_inf(sys, cfg);
  if (!gv.gradient_check_ok) return {false, "derivative cross-check failed"};
  if (!gv.lower_bound_ok) return {false, "an iterate dipped under the optimum"};
  if (gv.iterations > 5000) return {false, "descent exceeded 5000 iterations"};
  double gap = gv.best_value - df;
  if (gap > 1e-4) return {false, "descent stalled at gap " + fmt(gap)};

  DonskerVaradhanReport dv = donsker_varadhan_sup(sys);
  if (!dv.pass) return {false, "supremum side failed"};
  for (double v : dv.trajectory)
    if (v > df + 1e-8) return {false, "an evaluation exceeded the optimum"};

  bool ok = dv.at_one_residual <= 1e-9;
  return {ok, "descent gap " + fmt(gap) + " in " +
                  std::to_string(gv.iterations) + " iterations; witness residual " +
                  fmt(dv.at_one_residual)};
}

Outcome uhlmann_limit() {
  std::vector<double> ts;
  for (int k = 0; k <= 20; ++k) ts.push_back(std::pow(2.0, -k));
  double worst_final = 0, worst_mono = 1e300;
  for (int t = 0; t < 50; ++t) {
    Rng rng(kSeed, 1100 + std::uint64_t(t));
    int d = 2 + t % 5;
    DensityMatrix psi(rng.density(d)), phi(rng.density(d));
    double sv = araki_spectral(psi, phi).value;
    std::vector<double> f = uhlmann_approximants(psi, phi, ts);
    for (size_t k = 0; k + 1 < f.size(); ++k)
      worst_mono = std::min(worst_mono, f[k + 1] - f[k]);
    worst_final = std::max(worst_final, std::abs(f.back() - sv));
  }
  bool ok = worst_mono >= -1e-10 && worst_final <= 1e-3;
  return {ok, "50 pairs, smallest increment " + fmt(worst_mono) +
                  ", final gap " + fmt(worst_final)};
}

Outcome trotter_scaling() {
  CMat x(2, 2), z(2, 2);
  x << 0, 1, 1, 0;
  z << 1, 0, 0, -1;
  TrotterReport rep = trotter_check(x, CMat(0.7 * z), 1.0, {16, 32, 64});
  bool ok = rep.pass;
  std::string detail = "ratios";
  for (double r : rep.ratios) {
    detail += " " + fmt(r);
    ok = ok && r >= 1.7 && r <= 2.3;
  }
  return {ok, detail};
}

int run_cmd(const std::string& cmd) {
  int rc = std::system(cmd.c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Outcome cli_determinism(const std::string& cli) {
  if (cli.empty()) return {false, "no CLI path supplied"};
  std::string base = "/tmp/modent_accept";
  if (run_cmd(cli + " suite --seed 20260814 --trials 3 > " + base +
              "_1.csv 2>/dev/null") != 0)
    return {false, "suite run failed"};
  if (run_cmd(cli + " suite --seed 20260814 --trials 3 > " + base +
              "_2.csv 2>/dev/null") != 0)
    return {false, "suite rerun failed"};
  std::string a = read_file(base + "_1.csv"), b = read_file(base + "_2.csv");
  if (a.empty() || a != b) return {false, "reports differ between runs"};

  write_matrix_json(base + "_mixed.json",
                    CMat(0.5 * CMat::Identity(2, 2)));
  {
    std::ofstream bad(base + "_bad.json", std::ios::binary);
    bad << "{\"schema\":1,";
  }
  write_matrix_json(base + "_notdensity.json", CMat(2.0 * CMat::Identity(2, 2)));

  int ok_code = run_cmd(cli + " entropy --rho " + base + "_mixed.json --sigma " +
                        base + "_mixed.json > /dev/null 2>&1");
  int parse_code = run_cmd(cli + " entropy --rho " + base +
                           "_bad.json --sigma " + base +
                           "_mixed.json > /dev/null 2>&1");
  int data_code = run_cmd(cli + " entropy --rho " + base +
                          "_notdensity.json --sigma " + base +
                          "_mixed.json > /dev/null 2>&1");
  int usage_code =
      run_cmd(cli + " bogoliubov --beta -1 > /dev/null 2>&1");
  int fail_code = run_cmd(cli + " suite --seed 20260814 --trials 3 "
                          "--inject-bug > /dev/null 2>&1");

  bool ok = ok_code == 0 && parse_code == 2 && data_code == 3 &&
            usage_code == 2 && fail_code == 1;
  return {ok, "byte-identical reports; exit codes " + std::to_string(ok_code) +
                  "/" + std::to_string(fail_code) + "/" +
                  std::to_string(parse_code) + "/" + std::to_string(data_code) +
                  " for pass/fail/parse/data"};
}

}  // namespace

int main(int argc, char** argv) {
  std::string cli = argc > 1 ? argv[1] : "";
  std::vector<std::pair<const char*, std::function<Outcome()>>> criteria = {
      {"entropy definitions agree", entropy_cross_validation},
      {"double commutant closure", bicommutant_closure},
      {"standard form polar identity", tomita_standard_form},
      {"entropy contraction battery", dpi_battery_criterion},
      {"operator monotonicity family", operator_inequalities},
      {"equilibrium boundary identity", kms_boundary},
      {"perturbed vector identities", perturbation_identities},
      {"exponential trace bounds", exponential_bounds},
      {"two-sided free energy bounds", two_sided_bounds},
      {"variational principles", variational_principles},
      {"monotone lower-bound limit", uhlmann_limit},
      {"product formula error decay", trotter_scaling},
      {"cli determinism and exit codes", [cli] { return cli_determinism(cli); }},
  };

  int failures = 0;
  for (size_t i = 0; i < criteria.size(); ++i) {
    auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    double secs = std::chrono::duration<double>(
                      std::chrono::steady_clock::now() - start)
                      .count();
    std::printf("criterion %02zu %s (%6.2fs) %s: %s\n", i + 1,
                o.pass ? "PASS" : "FAIL", secs, criteria[i].first,
                o.detail.c_str());
    if (!o.pass) ++failures;
  }
  if (failures) std::printf("%d criterion(s) failed\n", failures);
  else std::printf("all 13 criteria passed\n");
  return failures ? 1 : 0;
}
