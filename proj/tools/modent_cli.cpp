// Command line front end: reads matrices and model descriptions, drives the
// library checks, and emits machine readable reports. Exit codes: 0 all
// checks pass, 1 a property failed, 2 usage or parse problem, 3 an input
// violated a data invariant.

#include <cmath>
#include <cstdint>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "modent/algebra.hpp"
#include "modent/bogoliubov.hpp"
#include "modent/entropy.hpp"
#include "modent/io.hpp"
#include "modent/kms.hpp"
#include "modent/numkit.hpp"
#include "modent/random.hpp"
#include "modent/suite.hpp"

namespace {

using modent::CMat;
using ordered = nlohmann::ordered_json;

ordered entropy_json(const modent::EntropyValue& e) {
  ordered j;
  j["finite"] = e.finite();
  if (e.finite()) j["value"] = e.value;
  j["support_condition_met"] = e.support_condition_met;
  return j;
}

CMat unit_hermitian(modent::Rng& rng, int n) {
  CMat h = rng.hermitian(n);
  return h / std::max(1.0, modent::op_norm(h));
}

struct EntropyArgs {
  std::string rho_path, sigma_path, subalgebra_path;
  int uhlmann_levels = 12;
};

int run_entropy(const EntropyArgs& a) {
  using namespace modent;
  DensityMatrix rho(read_matrix_json(a.rho_path));
  DensityMatrix sigma(read_matrix_json(a.sigma_path));
  if (rho.dim() != sigma.dim())
    throw data_error("rho and sigma have different dimensions");

  EntropyValue u = umegaki(rho, sigma);
  EntropyValue ar = araki_spectral(rho, sigma);
  SupportCheck sup = support_condition(rho.matrix(), sigma.matrix());

  bool pass = u.infinite == ar.infinite;
  double agreement = 0;
  if (pass && !u.infinite) {
    agreement = std::abs(ar.value - u.value) / (1.0 + std::abs(u.value));
    pass = agreement <= 1e-8;
  }

  ordered out;
  out["schema"] = 1;
  out["n"] = rho.dim();
  out["umegaki"] = entropy_json(u);
  out["araki"] = entropy_json(ar);
  out["agreement"] = agreement;
  out["support"] = {{"met", sup.met}, {"leakage", sup.leakage}};

  // purely diagonal inputs admit the classical cross check in index order
  double off = std::max(
      max_entry_norm(CMat(rho.matrix() - CMat(rho.matrix().diagonal().asDiagonal()))),
      max_entry_norm(CMat(sigma.matrix() - CMat(sigma.matrix().diagonal().asDiagonal()))));
  if (off <= 1e-14) {
    RVec p = rho.matrix().diagonal().real();
    RVec q = sigma.matrix().diagonal().real();
    EntropyValue kl = kl_divergence(p, q);
    out["kl"] = entropy_json(kl);
    if (kl.infinite != u.infinite) pass = false;
    if (!kl.infinite && !u.infinite && std::abs(kl.value - u.value) > 1e-10)
      pass = false;
  }

  if (!ar.infinite) {
    std::vector<double> ts;
    for (int k = 0; k <= a.uhlmann_levels; ++k) ts.push_back(std::pow(2.0, -k));
    std::vector<double> f = uhlmann_approximants(rho, sigma, ts);
    ordered table = ordered::array();
    for (size_t k = 0; k < f.size(); ++k) {
      table.push_back({{"t", ts[k]}, {"value", f[k]}});
      if (k > 0 && f[k] < f[k - 1] - 1e-10) pass = false;
      if (f[k] > ar.value + 1e-8) pass = false;  // certified lower bounds
    }
    out["uhlmann"] = table;
  }

  if (!a.subalgebra_path.empty()) {
    std::vector<CMat> gens = read_generators_json(a.subalgebra_path);
    if (gens[0].rows() != rho.dim())
      throw data_error("subalgebra generators do not match the state dimension");
    StarAlgebra m = generate_star_algebra(gens, rho.dim());
    EntropyValue sub = entropy_on_subalgebra(m, rho.matrix(), sigma.matrix());
    ordered js = entropy_json(sub);
    js["algebra_dim"] = m.dim();
    if (!sub.infinite && !ar.infinite) {
      double margin = ar.value - sub.value;
      js["monotonicity_margin"] = margin;
      if (margin < -1e-8) pass = false;
    }
    if (sub.infinite && !ar.infinite) pass = false;
    out["subalgebra"] = js;
  }

  out["pass"] = pass;
  std::cout << out.dump(2) << "\n";
  return pass ? 0 : 1;
}

struct KmsArgs {
  std::string h_path, v_path;
  int dim = 3;
  double beta = 1.0;
  int trials = 25;
  bool trotter = false;
  std::uint64_t seed = 0;
};

int run_kms(const KmsArgs& a) {
  using namespace modent;
  CMat h;
  if (!a.h_path.empty()) {
    h = read_matrix_json(a.h_path);
    require_hermitian(h, "kms hamiltonian");
  } else {
    Rng hr(a.seed, 0x48aULL);
    h = unit_hermitian(hr, a.dim);
  }
  CMat v;
  if (!a.v_path.empty()) {
    v = read_matrix_json(a.v_path);
    require_hermitian(v, "kms perturbation");
    if (v.rows() != h.rows()) throw data_error("V does not match H in size");
  } else {
    Rng vr(a.seed, 0x7621ULL);
    v = unit_hermitian(vr, int(h.rows()));
  }

  FiniteQuantumSystem sys = gibbs_state(h, a.beta);
  bool pass = true;
  ordered out;
  out["schema"] = 1;
  out["n"] = sys.dim();
  out["beta"] = a.beta;

  KmsBoundaryReport kb = kms_boundary_check(sys, a.trials, a.seed + 0xb0ULL);
  out["boundary"] = {{"trials", kb.trials},
                     {"worst_residual", kb.worst_residual},
                     {"impostor_peak", kb.impostor_peak},
                     {"impostor_detected", kb.impostor_detected},
                     {"pass", kb.pass}};
  pass = pass && kb.pass;

  LiouvillianRep lr = standard_liouvillian(sys);
  out["liouvillian"] = {{"kernel_residual", lr.kernel_residual},
                        {"anticommute_residual", lr.anticommute_residual},
                        {"modular_residual", lr.modular_residual},
                        {"pass", lr.pass}};
  pass = pass && lr.pass;

  PerturbationEntropyReport pe = perturbation_entropy_report(sys, v);
  out["perturbation"] = {{"s_forward", pe.s_fwd},
                         {"s_backward", pe.s_bwd},
                         {"identities_residual", pe.identities_residual},
                         {"pass", pe.pass}};
  pass = pass && pe.pass;

  ExponentialBoundsReport eb = golden_thompson_peierls_report(sys, v);
  out["exponential_bounds"] = {{"trace_lhs", eb.trace_lhs},
                               {"trace_rhs", eb.trace_rhs},
                               {"lower_lhs", eb.lower_lhs},
                               {"lower_rhs", eb.lower_rhs},
                               {"pass", eb.pass}};
  pass = pass && eb.pass;

  if (a.trotter) {
    TrotterReport tr = trotter_check(h, v, 1.0, {8, 16, 32, 64});
    ordered jt;
    jt["steps"] = tr.steps;
    jt["errors"] = tr.errors;
    jt["ratios"] = tr.ratios;
    jt["commuting_exact"] = tr.commuting_exact;
    jt["pass"] = tr.pass;
    out["trotter"] = jt;
    pass = pass && tr.pass;
  }

  out["pass"] = pass;
  std::cout << out.dump(2) << "\n";
  return pass ? 0 : 1;
}

struct BogArgs {
  std::string model = "ising2";
  std::string blocks_path, coupling_path;
  int sites = 2;
  double field = 1.0;
  double coupling = 0.5;
  double beta = 1.0;
  bool variational = false;
};

int run_bogoliubov(const BogArgs& a) {
  using namespace modent;
  ModelSpec spec;
  spec.beta = a.beta;
  spec.sites = a.sites;
  spec.field = a.field;
  spec.coupling = a.coupling;
  if (a.model == "ising2") {
    spec.kind = ModelSpec::Kind::ising_chain;
  } else if (a.model == "pair") {
    spec.kind = ModelSpec::Kind::two_level_pair;
  } else if (a.model == "heisenberg") {
    spec.kind = ModelSpec::Kind::heisenberg_pair;
  } else if (a.model == "uncoupled") {
    spec.kind = ModelSpec::Kind::two_level_pair;
    spec.coupling = 0.0;
  } else {  // custom
    spec.kind = ModelSpec::Kind::custom;
    if (a.blocks_path.empty() || a.coupling_path.empty())
      throw data_error("custom model needs --blocks and --coupling-file");
    spec.custom_blocks = read_generators_json(a.blocks_path);
    spec.custom_coupling = read_matrix_json(a.coupling_path);
  }

  PartitionedSystem sys = build_partitioned_model(spec);
  FreeEnergyPaths paths = relative_free_energy_paths(sys);
  BogoliubovReport rep = bogoliubov_report(sys);
  bool pass = paths.pass && rep.pass;

  ordered out;
  out["schema"] = 1;
  out["model"] = a.model;
  out["n"] = sys.dim();
  out["beta"] = sys.beta;
  out["delta_f"] = rep.delta_f;
  out["paths"] = {{"from_partition", paths.from_partition},
                  {"from_vector", paths.from_vector},
                  {"from_entropy", paths.from_entropy},
                  {"spread", paths.spread},
                  {"pass", paths.pass}};
  out["bounds"] = {{"lower", rep.lower},
                   {"upper", rep.upper},
                   {"gt_lower", rep.gt_lower},
                   {"lower_margin", rep.lower_margin},
                   {"upper_margin", rep.upper_margin},
                   {"gt_margin", rep.gt_margin},
                   {"proof_identity_residual", rep.proof_identity_residual},
                   {"pass", rep.pass}};

  if (a.variational) {
    GibbsVariationalReport gv = gibbs_variational_inf(sys);
    ordered jg;
    jg["best_value"] = gv.best_value;
    jg["iterations"] = gv.iterations;
    jg["gradient_check_ok"] = gv.gradient_check_ok;
    jg["lower_bound_ok"] = gv.lower_bound_ok;
    jg["converged"] = gv.converged;
    jg["trajectory"] = gv.trajectory;
    out["gibbs_variational"] = jg;
    pass = pass && gv.converged;

    DonskerVaradhanReport dv = donsker_varadhan_sup(sys);
    out["donsker_varadhan"] = {{"best_value", dv.best_value},
                               {"best_s", dv.best_s},
                               {"at_one_residual", dv.at_one_residual},
                               {"shift_invariance_residual",
                                dv.shift_invariance_residual},
                               {"upper_bound_ok", dv.upper_bound_ok},
                               {"pass", dv.pass}};
    pass = pass && dv.pass;
  }

  out["pass"] = pass;
  std::cout << out.dump(2) << "\n";
  return pass ? 0 : 1;
}

struct SuiteArgs {
  std::uint64_t seed = 20260814;
  int trials = 10;
  std::vector<int> dims;
  std::string out_path;
  bool inject_bug = false;
};

int run_suite_cmd(const SuiteArgs& a) {
  using namespace modent;
  SuiteConfig cfg;
  cfg.seed = a.seed;
  cfg.trials = a.trials;
  if (!a.dims.empty()) cfg.dims = a.dims;
  cfg.inject_bug = a.inject_bug;

  std::vector<PropertyResult> rows = run_suite(cfg);
  std::string csv = suite_to_csv(rows);
  std::cout << csv;
  for (const PropertyResult& r : rows)
    if (!r.pass) std::cout << "# " << r.module << "/" << r.property << ": "
                           << r.replay << "\n";

  if (!a.out_path.empty()) {
    std::ofstream f(a.out_path, std::ios::binary);
    if (!f) throw data_error("cannot open '" + a.out_path + "' for writing");
    f << csv;
  }
  return all_pass(rows) ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"finite dimensional modular theory and equilibrium checks"};
  app.require_subcommand(1);

  std::uint64_t seed = 20260814;
  app.add_option("--seed", seed, "master seed for every random draw")
      ->envname("MODENT_SEED");

  EntropyArgs ea;
  CLI::App* entropy = app.add_subcommand(
      "entropy", "relative entropy of two density matrices, three ways");
  entropy->add_option("--rho", ea.rho_path, "state file (JSON matrix)")
      ->required();
  entropy->add_option("--sigma", ea.sigma_path, "reference state file")
      ->required();
  entropy->add_option("--subalgebra", ea.subalgebra_path,
                      "generator file; adds the restricted entropy");
  entropy->add_option("--uhlmann-levels", ea.uhlmann_levels,
                      "rows in the lower-bound table")
      ->check(CLI::Range(0, 40));

  KmsArgs ka;
  CLI::App* kms = app.add_subcommand(
      "kms", "equilibrium checks for a Hamiltonian at inverse temperature");
  kms->add_option("--hfile", ka.h_path, "Hamiltonian file (JSON matrix)");
  kms->add_option("--dim", ka.dim, "dimension of a generated Hamiltonian")
      ->check(CLI::Range(2, 8));
  kms->add_option("--beta", ka.beta, "inverse temperature")
      ->check(CLI::PositiveNumber);
  kms->add_option("--vfile", ka.v_path, "perturbation file");
  kms->add_option("--trials", ka.trials, "sampled observable pairs")
      ->check(CLI::Range(1, 10000));
  kms->add_flag("--trotter", ka.trotter, "append the product formula table");

  BogArgs ba;
  CLI::App* bog = app.add_subcommand(
      "bogoliubov", "free energy bounds for a partitioned system");
  bog->add_option("--model", ba.model, "builder name")
      ->check(CLI::IsMember({"ising2", "pair", "heisenberg", "uncoupled",
                             "custom"}));
  bog->add_option("--sites", ba.sites, "chain length for ising2")
      ->check(CLI::Range(2, 6));
  bog->add_option("--field", ba.field, "local term strength");
  bog->add_option("--coupling", ba.coupling, "interaction strength");
  bog->add_option("--beta", ba.beta, "inverse temperature")
      ->check(CLI::PositiveNumber);
  bog->add_option("--blocks", ba.blocks_path, "JSON generator list of blocks");
  bog->add_option("--coupling-file", ba.coupling_path, "JSON coupling matrix");
  bog->add_flag("--variational", ba.variational,
                "run both variational principles");

  SuiteArgs sa;
  CLI::App* suite = app.add_subcommand(
      "suite", "every property battery, one CSV row each");
  suite->add_option("--trials", sa.trials, "base batch size per battery")
      ->check(CLI::Range(1, 1000));
  suite->add_option("--dims", sa.dims, "dimensions to cycle through")
      ->check(CLI::Range(2, 8));
  suite->add_option("--out", sa.out_path, "also write the CSV here");
  suite->add_flag("--inject-bug", sa.inject_bug,
                  "self test: flip one inequality and expect a failure");

  for (CLI::App* sub : {entropy, kms, bog, suite}) sub->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    ka.seed = seed;
    sa.seed = seed;
    if (entropy->parsed()) return run_entropy(ea);
    if (kms->parsed()) return run_kms(ka);
    if (bog->parsed()) return run_bogoliubov(ba);
    return run_suite_cmd(sa);
  } catch (const modent::parse_error& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return 2;
  } catch (const modent::data_error& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 3;
  }
}
