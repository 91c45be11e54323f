#include "modent/kms.hpp"

#include <cmath>
#include <unsupported/Eigen/MatrixFunctions>

namespace modent {

namespace {

// e^{-beta(lambda - min)} keeps every weight in (0, 1]; ratios of weights
// reproduce differences of raw eigenvalues exactly.
RVec shifted_weights(const RVec& lam, double beta) {
  double m = lam.minCoeff();
  return ((-beta) * (lam.array() - m)).exp().matrix();
}

CMat phase_exp(const SpectralDecomposition<cplx>& d, double t) {
  return spectral_apply(d, [t](double x) { return std::exp(cplx(0, t * x)); });
}

}  // namespace

FiniteQuantumSystem gibbs_state(const CMat& h, double beta) {
  require_hermitian(h, "gibbs_state");
  if (!(beta > 0)) throw data_error("gibbs_state: beta must be positive");
  FiniteQuantumSystem sys;
  sys.h = h;
  sys.beta = beta;
  sys.h_eig = eig_hermitian(h);
  RVec w = shifted_weights(sys.h_eig.eigenvalues, beta);
  double zs = w.sum();
  sys.z = zs * std::exp(-beta * sys.h_eig.eigenvalues.minCoeff());
  CVec ratios = (w / zs).cast<cplx>();
  sys.rho = sys.h_eig.eigenvectors * ratios.asDiagonal() *
            sys.h_eig.eigenvectors.adjoint();
  sys.rho = symmetrize(sys.rho);
  return sys;
}

double kms_boundary_residual(const FiniteQuantumSystem& sys, const CMat& state,
                             const CMat& a, const CMat& b) {
  const int n = sys.dim();
  if (state.rows() != n || a.rows() != n || b.rows() != n)
    throw data_error("kms_boundary_residual: dimension mismatch");
  const CMat& u = sys.h_eig.eigenvectors;
  RVec w = shifted_weights(sys.h_eig.eigenvalues, sys.beta);
  CMat st = u.adjoint() * state * u;
  CMat at = u.adjoint() * a * u;
  CMat bt = u.adjoint() * b * u;
  cplx lhs = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        lhs += st(i, j) * at(j, k) * bt(k, i) * (w(k) / w(i));
  cplx rhs = (state * b * a).trace();
  double scale = 1 + op_norm(a) * op_norm(b);
  return std::abs(lhs - rhs) / scale;
}

KmsBoundaryReport kms_boundary_check(const FiniteQuantumSystem& sys, int trials,
                                     std::uint64_t seed) {
  const int n = sys.dim();
  KmsBoundaryReport rep;
  rep.trials = trials;
  Rng impostor_rng(seed, 0xabcdefULL);
  CMat impostor = impostor_rng.density(n);
  while ((impostor - sys.rho).norm() < 1e-6)
    impostor = impostor_rng.density(n);

  // Gibbs path: the state is exactly diagonal in its own eigenbasis, so the
  // first side collapses to a weighted double sum with only ratios of
  // weights, never a raw positive exponential.
  const CMat& u = sys.h_eig.eigenvectors;
  RVec w = shifted_weights(sys.h_eig.eigenvalues, sys.beta);
  double zs = w.sum();
  for (int t = 0; t < trials; ++t) {
    Rng rng(seed, std::uint64_t(t));
    CMat a = rng.gaussian(n, n), b = rng.gaussian(n, n);
    CMat at = u.adjoint() * a * u;
    CMat bt = u.adjoint() * b * u;
    cplx lhs = 0;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) lhs += at(i, j) * w(j) * bt(j, i) / zs;
    cplx rhs = (sys.rho * b * a).trace();
    double res = std::abs(lhs - rhs) / (1 + op_norm(a) * op_norm(b));
    rep.worst_residual = std::max(rep.worst_residual, res);
    double imp = kms_boundary_residual(sys, impostor, a, b);
    rep.impostor_peak = std::max(rep.impostor_peak, imp);
  }
  rep.impostor_detected = rep.impostor_peak > 1e-4;
  rep.pass = rep.worst_residual <= 1e-9 && rep.impostor_detected;
  return rep;
}

LiouvillianRep standard_liouvillian(const FiniteQuantumSystem& sys) {
  const int n = sys.dim();
  LiouvillianRep rep;
  rep.l = left_mult_op(sys.h) - right_mult_op(sys.h);
  rep.omega = vec(herm_sqrt_psd(eig_hermitian(sys.rho)));
  rep.kernel_residual = (rep.l * rep.omega).norm();

  // J L J = -L with J the adjoint map, probed on every matrix unit.
  double anti = 0;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      CMat e = CMat::Zero(n, n);
      e(i, j) = 1;
      CMat jl = unvec(CVec(rep.l * vec(CMat(e.adjoint()))), n, n);
      CVec r = vec(CMat(jl.adjoint())) + rep.l * vec(e);
      anti = std::max(anti, r.norm());
    }
  rep.anticommute_residual = anti;

  CMat delta = modular_data(sys.density()).delta;
  CMat exp_l = spectral_apply(eig_hermitian(rep.l), [&](double x) {
    return std::exp(-sys.beta * x);
  });
  rep.modular_residual = (delta - exp_l).norm() / (1 + delta.norm());

  rep.pass = rep.kernel_residual <= 1e-8 && rep.anticommute_residual <= 1e-10 &&
             rep.modular_residual <= 1e-7;
  return rep;
}

PerturbationResult perturb_state(const FiniteQuantumSystem& sys, const CMat& v) {
  require_hermitian(v, "perturb_state");
  const int n = sys.dim();
  if (v.rows() != n) throw data_error("perturb_state: dimension mismatch");
  PerturbationResult res;
  res.v = v;

  CMat hv = symmetrize(CMat(sys.h + v));
  auto hv_eig = eig_hermitian(hv);
  CMat half = spectral_apply(
      hv_eig, [&](double x) { return std::exp(-sys.beta * x / 2); });
  res.omega_v = symmetrize(CMat(half / std::sqrt(sys.z)));
  res.norm_sq = res.omega_v.squaredNorm();
  res.rho_v = symmetrize(CMat(res.omega_v * res.omega_v.adjoint() / res.norm_sq));

  CMat l = left_mult_op(sys.h) - right_mult_op(sys.h);
  res.l_v = l + left_mult_op(v) - right_mult_op(v);
  res.flow_kernel_residual =
      (res.l_v * vec(res.omega_v)).norm() / res.omega_v.norm();

  res.gibbs_residual = (res.rho_v - gibbs_state(hv, sys.beta).rho).norm();
  if (res.gibbs_residual > 1e-9)
    throw data_error("perturb_state: perturbed state drifted from Gibbs form");

  if (n <= 4) {
    // independent route: dense scaling-and-squaring exponential of the
    // one-sided generator applied to the implementing vector
    CMat gen = -(sys.beta / 2) * (l + left_mult_op(v));
    CMat expm = gen.exp();
    CMat omega = herm_sqrt_psd(eig_hermitian(sys.rho));
    CMat dual = unvec(CVec(expm * vec(omega)), n, n);
    res.dual_path_residual =
        (dual - res.omega_v).norm() / (1 + res.omega_v.norm());
    if (res.dual_path_residual > 1e-8)
      throw data_error("perturb_state: exponential paths disagree");
  }
  return res;
}

PerturbationEntropyReport perturbation_entropy_report(
    const FiniteQuantumSystem& sys, const CMat& v) {
  PerturbationEntropyReport rep;
  PerturbationResult pr = perturb_state(sys, v);

  double omega_v_mean = (sys.rho * v).trace().real();
  double perturbed_mean = (pr.rho_v * v).trace().real();
  rep.s_fwd = std::log(pr.norm_sq) + sys.beta * omega_v_mean;
  rep.s_bwd = -std::log(pr.norm_sq) - sys.beta * perturbed_mean;

  EntropyValue fwd = araki_spectral_raw(sys.rho, pr.rho_v);
  EntropyValue bwd = araki_spectral_raw(pr.rho_v, sys.rho);
  rep.s_fwd_residual = std::abs(rep.s_fwd - fwd.value) / (1 + std::abs(fwd.value));
  rep.s_bwd_residual = std::abs(rep.s_bwd - bwd.value) / (1 + std::abs(bwd.value));

  // log of the relative modular operator for the unnormalized perturbed
  // vector: the partition function cancels against the normalized side. The
  // left and right factors commute, so the log splits into one-sided logs;
  // taking the log after assembling the n^2 operator would lose the small
  // end of a spectrum that spans e^{+-beta |h|} decades.
  CMat unnorm = symmetrize(CMat(pr.omega_v * pr.omega_v.adjoint()));
  CMat log_delta = modular_data(sys.density()).log_delta;
  CMat log_p = herm_log_on_support(eig_hermitian(unnorm));
  CMat log_q = herm_log_on_support(eig_hermitian(sys.rho));

  CMat lhs_fwd = left_mult_op(log_p) - right_mult_op(log_q);
  CMat rhs_fwd = log_delta - sys.beta * left_mult_op(v);
  rep.log_forward_residual = (lhs_fwd - rhs_fwd).norm() / (1 + rhs_fwd.norm());
  CMat rel_fwd = relative_modular(unnorm, sys.rho).delta;
  rep.exp_forward_residual =
      (rel_fwd - herm_exp(rhs_fwd)).norm() / (1 + rel_fwd.norm());

  CMat log_delta_v = modular_data(pr.perturbed_density()).log_delta;
  CMat lhs_bwd = left_mult_op(log_q) - right_mult_op(log_p);
  CMat rhs_bwd = log_delta_v + sys.beta * left_mult_op(v);
  rep.log_backward_residual = (lhs_bwd - rhs_bwd).norm() / (1 + rhs_bwd.norm());
  CMat rel_bwd = relative_modular(sys.rho, unnorm).delta;
  rep.exp_backward_residual =
      (rel_bwd - herm_exp(rhs_bwd)).norm() / (1 + rel_bwd.norm());

  rep.identities_residual =
      std::max({rep.s_fwd_residual, rep.s_bwd_residual,
                rep.log_forward_residual, rep.log_backward_residual,
                rep.exp_forward_residual, rep.exp_backward_residual});
  rep.pass = rep.identities_residual <= 1e-7;
  return rep;
}

namespace {

// integral over 0 <= s_1 <= ... <= s_k <= t of tau_{s_1}(V)...tau_{s_k}(V),
// innermost integral first, 16-node Gauss-Legendre per level
struct DysonEvaluator {
  const SpectralDecomposition<cplx>& h_eig;
  const CMat& vt;  // V in the energy eigenbasis
  // nodes and weights on [0, 1]
  static const int kNodes = 16;
  RVec x, w;

  DysonEvaluator(const SpectralDecomposition<cplx>& he, const CMat& v)
      : h_eig(he), vt(v) {
    // 16-point Gauss-Legendre abscissas on [-1, 1], mapped below
    static const double xs[8] = {0.0950125098376374, 0.2816035507792589,
                                 0.4580167776572274, 0.6178762444026438,
                                 0.7554044083550030, 0.8656312023878318,
                                 0.9445750230732326, 0.9894009349916499};
    static const double ws[8] = {0.1894506104550685, 0.1826034150449236,
                                 0.1691565193950025, 0.1495959888165767,
                                 0.1246289712555339, 0.0951585116824928,
                                 0.0622535239386479, 0.0271524594117541};
    x.resize(kNodes);
    w.resize(kNodes);
    for (int i = 0; i < 8; ++i) {
      x(7 - i) = (1 - xs[i]) / 2;
      x(8 + i) = (1 + xs[i]) / 2;
      w(7 - i) = ws[i] / 2;
      w(8 + i) = ws[i] / 2;
    }
  }

  CMat flow(double s) const {
    const int n = vt.rows();
    CMat out(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        out(i, j) = vt(i, j) * std::exp(cplx(0, s * (h_eig.eigenvalues(i) -
                                                     h_eig.eigenvalues(j))));
    return out;
  }

  CMat iterated(int k, double s) const {
    const int n = vt.rows();
    if (k == 0) return CMat::Identity(n, n);
    CMat acc = CMat::Zero(n, n);
    for (int i = 0; i < kNodes; ++i) {
      double u = s * x(i);
      acc += (s * w(i)) * (iterated(k - 1, u) * flow(u));
    }
    return acc;
  }
};

}  // namespace

ExpansionalReport expansional(const FiniteQuantumSystem& sys, const CMat& v,
                              double t, int dyson_order) {
  require_hermitian(v, "expansional");
  if (dyson_order < 1) throw data_error("expansional: order must be positive");
  const int n = sys.dim();
  if (v.rows() != n) throw data_error("expansional: dimension mismatch");

  ExpansionalReport rep;
  CMat hv = symmetrize(CMat(sys.h + v));
  rep.closed_form = phase_exp(eig_hermitian(hv), t) * phase_exp(sys.h_eig, -t);
  rep.unitarity_residual =
      (rep.closed_form.adjoint() * rep.closed_form - CMat::Identity(n, n)).norm();

  CMat vt = sys.h_eig.eigenvectors.adjoint() * v * sys.h_eig.eigenvectors;
  CMat closed_t = sys.h_eig.eigenvectors.adjoint() * rep.closed_form *
                  sys.h_eig.eigenvectors;
  DysonEvaluator dyson(sys.h_eig, vt);
  CMat partial = CMat::Identity(n, n);
  rep.truncation_errors.push_back((closed_t - partial).norm());
  cplx ik = 1;
  for (int k = 1; k <= dyson_order; ++k) {
    ik *= cplx(0, 1);
    partial += ik * dyson.iterated(k, t);
    rep.truncation_errors.push_back((closed_t - partial).norm());
  }

  bool shrinking = true;
  for (size_t k = 1; k < rep.truncation_errors.size(); ++k)
    if (rep.truncation_errors[k] > 1e-12 &&
        rep.truncation_errors[k] >= rep.truncation_errors[k - 1])
      shrinking = false;
  rep.pass = rep.unitarity_residual <= 1e-9 && shrinking;
  return rep;
}

TrotterReport trotter_check(const CMat& a, const CMat& b, double t,
                            const std::vector<int>& n_list) {
  require_hermitian(a, "trotter_check");
  require_hermitian(b, "trotter_check");
  for (size_t i = 1; i < n_list.size(); ++i)
    if (n_list[i] <= n_list[i - 1])
      throw data_error("trotter_check: step counts must increase");

  TrotterReport rep;
  rep.steps = n_list;
  auto ea = eig_hermitian(a);
  auto eb = eig_hermitian(b);
  CMat target = phase_exp(eig_hermitian(CMat(a + b)), t);
  for (int n : n_list) {
    CMat step = phase_exp(ea, t / n) * phase_exp(eb, t / n);
    CMat prod = CMat::Identity(a.rows(), a.cols());
    for (int i = 0; i < n; ++i) prod = prod * step;
    rep.errors.push_back(op_norm(CMat(prod - target)));
  }
  for (size_t i = 0; i + 1 < rep.errors.size(); ++i)
    rep.ratios.push_back(rep.errors[i] /
                         std::max(rep.errors[i + 1], 1e-300));
  rep.commuting_exact = true;
  for (double e : rep.errors) rep.commuting_exact &= e <= 1e-12;
  if (rep.commuting_exact || rep.errors.empty()) {
    rep.pass = true;
  } else {
    double last = rep.ratios.empty() ? 0 : rep.ratios.back();
    rep.pass = last >= 1.7 && last <= 2.3;
  }
  return rep;
}

ExponentialBoundsReport golden_thompson_peierls_report(
    const FiniteQuantumSystem& sys, const CMat& v) {
  require_hermitian(v, "golden_thompson_peierls_report");
  ExponentialBoundsReport rep;
  PerturbationResult pr = perturb_state(sys, v);
  double beta = sys.beta;

  rep.trace_lhs = pr.norm_sq * sys.z;  // tr exp(-beta(h+v))
  CMat eh = spectral_apply(sys.h_eig, [&](double x) { return std::exp(-beta * x); });
  CMat ev = spectral_apply(eig_hermitian(v),
                           [&](double x) { return std::exp(-beta * x); });
  rep.trace_rhs = (eh * ev).trace().real();

  rep.vector_lhs = std::sqrt(pr.norm_sq);
  CMat omega = herm_sqrt_psd(eig_hermitian(sys.rho));
  CMat evh = spectral_apply(eig_hermitian(v),
                            [&](double x) { return std::exp(-beta * x / 2); });
  rep.vector_rhs = (evh * omega).norm();

  rep.lower_lhs = std::exp(-beta * (sys.rho * v).trace().real());
  rep.lower_rhs = pr.norm_sq;

  const double slack = 1e-9;
  rep.pass = rep.trace_lhs <= rep.trace_rhs * (1 + slack) &&
             rep.vector_lhs <= rep.vector_rhs * (1 + slack) &&
             rep.lower_lhs <= rep.lower_rhs * (1 + slack);
  return rep;
}

CMat spectral_truncation(const CMat& v, double cutoff) {
  require_hermitian(v, "spectral_truncation");
  if (cutoff < 0) throw data_error("spectral_truncation: cutoff must be >= 0");
  return spectral_apply(eig_hermitian(v), [cutoff](double x) {
    return std::abs(x) <= cutoff ? x : 0.0;
  });
}

}  // namespace modent
