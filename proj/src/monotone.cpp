#include "modent/monotone.hpp"

#include <cmath>

namespace modent {

namespace {

constexpr double kMarginTol = 1e-8;

void require_isometry_columns(const CMat& v, const char* who) {
  CMat g = v.adjoint() * v;
  if ((g - CMat::Identity(v.cols(), v.cols())).norm() > 1e-8 * (1 + g.norm()))
    throw data_error(std::string(who) + ": columns are not orthonormal");
}

CMat random_algebra_element(const StarAlgebra& m, Rng& rng) {
  CMat a = CMat::Zero(m.ambient_dim, m.ambient_dim);
  for (const CMat& b : m.basis) a += rng.cgauss() * b;
  return a;
}

}  // namespace

QuantumMap make_unitary_conjugation(const CMat& u) {
  require_square(u, "make_unitary_conjugation");
  require_isometry_columns(u, "make_unitary_conjugation");
  QuantumMap a;
  a.kind = MapKind::unitary_conjugation;
  a.dom_dim = a.cod_dim = int(u.rows());
  a.v = u;
  return a;
}

QuantumMap make_isometry_conjugation(const CMat& v) {
  if (v.cols() > v.rows())
    throw data_error("make_isometry_conjugation: more columns than rows");
  require_isometry_columns(v, "make_isometry_conjugation");
  QuantumMap a;
  a.kind = MapKind::isometry_conjugation;
  a.dom_dim = int(v.rows());
  a.cod_dim = int(v.cols());
  a.v = v;
  return a;
}

QuantumMap make_kraus_unital(const std::vector<CMat>& kraus) {
  if (kraus.empty()) throw data_error("make_kraus_unital: empty family");
  QuantumMap a;
  a.kind = MapKind::kraus_unital;
  a.dom_dim = int(kraus[0].rows());
  a.cod_dim = int(kraus[0].cols());
  CMat s = CMat::Zero(a.cod_dim, a.cod_dim);
  for (const CMat& k : kraus) {
    if (k.rows() != a.dom_dim || k.cols() != a.cod_dim)
      throw data_error("make_kraus_unital: inconsistent block shapes");
    s += k.adjoint() * k;
  }
  if ((s - CMat::Identity(a.cod_dim, a.cod_dim)).norm() > 1e-10 * (1 + s.norm()))
    throw data_error("make_kraus_unital: family is not unital");
  a.kraus = kraus;
  return a;
}

QuantumMap make_partial_trace_map(int d1, int d2) {
  if (d1 < 1 || d2 < 1) throw data_error("make_partial_trace_map: bad factors");
  std::vector<CMat> kraus;
  kraus.reserve(d2);
  for (int k = 0; k < d2; ++k) {
    CMat kk = CMat::Zero(d1, d1 * d2);  // I tensor e_k^H
    for (int i = 0; i < d1; ++i) kk(i, i * d2 + k) = 1;
    kraus.push_back(kk);
  }
  return make_kraus_unital(kraus);
}

QuantumMap make_pinching(const std::vector<CMat>& projections) {
  if (projections.empty()) throw data_error("make_pinching: empty family");
  int n = int(projections[0].rows());
  CMat sum = CMat::Zero(n, n);
  for (const CMat& p : projections) {
    require_hermitian(p, "make_pinching");
    if ((p * p - p).norm() > 1e-8 * (1 + p.norm()))
      throw data_error("make_pinching: block is not a projection");
    sum += p;
  }
  if ((sum - CMat::Identity(n, n)).norm() > 1e-8)
    throw data_error("make_pinching: projections do not resolve the identity");
  return make_kraus_unital(projections);
}

QuantumMap make_subalgebra_embedding(const StarAlgebra& m) {
  QuantumMap a;
  a.kind = MapKind::subalgebra_embedding;
  a.dom_dim = a.cod_dim = m.ambient_dim;
  a.domain_algebra = m;
  return a;
}

QuantumMap make_contraction_hom(const StarAlgebra& m1, const CMat& q, const CMat& v) {
  int n = m1.ambient_dim;
  require_hermitian(q, "make_contraction_hom");
  if ((q * q - q).norm() > 1e-8 * (1 + q.norm()))
    throw data_error("make_contraction_hom: q is not a projection");
  for (const CMat& b : m1.basis)
    if ((q * b - b * q).norm() > 1e-8)
      throw data_error("make_contraction_hom: q does not commute with the domain");
  require_isometry_columns(v, "make_contraction_hom");
  QuantumMap a;
  a.kind = MapKind::contraction_hom;
  a.dom_dim = a.cod_dim = n;
  a.domain_algebra = m1;
  a.q = q;
  a.v = v;
  return a;
}

QuantumMap make_random_unital_kraus(Rng& rng, int dom, int cod, int m) {
  std::vector<CMat> g;
  CMat s = CMat::Zero(cod, cod);
  for (int i = 0; i < m; ++i) {
    g.push_back(rng.gaussian(dom, cod));
    s += g.back().adjoint() * g.back();
  }
  CMat white = herm_pow_psd(eig_hermitian(s), -0.5);
  for (CMat& k : g) k = k * white;
  return make_kraus_unital(g);
}

CMat apply_map(const QuantumMap& a, const CMat& x) {
  if (x.rows() != a.dom_dim || x.cols() != a.dom_dim)
    throw data_error("apply_map: dimension mismatch");
  switch (a.kind) {
    case MapKind::unitary_conjugation:
    case MapKind::isometry_conjugation:
      return a.v.adjoint() * x * a.v;
    case MapKind::kraus_unital: {
      CMat out = CMat::Zero(a.cod_dim, a.cod_dim);
      for (const CMat& k : a.kraus) out += k.adjoint() * x * k;
      return out;
    }
    case MapKind::subalgebra_embedding:
      return x;
    case MapKind::contraction_hom:
      return a.v.adjoint() * a.q * x * a.v;
  }
  throw data_error("apply_map: unknown kind");
}

CMat apply_predual(const QuantumMap& a, const CMat& sigma) {
  if (sigma.rows() != a.cod_dim || sigma.cols() != a.cod_dim)
    throw data_error("apply_predual: dimension mismatch");
  switch (a.kind) {
    case MapKind::unitary_conjugation:
    case MapKind::isometry_conjugation:
      return a.v * sigma * a.v.adjoint();
    case MapKind::kraus_unital: {
      CMat out = CMat::Zero(a.dom_dim, a.dom_dim);
      for (const CMat& k : a.kraus) out += k * sigma * k.adjoint();
      return out;
    }
    case MapKind::subalgebra_embedding:
      return conditional_expectation(a.domain_algebra, sigma);
    case MapKind::contraction_hom:
      throw data_error("apply_predual: contraction_hom has no trace form");
  }
  throw data_error("apply_predual: unknown kind");
}

double unitality_defect(const QuantumMap& a) {
  CMat img = apply_map(a, CMat(CMat::Identity(a.dom_dim, a.dom_dim)));
  return (img - CMat::Identity(a.cod_dim, a.cod_dim)).norm();
}

PositivityReport schwarz_check(const QuantumMap& a, int trials, std::uint64_t seed) {
  PositivityReport r;
  r.trials = trials;
  bool algebra_domain = a.kind == MapKind::subalgebra_embedding ||
                        a.kind == MapKind::contraction_hom;
  double worst = 1e300;
  for (int t = 0; t < trials; ++t) {
    Rng rng(seed, std::uint64_t(t));
    CMat x = algebra_domain ? random_algebra_element(a.domain_algebra, rng)
                            : rng.gaussian(a.dom_dim, a.dom_dim);
    CMat lhs = apply_map(a, CMat(x.adjoint() * x));
    CMat ax = apply_map(a, x);
    CMat diff = symmetrize(CMat(lhs - ax.adjoint() * ax));
    worst = std::min(worst, min_eig_hermitian(diff) / (1.0 + lhs.norm()));
  }
  r.worst_margin = worst;
  r.pass = worst >= -kMarginTol;
  return r;
}

PositivityReport two_positive_check(const QuantumMap& a, int trials,
                                    std::uint64_t seed) {
  PositivityReport r;
  r.trials = trials;
  bool algebra_domain = a.kind == MapKind::subalgebra_embedding ||
                        a.kind == MapKind::contraction_hom;
  int d = a.dom_dim, c = a.cod_dim;
  double worst = 1e300;
  for (int t = 0; t < trials; ++t) {
    Rng rng(seed, std::uint64_t(t));
    CMat y;
    if (algebra_domain) {
      y = CMat::Zero(2 * d, 2 * d);
      for (const CMat& b : a.domain_algebra.basis)
        y += tensor_product(rng.gaussian(2, 2), b);
    } else {
      y = rng.gaussian(2 * d, 2 * d);
    }
    CMat block_psd = y.adjoint() * y;
    CMat out(2 * c, 2 * c);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        out.block(i * c, j * c, c, c) =
            apply_map(a, CMat(block_psd.block(i * d, j * d, d, d)));
    worst = std::min(worst,
                     min_eig_hermitian(symmetrize(out)) / (1.0 + out.norm()));
  }
  r.worst_margin = worst;
  r.pass = worst >= -kMarginTol;
  return r;
}

TransposeWitness transpose_two_positivity_witness() {
  TransposeWitness w;
  w.input = CMat::Zero(4, 4);
  // rank-2 PSD: 2 (|00> + |11>)(<00| + <11|) like block pattern plus a
  // middle block, spectrum {0, 0, 2, 4}
  w.input << 2, 0, 0, 2,
             0, 1, 1, 0,
             0, 1, 1, 0,
             2, 0, 0, 2;
  w.output = CMat::Zero(4, 4);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      w.output.block(2 * i, 2 * j, 2, 2) =
          w.input.block(2 * i, 2 * j, 2, 2).transpose();
  w.input_spectrum = eig_hermitian(w.input).eigenvalues;
  w.output_spectrum = eig_hermitian(w.output).eigenvalues;
  w.min_output_eigenvalue = w.output_spectrum(0);
  return w;
}

MonotonicityReport monotonicity_report(const QuantumMap& a, const DensityMatrix& psi,
                                       const DensityMatrix& phi) {
  if (psi.dim() != a.cod_dim || phi.dim() != a.cod_dim)
    throw data_error("monotonicity_report: states must live on the codomain");
  MonotonicityReport r;
  r.full = araki_spectral(psi, phi);
  if (a.kind == MapKind::subalgebra_embedding) {
    r.reduced = entropy_on_subalgebra(a.domain_algebra, psi.matrix(), phi.matrix());
  } else {
    CMat sp = symmetrize(apply_predual(a, psi.matrix()));
    CMat sq = symmetrize(apply_predual(a, phi.matrix()));
    r.reduced = araki_spectral_raw(sp, sq);
  }
  if (r.full.infinite) {
    r.trivially_true = true;
    r.pass = true;
    return r;
  }
  if (r.reduced.infinite) {  // finite full, infinite reduced: genuine violation
    r.pass = false;
    return r;
  }
  r.margin = r.full.value - r.reduced.value;
  r.pass = r.margin >= -kMarginTol * (1.0 + std::abs(r.full.value));
  if (a.kind == MapKind::unitary_conjugation)
    r.pass = std::abs(r.margin) <= kMarginTol * (1.0 + std::abs(r.full.value));
  return r;
}

DpiBatteryResult dpi_battery(int trials, std::uint64_t seed) {
  DpiBatteryResult res;
  res.trials = trials;
  double worst = 1e300, worst_u = 0;
  for (int t = 0; t < trials; ++t) {
    Rng rng(seed, std::uint64_t(t));
    QuantumMap map;
    switch (t % 5) {
      case 0: {
        int d1 = rng.uniform_int(2, 3), d2 = rng.uniform_int(2, 3);
        map = make_partial_trace_map(d1, d2);
        break;
      }
      case 1: {
        int n = rng.uniform_int(3, 6);
        int split = rng.uniform_int(1, n - 1);
        CMat u = rng.unitary(n);
        CMat p1 = CMat::Zero(n, n), p2 = CMat::Zero(n, n);
        for (int i = 0; i < split; ++i) p1(i, i) = 1;
        for (int i = split; i < n; ++i) p2(i, i) = 1;
        map = make_pinching({CMat(u * p1 * u.adjoint()), CMat(u * p2 * u.adjoint())});
        break;
      }
      case 2: {
        int dom = rng.uniform_int(2, 4), cod = rng.uniform_int(2, 4);
        map = make_random_unital_kraus(rng, dom, cod, rng.uniform_int(2, 3));
        break;
      }
      case 3: {
        int dom = rng.uniform_int(3, 5);
        int cod = rng.uniform_int(2, dom - 1);
        map = make_isometry_conjugation(rng.isometry(dom, cod));
        break;
      }
      default:
        map = make_unitary_conjugation(rng.unitary(rng.uniform_int(2, 5)));
    }
    DensityMatrix psi(rng.density(map.cod_dim)), phi(rng.density(map.cod_dim));
    MonotonicityReport mr = monotonicity_report(map, psi, phi);
    if (!mr.pass) res.failed_trials.push_back(t);
    if (map.kind == MapKind::unitary_conjugation)
      worst_u = std::max(worst_u, std::abs(mr.margin));
    else if (!mr.trivially_true)
      worst = std::min(worst, mr.margin);
  }
  res.worst_margin = worst;
  res.worst_unitary_deviation = worst_u;
  res.pass = res.failed_trials.empty();
  return res;
}

namespace {

void require_in_algebra(const StarAlgebra& m, const CMat& x, const char* what) {
  if (distance_to_algebra(m, x) > 1e-8 * (1 + x.norm()))
    throw data_error(std::string("vector_monotonicity: ") + what +
                     " is not in the stated algebra");
}

void require_subalgebra_of(const StarAlgebra& m1, const StarAlgebra& m2) {
  for (const CMat& b : m1.basis)
    if (distance_to_algebra(m2, b) > 1e-8)
      throw data_error("vector_monotonicity: M1 is not contained in M2");
}

void require_cyclic(const StarAlgebra& m, const CVec& xi, const char* what) {
  if (!cyclic_separating_report(m, xi).cyclic)
    throw data_error(std::string("vector_monotonicity: ") + what +
                     " is not cyclic for its algebra");
}

EntropyValue vector_entropy(const StarAlgebra& m, const CVec& xi, const CVec& eta) {
  return entropy_on_subalgebra(m, CMat(xi * xi.adjoint()), CMat(eta * eta.adjoint()));
}

}  // namespace

VectorMonotonicityReport vector_monotonicity_report(
    VectorMonotonicityMode mode, const StarAlgebra& m1, const StarAlgebra& m2,
    const CMat& v, const CVec& omega, const CVec& phi, const CMat& q) {
  const int n = m1.ambient_dim;
  if (m2.ambient_dim != n || omega.size() != n || phi.size() != n)
    throw data_error("vector_monotonicity: ambient dimensions disagree");

  using Mode = VectorMonotonicityMode;
  const bool has_v = mode != Mode::subalgebra_restriction;
  if (has_v && (v.rows() != n || v.cols() != n))
    throw data_error("vector_monotonicity: operator dimension mismatch");

  switch (mode) {
    case Mode::isometry_inclusion:
      require_subalgebra_of(m1, m2);
      require_in_algebra(m2, v, "the isometry");
      require_isometry_columns(v, "vector_monotonicity");
      require_cyclic(m1, CVec(v * omega), "V Omega");
      require_cyclic(m2, omega, "Omega");
      break;
    case Mode::subalgebra_restriction:
      require_subalgebra_of(m1, m2);
      require_cyclic(m1, omega, "Omega");
      break;
    case Mode::one_algebra_isometry:
      require_in_algebra(m1, v, "the isometry");
      require_isometry_columns(v, "vector_monotonicity");
      require_cyclic(m1, CVec(v * omega), "V Omega");
      require_cyclic(m1, omega, "Omega");
      break;
    case Mode::isometry_in_small:
      require_subalgebra_of(m1, m2);
      require_in_algebra(m1, v, "the isometry");
      require_isometry_columns(v, "vector_monotonicity");
      require_cyclic(m1, omega, "Omega");
      break;
    case Mode::partial_isometry: {
      require_subalgebra_of(m1, m2);
      require_in_algebra(m2, v, "the partial isometry");
      CMat e = v.adjoint() * v;
      if ((e * e - e).norm() > 1e-8 * (1 + e.norm()))
        throw data_error("vector_monotonicity: operator is not a partial isometry");
      if ((e * omega - omega).norm() > 1e-8 * (1 + omega.norm()))
        throw data_error(
            "vector_monotonicity: Omega lies outside the initial subspace");
      CyclicSeparatingReport r1 = cyclic_separating_report(m1, CVec(v * omega));
      CyclicSeparatingReport r2 = cyclic_separating_report(m2, omega);
      if (!r1.cyclic || !r1.separating)
        throw data_error(
            "vector_monotonicity: V Omega is not cyclic and separating for M1");
      if (!r2.cyclic || !r2.separating)
        throw data_error(
            "vector_monotonicity: Omega is not cyclic and separating for M2");
      break;
    }
    case Mode::unitary_reversed:
      require_subalgebra_of(m1, m2);
      require_in_algebra(m2, v, "the unitary");
      require_isometry_columns(v, "vector_monotonicity");
      require_isometry_columns(CMat(v.adjoint()), "vector_monotonicity");
      require_cyclic(m1, omega, "Omega");
      break;
    case Mode::automorphism_invariance:
      require_in_algebra(m1, v, "the unitary");
      require_isometry_columns(v, "vector_monotonicity");
      require_isometry_columns(CMat(v.adjoint()), "vector_monotonicity");
      require_cyclic(m1, omega, "Omega");
      break;
    case Mode::contraction_hom: {
      if (q.rows() != n || q.cols() != n)
        throw data_error("vector_monotonicity: contraction_hom needs q");
      // The dominated homomorphism is A -> q A with q a projection commuting
      // with M1 and living in M2; composed with conjugation by the isometry
      // it is subunital with dominated vector functionals.
      QuantumMap alpha = make_contraction_hom(m1, q, v);
      require_in_algebra(m2, q, "the image projection");
      require_in_algebra(m2, v, "the isometry");
      require_cyclic(m1, CVec(v * omega), "V Omega");
      require_cyclic(m2, omega, "Omega");
      CMat sub = CMat::Identity(n, n) - symmetrize(CMat(v.adjoint() * q * v));
      if (min_eig_hermitian(sub) < -1e-8)
        throw data_error("vector_monotonicity: composed map exceeds the identity");
      Rng rng(0x5eedULL);
      for (int t = 0; t < 8; ++t) {
        CMat x = random_algebra_element(m1, rng);
        CMat a = x.adjoint() * x;
        double through = (omega.adjoint() * apply_map(alpha, a) * omega).real()(0, 0);
        CVec vo = v * omega;
        double direct = (vo.adjoint() * a * vo).real()(0, 0);
        if (through > direct + 1e-8 * (1 + std::abs(direct)))
          throw data_error(
              "vector_monotonicity: functional domination fails for the map");
      }
      break;
    }
  }

  VectorMonotonicityReport rep;
  rep.equality_expected = mode == Mode::automorphism_invariance;
  switch (mode) {
    case Mode::isometry_inclusion:
    case Mode::one_algebra_isometry:
    case Mode::isometry_in_small:
    case Mode::partial_isometry:
    case Mode::contraction_hom:
    case Mode::automorphism_invariance:
      rep.small_side = vector_entropy(m1, CVec(v * omega), CVec(v * phi));
      rep.big_side = vector_entropy(m2, omega, phi);
      break;
    case Mode::subalgebra_restriction:
      rep.small_side = vector_entropy(m1, omega, phi);
      rep.big_side = vector_entropy(m2, omega, phi);
      break;
    case Mode::unitary_reversed:
      rep.small_side = vector_entropy(m1, omega, phi);
      rep.big_side = vector_entropy(m2, CVec(v * omega), CVec(v * phi));
      break;
  }

  if (rep.equality_expected) {
    if (rep.small_side.infinite && rep.big_side.infinite) {
      rep.pass = true;
    } else if (rep.small_side.finite() && rep.big_side.finite()) {
      rep.margin = rep.big_side.value - rep.small_side.value;
      rep.pass = std::abs(rep.margin) <=
                 kMarginTol * (1.0 + std::abs(rep.big_side.value));
    }
    return rep;
  }
  if (rep.big_side.infinite) {
    rep.trivially_true = true;
    rep.pass = true;
    return rep;
  }
  if (rep.small_side.infinite) {
    rep.pass = false;
    return rep;
  }
  rep.margin = rep.big_side.value - rep.small_side.value;
  rep.pass = rep.margin >= -kMarginTol * (1.0 + std::abs(rep.big_side.value));
  return rep;
}

OperatorInequalityReport loewner_heinz_battery(int trials, int max_dim,
                                               std::uint64_t seed) {
  OperatorInequalityReport r;
  r.trials = trials;
  double worst = 1e300;
  const double ts[] = {0.25, 0.5, 0.75};
  for (int t = 0; t < trials; ++t) {
    Rng rng(seed, std::uint64_t(t));
    int n = rng.uniform_int(2, max_dim);
    CMat b = rng.psd(n);
    CMat a = b + rng.psd(n);  // a >= b >= 0 by construction
    auto ea = eig_hermitian(a);
    auto eb = eig_hermitian(b);
    for (double p : ts) {
      CMat diff = symmetrize(CMat(herm_pow_psd(ea, p) - herm_pow_psd(eb, p)));
      worst = std::min(worst, min_eig_hermitian(diff) / (1.0 + diff.norm()));
    }
  }
  r.worst_margin = worst;
  r.pass = worst >= -kMarginTol;
  return r;
}

OperatorInequalityReport jensen_compression_battery(int trials, int max_dim,
                                                    std::uint64_t seed) {
  OperatorInequalityReport r;
  r.trials = trials;
  double worst = 1e300;
  const double ts[] = {0.25, 0.5, 0.75};
  for (int t = 0; t < trials; ++t) {
    Rng rng(seed, std::uint64_t(t));
    int n = rng.uniform_int(2, max_dim);
    CMat k = rng.contraction(n);
    CMat a = rng.psd(n);
    auto ea = eig_hermitian(a);
    for (double p : ts) {
      CMat compressed = symmetrize(CMat(k.adjoint() * a * k));
      CMat lhs = herm_pow_psd(eig_hermitian(compressed), p);
      CMat rhs = symmetrize(CMat(k.adjoint() * herm_pow_psd(ea, p) * k));
      CMat diff = symmetrize(CMat(lhs - rhs));
      worst = std::min(worst, min_eig_hermitian(diff) / (1.0 + lhs.norm()));
    }
  }
  r.worst_margin = worst;
  r.pass = worst >= -kMarginTol;
  return r;
}

OperatorInequalityReport interpolation_battery(int trials, int max_dim,
                                               std::uint64_t seed) {
  OperatorInequalityReport r;
  r.trials = trials;
  double worst = 1e300;
  const double ts[] = {0.25, 0.5, 0.75};
  for (int t = 0; t < trials; ++t) {
    Rng rng(seed, std::uint64_t(t));
    int n = rng.uniform_int(2, max_dim);
    CMat a1 = rng.psd(n) + 0.1 * CMat::Identity(n, n);
    CMat tmat = rng.contraction(n);
    CMat a2 = rng.psd(n);
    // scale a2 so the endpoint hypothesis T^H A2^2 T <= A1^2 holds tightly
    auto e1 = eig_hermitian(a1);
    CMat a1_inv = herm_pow_psd(e1, -1.0);
    double c = op_norm(CMat(a2 * tmat * a1_inv));
    if (c > 1e-12) a2 /= std::max(1.0, c);
    auto e2 = eig_hermitian(a2);
    for (double p : ts) {
      CMat diff = symmetrize(CMat(
          herm_pow_psd(e1, 2 * p) -
          tmat.adjoint() * herm_pow_psd(e2, 2 * p) * tmat));
      worst = std::min(worst, min_eig_hermitian(diff) / (1.0 + diff.norm()));
    }
  }
  r.worst_margin = worst;
  r.pass = worst >= -kMarginTol;
  return r;
}

}  // namespace modent
