#include "modent/algebra.hpp"

#include <cmath>

#include "modent/numkit.hpp"

namespace modent {

namespace {

StarAlgebra algebra_from_frame(const CMat& frame, int n) {
  StarAlgebra m;
  m.ambient_dim = n;
  m.basis.reserve(frame.cols());
  for (Eigen::Index j = 0; j < frame.cols(); ++j)
    m.basis.push_back(unvec(CVec(frame.col(j)), n, n));
  return m;
}

// Null space of a stacked linear map, columns orthonormal. The cutoff gets
// an absolute floor at scale 1: the rows come from unit HS-norm basis
// elements, so anything at 1e-16 is rounding noise even when it dominates
// sigma_max (as happens for the commutator map of the scalar algebra).
CMat null_space(const CMat& a) {
  Eigen::JacobiSVD<CMat> svd(a, Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  double smax = s.size() ? s(0) : 0.0;
  double cut = tol::rank * std::max(1.0, smax);
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > cut) ++rank;
  return svd.matrixV().rightCols(a.cols() - rank);
}

}  // namespace

CMat orthonormalize_columns(const CMat& f) {
  CMat q(f.rows(), f.cols());
  Eigen::Index kept = 0;
  for (Eigen::Index j = 0; j < f.cols(); ++j) {
    CVec v = f.col(j);
    for (int pass = 0; pass < 2; ++pass)
      for (Eigen::Index i = 0; i < kept; ++i) v -= q.col(i) * q.col(i).dot(v);
    double nrm = v.norm();
    if (nrm < tol::gs_drop) continue;
    q.col(kept++) = v / nrm;
  }
  return q.leftCols(kept);
}

StarAlgebra full_matrix_algebra(int n) {
  StarAlgebra m;
  m.ambient_dim = n;
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) {
      CMat e = CMat::Zero(n, n);
      e(i, j) = 1;
      m.basis.push_back(e);
    }
  return m;
}

StarAlgebra diagonal_algebra(int n) {
  StarAlgebra m;
  m.ambient_dim = n;
  for (int i = 0; i < n; ++i) {
    CMat e = CMat::Zero(n, n);
    e(i, i) = 1;
    m.basis.push_back(e);
  }
  return m;
}

StarAlgebra scalar_algebra(int n) {
  StarAlgebra m;
  m.ambient_dim = n;
  m.basis.push_back(CMat::Identity(n, n) / std::sqrt(double(n)));
  return m;
}

StarAlgebra generate_star_algebra(const std::vector<CMat>& generators, int n) {
  for (const CMat& g : generators)
    if (g.rows() != n || g.cols() != n)
      throw data_error("generate_star_algebra: generator dimension mismatch");

  CMat seed(n * n, 1 + 2 * Eigen::Index(generators.size()));
  seed.col(0) = vec(CMat(CMat::Identity(n, n)));
  for (size_t i = 0; i < generators.size(); ++i) {
    seed.col(1 + 2 * i) = vec(generators[i]);
    seed.col(2 + 2 * i) = vec(CMat(generators[i].adjoint()));
  }
  CMat frame = orthonormalize_columns(seed);

  // Each round adjoins all pairwise products and adjoints of the current
  // basis; dimension is strictly increasing until closure, so 2 n^2 rounds
  // is a safe cap.
  for (int round = 0; round < 2 * n * n; ++round) {
    Eigen::Index k = frame.cols();
    CMat cand(n * n, k + k * k + k);
    cand.leftCols(k) = frame;
    Eigen::Index col = k;
    std::vector<CMat> b;
    b.reserve(k);
    for (Eigen::Index i = 0; i < k; ++i) b.push_back(unvec(CVec(frame.col(i)), n, n));
    for (Eigen::Index i = 0; i < k; ++i)
      for (Eigen::Index j = 0; j < k; ++j) cand.col(col++) = vec(CMat(b[i] * b[j]));
    for (Eigen::Index i = 0; i < k; ++i) cand.col(col++) = vec(CMat(b[i].adjoint()));
    CMat next = orthonormalize_columns(cand);
    if (next.cols() == frame.cols()) {
      frame = next;
      break;
    }
    frame = next;
  }
  return algebra_from_frame(frame, n);
}

StarAlgebra commutant(const StarAlgebra& m) {
  int n = m.ambient_dim;
  int nn = n * n;
  if (m.dim() == 0) return full_matrix_algebra(n);
  CMat stacked(Eigen::Index(m.dim()) * nn, nn);
  for (int i = 0; i < m.dim(); ++i)
    stacked.middleRows(Eigen::Index(i) * nn, nn) =
        right_mult_op(m.basis[i]) - left_mult_op(m.basis[i]);
  return algebra_from_frame(null_space(stacked), n);
}

CMat algebra_frame(const StarAlgebra& m) {
  int nn = m.ambient_dim * m.ambient_dim;
  CMat f(nn, m.dim());
  for (int i = 0; i < m.dim(); ++i) f.col(i) = vec(m.basis[i]);
  return f;
}

double algebra_angle(const StarAlgebra& a, const StarAlgebra& b) {
  return largest_principal_angle(algebra_frame(a), algebra_frame(b));
}

CMat conditional_expectation(const StarAlgebra& m, const CMat& x) {
  if (x.rows() != m.ambient_dim || x.cols() != m.ambient_dim)
    throw data_error("conditional_expectation: dimension mismatch");
  CMat f = algebra_frame(m);
  return unvec(CVec(f * (f.adjoint() * vec(x))), m.ambient_dim, m.ambient_dim);
}

double distance_to_algebra(const StarAlgebra& m, const CMat& x) {
  return (x - conditional_expectation(m, x)).norm();
}

AlgebraInvariantReport algebra_invariant_report(const StarAlgebra& m) {
  AlgebraInvariantReport r;
  int n = m.ambient_dim;
  CMat f = algebra_frame(m);
  r.orthonormality_residual =
      (f.adjoint() * f - CMat::Identity(m.dim(), m.dim())).norm();
  CMat id = CMat::Identity(n, n);
  r.identity_residual = distance_to_algebra(m, id) / id.norm();
  for (int i = 0; i < m.dim(); ++i) {
    r.adjoint_residual = std::max(
        r.adjoint_residual, distance_to_algebra(m, CMat(m.basis[i].adjoint())));
    for (int j = 0; j < m.dim(); ++j) {
      CMat p = m.basis[i] * m.basis[j];
      r.product_residual = std::max(r.product_residual, distance_to_algebra(m, p));
    }
  }
  r.pass = r.orthonormality_residual <= 1e-10 && r.identity_residual <= 1e-8 &&
           r.adjoint_residual <= 1e-8 && r.product_residual <= 1e-8;
  return r;
}

BicommutantReport bicommutant_check(const StarAlgebra& m) {
  BicommutantReport r;
  StarAlgebra c = commutant(m);
  StarAlgebra cc = commutant(c);
  r.dim_m = m.dim();
  r.dim_commutant = c.dim();
  r.dim_bicommutant = cc.dim();
  r.angle = algebra_angle(m, cc);
  r.pass = r.dim_m == r.dim_bicommutant && r.angle <= tol::subspace;
  return r;
}

SupportProjectionReport support_projection_in(const StarAlgebra& m, const CMat& rho) {
  require_hermitian(rho, "support_projection_in");
  double scale = std::max(1.0, max_entry_norm(rho));
  if (min_eig_hermitian(rho) < -tol::herm * scale)
    throw data_error("support_projection_in: rho is not positive semidefinite");

  SupportProjectionReport r;
  CMat e = symmetrize(conditional_expectation(m, rho));
  auto d = eig_hermitian(e);
  r.projection = range_projection(d);
  double trr = rho.trace().real();
  r.mass = (rho * r.projection).trace().real();
  r.mass_defect = std::abs(r.mass - trr);
  r.membership_residual =
      distance_to_algebra(m, r.projection) / (1.0 + r.projection.norm());

  // Exactness of the support: removing any spectral cluster of E(rho) from P
  // must lose state mass, otherwise a smaller projection in M would do.
  double cut = tol::rank * d.max_abs_eigenvalue();
  r.minimal = true;
  Eigen::Index i = 0;
  while (i < d.dim()) {
    if (d.eigenvalues(i) <= cut) {
      ++i;
      continue;
    }
    Eigen::Index j = i;
    double cluster_mass = 0;
    CMat pc = CMat::Zero(m.ambient_dim, m.ambient_dim);
    while (j < d.dim() &&
           std::abs(d.eigenvalues(j) - d.eigenvalues(i)) <=
               1e-8 * (1.0 + d.max_abs_eigenvalue())) {
      pc += d.eigenvectors.col(j) * d.eigenvectors.col(j).adjoint();
      cluster_mass += d.eigenvalues(j);
      ++j;
    }
    double got = (rho * pc).trace().real();
    if (got < 0.5 * cluster_mass) r.minimal = false;
    i = j;
  }
  r.pass = r.mass_defect <= 1e-8 * (1.0 + std::abs(trr)) &&
           r.membership_residual <= 1e-8 && r.minimal;
  return r;
}

StarAlgebra center(const StarAlgebra& m) {
  int n = m.ambient_dim;
  CMat f = algebra_frame(m);
  CMat g = algebra_frame(commutant(m));
  CMat p1 = f * f.adjoint();
  CMat p2 = g * g.adjoint();
  auto d = eig_hermitian(CMat((p1 + p2) / 2.0));
  // Intersection of the two spans: eigenvalue 1 of the averaged projections.
  Eigen::Index keep = 0;
  for (Eigen::Index i = 0; i < d.dim(); ++i)
    if (d.eigenvalues(i) >= 1.0 - tol::subspace) ++keep;
  return algebra_from_frame(d.eigenvectors.rightCols(keep), n);
}

namespace {

int orbit_rank(const StarAlgebra& m, const CVec& xi) {
  CMat orbit(m.ambient_dim, m.dim());
  for (int i = 0; i < m.dim(); ++i) orbit.col(i) = m.basis[i] * xi;
  Eigen::JacobiSVD<CMat> svd(orbit);
  const auto& s = svd.singularValues();
  double cut = (s.size() ? s(0) : 0.0) * tol::rank;
  int rank = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > cut) ++rank;
  return rank;
}

}  // namespace

CyclicSeparatingReport cyclic_separating_report(const StarAlgebra& m, const CVec& xi) {
  if (xi.size() != m.ambient_dim)
    throw data_error("cyclic_separating_report: vector dimension mismatch");
  CyclicSeparatingReport r;
  r.orbit_rank = orbit_rank(m, xi);
  r.cyclic = r.orbit_rank == m.ambient_dim;
  // xi separates M exactly when it is cyclic for the commutant.
  r.commutant_orbit_rank = orbit_rank(commutant(m), xi);
  r.separating = r.commutant_orbit_rank == m.ambient_dim;
  return r;
}

}  // namespace modent
