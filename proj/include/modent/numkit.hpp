#pragma once

// Dense Hermitian kernel: spectral decompositions, functional calculus,
// support-aware inverses, Kronecker lifts and the vec/unvec dictionary.
// Everything is templated on the scalar and takes Eigen expressions; all
// heavier machinery in the library reduces to calls into this header.

#include <algorithm>
#include <cmath>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include "modent/types.hpp"

namespace modent {

template <typename Derived>
bool all_finite(const Eigen::MatrixBase<Derived>& a) {
  return a.allFinite();
}

template <typename Derived>
double max_entry_norm(const Eigen::MatrixBase<Derived>& a) {
  if (a.size() == 0) return 0.0;
  return a.cwiseAbs().maxCoeff();
}

// max-entry norm of A - A^H, relative to 1 + max-entry norm of A.
template <typename Derived>
double hermiticity_defect(const Eigen::MatrixBase<Derived>& a) {
  Mat<typename Derived::Scalar> m = a.derived();
  double scale = 1.0 + max_entry_norm(m);
  return max_entry_norm(Mat<typename Derived::Scalar>(m - m.adjoint())) / scale;
}

template <typename Derived>
void require_square(const Eigen::MatrixBase<Derived>& a, const char* who) {
  if (a.rows() != a.cols())
    throw data_error(std::string(who) + ": matrix is not square");
  if (!all_finite(a))
    throw data_error(std::string(who) + ": matrix has non-finite entries");
}

template <typename Derived>
void require_hermitian(const Eigen::MatrixBase<Derived>& a, const char* who) {
  require_square(a, who);
  double d = hermiticity_defect(a);
  if (d > tol::herm)
    throw data_error(std::string(who) + ": Hermiticity defect " +
                     std::to_string(d) + " exceeds tolerance");
}

template <typename Derived>
Mat<typename Derived::Scalar> symmetrize(const Eigen::MatrixBase<Derived>& a) {
  Mat<typename Derived::Scalar> m = a.derived();
  return ((m + m.adjoint()) / 2.0).eval();
}

template <typename Scalar>
struct SpectralDecomposition {
  using Real = typename Eigen::NumTraits<Scalar>::Real;
  Vec<Real> eigenvalues;   // ascending
  Mat<Scalar> eigenvectors;  // columns, orthonormal

  Eigen::Index dim() const { return eigenvalues.size(); }
  Real max_abs_eigenvalue() const {
    return eigenvalues.size() ? eigenvalues.cwiseAbs().maxCoeff() : Real(0);
  }
};

// Validates Hermiticity, symmetrizes, and decomposes. Eigenvalues ascending.
template <typename Derived>
SpectralDecomposition<typename Derived::Scalar> eig_hermitian(
    const Eigen::MatrixBase<Derived>& a) {
  using Scalar = typename Derived::Scalar;
  require_hermitian(a, "eig_hermitian");
  Eigen::SelfAdjointEigenSolver<Mat<Scalar>> es(symmetrize(a));
  if (es.info() != Eigen::Success)
    throw data_error("eig_hermitian: eigensolver failed to converge");
  SpectralDecomposition<Scalar> d;
  d.eigenvalues = es.eigenvalues();
  d.eigenvectors = es.eigenvectors();
  return d;
}

// f is applied to each eigenvalue; may return real or complex values.
template <typename Scalar, typename F>
Mat<Scalar> spectral_apply(const SpectralDecomposition<Scalar>& d, F&& f) {
  const Eigen::Index n = d.dim();
  Vec<Scalar> fl(n);
  for (Eigen::Index i = 0; i < n; ++i) fl(i) = Scalar(f(d.eigenvalues(i)));
  return d.eigenvectors * fl.asDiagonal() * d.eigenvectors.adjoint();
}

template <typename Derived, typename F>
Mat<typename Derived::Scalar> spectral_apply(const Eigen::MatrixBase<Derived>& a,
                                             F&& f) {
  return spectral_apply(eig_hermitian(a), std::forward<F>(f));
}

template <typename Derived>
double min_eig_hermitian(const Eigen::MatrixBase<Derived>& a) {
  return eig_hermitian(a).eigenvalues(0);
}

template <typename Derived>
Mat<typename Derived::Scalar> herm_exp(const Eigen::MatrixBase<Derived>& a) {
  return spectral_apply(a, [](double x) { return std::exp(x); });
}

// Square root on the positive part; eigenvalues below the rank cutoff are
// treated as exact zeros, small negatives are clamped.
template <typename Scalar>
Mat<Scalar> herm_sqrt_psd(const SpectralDecomposition<Scalar>& d) {
  double cut = tol::rank * d.max_abs_eigenvalue();
  return spectral_apply(
      d, [cut](double x) { return x > cut ? std::sqrt(x) : 0.0; });
}

template <typename Derived>
Mat<typename Derived::Scalar> herm_sqrt_psd(const Eigen::MatrixBase<Derived>& a) {
  return herm_sqrt_psd(eig_hermitian(a));
}

// Logarithm restricted to the support: log(lambda) on kept eigenvalues,
// 0 on the kernel. Callers pair it with states living on that support.
template <typename Scalar>
Mat<Scalar> herm_log_on_support(const SpectralDecomposition<Scalar>& d) {
  double cut = tol::rank * d.max_abs_eigenvalue();
  return spectral_apply(d, [cut](double x) { return x > cut ? std::log(x) : 0.0; });
}

template <typename Derived>
Mat<typename Derived::Scalar> herm_log_on_support(
    const Eigen::MatrixBase<Derived>& a) {
  return herm_log_on_support(eig_hermitian(a));
}

template <typename Scalar>
Mat<Scalar> herm_pow_psd(const SpectralDecomposition<Scalar>& d, double t) {
  double cut = tol::rank * d.max_abs_eigenvalue();
  return spectral_apply(
      d, [cut, t](double x) { return x > cut ? std::pow(x, t) : 0.0; });
}

template <typename Derived>
Mat<typename Derived::Scalar> herm_pow_psd(const Eigen::MatrixBase<Derived>& a,
                                           double t) {
  return herm_pow_psd(eig_hermitian(a), t);
}

// Orthogonal projection onto the span of eigenvectors with |lambda| above
// the relative rank cutoff.
template <typename Scalar>
Mat<Scalar> range_projection(const SpectralDecomposition<Scalar>& d) {
  double cut = tol::rank * d.max_abs_eigenvalue();
  return spectral_apply(
      d, [cut](double x) { return std::abs(x) > cut ? 1.0 : 0.0; });
}

template <typename Derived>
Mat<typename Derived::Scalar> range_projection(const Eigen::MatrixBase<Derived>& a) {
  return range_projection(eig_hermitian(a));
}

// Moore-Penrose inverse of a PSD matrix through its spectrum.
template <typename Scalar>
Mat<Scalar> pinv_psd(const SpectralDecomposition<Scalar>& d) {
  double cut = tol::rank * d.max_abs_eigenvalue();
  return spectral_apply(d, [cut](double x) { return x > cut ? 1.0 / x : 0.0; });
}

template <typename Derived>
Mat<typename Derived::Scalar> pinv_psd(const Eigen::MatrixBase<Derived>& a) {
  return pinv_psd(eig_hermitian(a));
}

// True when some eigenvalue lands inside (0, 10 * rank_tol * scale]: the
// support decision is then conditioning-sensitive and results get flagged.
template <typename Scalar>
bool near_rank_boundary(const SpectralDecomposition<Scalar>& d) {
  double scale = d.max_abs_eigenvalue();
  double lo = tol::rank * scale, hi = 10.0 * tol::rank * scale;
  for (Eigen::Index i = 0; i < d.dim(); ++i) {
    double x = std::abs(d.eigenvalues(i));
    if (x > lo && x <= hi) return true;
  }
  return false;
}

template <typename Derived>
double op_norm(const Eigen::MatrixBase<Derived>& a) {
  if (a.size() == 0) return 0.0;
  Eigen::JacobiSVD<Mat<typename Derived::Scalar>> svd(a.derived());
  return svd.singularValues()(0);
}

template <typename DA, typename DB>
typename DA::Scalar hs_inner(const Eigen::MatrixBase<DA>& a,
                             const Eigen::MatrixBase<DB>& b) {
  return (a.adjoint() * b.derived()).trace();
}

// Kronecker product, block convention (A tensor B)[(i1 d2 + i2),(j1 d2 + j2)]
// = A[i1,j1] B[i2,j2].
template <typename DA, typename DB>
Mat<typename DA::Scalar> tensor_product(const Eigen::MatrixBase<DA>& a,
                                        const Eigen::MatrixBase<DB>& b) {
  return Eigen::kroneckerProduct(a.derived(), b.derived()).eval();
}

// Partial trace over one tensor factor of X acting on C^{d1} tensor C^{d2}.
template <typename Derived>
Mat<typename Derived::Scalar> partial_trace(const Eigen::MatrixBase<Derived>& x,
                                            int d1, int d2, int which) {
  using Scalar = typename Derived::Scalar;
  if (x.rows() != Eigen::Index(d1) * d2 || x.cols() != x.rows())
    throw data_error("partial_trace: dimension mismatch");
  if (which == 2) {
    Mat<Scalar> out = Mat<Scalar>::Zero(d1, d1);
    for (int i = 0; i < d1; ++i)
      for (int j = 0; j < d1; ++j)
        for (int k = 0; k < d2; ++k) out(i, j) += x(i * d2 + k, j * d2 + k);
    return out;
  }
  if (which == 1) {
    Mat<Scalar> out = Mat<Scalar>::Zero(d2, d2);
    for (int i = 0; i < d2; ++i)
      for (int j = 0; j < d2; ++j)
        for (int k = 0; k < d1; ++k) out(i, j) += x(k * d2 + i, k * d2 + j);
    return out;
  }
  throw data_error("partial_trace: factor index must be 1 or 2");
}

// Column-major flattening; with Eigen's default storage this is a reshape.
template <typename Derived>
Vec<typename Derived::Scalar> vec(const Eigen::MatrixBase<Derived>& a) {
  Mat<typename Derived::Scalar> m = a.derived();
  return Eigen::Map<const Vec<typename Derived::Scalar>>(m.data(), m.size());
}

template <typename Derived>
Mat<typename Derived::Scalar> unvec(const Eigen::MatrixBase<Derived>& v,
                                    int rows, int cols) {
  Vec<typename Derived::Scalar> w = v.derived();
  if (w.size() != Eigen::Index(rows) * cols)
    throw data_error("unvec: size mismatch");
  return Eigen::Map<const Mat<typename Derived::Scalar>>(w.data(), rows, cols);
}

// vec(A X) = (I tensor A) vec(X) for X square of size n.
template <typename Derived>
Mat<typename Derived::Scalar> left_mult_op(const Eigen::MatrixBase<Derived>& a) {
  require_square(a, "left_mult_op");
  int n = int(a.rows());
  return tensor_product(Mat<typename Derived::Scalar>::Identity(n, n), a.derived());
}

// vec(X B) = (B^T tensor I) vec(X).
template <typename Derived>
Mat<typename Derived::Scalar> right_mult_op(const Eigen::MatrixBase<Derived>& b) {
  require_square(b, "right_mult_op");
  int n = int(b.rows());
  return tensor_product(b.transpose(),
                        Mat<typename Derived::Scalar>::Identity(n, n));
}

// The flattened form of X -> X^H. Antilinear, so it is applied as a function
// rather than materialized as a matrix.
template <typename Derived>
Vec<typename Derived::Scalar> adjoint_vec(const Eigen::MatrixBase<Derived>& v,
                                          int n) {
  Mat<typename Derived::Scalar> x = unvec(v, n, n);
  return vec(Mat<typename Derived::Scalar>(x.adjoint()));
}

// Largest principal angle between the column spans of two orthonormal frames,
// computed through the sine (stable near zero, unlike acos of sigma_min).
// Frames of unequal rank compare as maximally apart.
template <typename DA, typename DB>
double largest_principal_angle(const Eigen::MatrixBase<DA>& qa,
                               const Eigen::MatrixBase<DB>& qb) {
  if (qa.cols() != qb.cols()) return std::asin(1.0);  // pi/2
  if (qa.cols() == 0) return 0.0;
  Mat<typename DA::Scalar> ra = qa.derived() - qb.derived() * (qb.adjoint() * qa.derived());
  Mat<typename DA::Scalar> rb = qb.derived() - qa.derived() * (qa.adjoint() * qb.derived());
  double s = std::max(op_norm(ra), op_norm(rb));
  return std::asin(std::clamp(s, 0.0, 1.0));
}

}  // namespace modent
