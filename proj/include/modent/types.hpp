#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>

namespace modent {

template <typename Scalar>
using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using Vec = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

using cplx = std::complex<double>;
using CMat = Mat<cplx>;
using CVec = Vec<cplx>;
using RMat = Mat<double>;
using RVec = Vec<double>;

// Global tolerance knobs. All comparisons in the library route through these;
// individual checks state their own acceptance thresholds on top.
namespace tol {
inline constexpr double herm = 1e-10;      // relative Hermiticity slack (max-entry norm)
inline constexpr double eig = 1e-12;       // relative eigendecomposition accuracy
inline constexpr double rank = 1e-10;      // relative rank / support cutoff
inline constexpr double subspace = 1e-8;   // principal-angle threshold for subspace equality
inline constexpr double gs_drop = 1e-10;   // Gram-Schmidt: drop vectors shorter than this
}  // namespace tol

// Raised when an input file or matrix fails structural parsing.
struct parse_error : std::runtime_error {
  explicit parse_error(const std::string& what) : std::runtime_error(what) {}
};

// Raised when data parses fine but violates a mathematical invariant
// (non-Hermitian where Hermitian is required, negative weight, trace off, ...).
struct data_error : std::runtime_error {
  explicit data_error(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace modent
