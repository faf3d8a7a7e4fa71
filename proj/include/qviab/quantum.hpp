#pragma once

// Small dense complex-matrix layer: spin projectors, Kronecker products,
// density states and the Goldstein-Page quasi-probability
//
//   q(a_1..a_n) = Re Tr(P_{a_n} ... P_{a_1} rho).
//
// Ordering convention: the first projector in any list acts directly on rho,
// i.e. it is the rightmost factor inside the trace.

#include <array>
#include <complex>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

#include "qviab/qdist.hpp"

namespace qviab::quantum {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using Vec3 = std::array<double, 3>;

inline constexpr std::size_t kMaxDim = 64;

bool is_hermitian(const CMatrix& m, double tol = 1e-12);
bool is_idempotent(const CMatrix& m, double tol = 1e-10);

/// Validated on construction: hermitian, unit trace, eigenvalues >= -1e-9.
class DensityState {
 public:
  explicit DensityState(CMatrix rho);
  static DensityState pure(const Eigen::VectorXcd& psi);

  const CMatrix& matrix() const noexcept { return rho_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(rho_.rows()); }

 private:
  CMatrix rho_;
};

/// One projector per alternative; each hermitian and idempotent, summing to 1.
class ProjectiveDecomposition {
 public:
  explicit ProjectiveDecomposition(std::vector<CMatrix> projectors, std::string label = "");

  const std::vector<CMatrix>& projectors() const noexcept { return projectors_; }
  std::size_t size() const noexcept { return projectors_.size(); }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(projectors_.front().rows()); }
  const std::string& label() const noexcept { return label_; }

 private:
  std::vector<CMatrix> projectors_;
  std::string label_;
};

/// A history's class operator: factors listed in time order, first acts first.
class ProjectorString {
 public:
  explicit ProjectorString(std::vector<CMatrix> factors);

  const std::vector<CMatrix>& factors() const noexcept { return factors_; }
  std::size_t dim() const noexcept { return static_cast<std::size_t>(factors_.front().rows()); }

 private:
  std::vector<CMatrix> factors_;
};

CMatrix identity(std::size_t dim);
CMatrix pauli_x();
CMatrix pauli_y();
CMatrix pauli_z();

Vec3 unit_vector(double polar, double azimuth);

/// a . sigma. Throws NotUnit unless |a| = 1 within 1e-12.
CMatrix pauli_dot(const Vec3& a);

/// (1 + s a.sigma) / 2. Throws NotUnit or BadSign.
CMatrix spin_projector(const Vec3& a, int s);

/// {P_+, P_-} along a; index 0 is s = +1.
ProjectiveDecomposition spin_decomposition(const Vec3& a, std::string label = "");

/// Kronecker product with (i_A, i_B) row-major indexing.
CMatrix tensor(const CMatrix& a, const CMatrix& b);

/// (|up,down> - |down,up>) / sqrt 2, |up> the +z eigenstate.
DensityState singlet();

/// decomps[order[0]] acts first on rho, decomps[order[1]] next, and so on.
/// Output variables follow the decomposition list, not the order.
QuasiDistribution gp_quasiprob(const std::vector<ProjectiveDecomposition>& decomps,
                               const std::vector<std::size_t>& order, const DensityState& rho);

/// Equivalent to is_probability for a normalized q; only the lower bound
/// matters in practice.
bool linear_positivity(const QuasiDistribution& q, double tol = kDefaultPosTol);

/// Tr(C_n ... C_1 rho) as a complex number; its real part is the quasi-probability.
Complex class_trace(const ProjectorString& c, const DensityState& rho);

}  // namespace qviab::quantum
