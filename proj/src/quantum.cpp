#include "qviab/quantum.hpp"

#include <cmath>
#include <numeric>

#include <Eigen/Eigenvalues>

#include "qviab/error.hpp"

namespace qviab::quantum {

namespace {

void check_square(const CMatrix& m, const char* what) {
  if (m.rows() == 0 || m.rows() != m.cols()) raise(ErrorCode::kDimMismatch, std::string(what) + " must be square");
  if (static_cast<std::size_t>(m.rows()) > kMaxDim) {
    raise(ErrorCode::kCapExceeded, std::string(what) + " exceeds dimension " + std::to_string(kMaxDim));
  }
  if (!m.allFinite()) raise(ErrorCode::kInvalidArgument, std::string(what) + " has non-finite entries");
}

void check_unit(const Vec3& a) {
  const double norm = std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2]);
  if (std::abs(norm - 1.0) > 1e-12) raise(ErrorCode::kNotUnit, "direction is not a unit vector");
}

}  // namespace

bool is_hermitian(const CMatrix& m, double tol) {
  return m.rows() == m.cols() && (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

bool is_idempotent(const CMatrix& m, double tol) {
  return m.rows() == m.cols() && (m * m - m).cwiseAbs().maxCoeff() <= tol;
}

DensityState::DensityState(CMatrix rho) : rho_(std::move(rho)) {
  check_square(rho_, "density matrix");
  if (!is_hermitian(rho_, 1e-12)) raise(ErrorCode::kNotHermitian, "density matrix is not hermitian");
  if (std::abs(rho_.trace() - Complex(1.0)) > 1e-12) raise(ErrorCode::kNotDensity, "density matrix trace is not 1");
  Eigen::SelfAdjointEigenSolver<CMatrix> eig(rho_, Eigen::EigenvaluesOnly);
  if (eig.eigenvalues().minCoeff() < -1e-9) raise(ErrorCode::kNotDensity, "density matrix has a negative eigenvalue");
}

DensityState DensityState::pure(const Eigen::VectorXcd& psi) {
  const Eigen::VectorXcd v = psi / psi.norm();
  return DensityState(v * v.adjoint());
}

ProjectiveDecomposition::ProjectiveDecomposition(std::vector<CMatrix> projectors, std::string label)
    : projectors_(std::move(projectors)), label_(std::move(label)) {
  if (projectors_.size() < 2) raise(ErrorCode::kInvalidArgument, "a decomposition needs at least two projectors");
  const auto d = projectors_.front().rows();
  CMatrix total = CMatrix::Zero(d, d);
  for (const auto& p : projectors_) {
    check_square(p, "projector");
    if (p.rows() != d) raise(ErrorCode::kDimMismatch, "projectors of different dimensions");
    if (!is_hermitian(p, 1e-10) || !is_idempotent(p, 1e-10)) {
      raise(ErrorCode::kNotProjector, "matrix is not a hermitian idempotent");
    }
    total += p;
  }
  if ((total - CMatrix::Identity(d, d)).cwiseAbs().maxCoeff() > 1e-12) {
    raise(ErrorCode::kNotProjector, "projectors do not resolve the identity");
  }
}

ProjectorString::ProjectorString(std::vector<CMatrix> factors) : factors_(std::move(factors)) {
  if (factors_.empty()) raise(ErrorCode::kInvalidArgument, "empty projector string");
  for (const auto& p : factors_) {
    check_square(p, "projector");
    if (p.rows() != factors_.front().rows()) raise(ErrorCode::kDimMismatch, "string factors of different dimensions");
    if (!is_hermitian(p, 1e-10) || !is_idempotent(p, 1e-10)) {
      raise(ErrorCode::kNotProjector, "string factor is not a hermitian idempotent");
    }
  }
}

CMatrix identity(std::size_t dim) {
  return CMatrix::Identity(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(dim));
}

CMatrix pauli_x() {
  CMatrix m(2, 2);
  m << 0, 1, 1, 0;
  return m;
}

CMatrix pauli_y() {
  CMatrix m(2, 2);
  m << 0, Complex(0, -1), Complex(0, 1), 0;
  return m;
}

CMatrix pauli_z() {
  CMatrix m(2, 2);
  m << 1, 0, 0, -1;
  return m;
}

Vec3 unit_vector(double polar, double azimuth) {
  return {std::sin(polar) * std::cos(azimuth), std::sin(polar) * std::sin(azimuth), std::cos(polar)};
}

CMatrix pauli_dot(const Vec3& a) {
  check_unit(a);
  return a[0] * pauli_x() + a[1] * pauli_y() + a[2] * pauli_z();
}

CMatrix spin_projector(const Vec3& a, int s) {
  if (s != 1 && s != -1) raise(ErrorCode::kBadSign, "spin sign must be +1 or -1");
  return 0.5 * (identity(2) + static_cast<double>(s) * pauli_dot(a));
}

ProjectiveDecomposition spin_decomposition(const Vec3& a, std::string label) {
  return ProjectiveDecomposition({spin_projector(a, +1), spin_projector(a, -1)}, std::move(label));
}

CMatrix tensor(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

DensityState singlet() {
  // basis |up up>, |up down>, |down up>, |down down>
  Eigen::VectorXcd psi = Eigen::VectorXcd::Zero(4);
  psi(1) = 1.0 / std::sqrt(2.0);
  psi(2) = -1.0 / std::sqrt(2.0);
  return DensityState(psi * psi.adjoint());
}

QuasiDistribution gp_quasiprob(const std::vector<ProjectiveDecomposition>& decomps,
                               const std::vector<std::size_t>& order, const DensityState& rho) {
  const std::size_t n = decomps.size();
  if (n == 0) raise(ErrorCode::kInvalidArgument, "no decompositions given");
  if (order.size() != n) raise(ErrorCode::kInvalidArgument, "order must be a permutation of the decompositions");
  std::vector<bool> seen(n, false);
  for (auto k : order) {
    if (k >= n || seen[k]) raise(ErrorCode::kInvalidArgument, "order must be a permutation of the decompositions");
    seen[k] = true;
  }
  std::vector<Variable> vars;
  for (std::size_t k = 0; k < n; ++k) {
    if (decomps[k].dim() != rho.dim()) raise(ErrorCode::kDimMismatch, "decomposition dimension differs from the state");
    vars.push_back({decomps[k].label().empty() ? "a" + std::to_string(k + 1) : decomps[k].label(),
                    decomps[k].size()});
  }
  OutcomeSpace space(std::move(vars));
  std::vector<double> values(space.cell_count());

  // Depth-first over the application order so partial products are shared.
  std::vector<CMatrix> partial(n + 1);
  partial[0] = rho.matrix();
  Outcome outcome(n, 0);
  auto recurse = [&](auto&& self, std::size_t depth) -> void {
    if (depth == n) {
      values[space.index_of(outcome)] = partial[n].trace().real();
      return;
    }
    const auto& dec = decomps[order[depth]];
    for (std::size_t a = 0; a < dec.size(); ++a) {
      outcome[order[depth]] = a;
      partial[depth + 1].noalias() = dec.projectors()[a] * partial[depth];
      self(self, depth + 1);
    }
  };
  recurse(recurse, 0);
  return QuasiDistribution(std::move(space), std::move(values), 1e-10);
}

bool linear_positivity(const QuasiDistribution& q, double tol) {
  return is_probability(q, tol);
}

Complex class_trace(const ProjectorString& c, const DensityState& rho) {
  if (c.dim() != rho.dim()) raise(ErrorCode::kDimMismatch, "string dimension differs from the state");
  CMatrix m = rho.matrix();
  for (const auto& p : c.factors()) m = p * m;
  return m.trace();
}

}  // namespace qviab::quantum
