#include "qviab/composite.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "qviab/error.hpp"

namespace qviab::composite {

QuasiDistribution product_distribution(const QuasiDistribution& a, const QuasiDistribution& b) {
  std::vector<Variable> vars = a.space().variables();
  for (const auto& v : b.space().variables()) vars.push_back(v);
  OutcomeSpace space(std::move(vars));
  std::vector<double> values;
  values.reserve(space.cell_count());
  for (double x : a.values()) {
    for (double y : b.values()) values.push_back(x * y);
  }
  return QuasiDistribution(std::move(space), std::move(values), 1e-10);
}

lpmatch::MatchingProblem product_problem(const lpmatch::MatchingProblem& a, const lpmatch::MatchingProblem& b) {
  std::vector<Variable> vars = a.space.variables();
  for (const auto& v : b.space.variables()) vars.push_back(v);
  lpmatch::MatchingProblem prob{OutcomeSpace(std::move(vars)), {}, {}};
  const std::size_t offset = a.space.num_variables();
  for (const auto& ta : a.targets) {
    for (const auto& tb : b.targets) {
      lpmatch::Target t;
      t.subset = ta.subset;
      for (auto v : tb.subset) t.subset.push_back(v + offset);
      for (double x : ta.values) {
        for (double y : tb.values) t.values.push_back(x * y);
      }
      prob.targets.push_back(std::move(t));
    }
  }
  return prob;
}

DiosiReport diosi_check(const lpmatch::MatchingProblem& a, const lpmatch::MatchingProblem& b, double tol) {
  auto ra = lpmatch::solve(a, tol);
  if (!ra.feasible()) raise(ErrorCode::kComponentInfeasible, "component A has no matching probability");
  auto rb = lpmatch::solve(b, tol);
  if (!rb.feasible()) raise(ErrorCode::kComponentInfeasible, "component B has no matching probability");

  DiosiReport report{*ra.witness, *rb.witness, product_distribution(*ra.witness, *rb.witness)};
  const auto composite_problem = product_problem(a, b);
  report.residual = lpmatch::verify(report.product, composite_problem, tol).max_residual;

  const std::size_t na = a.space.num_variables(), nb = b.space.num_variables();
  Subset sa(na), sb(nb);
  for (std::size_t i = 0; i < na; ++i) sa[i] = i;
  for (std::size_t i = 0; i < nb; ++i) sb[i] = na + i;
  const auto ma = marginalize(report.product, sa);
  const auto mb = marginalize(report.product, sb);
  for (std::size_t i = 0; i < ma.dist.values().size(); ++i) {
    report.independence_residual = std::max(report.independence_residual, std::abs(ma.dist[i] - report.witness_a[i]));
  }
  for (std::size_t i = 0; i < mb.dist.values().size(); ++i) {
    report.independence_residual = std::max(report.independence_residual, std::abs(mb.dist[i] - report.witness_b[i]));
  }
  report.passed = report.residual <= tol && report.independence_residual <= 1e-12;
  return report;
}

std::optional<Lp2Counterexample> lp2_failure_demo(const quantum::DensityState& rho_a,
                                                  const quantum::DensityState& rho_b,
                                                  const std::vector<quantum::ProjectorString>& strings_a,
                                                  const std::vector<quantum::ProjectorString>& strings_b,
                                                  double margin) {
  std::vector<quantum::Complex> za, zb;
  za.reserve(strings_a.size());
  zb.reserve(strings_b.size());
  for (const auto& s : strings_a) za.push_back(quantum::class_trace(s, rho_a));
  for (const auto& s : strings_b) zb.push_back(quantum::class_trace(s, rho_b));

  for (std::size_t i = 0; i < za.size(); ++i) {
    // With Im z_A = 0 the product's real part is Re z_A Re z_B >= 0.
    if (za[i].real() < 0.0 || za[i].imag() == 0.0) continue;
    for (std::size_t j = 0; j < zb.size(); ++j) {
      if (zb[j].real() < 0.0) continue;
      const double re_ab = (za[i] * zb[j]).real();
      if (re_ab < -margin) {
        return Lp2Counterexample{i, j, za[i], zb[j], za[i].real(), zb[j].real(), re_ab};
      }
    }
  }
  return std::nullopt;
}

std::vector<quantum::Vec3> grid_directions(const DirectionGrid& grid) {
  if (grid.azimuthal == 0 || grid.polar == 0) raise(ErrorCode::kInvalidArgument, "empty direction grid");
  std::vector<quantum::Vec3> dirs;
  dirs.push_back({0.0, 0.0, 1.0});
  for (std::size_t k = 1; k < grid.polar; ++k) {
    const double polar = std::numbers::pi * static_cast<double>(k) / static_cast<double>(grid.polar);
    for (std::size_t j = 0; j < grid.azimuthal; ++j) {
      const double az = 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(grid.azimuthal);
      auto v = quantum::unit_vector(polar, az);
      const double norm = std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
      for (double& x : v) x /= norm;
      dirs.push_back(v);
    }
  }
  return dirs;
}

SpinStringFamily two_projector_family(const DirectionGrid& grid) {
  const auto dirs = grid_directions(grid);
  std::vector<quantum::CMatrix> proj;
  proj.reserve(dirs.size());
  for (const auto& d : dirs) proj.push_back(quantum::spin_projector(d, +1));

  SpinStringFamily fam;
  fam.strings.reserve(dirs.size() * dirs.size());
  for (std::size_t first = 0; first < dirs.size(); ++first) {
    for (std::size_t second = 0; second < dirs.size(); ++second) {
      fam.strings.emplace_back(std::vector<quantum::CMatrix>{proj[first], proj[second]});
      fam.directions.emplace_back(dirs[first], dirs[second]);
    }
  }
  return fam;
}

std::optional<DiosiDemo> default_diosi_demo(const DirectionGrid& grid, double margin) {
  Eigen::VectorXcd up(2);
  up << 1.0, 0.0;
  const auto rho = quantum::DensityState::pure(up);
  const auto fam = two_projector_family(grid);
  auto cx = lp2_failure_demo(rho, rho, fam.strings, fam.strings, margin);
  if (!cx) return std::nullopt;
  return DiosiDemo{*cx, fam.directions[cx->index_a], fam.directions[cx->index_b]};
}

}  // namespace qviab::composite
