#pragma once

// Uncorrelated composite systems. Marginal matching factorizes: the product
// of component witnesses matches every product of component targets. The
// linear positivity condition does not, because
//   Re(z_A z_B) = Re z_A Re z_B - Im z_A Im z_B
// can be negative while both Re z_A and Re z_B are not.

#include <cstddef>
#include <optional>
#include <vector>

#include "qviab/lpmatch.hpp"
#include "qviab/qdist.hpp"
#include "qviab/quantum.hpp"

namespace qviab::composite {

/// Outcome space is A's variables followed by B's.
QuasiDistribution product_distribution(const QuasiDistribution& a, const QuasiDistribution& b);

/// Targets t_A x t_B for every pair of component targets. Zero supports are
/// not carried over.
lpmatch::MatchingProblem product_problem(const lpmatch::MatchingProblem& a,
                                         const lpmatch::MatchingProblem& b);

struct DiosiReport {
  QuasiDistribution witness_a;
  QuasiDistribution witness_b;
  QuasiDistribution product;
  double residual = 0.0;               // product witness vs product targets
  double independence_residual = 0.0;  // product marginals vs component witnesses
  bool passed = false;
};

/// Throws ComponentInfeasible if either component has no matching probability.
DiosiReport diosi_check(const lpmatch::MatchingProblem& a, const lpmatch::MatchingProblem& b,
                        double tol = kDefaultPosTol);

struct Lp2Counterexample {
  std::size_t index_a = 0;
  std::size_t index_b = 0;
  quantum::Complex z_a;
  quantum::Complex z_b;
  double re_a = 0.0;
  double re_b = 0.0;
  double re_ab = 0.0;
};

/// First pair in (index_a, index_b) order with Re z_A >= 0, Re z_B >= 0 and
/// Re(z_A z_B) < -margin.
std::optional<Lp2Counterexample> lp2_failure_demo(const quantum::DensityState& rho_a,
                                                  const quantum::DensityState& rho_b,
                                                  const std::vector<quantum::ProjectorString>& strings_a,
                                                  const std::vector<quantum::ProjectorString>& strings_b,
                                                  double margin = 0.0);

struct DirectionGrid {
  std::size_t azimuthal = 24;
  std::size_t polar = 12;  // polar angles k pi / polar, k = 0 .. polar-1; the pole appears once
};

std::vector<quantum::Vec3> grid_directions(const DirectionGrid& grid);

struct SpinStringFamily {
  std::vector<quantum::ProjectorString> strings;
  std::vector<std::pair<quantum::Vec3, quantum::Vec3>> directions;  // (first, second) applied
};

/// Strings P^{n2}_+ P^{n1}_+ for all ordered direction pairs of the grid,
/// n1 varying slowest.
SpinStringFamily two_projector_family(const DirectionGrid& grid);

struct DiosiDemo {
  Lp2Counterexample counterexample;
  std::pair<quantum::Vec3, quantum::Vec3> directions_a;
  std::pair<quantum::Vec3, quantum::Vec3> directions_b;
};

/// Both components in the +z spin state, both families from two_projector_family.
std::optional<DiosiDemo> default_diosi_demo(const DirectionGrid& grid = {}, double margin = 1e-3);

}  // namespace qviab::composite
