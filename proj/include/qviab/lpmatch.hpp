#pragma once

// Marginal matching: does a true probability exist with prescribed marginals?
//
// The unknowns are the cell probabilities p >= 0 with sum 1; every target
// table contributes one equation per cell of its subspace. Feasibility is
// decided by a phase-1 simplex. The returned witness is simply the first
// vertex found; matching distributions are generally a family and no
// particular member is preferred.

#include <cstddef>
#include <optional>
#include <vector>

#include "qviab/qdist.hpp"

namespace qviab::lpmatch {

struct Target {
  Subset subset;               // 0-based, strictly increasing
  std::vector<double> values;  // table over the induced subspace, row-major
};

struct MatchingProblem {
  OutcomeSpace space;
  std::vector<Target> targets;
  std::vector<Outcome> zero_support;  // cells forced to probability 0
};

enum class Verdict { kFeasible, kInfeasible };

enum class Arithmetic {
  kDouble,
  kExact,  // rational arithmetic; limited to exact_cell_limit cells
  kAuto,   // double, re-solved exactly when the verdict sits near the tolerance band
};

struct SolveOptions {
  double tol = kDefaultPosTol;
  Arithmetic arithmetic = Arithmetic::kAuto;
  std::size_t exact_cell_limit = std::size_t{1} << 12;
  // Dense tableau size (rows x cells) beyond which solve throws CapExceeded.
  std::size_t tableau_limit = std::size_t{1} << 24;
};

struct MatchingResult {
  Verdict verdict = Verdict::kInfeasible;
  std::optional<QuasiDistribution> witness;  // present iff feasible
  double residual = 0.0;          // max constraint violation of the witness
  double phase1_objective = 0.0;  // > tol certifies infeasibility
  bool numerically_marginal = false;
  bool exact = false;             // verdict taken from rational arithmetic
  std::size_t pivots = 0;

  bool feasible() const noexcept { return verdict == Verdict::kFeasible; }
};

struct VerifyReport {
  double negativity = 0.0;     // max(0, -min p)
  double normalization = 0.0;  // |sum p - 1|
  std::vector<double> target_residuals;
  double zero_support_residual = 0.0;
  double max_residual = 0.0;
  bool passed = false;
};

/// Checks the problem invariants. Throws BadSubset, LengthMismatch,
/// OutOfRange (a target that is not a probability) or InconsistentTargets.
void validate(const MatchingProblem& prob, double tol = kDefaultPosTol);

MatchingResult solve(const MatchingProblem& prob, const SolveOptions& opts);
MatchingResult solve(const MatchingProblem& prob, double tol = kDefaultPosTol);

VerifyReport verify(const QuasiDistribution& witness, const MatchingProblem& prob,
                    double tol = kDefaultPosTol);

/// Solves with every cell where |q| <= tol forced to zero.
MatchingResult solve_with_zero_support(const QuasiDistribution& q,
                                       const std::vector<Target>& targets,
                                       double tol = kDefaultPosTol);

/// Targets taken from the marginals of q on each listed subset.
MatchingProblem problem_from_marginals(const QuasiDistribution& q,
                                       const std::vector<Subset>& family);

}  // namespace qviab::lpmatch
