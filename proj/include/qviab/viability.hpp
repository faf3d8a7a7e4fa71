#pragma once

// The viability test: collect a family of positive marginals of q and ask
// whether some true probability reproduces all of them. A negative answer is
// backed either by the LP (positive phase-1 optimum) or by a binary coarse
// graining on which a CHSH or Bell inequality fails.

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "qviab/qdist.hpp"

namespace qviab::viability {

enum class Status { kViable, kNonViable, kUnknown };
enum class Mode { kAllPositive, kSpecified };
enum class InequalityKind { kChsh, kBell };

std::string_view status_name(Status s) noexcept;
std::string_view mode_name(Mode m) noexcept;

inline constexpr std::size_t kDefaultSearchBudget = 100000;

// Variables are listed by role: for CHSH (x1, x2, y1, y2) play the parts of
// (1, 2, 3, 4) so the cycle pairs are (x_i, y_j); for Bell (1, 2, 3).
// plus_values[k] lists the alphabet values of variables[k] mapped to +1; all
// other values map to -1.
struct InequalityCertificate {
  InequalityKind kind = InequalityKind::kChsh;
  std::vector<std::size_t> variables;
  std::vector<std::vector<std::size_t>> plus_values;
  std::size_t combination = 0;      // which S_k (CHSH) or Bell combination, 0-based
  double value = 0.0;               // S_k, or the Bell left-hand side
  std::vector<double> correlators;  // (C13, C14, C23, C24) or (C12, C13, C23)
};

struct LpCertificate {
  double phase1_objective = 0.0;
  bool exact = false;
};

struct ViabilityReport {
  Status status = Status::kUnknown;
  Mode mode = Mode::kAllPositive;
  std::vector<Subset> family;                // the matched marginal family
  std::optional<QuasiDistribution> witness;  // iff viable
  std::optional<LpCertificate> lp;           // iff non-viable
  std::optional<InequalityCertificate> inequality;
  std::string note;
};

struct ViabilityOptions {
  Mode mode = Mode::kAllPositive;
  std::vector<Subset> subsets;  // used in specified mode
  double tol = kDefaultPosTol;
  // When the LP says non-viable, also look for an inequality certificate.
  std::size_t search_budget = kDefaultSearchBudget;
};

/// Throws NonPositiveSpecifiedMarginal (specified mode) or BadSubset. A cap
/// overrun yields status Unknown rather than an exception.
ViabilityReport viability_test(const QuasiDistribution& q, const ViabilityOptions& opts);

/// Searches binarizations of 3- and 4-variable selections whose pairs lie in
/// `family`, in deterministic order (triples before quadruples, lexicographic
/// selections and binarizations), for a Bell or CHSH violation. Returns the
/// first one found, or nothing once `budget` evaluations are spent. Absence
/// of a certificate says nothing about viability.
std::optional<InequalityCertificate> coarse_grain_search(const QuasiDistribution& q,
                                                         const std::vector<Subset>& family,
                                                         std::size_t budget = kDefaultSearchBudget,
                                                         double tol = kDefaultPosTol);

/// Re-evaluates the certificate's inequality from an explicit coarse graining
/// of q and its parity expansion; returns the recomputed value.
double recheck(const QuasiDistribution& q, const InequalityCertificate& cert);

}  // namespace qviab::viability
