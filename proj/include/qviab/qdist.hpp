#pragma once

// Quasi-probabilities over finite product outcome spaces.
//
// Cells are stored row-major with the LAST variable varying fastest. For
// binary "spin" variables index 0 is sigma = +1 and index 1 is sigma = -1;
// every module in the library relies on that convention.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace qviab {

inline constexpr std::size_t kDefaultCellCap = std::size_t{1} << 20;
inline constexpr std::size_t kDefaultSubsetBudget = std::size_t{1} << 16;
inline constexpr double kDefaultNormTol = 1e-12;
inline constexpr double kDefaultPosTol = 1e-9;

using Subset = std::vector<std::size_t>;
using Outcome = std::vector<std::size_t>;

struct Variable {
  std::string label;
  std::size_t arity = 2;

  bool operator==(const Variable&) const = default;
};

class OutcomeSpace {
 public:
  explicit OutcomeSpace(std::vector<Variable> variables,
                        std::size_t cell_cap = kDefaultCellCap);

  /// n binary variables labelled s1..sn.
  static OutcomeSpace binary(std::size_t n);

  std::size_t num_variables() const noexcept { return variables_.size(); }
  const std::vector<Variable>& variables() const noexcept { return variables_; }
  std::size_t arity(std::size_t var) const { return variables_.at(var).arity; }
  std::size_t cell_count() const noexcept { return cells_; }
  bool all_binary() const noexcept;

  std::size_t index_of(std::span<const std::size_t> outcome) const;
  Outcome outcome_of(std::size_t index) const;
  std::size_t stride(std::size_t var) const { return strides_.at(var); }

  /// The space induced on a strictly increasing subset of variables.
  OutcomeSpace subspace(std::span<const std::size_t> subset) const;

  bool operator==(const OutcomeSpace& other) const {
    return variables_ == other.variables_;
  }

 private:
  std::vector<Variable> variables_;
  std::vector<std::size_t> strides_;
  std::size_t cells_ = 1;
};

class QuasiDistribution {
 public:
  QuasiDistribution(OutcomeSpace space, std::vector<double> values,
                    double norm_tol = kDefaultNormTol);

  const OutcomeSpace& space() const noexcept { return space_; }
  std::span<const double> values() const noexcept { return values_; }
  double operator[](std::size_t cell) const { return values_[cell]; }
  double at(std::span<const std::size_t> outcome) const {
    return values_[space_.index_of(outcome)];
  }
  double sum() const noexcept;

 private:
  OutcomeSpace space_;
  std::vector<double> values_;
};

struct Marginal {
  Subset subset;
  QuasiDistribution dist;
};

/// Validates length, finiteness and normalization; stores values verbatim.
QuasiDistribution make_distribution(OutcomeSpace space, std::vector<double> values,
                                    double norm_tol = kDefaultNormTol);

QuasiDistribution uniform(const OutcomeSpace& space);

/// Throws BadSubset unless `subset` is nonempty, strictly increasing and in range.
void validate_subset(const OutcomeSpace& space, std::span<const std::size_t> subset);

Marginal marginalize(const QuasiDistribution& q, std::span<const std::size_t> subset);

bool is_probability(const QuasiDistribution& q, double tol = kDefaultPosTol);

/// Maximal subsets whose marginals are probabilities. With `max_subset_size`
/// set, maximality is relative to the truncated family.
std::vector<Subset> positive_marginals(const QuasiDistribution& q,
                                       double tol = kDefaultPosTol,
                                       std::optional<std::size_t> max_subset_size = {},
                                       std::size_t subset_budget = kDefaultSubsetBudget);

/// p(a1..an) = q(a1)...q(an). Throws NegativeSingle if a single-variable
/// marginal is not a probability.
QuasiDistribution product_of_singles(const QuasiDistribution& q,
                                     double tol = kDefaultPosTol);

// A partition of one variable's alphabet into blocks; an empty block list
// stands for the identity partition.
struct Partition {
  std::vector<std::vector<std::size_t>> blocks;
  std::vector<std::string> labels;  // optional, one per block
};

struct CoarseGraining {
  std::vector<Partition> partitions;  // one per variable; missing trailing entries are identity
  std::vector<std::size_t> drop;      // variables summed out entirely
};

QuasiDistribution coarse_grain(const QuasiDistribution& q, const CoarseGraining& plan);

struct MarginalDeviation {
  Subset subset;
  double max_abs_diff = 0.0;
};

struct ModificationReport {
  std::vector<double> d;  // p - q
  double d_sum = 0.0;
  bool sums_to_zero = false;
  bool marginals_preserved = false;
  std::vector<MarginalDeviation> deviations;
};

/// d = p - q, compared on the maximal positive subsets of q.
ModificationReport modification(const QuasiDistribution& p, const QuasiDistribution& q,
                                double tol = kDefaultPosTol);

/// As above but compared on an explicit marginal family.
ModificationReport modification(const QuasiDistribution& p, const QuasiDistribution& q,
                                const std::vector<Subset>& family,
                                double tol = kDefaultPosTol);

}  // namespace qviab
