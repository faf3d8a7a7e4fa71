#include "qviab/qdist.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <sstream>
#include <unordered_set>

#include "qviab/error.hpp"

namespace qviab {

namespace {

// Calls fn(cell, outcome) for every cell in row-major order.
template <class Fn>
void for_each_cell(const OutcomeSpace& space, Fn&& fn) {
  Outcome outcome(space.num_variables(), 0);
  const std::size_t n = space.num_variables();
  for (std::size_t cell = 0; cell < space.cell_count(); ++cell) {
    fn(cell, outcome);
    for (std::size_t v = n; v-- > 0;) {
      if (++outcome[v] < space.arity(v)) break;
      outcome[v] = 0;
    }
  }
}

std::uint64_t subset_mask(const Subset& s) {
  std::uint64_t m = 0;
  for (auto v : s) m |= std::uint64_t{1} << v;
  return m;
}

// Next k-combination of {0..n-1} in lexicographic order.
bool next_combination(Subset& c, std::size_t n) {
  const std::size_t k = c.size();
  for (std::size_t i = k; i-- > 0;) {
    if (c[i] < n - k + i) {
      ++c[i];
      for (std::size_t j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
      return true;
    }
  }
  return false;
}

std::size_t count_subsets(std::size_t n, std::size_t max_k, std::size_t saturate) {
  std::size_t total = 0;
  double binom = 1.0;
  for (std::size_t k = 1; k <= max_k; ++k) {
    binom = binom * static_cast<double>(n - k + 1) / static_cast<double>(k);
    total += static_cast<std::size_t>(std::min(std::round(binom), 1e18));
    if (total > saturate) return total;
  }
  return total;
}

}  // namespace

OutcomeSpace::OutcomeSpace(std::vector<Variable> variables, std::size_t cell_cap)
    : variables_(std::move(variables)) {
  if (variables_.empty()) raise(ErrorCode::kInvalidArgument, "outcome space needs at least one variable");
  strides_.assign(variables_.size(), 1);
  for (std::size_t v = variables_.size(); v-- > 0;) {
    if (variables_[v].arity < 2) {
      raise(ErrorCode::kInvalidArgument,
            "variable '" + variables_[v].label + "' has arity < 2");
    }
    strides_[v] = cells_;
    if (cells_ > cell_cap / variables_[v].arity) {
      raise(ErrorCode::kCapExceeded,
            "cell count exceeds cap of " + std::to_string(cell_cap));
    }
    cells_ *= variables_[v].arity;
  }
}

OutcomeSpace OutcomeSpace::binary(std::size_t n) {
  std::vector<Variable> vars;
  vars.reserve(n);
  for (std::size_t i = 0; i < n; ++i) vars.push_back({"s" + std::to_string(i + 1), 2});
  return OutcomeSpace(std::move(vars));
}

bool OutcomeSpace::all_binary() const noexcept {
  return std::all_of(variables_.begin(), variables_.end(),
                     [](const Variable& v) { return v.arity == 2; });
}

std::size_t OutcomeSpace::index_of(std::span<const std::size_t> outcome) const {
  if (outcome.size() != variables_.size()) {
    raise(ErrorCode::kLengthMismatch, "outcome tuple has wrong length");
  }
  std::size_t idx = 0;
  for (std::size_t v = 0; v < outcome.size(); ++v) {
    if (outcome[v] >= variables_[v].arity) raise(ErrorCode::kOutOfRange, "outcome value out of range");
    idx += outcome[v] * strides_[v];
  }
  return idx;
}

Outcome OutcomeSpace::outcome_of(std::size_t index) const {
  Outcome out(variables_.size());
  for (std::size_t v = 0; v < variables_.size(); ++v) {
    out[v] = (index / strides_[v]) % variables_[v].arity;
  }
  return out;
}

OutcomeSpace OutcomeSpace::subspace(std::span<const std::size_t> subset) const {
  validate_subset(*this, subset);
  std::vector<Variable> vars;
  vars.reserve(subset.size());
  for (auto v : subset) vars.push_back(variables_[v]);
  return OutcomeSpace(std::move(vars));
}

QuasiDistribution::QuasiDistribution(OutcomeSpace space, std::vector<double> values,
                                     double norm_tol)
    : space_(std::move(space)), values_(std::move(values)) {
  if (values_.size() != space_.cell_count()) {
    raise(ErrorCode::kLengthMismatch,
          "expected " + std::to_string(space_.cell_count()) + " values, got " +
              std::to_string(values_.size()));
  }
  for (double x : values_) {
    if (!std::isfinite(x)) raise(ErrorCode::kInvalidArgument, "distribution entries must be finite");
  }
  const double s = sum();
  if (std::abs(s - 1.0) > norm_tol) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "values sum to " << s << ", not 1";
    raise(ErrorCode::kNotNormalized, msg.str());
  }
}

double QuasiDistribution::sum() const noexcept {
  // Neumaier summation; sums over 2^20 cells stay well inside the 1e-12 band.
  double s = 0.0, c = 0.0;
  for (double x : values_) {
    const double t = s + x;
    c += std::abs(s) >= std::abs(x) ? (s - t) + x : (x - t) + s;
    s = t;
  }
  return s + c;
}

QuasiDistribution make_distribution(OutcomeSpace space, std::vector<double> values,
                                    double norm_tol) {
  return QuasiDistribution(std::move(space), std::move(values), norm_tol);
}

QuasiDistribution uniform(const OutcomeSpace& space) {
  const double w = 1.0 / static_cast<double>(space.cell_count());
  return QuasiDistribution(space, std::vector<double>(space.cell_count(), w));
}

void validate_subset(const OutcomeSpace& space, std::span<const std::size_t> subset) {
  if (subset.empty()) raise(ErrorCode::kBadSubset, "subset is empty");
  for (std::size_t i = 0; i < subset.size(); ++i) {
    if (subset[i] >= space.num_variables()) {
      raise(ErrorCode::kBadSubset, "subset index " + std::to_string(subset[i]) + " out of range");
    }
    if (i > 0 && subset[i] <= subset[i - 1]) {
      raise(ErrorCode::kBadSubset, "subset indices must be strictly increasing");
    }
  }
}

Marginal marginalize(const QuasiDistribution& q, std::span<const std::size_t> subset) {
  const OutcomeSpace sub = q.space().subspace(subset);
  std::vector<double> out(sub.cell_count(), 0.0);
  std::vector<std::size_t> sub_stride(q.space().num_variables(), 0);
  for (std::size_t i = 0; i < subset.size(); ++i) sub_stride[subset[i]] = sub.stride(i);

  for_each_cell(q.space(), [&](std::size_t cell, const Outcome& o) {
    std::size_t idx = 0;
    for (auto v : subset) idx += o[v] * sub_stride[v];
    out[idx] += q[cell];
  });
  return Marginal{Subset(subset.begin(), subset.end()),
                  QuasiDistribution(sub, std::move(out), 1e-10)};
}

bool is_probability(const QuasiDistribution& q, double tol) {
  if (tol < 0) raise(ErrorCode::kInvalidArgument, "tolerance must be nonnegative");
  return std::all_of(q.values().begin(), q.values().end(),
                     [tol](double x) { return x >= -tol && x <= 1.0 + tol; });
}

std::vector<Subset> positive_marginals(const QuasiDistribution& q, double tol,
                                       std::optional<std::size_t> max_subset_size,
                                       std::size_t subset_budget) {
  const std::size_t n = q.space().num_variables();
  const std::size_t max_k = std::min(n, max_subset_size.value_or(n));
  if (n > 63 || count_subsets(n, max_k, subset_budget) > subset_budget) {
    raise(ErrorCode::kCapExceeded, "marginal enumeration exceeds the subset budget of " +
                                       std::to_string(subset_budget));
  }

  // Level-wise search. A subset is examined only when all its one-smaller
  // subsets are positive, since positivity is inherited downward.
  std::vector<std::vector<Subset>> levels(max_k + 1);
  std::unordered_set<std::uint64_t> positive;
  for (std::size_t k = 1; k <= max_k; ++k) {
    Subset c(k);
    std::iota(c.begin(), c.end(), std::size_t{0});
    do {
      bool candidate = true;
      if (k > 1) {
        const auto m = subset_mask(c);
        for (auto v : c) {
          if (!positive.count(m & ~(std::uint64_t{1} << v))) {
            candidate = false;
            break;
          }
        }
      }
      if (candidate && is_probability(marginalize(q, c).dist, tol)) {
        positive.insert(subset_mask(c));
        levels[k].push_back(c);
      }
    } while (next_combination(c, n));
    if (levels[k].empty()) break;
  }

  std::vector<Subset> maximal;
  for (std::size_t k = max_k; k >= 1; --k) {
    for (const auto& s : levels[k]) {
      bool has_super = false;
      if (k < max_k) {
        const auto m = subset_mask(s);
        for (const auto& t : levels[k + 1]) {
          if ((subset_mask(t) & m) == m) {
            has_super = true;
            break;
          }
        }
      }
      if (!has_super) maximal.push_back(s);
    }
  }
  std::sort(maximal.begin(), maximal.end(), [](const Subset& a, const Subset& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  });
  return maximal;
}

QuasiDistribution product_of_singles(const QuasiDistribution& q, double tol) {
  const OutcomeSpace& space = q.space();
  const std::size_t n = space.num_variables();
  std::vector<std::vector<double>> singles(n);
  for (std::size_t v = 0; v < n; ++v) {
    const std::size_t sub[] = {v};
    const auto m = marginalize(q, sub);
    if (!is_probability(m.dist, tol)) {
      raise(ErrorCode::kNegativeSingle,
            "single-variable marginal of variable " + std::to_string(v) + " is not a probability");
    }
    // Clamp the tolerance band so the product is a true probability.
    auto& s = singles[v];
    s.assign(m.dist.values().begin(), m.dist.values().end());
    for (double& x : s) x = std::clamp(x, 0.0, 1.0);
    const double total = std::accumulate(s.begin(), s.end(), 0.0);
    for (double& x : s) x /= total;
  }
  std::vector<double> out(space.cell_count());
  for_each_cell(space, [&](std::size_t cell, const Outcome& o) {
    double p = 1.0;
    for (std::size_t v = 0; v < n; ++v) p *= singles[v][o[v]];
    out[cell] = p;
  });
  return QuasiDistribution(space, std::move(out), 1e-10);
}

QuasiDistribution coarse_grain(const QuasiDistribution& q, const CoarseGraining& plan) {
  const OutcomeSpace& space = q.space();
  const std::size_t n = space.num_variables();
  if (plan.partitions.size() > n) raise(ErrorCode::kBadPartition, "more partitions than variables");

  std::vector<bool> dropped(n, false);
  for (auto v : plan.drop) {
    if (v >= n) raise(ErrorCode::kBadPartition, "dropped variable index out of range");
    dropped[v] = true;
  }

  // block_of[v][value] for each kept variable
  std::vector<std::vector<std::size_t>> block_of(n);
  std::vector<Variable> kept_vars;
  std::vector<std::size_t> kept;
  for (std::size_t v = 0; v < n; ++v) {
    if (dropped[v]) continue;
    const std::size_t d = space.arity(v);
    const Partition* part = v < plan.partitions.size() ? &plan.partitions[v] : nullptr;
    auto& map = block_of[v];
    if (part == nullptr || part->blocks.empty()) {
      map.resize(d);
      std::iota(map.begin(), map.end(), std::size_t{0});
      kept_vars.push_back(space.variables()[v]);
    } else {
      map.assign(d, d);
      for (std::size_t b = 0; b < part->blocks.size(); ++b) {
        if (part->blocks[b].empty()) raise(ErrorCode::kBadPartition, "empty block");
        for (auto value : part->blocks[b]) {
          if (value >= d) raise(ErrorCode::kBadPartition, "block value out of range");
          if (map[value] != d) raise(ErrorCode::kBadPartition, "blocks overlap");
          map[value] = b;
        }
      }
      if (std::find(map.begin(), map.end(), d) != map.end()) {
        raise(ErrorCode::kBadPartition, "partition does not cover the alphabet");
      }
      if (part->blocks.size() < 2) {
        raise(ErrorCode::kBadPartition, "a single-block partition should be expressed as a drop");
      }
      if (!part->labels.empty() && part->labels.size() != part->blocks.size()) {
        raise(ErrorCode::kBadPartition, "one label per block required");
      }
      kept_vars.push_back({space.variables()[v].label, part->blocks.size()});
    }
    kept.push_back(v);
  }
  if (kept.empty()) raise(ErrorCode::kBadPartition, "every variable dropped");

  OutcomeSpace out_space(std::move(kept_vars));
  std::vector<double> out(out_space.cell_count(), 0.0);
  for_each_cell(space, [&](std::size_t cell, const Outcome& o) {
    std::size_t idx = 0;
    for (std::size_t i = 0; i < kept.size(); ++i) idx += block_of[kept[i]][o[kept[i]]] * out_space.stride(i);
    out[idx] += q[cell];
  });
  return QuasiDistribution(std::move(out_space), std::move(out), 1e-10);
}

ModificationReport modification(const QuasiDistribution& p, const QuasiDistribution& q,
                                double tol) {
  return modification(p, q, positive_marginals(q, tol), tol);
}

ModificationReport modification(const QuasiDistribution& p, const QuasiDistribution& q,
                                const std::vector<Subset>& family, double tol) {
  if (!(p.space() == q.space())) raise(ErrorCode::kSpaceMismatch, "p and q live on different spaces");
  ModificationReport r;
  r.d.resize(p.space().cell_count());
  for (std::size_t i = 0; i < r.d.size(); ++i) r.d[i] = p[i] - q[i];
  r.d_sum = std::accumulate(r.d.begin(), r.d.end(), 0.0);
  r.sums_to_zero = std::abs(r.d_sum) <= tol;
  r.marginals_preserved = true;
  for (const auto& s : family) {
    const auto mp = marginalize(p, s);
    const auto mq = marginalize(q, s);
    double dev = 0.0;
    for (std::size_t i = 0; i < mp.dist.values().size(); ++i) {
      dev = std::max(dev, std::abs(mp.dist[i] - mq.dist[i]));
    }
    r.deviations.push_back({s, dev});
    if (dev > tol) r.marginals_preserved = false;
  }
  return r;
}

}  // namespace qviab
