#include "qviab/viability.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "qviab/correl.hpp"
#include "qviab/error.hpp"
#include "qviab/fine.hpp"
#include "qviab/lpmatch.hpp"

namespace qviab::viability {

namespace {

bool covered(const std::vector<Subset>& family, std::size_t i, std::size_t j) {
  if (i > j) std::swap(i, j);
  return std::any_of(family.begin(), family.end(), [&](const Subset& s) {
    return std::binary_search(s.begin(), s.end(), i) && std::binary_search(s.begin(), s.end(), j);
  });
}

// Binarization of a d-valued alphabet: value 0 always maps to +1; bit (v-1)
// of `mask` set means value v maps to -1. Masks run over 1 .. 2^(d-1) - 1.
std::vector<double> signs_of(std::size_t arity, std::uint64_t mask) {
  std::vector<double> s(arity, 1.0);
  for (std::size_t v = 1; v < arity; ++v) {
    if (mask & (std::uint64_t{1} << (v - 1))) s[v] = -1.0;
  }
  return s;
}

std::vector<std::size_t> plus_values_of(const std::vector<double>& signs) {
  std::vector<std::size_t> out;
  for (std::size_t v = 0; v < signs.size(); ++v) {
    if (signs[v] > 0) out.push_back(v);
  }
  return out;
}

class PairCache {
 public:
  explicit PairCache(const QuasiDistribution& q) : q_(q) {}

  // Correlator of the binarized pair (i, j), i != j.
  double correlator(std::size_t i, const std::vector<double>& si, std::size_t j,
                    const std::vector<double>& sj) {
    if (i > j) return correlator(j, sj, i, si);
    auto it = cache_.find({i, j});
    if (it == cache_.end()) {
      const Subset s{i, j};
      auto m = marginalize(q_, s);
      it = cache_.emplace(std::make_pair(i, j), std::vector<double>(m.dist.values().begin(), m.dist.values().end()))
               .first;
    }
    const auto& table = it->second;
    const std::size_t dj = sj.size();
    double c = 0.0;
    for (std::size_t a = 0; a < si.size(); ++a) {
      for (std::size_t b = 0; b < dj; ++b) c += si[a] * sj[b] * table[a * dj + b];
    }
    return c;
  }

 private:
  const QuasiDistribution& q_;
  std::map<std::pair<std::size_t, std::size_t>, std::vector<double>> cache_;
};

// Odometer over per-variable binarization masks, last variable fastest.
bool next_masks(std::vector<std::uint64_t>& masks, const std::vector<std::uint64_t>& limits) {
  for (std::size_t k = masks.size(); k-- > 0;) {
    if (++masks[k] <= limits[k]) return true;
    masks[k] = 1;
  }
  return false;
}

struct Search {
  const QuasiDistribution& q;
  double tol;
  std::size_t budget;
  std::size_t spent = 0;
  PairCache pairs{q};

  std::uint64_t mask_limit(std::size_t var) const {
    const std::size_t d = q.space().arity(var);
    if (d > 63) raise(ErrorCode::kCapExceeded, "alphabet too large for binarization search");
    return (std::uint64_t{1} << (d - 1)) - 1;
  }

  // Returns a certificate, or nothing. Sets `exhausted` when the budget runs out.
  std::optional<InequalityCertificate> run(InequalityKind kind, const std::vector<std::size_t>& vars,
                                           bool& exhausted) {
    std::vector<std::uint64_t> masks(vars.size(), 1), limits;
    for (auto v : vars) limits.push_back(mask_limit(v));
    do {
      if (spent >= budget) {
        exhausted = true;
        return std::nullopt;
      }
      ++spent;
      std::vector<std::vector<double>> signs;
      for (std::size_t k = 0; k < vars.size(); ++k) signs.push_back(signs_of(q.space().arity(vars[k]), masks[k]));
      auto corr = [&](std::size_t r1, std::size_t r2) {
        return pairs.correlator(vars[r1], signs[r1], vars[r2], signs[r2]);
      };

      InequalityCertificate cert;
      cert.kind = kind;
      cert.variables = vars;
      std::array<double, 4> values{};
      if (kind == InequalityKind::kChsh) {
        const fine::ChshInput in{corr(0, 2), corr(0, 3), corr(1, 2), corr(1, 3)};
        cert.correlators = {in.c13, in.c14, in.c23, in.c24};
        values = fine::chsh_values(in, 1.0);  // range checked by the target marginals already
        for (std::size_t k = 0; k < 4; ++k) {
          if (std::abs(values[k]) > 2.0 + tol) {
            cert.combination = k;
            cert.value = values[k];
            for (const auto& s : signs) cert.plus_values.push_back(plus_values_of(s));
            return cert;
          }
        }
      } else {
        const fine::BellInput in{corr(0, 1), corr(0, 2), corr(1, 2)};
        cert.correlators = {in.c12, in.c13, in.c23};
        values = fine::bell_values(in, 1.0);
        for (std::size_t k = 0; k < 4; ++k) {
          if (values[k] > 1.0 + tol) {
            cert.combination = k;
            cert.value = values[k];
            for (const auto& s : signs) cert.plus_values.push_back(plus_values_of(s));
            return cert;
          }
        }
      }
    } while (next_masks(masks, limits));
    return std::nullopt;
  }
};

}  // namespace

std::string_view status_name(Status s) noexcept {
  switch (s) {
    case Status::kViable: return "Viable";
    case Status::kNonViable: return "NonViable";
    case Status::kUnknown: return "Unknown";
  }
  return "Unknown";
}

std::string_view mode_name(Mode m) noexcept {
  return m == Mode::kAllPositive ? "all-positive" : "specified";
}

std::optional<InequalityCertificate> coarse_grain_search(const QuasiDistribution& q,
                                                         const std::vector<Subset>& family,
                                                         std::size_t budget, double tol) {
  const std::size_t n = q.space().num_variables();
  Search search{q, tol, budget};
  bool exhausted = false;

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      for (std::size_t k = j + 1; k < n; ++k) {
        if (!covered(family, i, j) || !covered(family, i, k) || !covered(family, j, k)) continue;
        if (auto c = search.run(InequalityKind::kBell, {i, j, k}, exhausted)) return c;
        if (exhausted) return std::nullopt;
      }
    }
  }

  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      for (std::size_t k = j + 1; k < n; ++k) {
        for (std::size_t l = k + 1; l < n; ++l) {
          // The three ways to split {i,j,k,l} into two sides of a 4-cycle.
          const std::vector<std::vector<std::size_t>> cycles = {{i, j, k, l}, {i, k, j, l}, {i, l, j, k}};
          for (const auto& v : cycles) {
            if (!covered(family, v[0], v[2]) || !covered(family, v[0], v[3]) || !covered(family, v[1], v[2]) ||
                !covered(family, v[1], v[3])) {
              continue;
            }
            if (auto c = search.run(InequalityKind::kChsh, v, exhausted)) return c;
            if (exhausted) return std::nullopt;
          }
        }
      }
    }
  }
  return std::nullopt;
}

double recheck(const QuasiDistribution& q, const InequalityCertificate& cert) {
  const std::size_t n = q.space().num_variables();
  const std::size_t want = cert.kind == InequalityKind::kChsh ? 4 : 3;
  if (cert.variables.size() != want || cert.plus_values.size() != want || cert.combination > 3) {
    raise(ErrorCode::kInvalidArgument, "malformed inequality certificate");
  }

  CoarseGraining plan;
  plan.partitions.resize(n);
  std::vector<bool> selected(n, false);
  for (std::size_t r = 0; r < want; ++r) {
    const std::size_t v = cert.variables[r];
    if (v >= n || selected[v]) raise(ErrorCode::kInvalidArgument, "certificate variables invalid");
    selected[v] = true;
    Partition p;
    p.blocks.resize(2);
    for (std::size_t value = 0; value < q.space().arity(v); ++value) {
      const auto& plus = cert.plus_values[r];
      const bool is_plus = std::find(plus.begin(), plus.end(), value) != plus.end();
      p.blocks[is_plus ? 0 : 1].push_back(value);
    }
    if (p.blocks[0].empty() || p.blocks[1].empty()) raise(ErrorCode::kBadPartition, "degenerate binarization");
    plan.partitions[v] = std::move(p);
  }
  for (std::size_t v = 0; v < n; ++v) {
    if (!selected[v]) plan.drop.push_back(v);
  }

  // The coarse-grained distribution keeps selected variables in index order.
  const auto coarse = coarse_grain(q, plan);
  const auto coeffs = correl::expand(coarse);
  std::vector<std::size_t> sorted = cert.variables;
  std::sort(sorted.begin(), sorted.end());
  auto pos = [&](std::size_t role) {
    return static_cast<std::size_t>(std::find(sorted.begin(), sorted.end(), cert.variables[role]) - sorted.begin());
  };
  auto corr = [&](std::size_t r1, std::size_t r2) { return coeffs.get({pos(r1), pos(r2)}); };

  if (cert.kind == InequalityKind::kChsh) {
    return fine::chsh_values({corr(0, 2), corr(0, 3), corr(1, 2), corr(1, 3)}, 1.0)[cert.combination];
  }
  return fine::bell_values({corr(0, 1), corr(0, 2), corr(1, 2)}, 1.0)[cert.combination];
}

ViabilityReport viability_test(const QuasiDistribution& q, const ViabilityOptions& opts) {
  ViabilityReport report;
  report.mode = opts.mode;

  if (opts.mode == Mode::kSpecified) {
    for (const auto& s : opts.subsets) {
      validate_subset(q.space(), s);
      if (!is_probability(marginalize(q, s).dist, opts.tol)) {
        std::string list;
        for (auto v : s) list += (list.empty() ? "" : ",") + std::to_string(v);
        raise(ErrorCode::kNonPositiveSpecifiedMarginal, "marginal on {" + list + "} is not a probability");
      }
    }
    report.family = opts.subsets;
  } else {
    try {
      report.family = positive_marginals(q, opts.tol);
    } catch (const Error& e) {
      if (e.code() != ErrorCode::kCapExceeded) throw;
      report.note = e.what();
      return report;
    }
  }

  lpmatch::MatchingResult result;
  try {
    result = lpmatch::solve(lpmatch::problem_from_marginals(q, report.family), opts.tol);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kCapExceeded) throw;
    report.note = e.what();
    return report;
  }

  if (result.feasible()) {
    report.status = Status::kViable;
    report.witness = std::move(result.witness);
    if (result.numerically_marginal) report.note = "feasible within the tolerance band only";
    return report;
  }
  report.status = Status::kNonViable;
  report.lp = LpCertificate{result.phase1_objective, result.exact};
  if (opts.search_budget > 0) {
    report.inequality = coarse_grain_search(q, report.family, opts.search_budget, opts.tol);
  }
  if (!report.inequality) report.note = "no inequality certificate found; LP record only";
  return report;
}

}  // namespace qviab::viability
