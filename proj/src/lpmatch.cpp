#include "qviab/lpmatch.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include <boost/multiprecision/cpp_int.hpp>

#include "qviab/error.hpp"
#include "simplex.hpp"

namespace qviab::lpmatch {

namespace {

using Rational = boost::multiprecision::cpp_rational;

constexpr double kPivotEps = 1e-12;

std::string subset_str(const Subset& s) {
  std::ostringstream o;
  o << '{';
  for (std::size_t i = 0; i < s.size(); ++i) o << (i ? "," : "") << s[i];
  o << '}';
  return o.str();
}

// Position of each element of `inner` within `outer`; both sorted.
Subset positions_in(const Subset& inner, const Subset& outer) {
  Subset pos;
  for (auto v : inner) {
    pos.push_back(static_cast<std::size_t>(std::find(outer.begin(), outer.end(), v) - outer.begin()));
  }
  return pos;
}

struct Lp {
  std::vector<std::vector<double>> rows;
  std::vector<double> rhs;
  std::vector<std::size_t> columns;  // LP column -> cell index
};

Lp build_lp(const MatchingProblem& prob) {
  const OutcomeSpace& space = prob.space;
  std::vector<bool> zero(space.cell_count(), false);
  for (const auto& o : prob.zero_support) zero[space.index_of(o)] = true;

  Lp lp;
  std::vector<std::size_t> col_of(space.cell_count(), space.cell_count());
  for (std::size_t c = 0; c < space.cell_count(); ++c) {
    if (!zero[c]) {
      col_of[c] = lp.columns.size();
      lp.columns.push_back(c);
    }
  }
  const std::size_t ncols = lp.columns.size();

  lp.rows.emplace_back(ncols, 1.0);
  lp.rhs.push_back(1.0);

  for (const auto& t : prob.targets) {
    const OutcomeSpace sub = space.subspace(t.subset);
    const std::size_t first = lp.rows.size();
    for (std::size_t k = 0; k < sub.cell_count(); ++k) {
      lp.rows.emplace_back(ncols, 0.0);
      lp.rhs.push_back(t.values[k]);
    }
    for (std::size_t c = 0; c < space.cell_count(); ++c) {
      if (col_of[c] == space.cell_count()) continue;
      const Outcome o = space.outcome_of(c);
      std::size_t k = 0;
      for (std::size_t i = 0; i < t.subset.size(); ++i) k += o[t.subset[i]] * sub.stride(i);
      lp.rows[first + k][col_of[c]] = 1.0;
    }
  }
  return lp;
}

struct RawSolution {
  double objective = 0.0;
  std::vector<double> cells;
  std::size_t pivots = 0;
  bool iteration_limit = false;
};

std::vector<double> scatter(const Lp& lp, std::size_t cells, const std::vector<double>& x) {
  std::vector<double> out(cells, 0.0);
  for (std::size_t j = 0; j < lp.columns.size(); ++j) out[lp.columns[j]] = x[j];
  return out;
}

RawSolution solve_double(const Lp& lp, std::size_t cells) {
  const std::size_t limit = 200 * (lp.rows.size() + lp.columns.size()) + 1000;
  auto r = detail::phase1<double>(lp.rows, lp.rhs, kPivotEps, limit);
  return {r.objective, scatter(lp, cells, r.x), r.pivots, r.iteration_limit};
}

RawSolution solve_exact(const Lp& lp, std::size_t cells) {
  std::vector<std::vector<Rational>> rows(lp.rows.size());
  for (std::size_t i = 0; i < lp.rows.size(); ++i) {
    rows[i].reserve(lp.rows[i].size());
    for (double a : lp.rows[i]) rows[i].emplace_back(static_cast<long>(a));
  }
  std::vector<Rational> rhs;
  rhs.reserve(lp.rhs.size());
  for (double b : lp.rhs) rhs.emplace_back(b);  // exact binary expansion of the double

  auto r = detail::phase1<Rational>(std::move(rows), std::move(rhs), Rational(0),
                                    std::numeric_limits<std::size_t>::max());
  std::vector<double> x;
  x.reserve(r.x.size());
  for (const auto& v : r.x) x.push_back(v.convert_to<double>());
  return {r.objective.convert_to<double>(), scatter(lp, cells, x), r.pivots, false};
}

QuasiDistribution clean_witness(const OutcomeSpace& space, std::vector<double> cells) {
  for (double& x : cells) x = std::max(x, 0.0);
  const double total = std::accumulate(cells.begin(), cells.end(), 0.0);
  for (double& x : cells) x /= total;
  return QuasiDistribution(space, std::move(cells), 1e-9);
}

}  // namespace

void validate(const MatchingProblem& prob, double tol) {
  const OutcomeSpace& space = prob.space;
  const double norm_tol = std::max(tol, kDefaultNormTol);
  std::vector<QuasiDistribution> tables;
  tables.reserve(prob.targets.size());
  for (std::size_t k = 0; k < prob.targets.size(); ++k) {
    const auto& t = prob.targets[k];
    const OutcomeSpace sub = space.subspace(t.subset);
    if (t.values.size() != sub.cell_count()) {
      raise(ErrorCode::kLengthMismatch, "target " + std::to_string(k) + " has " +
                                            std::to_string(t.values.size()) + " entries, expected " +
                                            std::to_string(sub.cell_count()));
    }
    tables.emplace_back(sub, t.values, norm_tol);
    if (!is_probability(tables.back(), tol)) {
      raise(ErrorCode::kOutOfRange, "target " + std::to_string(k) + " on " + subset_str(t.subset) +
                                        " is not a probability");
    }
  }
  for (const auto& o : prob.zero_support) space.index_of(o);

  for (std::size_t a = 0; a < prob.targets.size(); ++a) {
    for (std::size_t b = a + 1; b < prob.targets.size(); ++b) {
      const Subset& sa = prob.targets[a].subset;
      const Subset& sb = prob.targets[b].subset;
      Subset common;
      std::set_intersection(sa.begin(), sa.end(), sb.begin(), sb.end(), std::back_inserter(common));
      if (common.empty()) continue;
      const auto ma = marginalize(tables[a], positions_in(common, sa));
      const auto mb = marginalize(tables[b], positions_in(common, sb));
      for (std::size_t i = 0; i < ma.dist.values().size(); ++i) {
        if (std::abs(ma.dist[i] - mb.dist[i]) > tol) {
          raise(ErrorCode::kInconsistentTargets,
                "targets " + std::to_string(a) + " " + subset_str(sa) + " and " + std::to_string(b) + " " +
                    subset_str(sb) + " disagree on " + subset_str(common));
        }
      }
    }
  }
}

MatchingResult solve(const MatchingProblem& prob, const SolveOptions& opts) {
  validate(prob, opts.tol);
  const std::size_t cells = prob.space.cell_count();
  std::size_t rows = 1;
  for (const auto& t : prob.targets) rows += t.values.size();
  if (rows > opts.tableau_limit / cells) {
    raise(ErrorCode::kCapExceeded, "tableau of " + std::to_string(rows) + " x " + std::to_string(cells) +
                                       " exceeds the dense limit");
  }
  const Lp lp = build_lp(prob);

  MatchingResult result;
  if (lp.columns.empty()) {
    // Everything forced to zero: sum p = 1 is unsatisfiable.
    result.phase1_objective = 1.0;
    return result;
  }

  const bool exact_allowed = cells <= opts.exact_cell_limit;
  if (opts.arithmetic == Arithmetic::kExact && !exact_allowed) {
    raise(ErrorCode::kCapExceeded, "exact arithmetic is limited to " +
                                       std::to_string(opts.exact_cell_limit) + " cells");
  }

  RawSolution raw = opts.arithmetic == Arithmetic::kExact ? solve_exact(lp, cells) : solve_double(lp, cells);
  result.exact = opts.arithmetic == Arithmetic::kExact;

  auto near_band = [&](double obj) { return obj >= opts.tol * 1e-3 && obj <= opts.tol * 1e3; };
  if (opts.arithmetic == Arithmetic::kAuto && exact_allowed &&
      (raw.iteration_limit || near_band(raw.objective))) {
    raw = solve_exact(lp, cells);
    result.exact = true;
  }
  if (raw.iteration_limit) {
    raise(ErrorCode::kCapExceeded, "simplex iteration limit reached");
  }

  result.phase1_objective = std::max(raw.objective, 0.0);
  result.pivots = raw.pivots;
  if (result.phase1_objective > opts.tol) return result;

  result.verdict = Verdict::kFeasible;
  result.witness = clean_witness(prob.space, std::move(raw.cells));
  auto report = verify(*result.witness, prob, opts.tol);
  if (!report.passed && opts.arithmetic == Arithmetic::kAuto && exact_allowed && !result.exact) {
    raw = solve_exact(lp, cells);
    result.exact = true;
    result.phase1_objective = std::max(raw.objective, 0.0);
    if (result.phase1_objective > opts.tol) {
      result.verdict = Verdict::kInfeasible;
      result.witness.reset();
      return result;
    }
    result.witness = clean_witness(prob.space, std::move(raw.cells));
    report = verify(*result.witness, prob, opts.tol);
  }
  result.residual = report.max_residual;
  result.numerically_marginal = result.phase1_objective > opts.tol * 1e-3 || !report.passed;
  return result;
}

MatchingResult solve(const MatchingProblem& prob, double tol) {
  SolveOptions opts;
  opts.tol = tol;
  return solve(prob, opts);
}

VerifyReport verify(const QuasiDistribution& witness, const MatchingProblem& prob, double tol) {
  if (!(witness.space() == prob.space)) raise(ErrorCode::kSpaceMismatch, "witness and problem spaces differ");
  VerifyReport r;
  for (double x : witness.values()) r.negativity = std::max(r.negativity, -x);
  r.normalization = std::abs(witness.sum() - 1.0);
  for (const auto& t : prob.targets) {
    const auto m = marginalize(witness, t.subset);
    double dev = 0.0;
    for (std::size_t i = 0; i < t.values.size(); ++i) dev = std::max(dev, std::abs(m.dist[i] - t.values[i]));
    r.target_residuals.push_back(dev);
  }
  for (const auto& o : prob.zero_support) {
    r.zero_support_residual = std::max(r.zero_support_residual, std::abs(witness.at(o)));
  }
  r.max_residual = std::max({r.negativity, r.normalization, r.zero_support_residual});
  for (double d : r.target_residuals) r.max_residual = std::max(r.max_residual, d);
  r.passed = r.max_residual <= tol;
  return r;
}

MatchingResult solve_with_zero_support(const QuasiDistribution& q, const std::vector<Target>& targets,
                                       double tol) {
  MatchingProblem prob{q.space(), targets, {}};
  for (std::size_t c = 0; c < q.space().cell_count(); ++c) {
    if (std::abs(q[c]) <= tol) prob.zero_support.push_back(q.space().outcome_of(c));
  }
  return solve(prob, tol);
}

MatchingProblem problem_from_marginals(const QuasiDistribution& q, const std::vector<Subset>& family) {
  MatchingProblem prob{q.space(), {}, {}};
  for (const auto& s : family) {
    auto m = marginalize(q, s);
    prob.targets.push_back({m.subset, std::vector<double>(m.dist.values().begin(), m.dist.values().end())});
  }
  return prob;
}

}  // namespace qviab::lpmatch
