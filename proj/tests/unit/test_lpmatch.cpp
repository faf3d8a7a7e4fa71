#include <algorithm>
#include <numbers>
#include <random>

#include <doctest.h>

#include "../oracles/oracles.hpp"
#include "qviab/correl.hpp"
#include "qviab/eprb.hpp"
#include "qviab/lpmatch.hpp"
#include "support.hpp"

using namespace qviab;
using lpmatch::MatchingProblem;

namespace {

bool oracle_feasible(const MatchingProblem& p) {
  std::vector<std::size_t> arity;
  for (const auto& v : p.space.variables()) arity.push_back(v.arity);
  std::vector<oracle::Target> ts;
  for (const auto& t : p.targets) ts.push_back({t.subset, t.values});
  return oracle::basis_enumeration_feasible(oracle::matching_system(arity, ts));
}

MatchingProblem cycle_problem(double b1, double b2, double b3, double b4, double c13, double c14, double c23,
                              double c24) {
  return {OutcomeSpace::binary(4),
          {{{0, 2}, oracle::pair_table(b1, b3, c13)},
           {{0, 3}, oracle::pair_table(b1, b4, c14)},
           {{1, 2}, oracle::pair_table(b2, b3, c23)},
           {{1, 3}, oracle::pair_table(b2, b4, c24)}},
          {}};
}

std::vector<double> random_simplex_point(std::size_t m, oracle::Rng& rng) {
  std::exponential_distribution<double> e(1.0);
  std::vector<double> v(m);
  double s = 0;
  for (auto& x : v) s += (x = e(rng));
  for (auto& x : v) x /= s;
  return v;
}

}  // namespace

TEST_CASE("singles only") {
  MatchingProblem p{OutcomeSpace::binary(4), {}, {}};
  for (std::size_t i = 0; i < 4; ++i) p.targets.push_back({{i}, {0.5, 0.5}});
  auto r = lpmatch::solve(p);
  REQUIRE(r.feasible());
  CHECK(is_probability(*r.witness));
  for (std::size_t i = 0; i < 4; ++i) {
    const std::size_t s[] = {i};
    CHECK(max_abs_diff(marginalize(*r.witness, s).dist.values(), std::vector<double>{0.5, 0.5}) <= 1e-9);
  }
  CHECK(r.residual <= 1e-9);
}

TEST_CASE("PR-box cycle is infeasible") {
  auto p = cycle_problem(0, 0, 0, 0, 1, 1, 1, -1);
  auto r = lpmatch::solve(p);
  CHECK_FALSE(r.feasible());
  CHECK_FALSE(r.witness.has_value());
  CHECK(r.phase1_objective > 1e-9);
  CHECK_FALSE(oracle_feasible(p));

  // best S1 over the 16 deterministic assignments
  int best = -4;
  for (int s1 : {1, -1}) {
    for (int s2 : {1, -1}) {
      for (int s3 : {1, -1}) {
        for (int s4 : {1, -1}) best = std::max(best, s1 * s3 + s1 * s4 + s2 * s3 - s2 * s4);
      }
    }
  }
  CHECK(best == 2);
}

TEST_CASE("EPRB at pi/2 with six pairs has the forced witness") {
  auto q = eprb::trace_distribution(eprb::make_config(std::numbers::pi / 2));
  const std::vector<Subset> six{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
  auto p = lpmatch::problem_from_marginals(q, six);
  auto r = lpmatch::solve(p);
  REQUIRE(r.feasible());
  const auto& w = *r.witness;
  for (std::size_t cell = 0; cell < 16; ++cell) {
    const auto o = w.space().outcome_of(cell);
    const bool allowed = o[1] != o[0] && o[3] != o[2];
    CHECK(w[cell] == doctest::Approx(allowed ? 0.25 : 0.0).epsilon(1e-9));
  }
  CHECK(lpmatch::verify(w, p).passed);
}

TEST_CASE("verify") {
  auto q = eprb::trace_distribution(eprb::make_config(0.3));
  auto p = lpmatch::problem_from_marginals(q, {{0, 1}, {2, 3}});
  auto exact = make_distribution(OutcomeSpace::binary(4), std::vector<double>(16, 1.0 / 16));
  MatchingProblem flat{OutcomeSpace::binary(4), {{{0, 2}, std::vector<double>(4, 0.25)}}, {}};
  auto rep = lpmatch::verify(exact, flat);
  CHECK(rep.max_residual == 0.0);
  CHECK(rep.passed);

  MatchingProblem anti{OutcomeSpace::binary(2), {{{0, 1}, {0, 0.5, 0.5, 0}}}, {}};
  auto rep2 = lpmatch::verify(uniform(OutcomeSpace::binary(2)), anti);
  REQUIRE(rep2.target_residuals.size() == 1);
  CHECK(rep2.target_residuals[0] == doctest::Approx(0.25));
  CHECK_FALSE(rep2.passed);

  auto r = lpmatch::solve(p);
  REQUIRE(r.feasible());
  CHECK(lpmatch::verify(*r.witness, p).max_residual <= 1e-9);
}

TEST_CASE("validate") {
  MatchingProblem bad_subset{OutcomeSpace::binary(2), {{{1, 0}, std::vector<double>(4, 0.25)}}, {}};
  CHECK_ERROR(lpmatch::validate(bad_subset), ErrorCode::kBadSubset);
  MatchingProblem short_table{OutcomeSpace::binary(2), {{{0, 1}, {0.5, 0.5}}}, {}};
  CHECK_ERROR(lpmatch::validate(short_table), ErrorCode::kLengthMismatch);
  MatchingProblem negative{OutcomeSpace::binary(1), {{{0}, {1.5, -0.5}}}, {}};
  CHECK_ERROR(lpmatch::validate(negative), ErrorCode::kOutOfRange);
  MatchingProblem clash{OutcomeSpace::binary(3), {{{0, 1}, {0.5, 0, 0, 0.5}}, {{0, 2}, {0.1, 0.1, 0.4, 0.4}}}, {}};
  CHECK_ERROR(lpmatch::validate(clash), ErrorCode::kInconsistentTargets);
  CHECK_ERROR(lpmatch::solve(clash), ErrorCode::kInconsistentTargets);
}

TEST_CASE("zero support") {
  auto u = uniform(OutcomeSpace::binary(3));
  std::vector<lpmatch::Target> ts{{{0, 1}, std::vector<double>(4, 0.25)}, {{2}, {0.5, 0.5}}};
  auto a = lpmatch::solve_with_zero_support(u, ts);
  auto b = lpmatch::solve({u.space(), ts, {}});
  REQUIRE(a.feasible());
  REQUIRE(b.feasible());
  CHECK(as_vector(a.witness->values()) == as_vector(b.witness->values()));

  std::vector<double> v(8, 1.0 / 7);
  v[5] = 0.0;
  auto q = make_distribution(OutcomeSpace::binary(3), v, 1e-12);
  auto z = lpmatch::solve_with_zero_support(q, {{{0}, {0.5, 0.5}}});
  REQUIRE(z.feasible());
  CHECK(z.witness->values()[5] == 0.0);

  auto e = eprb::trace_distribution(eprb::make_config(std::numbers::pi / 2));
  auto cyc = lpmatch::problem_from_marginals(e, eprb::cycle_pairs());
  auto r = lpmatch::solve_with_zero_support(e, cyc.targets);
  REQUIRE(r.feasible());
  for (std::size_t cell = 0; cell < 16; ++cell) {
    if (std::abs(e[cell]) <= 1e-9) CHECK(r.witness->values()[cell] == 0.0);
  }

  MatchingProblem forced{OutcomeSpace::binary(1), {{{0}, {0.5, 0.5}}}, {{0}}};
  CHECK_FALSE(lpmatch::solve(forced).feasible());
}

TEST_CASE("verdicts agree with basis enumeration on random small instances") {
  oracle::Rng rng(kSeed + 41);
  std::uniform_real_distribution<double> u01(0, 1), unif(-1, 1);
  int feas = 0, infeas = 0;
  for (int trial = 0; trial < 400; ++trial) {
    MatchingProblem p{OutcomeSpace::binary(1), {}, {}};
    if (trial % 2 == 0) {
      double b[4];
      for (double& x : b) x = trial % 4 == 0 ? 0.0 : unif(rng);
      auto pick = [&](double bi, double bj) {
        auto [lo, hi] = oracle::correlator_range(bi, bj);
        return lo + (hi - lo) * u01(rng);
      };
      p = cycle_problem(b[0], b[1], b[2], b[3], pick(b[0], b[2]), pick(b[0], b[3]), pick(b[1], b[2]),
                        pick(b[1], b[3]));
    } else {
      // marginals of a random quasi-distribution on its positive pairs
      std::vector<double> v(16);
      double s = 0;
      for (auto& x : v) s += (x = u01(rng) - 0.15);
      for (auto& x : v) x /= s;
      auto q = make_distribution(OutcomeSpace::binary(4), v, 1e-10);
      p = lpmatch::problem_from_marginals(q, positive_marginals(q, 1e-9, 2));
    }
    auto r = lpmatch::solve(p);
    const bool ref = oracle_feasible(p);
    CHECK(r.feasible() == ref);
    if (r.feasible()) {
      CHECK(lpmatch::verify(*r.witness, p).max_residual <= 1e-9);
      ++feas;
    } else {
      ++infeas;
    }
  }
  CHECK(feas > 20);
  CHECK(infeas > 20);
}

TEST_CASE("mixed arity agrees with basis enumeration") {
  oracle::Rng rng(kSeed + 42);
  std::uniform_real_distribution<double> u01(0, 1);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<double> v(12);
    double s = 0;
    for (auto& x : v) s += (x = u01(rng) - 0.2);
    for (auto& x : v) x /= s;
    auto q = make_distribution(OutcomeSpace({{"a", 2}, {"b", 3}, {"c", 2}}), v, 1e-10);
    auto p = lpmatch::problem_from_marginals(q, positive_marginals(q));
    CHECK(lpmatch::solve(p).feasible() == oracle_feasible(p));
  }
}

TEST_CASE("adding a target never restores feasibility") {
  oracle::Rng rng(kSeed + 43);
  std::uniform_real_distribution<double> u01(0, 1);
  int checked = 0;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> v(16);
    double s = 0;
    for (auto& x : v) s += (x = u01(rng) - 0.12);
    for (auto& x : v) x /= s;
    auto q = make_distribution(OutcomeSpace::binary(4), v, 1e-10);
    auto fam = positive_marginals(q, 1e-9, 2);
    auto p = lpmatch::problem_from_marginals(q, fam);
    if (lpmatch::solve(p).feasible()) continue;
    ++checked;
    for (std::size_t i = 0; i < 4; ++i) {
      auto more = p;
      const std::size_t sub[] = {i};
      more.targets.push_back({{i}, as_vector(marginalize(q, sub).dist.values())});
      CHECK_FALSE(lpmatch::solve(more).feasible());
    }
  }
  CHECK(checked > 0);
}

TEST_CASE("exact arithmetic agrees and solves are deterministic") {
  oracle::Rng rng(kSeed + 44);
  std::uniform_real_distribution<double> u01(0, 1);
  for (int trial = 0; trial < 60; ++trial) {
    auto v = random_simplex_point(16, rng);
    auto p = lpmatch::problem_from_marginals(make_distribution(OutcomeSpace::binary(4), v, 1e-10),
                                             {{0, 2}, {0, 3}, {1, 2}, {1, 3}});
    if (trial % 2) {
      // push one correlator outside the local polytope
      p.targets[3].values = {0.05, 0.45, 0.45, 0.05};
      p.targets[0].values = {0.45, 0.05, 0.05, 0.45};
      p.targets[1].values = {0.45, 0.05, 0.05, 0.45};
      p.targets[2].values = {0.45, 0.05, 0.05, 0.45};
    }
    lpmatch::SolveOptions dbl{1e-9, lpmatch::Arithmetic::kDouble};
    lpmatch::SolveOptions ex{1e-9, lpmatch::Arithmetic::kExact};
    auto a = lpmatch::solve(p, dbl);
    auto b = lpmatch::solve(p, ex);
    CHECK(b.exact);
    CHECK(a.feasible() == b.feasible());
    auto c = lpmatch::solve(p);
    auto d = lpmatch::solve(p);
    CHECK(c.feasible() == d.feasible());
    if (c.witness) CHECK(as_vector(c.witness->values()) == as_vector(d.witness->values()));
    CHECK(c.phase1_objective == d.phase1_objective);
  }
}

TEST_CASE("pair targets of a ten-variable probability") {
  oracle::Rng rng(kSeed + 45);
  auto v = random_simplex_point(1024, rng);
  auto q = make_distribution(OutcomeSpace::binary(10), v, 1e-10);
  std::vector<Subset> pairs;
  for (std::size_t i = 0; i + 1 < 10; ++i) pairs.push_back({i, i + 1});
  auto p = lpmatch::problem_from_marginals(q, pairs);
  auto r = lpmatch::solve(p);
  REQUIRE(r.feasible());
  CHECK(lpmatch::verify(*r.witness, p).max_residual <= 1e-9);
}
