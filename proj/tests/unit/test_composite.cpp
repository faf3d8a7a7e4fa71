#include <numbers>
#include <random>

#include <doctest.h>

#include "../oracles/oracles.hpp"
#include "qviab/composite.hpp"
#include "qviab/eprb.hpp"
#include "support.hpp"

using namespace qviab;
using namespace qviab::composite;
constexpr double kPi = std::numbers::pi;

namespace {

lpmatch::MatchingProblem eprb_problem(double theta) {
  return lpmatch::problem_from_marginals(eprb::trace_distribution(eprb::make_config(theta)), eprb::cycle_pairs());
}

quantum::DensityState up() {
  Eigen::VectorXcd v(2);
  v << 1.0, 0.0;
  return quantum::DensityState::pure(v);
}

}  // namespace

TEST_CASE("product_distribution") {
  auto u2 = uniform(OutcomeSpace::binary(2));
  auto u3 = uniform(OutcomeSpace::binary(3));
  auto p = product_distribution(u2, u3);
  CHECK(p.space().num_variables() == 5);
  CHECK(max_abs_diff(p.values(), uniform(OutcomeSpace::binary(5)).values()) < 1e-17);

  auto a = make_distribution(OutcomeSpace::binary(2), {0.1, 0.2, 0.3, 0.4});
  auto b = make_distribution(OutcomeSpace({{"t", 3}}), {0.5, 0.25, 0.25});
  auto ab = product_distribution(a, b);
  CHECK(is_probability(ab));
  const std::size_t sa[] = {0, 1};
  const std::size_t sb[] = {2};
  CHECK(max_abs_diff(marginalize(ab, sa).dist.values(), a.values()) <= 1e-12);
  CHECK(max_abs_diff(marginalize(ab, sb).dist.values(), b.values()) <= 1e-12);
}

TEST_CASE("diosi_check") {
  lpmatch::MatchingProblem one{OutcomeSpace::binary(1), {{{0}, {0.3, 0.7}}}, {}};
  lpmatch::MatchingProblem two{OutcomeSpace::binary(1), {{{0}, {0.6, 0.4}}}, {}};
  auto r = diosi_check(one, two);
  CHECK(r.passed);
  CHECK(r.residual <= 1e-9);
  CHECK(max_abs_diff(r.product.values(), std::vector<double>{0.18, 0.12, 0.42, 0.28}) <= 1e-12);

  auto e = diosi_check(eprb_problem(kPi / 2), eprb_problem(kPi / 2));
  CHECK(e.passed);
  CHECK(e.residual <= 1e-9);
  CHECK(e.independence_residual <= 1e-12);
  auto prod = product_problem(eprb_problem(kPi / 2), eprb_problem(kPi / 2));
  CHECK(prod.targets.size() == 16);
  CHECK(lpmatch::verify(e.product, prod).max_residual <= 1e-9);

  CHECK_ERROR(diosi_check(eprb_problem(kPi / 4), eprb_problem(kPi / 2)), ErrorCode::kComponentInfeasible);
  CHECK_ERROR(diosi_check(eprb_problem(kPi / 2), eprb_problem(kPi / 4)), ErrorCode::kComponentInfeasible);
}

TEST_CASE("LP2 identity") {
  oracle::Rng rng(kSeed + 81);
  std::uniform_real_distribution<double> unif(-1, 1);
  for (int i = 0; i < 1000; ++i) {
    const quantum::Complex za(unif(rng), unif(rng)), zb(unif(rng), unif(rng));
    CHECK(std::abs((za * zb).real() - (za.real() * zb.real() - za.imag() * zb.imag())) <= 1e-15);
  }
}

TEST_CASE("lp2_failure_demo") {
  const auto rho = up();
  SUBCASE("commuting strings never fail") {
    std::vector<quantum::ProjectorString> zs;
    for (int s : {1, -1}) {
      for (int t : {1, -1}) zs.emplace_back(std::vector<quantum::CMatrix>{quantum::spin_projector({0, 0, 1}, s), quantum::spin_projector({0, 0, 1}, t)});
    }
    CHECK_FALSE(lp2_failure_demo(rho, rho, zs, zs));
  }
  SUBCASE("real z_A against real z_B never fails") {
    std::vector<quantum::ProjectorString> xs{quantum::ProjectorString({quantum::spin_projector({1, 0, 0}, 1), quantum::spin_projector({0, 0, 1}, 1)})};
    CHECK_FALSE(lp2_failure_demo(rho, rho, xs, xs));
  }
  SUBCASE("default grid") {
    const DirectionGrid grid;
    CHECK(grid_directions(grid).size() == 1 + 11 * 24);
    auto demo = default_diosi_demo();
    REQUIRE(demo);
    const auto& c = demo->counterexample;
    CHECK(c.re_a >= 0);
    CHECK(c.re_b >= 0);
    CHECK(c.re_ab < -1e-3);
    CHECK(std::abs(c.re_ab - (c.z_a * c.z_b).real()) <= 1e-15);
    // independent recomputation from the reported directions
    auto z = [&](const std::pair<quantum::Vec3, quantum::Vec3>& d) {
      const oracle::Mat m = oracle::proj(d.second, 1) * oracle::proj(d.first, 1);
      return m(0, 0);
    };
    CHECK(std::abs(z(demo->directions_a) - c.z_a) <= 1e-14);
    CHECK(std::abs(z(demo->directions_b) - c.z_b) <= 1e-14);
  }
  SUBCASE("120 degree equatorial pair") {
    const quantum::Vec3 n1{1, 0, 0}, n2{std::cos(2 * kPi / 3), std::sin(2 * kPi / 3), 0};
    quantum::ProjectorString s({quantum::spin_projector(n1, 1), quantum::spin_projector(n2, 1)});
    const auto z = quantum::class_trace(s, rho);
    CHECK(z.real() == doctest::Approx(0.125).epsilon(1e-12));
    CHECK(z.imag() == doctest::Approx(-std::sqrt(3.0) / 8).epsilon(1e-12));
    CHECK((z * z).real() < -1e-3);
    auto cx = lp2_failure_demo(rho, rho, {s}, {s}, 1e-3);
    REQUIRE(cx);
    CHECK(cx->re_ab == doctest::Approx(0.125 * 0.125 - 3.0 / 64).epsilon(1e-12));
  }
}
