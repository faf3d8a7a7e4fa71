#include "qviab/eprb.hpp"

#include <cmath>
#include <cstdio>

#include "qviab/error.hpp"
#include "qviab/lpmatch.hpp"

namespace qviab::eprb {

namespace {

quantum::Vec3 in_plane(double angle) { return {std::sin(angle), 0.0, std::cos(angle)}; }

double sign_of(std::size_t index) { return index == 0 ? 1.0 : -1.0; }

std::vector<quantum::ProjectiveDecomposition> local_decompositions(const PlanarConfig& cfg) {
  using quantum::ProjectiveDecomposition;
  const auto id = quantum::identity(2);
  auto on_a = [&](const quantum::Vec3& n, const char* label) {
    return ProjectiveDecomposition({quantum::tensor(quantum::spin_projector(n, +1), id),
                                    quantum::tensor(quantum::spin_projector(n, -1), id)},
                                   label);
  };
  auto on_b = [&](const quantum::Vec3& n, const char* label) {
    return ProjectiveDecomposition({quantum::tensor(id, quantum::spin_projector(n, +1)),
                                    quantum::tensor(id, quantum::spin_projector(n, -1))},
                                   label);
  };
  return {on_a(cfg.a, "s1"), on_a(cfg.a_prime, "s2"), on_b(cfg.b, "s3"), on_b(cfg.b_prime, "s4")};
}

const quantum::DensityState& singlet_state() {
  static const quantum::DensityState rho = quantum::singlet();
  return rho;
}

void append_real(std::string& out, double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  out += buf;
}

}  // namespace

PlanarConfig make_config(double theta) {
  return {theta, in_plane(0.0), in_plane(2.0 * theta), in_plane(theta), in_plane(-theta)};
}

double dot(const quantum::Vec3& u, const quantum::Vec3& v) {
  return u[0] * v[0] + u[1] * v[1] + u[2] * v[2];
}

double closed_form_q(const PlanarConfig& cfg, int s1, int s2, int s3, int s4) {
  const double ab = dot(cfg.a, cfg.b), abp = dot(cfg.a, cfg.b_prime);
  const double apb = dot(cfg.a_prime, cfg.b), apbp = dot(cfg.a_prime, cfg.b_prime);
  const double aap = dot(cfg.a, cfg.a_prime), bbp = dot(cfg.b, cfg.b_prime);
  // (s1 a + s2 a').(s3 b + s4 b')
  const double cross = s1 * s3 * ab + s1 * s4 * abp + s2 * s3 * apb + s2 * s4 * apbp;
  const double bracket = (1.0 + s1 * s2 * aap) * (1.0 + s3 * s4 * bbp) - cross +
                         s1 * s2 * s3 * s4 * (ab * apbp - abp * apb);
  return bracket / 16.0;
}

QuasiDistribution closed_form_distribution(const PlanarConfig& cfg) {
  OutcomeSpace space = OutcomeSpace::binary(4);
  std::vector<double> values(16);
  for (std::size_t c = 0; c < 16; ++c) {
    const auto o = space.outcome_of(c);
    values[c] = closed_form_q(cfg, static_cast<int>(sign_of(o[0])), static_cast<int>(sign_of(o[1])),
                              static_cast<int>(sign_of(o[2])), static_cast<int>(sign_of(o[3])));
  }
  return QuasiDistribution(std::move(space), std::move(values), 1e-10);
}

QuasiDistribution trace_distribution(const PlanarConfig& cfg) {
  return quantum::gp_quasiprob(local_decompositions(cfg), {1, 3, 0, 2}, singlet_state());
}

double q_pppp(double theta) {
  const double c = std::cos(theta);
  return 0.25 * c * c * (2.0 * c * c - c - 1.0);
}

bool ReducedChsh::satisfied(double tol) const {
  return std::abs(g1) <= 1.0 + tol && std::abs(g2) <= 1.0 + tol;
}

ReducedChsh chsh_reduced(double theta) {
  const double c = std::cos(theta);
  const double c3 = c * c * c;
  return {2.0 * c3 - 3.0 * c, 2.0 * c3 - c};
}

fine::ChshInput cycle_correlators(double theta) {
  const double c = std::cos(theta);
  return {-c, -c, -c, -std::cos(3.0 * theta)};
}

std::vector<Subset> cycle_pairs() { return {{0, 2}, {0, 3}, {1, 2}, {1, 3}}; }

SweepRow sweep_row(double theta, double tol) {
  SweepRow row;
  row.theta = theta;
  row.q_pppp = q_pppp(theta);
  row.q_pppp_x4 = 4.0 * row.q_pppp;
  const auto g = chsh_reduced(theta);
  row.g1 = g.g1;
  row.g2 = g.g2;
  row.chsh_ok = fine::chsh_satisfied(cycle_correlators(theta), tol);
  const auto q = trace_distribution(make_config(theta));
  row.lin_pos_ok = quantum::linear_positivity(q, tol);
  row.lp_feasible = lpmatch::solve(lpmatch::problem_from_marginals(q, cycle_pairs()), tol).feasible();
  return row;
}

std::vector<SweepRow> sweep(double theta_min, double theta_max, std::size_t steps, double tol) {
  if (steps < 2) raise(ErrorCode::kInvalidArgument, "sweep needs at least two steps");
  if (!std::isfinite(theta_min) || !std::isfinite(theta_max)) {
    raise(ErrorCode::kInvalidArgument, "sweep bounds must be finite");
  }
  std::vector<SweepRow> rows;
  rows.reserve(steps);
  const double span = theta_max - theta_min;
  for (std::size_t i = 0; i < steps; ++i) {
    const double theta = i + 1 == steps ? theta_max
                                        : theta_min + span * static_cast<double>(i) / static_cast<double>(steps - 1);
    rows.push_back(sweep_row(theta, tol));
  }
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows) {
  std::string out = kSweepCsvHeader;
  out += '\n';
  for (const auto& r : rows) {
    for (double x : {r.theta, r.q_pppp, r.q_pppp_x4, r.g1, r.g2}) {
      append_real(out, x);
      out += ',';
    }
    out += r.chsh_ok ? '1' : '0';
    out += ',';
    out += r.lin_pos_ok ? '1' : '0';
    out += ',';
    out += r.lp_feasible ? '1' : '0';
    out += '\n';
  }
  return out;
}

std::vector<OrderingVariant> ordering_variants(double theta) {
  const auto decomps = local_decompositions(make_config(theta));
  const std::vector<std::pair<const char*, std::vector<std::size_t>>> orders = {
      {"a.a' x b.b'", {1, 3, 0, 2}},
      {"a'.a x b.b'", {0, 3, 1, 2}},
      {"a.a' x b'.b", {1, 2, 0, 3}},
      {"a'.a x b'.b", {0, 2, 1, 3}},
  };
  std::vector<OrderingVariant> out;
  for (const auto& [name, order] : orders) {
    out.push_back({name, order, quantum::gp_quasiprob(decomps, order, singlet_state())});
  }
  return out;
}

}  // namespace qviab::eprb
