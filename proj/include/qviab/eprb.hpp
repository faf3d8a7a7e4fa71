#pragma once

// Singlet-pair example with four coplanar measurement directions a, a' (on
// particle A) and b, b' (on particle B), arranged so that
//
//   a.b = a.b' = a'.b = cos(theta),   a'.b' = cos(3 theta).
//
// Variables are (s1, s2, s3, s4) <-> (a, a', b, b').

#include <cstddef>
#include <string>
#include <vector>

#include "qviab/fine.hpp"
#include "qviab/qdist.hpp"
#include "qviab/quantum.hpp"

namespace qviab::eprb {

struct PlanarConfig {
  double theta = 0.0;
  quantum::Vec3 a, a_prime, b, b_prime;
};

/// In-plane angles (a, b, b', a') = (0, theta, -theta, 2 theta) in the x-z plane.
PlanarConfig make_config(double theta);

double dot(const quantum::Vec3& u, const quantum::Vec3& v);

/// Closed-form quasi-probability for spins s_i in {+1, -1}.
double closed_form_q(const PlanarConfig& cfg, int s1, int s2, int s3, int s4);
QuasiDistribution closed_form_distribution(const PlanarConfig& cfg);

/// Re Tr(P^a P^a' (x) P^b P^b' rho_singlet) with P^a' and P^b' applied first.
QuasiDistribution trace_distribution(const PlanarConfig& cfg);

/// 1/4 cos^2(theta) (2 cos^2(theta) - cos(theta) - 1).
double q_pppp(double theta);

struct ReducedChsh {
  double g1 = 0.0;  // 2 cos^3 - 3 cos
  double g2 = 0.0;  // 2 cos^3 - cos
  bool satisfied(double tol = kDefaultPosTol) const;
};

ReducedChsh chsh_reduced(double theta);

/// (C13, C14, C23, C24) = (-cos, -cos, -cos, -cos 3theta).
fine::ChshInput cycle_correlators(double theta);

/// 0-based cycle pairs {0,2}, {0,3}, {1,2}, {1,3}.
std::vector<Subset> cycle_pairs();

struct SweepRow {
  double theta = 0.0;
  double q_pppp = 0.0;
  double q_pppp_x4 = 0.0;
  double g1 = 0.0;
  double g2 = 0.0;
  bool chsh_ok = false;
  bool lin_pos_ok = false;
  bool lp_feasible = false;
};

inline constexpr std::size_t kDefaultSweepSteps = 1000;

/// `steps` evenly spaced points including both endpoints; steps >= 2.
std::vector<SweepRow> sweep(double theta_min, double theta_max, std::size_t steps,
                            double tol = kDefaultPosTol);
SweepRow sweep_row(double theta, double tol = kDefaultPosTol);

inline constexpr const char* kSweepCsvHeader =
    "theta,q_pppp,q_pppp_x4,g1,g2,chsh_ok,lin_pos_ok,lp_feasible";

/// Header line plus one line per row; reals at 12 significant digits.
std::string sweep_csv(const std::vector<SweepRow>& rows);

struct OrderingVariant {
  std::string name;
  std::vector<std::size_t> order;  // application order over (a, a', b, b')
  QuasiDistribution q;
};

/// The four inequivalent orderings of (P^a, P^a') and (P^b, P^b'); the first
/// is the one used by trace_distribution.
std::vector<OrderingVariant> ordering_variants(double theta);

}  // namespace qviab::eprb
