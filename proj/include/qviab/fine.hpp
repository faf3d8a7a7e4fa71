#pragma once

// Closed-form existence criteria for a joint probability behind pair
// correlators: the eight CHSH inequalities on the four-cycle
// (1,3),(1,4),(2,3),(2,4) and the four Bell inequalities on a triangle.
// Indices in field names are 1-based to match the usual notation.

#include <array>

#include "qviab/qdist.hpp"

namespace qviab::fine {

struct ChshInput {
  double c13 = 0, c14 = 0, c23 = 0, c24 = 0;
};

struct BellInput {
  double c12 = 0, c13 = 0, c23 = 0;
};

/// S1..S4; the eight inequalities are |S_k| <= 2. Throws OutOfRange if a
/// correlator exceeds 1 + tol in magnitude.
std::array<double, 4> chsh_values(const ChshInput& c, double tol = kDefaultPosTol);

bool chsh_satisfied(const ChshInput& c, double tol = kDefaultPosTol);

/// The four left-hand sides; each inequality reads value <= 1.
std::array<double, 4> bell_values(const BellInput& b, double tol = kDefaultPosTol);

bool bell_satisfied(const BellInput& b, double tol = kDefaultPosTol);

}  // namespace qviab::fine
