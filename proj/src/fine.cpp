#include "qviab/fine.hpp"

#include <algorithm>
#include <cmath>

#include "qviab/error.hpp"

namespace qviab::fine {

namespace {

void check_correlator(double c, double tol, const char* name) {
  if (!std::isfinite(c) || std::abs(c) > 1.0 + tol) {
    raise(ErrorCode::kOutOfRange, std::string("correlator ") + name + " = " +
                                      std::to_string(c) + " lies outside [-1, 1]");
  }
}

bool in_range(double c, double tol) { return std::isfinite(c) && std::abs(c) <= 1.0 + tol; }

}  // namespace

std::array<double, 4> chsh_values(const ChshInput& c, double tol) {
  check_correlator(c.c13, tol, "C13");
  check_correlator(c.c14, tol, "C14");
  check_correlator(c.c23, tol, "C23");
  check_correlator(c.c24, tol, "C24");
  return {c.c13 + c.c14 + c.c23 - c.c24,
          c.c13 + c.c14 - c.c23 + c.c24,
          c.c13 - c.c14 + c.c23 + c.c24,
          -c.c13 + c.c14 + c.c23 + c.c24};
}

bool chsh_satisfied(const ChshInput& c, double tol) {
  // Correlators outside [-1, 1] cannot come from any probability.
  if (!in_range(c.c13, tol) || !in_range(c.c14, tol) || !in_range(c.c23, tol) || !in_range(c.c24, tol)) {
    return false;
  }
  const auto s = chsh_values(c, tol);
  return std::all_of(s.begin(), s.end(), [tol](double v) { return std::abs(v) <= 2.0 + tol; });
}

std::array<double, 4> bell_values(const BellInput& b, double tol) {
  check_correlator(b.c12, tol, "C12");
  check_correlator(b.c13, tol, "C13");
  check_correlator(b.c23, tol, "C23");
  return {b.c12 + b.c13 - b.c23,
          b.c12 - b.c13 + b.c23,
          -b.c12 + b.c13 + b.c23,
          -b.c12 - b.c13 - b.c23};
}

bool bell_satisfied(const BellInput& b, double tol) {
  if (!in_range(b.c12, tol) || !in_range(b.c13, tol) || !in_range(b.c23, tol)) return false;
  const auto v = bell_values(b, tol);
  return std::all_of(v.begin(), v.end(), [tol](double x) { return x <= 1.0 + tol; });
}

}  // namespace qviab::fine
