#pragma once

#include <cmath>
#include <span>
#include <vector>

#include <doctest.h>

#include "qviab/error.hpp"

// Expect `expr` to throw qviab::Error carrying `want`.
#define CHECK_ERROR(expr, want)                                   \
  do {                                                            \
    bool thrown_ = false;                                         \
    try {                                                         \
      (void)(expr);                                               \
    } catch (const qviab::Error& e_) {                            \
      thrown_ = true;                                             \
      CHECK_MESSAGE(e_.code() == (want), e_.what());              \
    }                                                             \
    CHECK_MESSAGE(thrown_, "no qviab::Error from " #expr);        \
  } while (0)

inline double max_abs_diff(std::span<const double> a, std::span<const double> b) {
  REQUIRE(a.size() == b.size());
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

inline std::vector<double> as_vector(std::span<const double> s) { return {s.begin(), s.end()}; }

// Fixed base seed; every property test derives its stream from this.
inline constexpr unsigned long long kSeed = 0;
