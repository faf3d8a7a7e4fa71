#pragma once

// Phase-1 simplex on a dense tableau with Bland's rule.
//
// Decides feasibility of {x >= 0, A x = b} by minimizing the sum of one
// artificial variable per row. Artificial columns are never stored: once an
// artificial leaves the basis it cannot re-enter, so its column is not needed.

#include <cstddef>
#include <optional>
#include <vector>

namespace qviab::lpmatch::detail {

template <class T>
struct Phase1Outcome {
  T objective{};           // optimal sum of artificials
  std::vector<T> x;        // basic solution for the structural columns
  std::size_t pivots = 0;
  bool iteration_limit = false;
};

template <class T>
T abs_value(const T& v) {
  return v < T(0) ? T(-v) : v;
}

// rows: m x n coefficient matrix; rhs: length m. `eps` is the pivoting
// tolerance (zero for exact arithmetic).
template <class T>
Phase1Outcome<T> phase1(std::vector<std::vector<T>> rows, std::vector<T> rhs, const T& eps,
                        std::size_t max_pivots) {
  const std::size_t m = rows.size();
  const std::size_t n = m == 0 ? 0 : rows[0].size();

  for (std::size_t i = 0; i < m; ++i) {
    if (rhs[i] < T(0)) {
      for (auto& a : rows[i]) a = -a;
      rhs[i] = -rhs[i];
    }
  }

  // Reduced costs of the phase-1 objective w = sum of artificials.
  std::vector<T> cost(n, T(0));
  for (std::size_t i = 0; i < m; ++i) {
    for (std::size_t j = 0; j < n; ++j) cost[j] -= rows[i][j];
  }

  // basis[i] < n: structural column; basis[i] >= n: artificial of row i.
  std::vector<std::size_t> basis(m);
  for (std::size_t i = 0; i < m; ++i) basis[i] = n + i;

  Phase1Outcome<T> out;
  while (true) {
    std::optional<std::size_t> entering;
    for (std::size_t j = 0; j < n; ++j) {
      if (cost[j] < -eps) {
        entering = j;
        break;
      }
    }
    if (!entering) break;
    if (out.pivots >= max_pivots) {
      out.iteration_limit = true;
      break;
    }
    const std::size_t e = *entering;

    std::optional<std::size_t> leave;
    T best_ratio(0);
    for (std::size_t i = 0; i < m; ++i) {
      if (!(rows[i][e] > eps)) continue;
      T ratio = rhs[i] / rows[i][e];
      if (!leave || ratio < best_ratio || (!(best_ratio < ratio) && basis[i] < basis[*leave])) {
        leave = i;
        best_ratio = ratio;
      }
    }
    // Unbounded directions cannot occur: the objective is bounded below by 0.
    if (!leave) break;
    const std::size_t r = *leave;

    const T piv = rows[r][e];
    for (auto& a : rows[r]) a /= piv;
    rhs[r] /= piv;
    rows[r][e] = T(1);

    for (std::size_t i = 0; i < m; ++i) {
      if (i == r) continue;
      const T f = rows[i][e];
      if (f == T(0)) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (rows[r][j] != T(0)) rows[i][j] -= f * rows[r][j];
      }
      rows[i][e] = T(0);
      rhs[i] -= f * rhs[r];
      if (rhs[i] < T(0) && abs_value(rhs[i]) <= eps) rhs[i] = T(0);
    }
    const T f = cost[e];
    for (std::size_t j = 0; j < n; ++j) {
      if (rows[r][j] != T(0)) cost[j] -= f * rows[r][j];
    }
    cost[e] = T(0);
    basis[r] = e;
    ++out.pivots;
  }

  out.x.assign(n, T(0));
  T w(0);
  for (std::size_t i = 0; i < m; ++i) {
    if (basis[i] < n) {
      out.x[basis[i]] = rhs[i];
    } else {
      w += rhs[i];
    }
  }
  out.objective = w;
  return out;
}

}  // namespace qviab::lpmatch::detail
