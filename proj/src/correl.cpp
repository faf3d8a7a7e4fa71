#include "qviab/correl.hpp"

#include <bit>
#include <cmath>

#include "qviab/error.hpp"

namespace qviab::correl {

namespace {

// Cell indices put variable 0 in the most significant bit; coefficient masks
// put variable i in bit i. This swaps between the two layouts.
std::uint32_t reverse_bits(std::uint32_t x, std::size_t n) {
  std::uint32_t r = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (x & (1u << i)) r |= 1u << (n - 1 - i);
  }
  return r;
}

// In-place unnormalized Walsh-Hadamard transform. With index 0 <-> +1 the
// sign of cell x under parity set T is (-1)^popcount(x & T).
void walsh_hadamard(std::vector<double>& a) {
  for (std::size_t h = 1; h < a.size(); h <<= 1) {
    for (std::size_t i = 0; i < a.size(); i += h << 1) {
      for (std::size_t j = i; j < i + h; ++j) {
        const double x = a[j], y = a[j + h];
        a[j] = x + y;
        a[j + h] = x - y;
      }
    }
  }
}

}  // namespace

ParityCoefficients::ParityCoefficients(std::size_t n) : n_(n) {
  if (n == 0 || n > kMaxVariables) {
    raise(ErrorCode::kInvalidArgument, "parity expansion supports 1..16 variables");
  }
  coeff_.assign(std::size_t{1} << n, 0.0);
  coeff_[0] = 1.0;
}

std::uint32_t ParityCoefficients::mask_of(std::initializer_list<std::size_t> subset) const {
  return mask_of(Subset(subset));
}

std::uint32_t ParityCoefficients::mask_of(const Subset& subset) const {
  std::uint32_t m = 0;
  for (auto v : subset) {
    if (v >= n_) raise(ErrorCode::kBadIndex, "variable index " + std::to_string(v) + " out of range");
    m |= 1u << v;
  }
  return m;
}

ParityCoefficients expand(const QuasiDistribution& q) {
  if (!q.space().all_binary()) raise(ErrorCode::kNotBinary, "parity expansion needs binary variables");
  const std::size_t n = q.space().num_variables();
  ParityCoefficients c(n);
  std::vector<double> a(q.values().begin(), q.values().end());
  walsh_hadamard(a);
  for (std::uint32_t t = 0; t < a.size(); ++t) c.set(reverse_bits(t, n), a[t]);
  return c;
}

QuasiDistribution reconstruct(const ParityCoefficients& c) {
  if (std::abs(c.get(0u) - 1.0) > kDefaultNormTol) {
    raise(ErrorCode::kNotNormalized, "K_empty must equal 1");
  }
  const std::size_t n = c.n();
  std::vector<double> a(std::size_t{1} << n);
  for (std::uint32_t t = 0; t < a.size(); ++t) a[t] = c.get(reverse_bits(t, n));
  walsh_hadamard(a);
  const double scale = std::ldexp(1.0, -static_cast<int>(n));
  for (double& x : a) x *= scale;
  return QuasiDistribution(OutcomeSpace::binary(n), std::move(a));
}

Marginal pair_marginal(const ParityCoefficients& c, std::size_t i, std::size_t j) {
  if (i == j || i >= c.n() || j >= c.n()) raise(ErrorCode::kBadIndex, "pair indices must be distinct and in range");
  if (i > j) std::swap(i, j);
  const double bi = c.get(1u << i), bj = c.get(1u << j), cij = c.get((1u << i) | (1u << j));
  std::vector<double> table(4);
  for (int si = 0; si < 2; ++si) {
    for (int sj = 0; sj < 2; ++sj) {
      const double s1 = si == 0 ? 1.0 : -1.0, s2 = sj == 0 ? 1.0 : -1.0;
      table[si * 2 + sj] = 0.25 * (1.0 + bi * s1 + bj * s2 + cij * s1 * s2);
    }
  }
  const Subset sub{i, j};
  OutcomeSpace full = OutcomeSpace::binary(c.n());
  return Marginal{sub, QuasiDistribution(full.subspace(sub), std::move(table))};
}

}  // namespace qviab::correl
