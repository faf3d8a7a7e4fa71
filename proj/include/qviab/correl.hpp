#pragma once

// Parity (correlation-function) expansion of quasi-distributions over binary
// variables:
//
//   q(s) = 2^-n * sum_S K_S * prod_{i in S} s_i,   K_S = sum_s prod_{i in S} s_i q(s)
//
// K_S for |S| = 1, 2, 3 are the usual single, pair and triple correlators.

#include <cstddef>
#include <cstdint>
#include <vector>

#include "qviab/qdist.hpp"

namespace qviab::correl {

inline constexpr std::size_t kMaxVariables = 16;

class ParityCoefficients {
 public:
  /// All coefficients zero except K_empty = 1.
  explicit ParityCoefficients(std::size_t n);

  std::size_t n() const noexcept { return n_; }

  // Subsets are 0-based variable index lists, or bitmasks with bit i for variable i.
  double get(std::uint32_t mask) const { return coeff_.at(mask); }
  double get(std::initializer_list<std::size_t> subset) const { return get(mask_of(subset)); }
  void set(std::uint32_t mask, double value) { coeff_.at(mask) = value; }
  void set(std::initializer_list<std::size_t> subset, double value) { set(mask_of(subset), value); }
  void set(const Subset& subset, double value) { set(mask_of(subset), value); }

  const std::vector<double>& dense() const noexcept { return coeff_; }

  std::uint32_t mask_of(std::initializer_list<std::size_t> subset) const;
  std::uint32_t mask_of(const Subset& subset) const;

 private:
  std::size_t n_;
  std::vector<double> coeff_;
};

/// Throws NotBinary unless every variable has arity 2.
ParityCoefficients expand(const QuasiDistribution& q);

/// Exact inverse of expand. Throws NotNormalized unless K_empty = 1.
QuasiDistribution reconstruct(const ParityCoefficients& c);

/// 1/4 (1 + B_i s_i + B_j s_j + C_ij s_i s_j) over variables i < j (0-based).
Marginal pair_marginal(const ParityCoefficients& c, std::size_t i, std::size_t j);

}  // namespace qviab::correl
