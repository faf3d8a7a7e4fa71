#pragma once

// JSON file formats. Variable subsets are written 1-based everywhere in JSON;
// in-memory subsets are 0-based. Outcome tuples (zero_support) are 0-based
// alphabet indices. Numbers are written in shortest round-trip form so that
// documents re-validate exactly.
//
//   distribution: {"variables":[{"label":"s1","arity":2},...],"values":[...]}
//   coefficients: {"n":4,"coeffs":[{"subset":[1,3],"value":-0.5},...]}
//   problem:      {"space":{"variables":[...]},"targets":[{"subset":[1,3],"values":[...]}],
//                  "zero_support":[[0,1,0,1],...]}
//   subsets:      [[1,3],[1,4]] or {"subsets":[[1,3],[1,4]]}

#include <string>
#include <string_view>
#include <vector>

#include "qviab/correl.hpp"
#include "qviab/lpmatch.hpp"
#include "qviab/qdist.hpp"
#include "qviab/viability.hpp"

namespace qviab::io {

std::string distribution_to_json(const QuasiDistribution& q);
QuasiDistribution distribution_from_json(std::string_view text, double norm_tol = kDefaultNormTol);

std::string space_to_json(const OutcomeSpace& space);

/// Absent subsets read as 0, except the empty subset which reads as 1.
correl::ParityCoefficients coefficients_from_json(std::string_view text);
std::string coefficients_to_json(const correl::ParityCoefficients& c);

lpmatch::MatchingProblem problem_from_json(std::string_view text);
std::string problem_to_json(const lpmatch::MatchingProblem& prob);

std::vector<Subset> subsets_from_json(std::string_view text);
std::string subsets_to_json(const std::vector<Subset>& subsets);

std::string match_result_to_json(const lpmatch::MatchingResult& result);

std::string report_to_json(const viability::ViabilityReport& report);
/// Parses and validates a report document; throws Parse on schema violations.
viability::ViabilityReport report_from_json(std::string_view text);

}  // namespace qviab::io
