#include "qviab/json_io.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "qviab/error.hpp"

namespace qviab::io {

namespace {

using nlohmann::json;

json parse(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::exception& e) {
    raise(ErrorCode::kParse, e.what());
  }
}

[[noreturn]] void schema(const std::string& what) { raise(ErrorCode::kParse, what); }

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) schema(std::string("missing field '") + key + "'");
  return j.at(key);
}

double number(const json& j, const char* what) {
  if (!j.is_number()) schema(std::string(what) + " must be a number");
  const double x = j.get<double>();
  if (!std::isfinite(x)) schema(std::string(what) + " must be finite");
  return x;
}

std::size_t index(const json& j, const char* what) {
  if (!j.is_number_integer() || j.get<long long>() < 0) schema(std::string(what) + " must be a nonnegative integer");
  return j.get<std::size_t>();
}

std::vector<double> numbers(const json& j, const char* what) {
  if (!j.is_array()) schema(std::string(what) + " must be an array");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& x : j) out.push_back(number(x, what));
  return out;
}

Subset subset_from(const json& j) {
  if (!j.is_array()) schema("subset must be an array");
  Subset s;
  for (const auto& x : j) {
    const std::size_t v = index(x, "subset entry");
    if (v == 0) schema("subset entries are 1-based");
    s.push_back(v - 1);
  }
  return s;
}

json subset_to(const Subset& s) {
  json out = json::array();
  for (auto v : s) out.push_back(v + 1);
  return out;
}

OutcomeSpace space_from(const json& j) {
  const json& vars = field(j, "variables");
  if (!vars.is_array()) schema("variables must be an array");
  std::vector<Variable> out;
  for (const auto& v : vars) {
    const json& label = field(v, "label");
    if (!label.is_string()) schema("label must be a string");
    out.push_back({label.get<std::string>(), index(field(v, "arity"), "arity")});
  }
  return OutcomeSpace(std::move(out));
}

json space_to(const OutcomeSpace& space) {
  json vars = json::array();
  for (const auto& v : space.variables()) vars.push_back({{"label", v.label}, {"arity", v.arity}});
  return json{{"variables", vars}};
}

json distribution_to(const QuasiDistribution& q) {
  json j = space_to(q.space());
  j["values"] = std::vector<double>(q.values().begin(), q.values().end());
  return j;
}

QuasiDistribution distribution_from(const json& j, double norm_tol) {
  return QuasiDistribution(space_from(j), numbers(field(j, "values"), "values"), norm_tol);
}

std::string_view kind_name(viability::InequalityKind k) {
  return k == viability::InequalityKind::kChsh ? "CHSH" : "Bell";
}

}  // namespace

std::string distribution_to_json(const QuasiDistribution& q) { return distribution_to(q).dump(); }

QuasiDistribution distribution_from_json(std::string_view text, double norm_tol) {
  return distribution_from(parse(text), norm_tol);
}

std::string space_to_json(const OutcomeSpace& space) { return space_to(space).dump(); }

correl::ParityCoefficients coefficients_from_json(std::string_view text) {
  const json j = parse(text);
  correl::ParityCoefficients c(index(field(j, "n"), "n"));
  const json& coeffs = field(j, "coeffs");
  if (!coeffs.is_array()) schema("coeffs must be an array");
  for (const auto& entry : coeffs) {
    Subset s = subset_from(field(entry, "subset"));
    std::sort(s.begin(), s.end());
    if (std::adjacent_find(s.begin(), s.end()) != s.end()) schema("repeated index in coefficient subset");
    c.set(s, number(field(entry, "value"), "value"));
  }
  return c;
}

std::string coefficients_to_json(const correl::ParityCoefficients& c) {
  json coeffs = json::array();
  for (std::uint32_t mask = 0; mask < c.dense().size(); ++mask) {
    if (c.get(mask) == 0.0) continue;
    Subset s;
    for (std::size_t i = 0; i < c.n(); ++i) {
      if (mask & (1u << i)) s.push_back(i);
    }
    coeffs.push_back({{"subset", subset_to(s)}, {"value", c.get(mask)}});
  }
  return json{{"n", c.n()}, {"coeffs", coeffs}}.dump();
}

lpmatch::MatchingProblem problem_from_json(std::string_view text) {
  const json j = parse(text);
  lpmatch::MatchingProblem prob{space_from(field(j, "space")), {}, {}};
  const json& targets = field(j, "targets");
  if (!targets.is_array()) schema("targets must be an array");
  for (const auto& t : targets) {
    prob.targets.push_back({subset_from(field(t, "subset")), numbers(field(t, "values"), "values")});
  }
  if (j.contains("zero_support")) {
    const json& zs = j.at("zero_support");
    if (!zs.is_array()) schema("zero_support must be an array");
    for (const auto& o : zs) {
      if (!o.is_array()) schema("zero_support entries must be outcome tuples");
      Outcome out;
      for (const auto& x : o) out.push_back(index(x, "outcome value"));
      prob.zero_support.push_back(std::move(out));
    }
  }
  return prob;
}

std::string problem_to_json(const lpmatch::MatchingProblem& prob) {
  json targets = json::array();
  for (const auto& t : prob.targets) targets.push_back({{"subset", subset_to(t.subset)}, {"values", t.values}});
  json zs = json::array();
  for (const auto& o : prob.zero_support) zs.push_back(o);
  return json{{"space", space_to(prob.space)}, {"targets", targets}, {"zero_support", zs}}.dump();
}

std::vector<Subset> subsets_from_json(std::string_view text) {
  json j = parse(text);
  if (j.is_object()) j = field(j, "subsets");
  if (!j.is_array()) schema("subsets must be an array of index lists");
  std::vector<Subset> out;
  for (const auto& s : j) out.push_back(subset_from(s));
  return out;
}

std::string subsets_to_json(const std::vector<Subset>& subsets) {
  json out = json::array();
  for (const auto& s : subsets) out.push_back(subset_to(s));
  return out.dump();
}

std::string match_result_to_json(const lpmatch::MatchingResult& r) {
  json j{{"verdict", r.feasible() ? "Feasible" : "Infeasible"},
         {"phase1_objective", r.phase1_objective},
         {"residual", r.residual},
         {"numerically_marginal", r.numerically_marginal},
         {"exact", r.exact}};
  j["witness"] = r.witness ? distribution_to(*r.witness) : json(nullptr);
  return j.dump();
}

std::string report_to_json(const viability::ViabilityReport& r) {
  json family = json::array();
  for (const auto& s : r.family) family.push_back(subset_to(s));
  json j{{"status", viability::status_name(r.status)},
         {"mode", viability::mode_name(r.mode)},
         {"family", family},
         {"note", r.note}};
  j["witness"] = r.witness ? distribution_to(*r.witness) : json(nullptr);
  if (r.lp || r.inequality) {
    json cert = json::object();
    cert["lp"] = r.lp ? json{{"phase1_objective", r.lp->phase1_objective}, {"exact", r.lp->exact}} : json(nullptr);
    if (r.inequality) {
      const auto& c = *r.inequality;
      json vars = json::array();
      for (auto v : c.variables) vars.push_back(v + 1);
      cert["inequality"] = {{"kind", kind_name(c.kind)},
                            {"variables", vars},
                            {"plus_values", c.plus_values},
                            {"combination", c.combination + 1},
                            {"value", c.value},
                            {"correlators", c.correlators}};
    } else {
      cert["inequality"] = nullptr;
    }
    j["certificate"] = cert;
  } else {
    j["certificate"] = nullptr;
  }
  return j.dump(2);
}

viability::ViabilityReport report_from_json(std::string_view text) {
  const json j = parse(text);
  viability::ViabilityReport r;

  const json& status = field(j, "status");
  if (status == "Viable") {
    r.status = viability::Status::kViable;
  } else if (status == "NonViable") {
    r.status = viability::Status::kNonViable;
  } else if (status == "Unknown") {
    r.status = viability::Status::kUnknown;
  } else {
    schema("unknown status");
  }
  const json& mode = field(j, "mode");
  if (mode == "all-positive") {
    r.mode = viability::Mode::kAllPositive;
  } else if (mode == "specified") {
    r.mode = viability::Mode::kSpecified;
  } else {
    schema("unknown mode");
  }
  const json& family = field(j, "family");
  if (!family.is_array()) schema("family must be an array");
  for (const auto& s : family) r.family.push_back(subset_from(s));
  if (j.contains("note") && j.at("note").is_string()) r.note = j.at("note").get<std::string>();

  const json& witness = field(j, "witness");
  if (!witness.is_null()) r.witness = distribution_from(witness, kDefaultNormTol);
  const json& cert = field(j, "certificate");
  if (!cert.is_null()) {
    const json& lp = field(cert, "lp");
    if (!lp.is_null()) {
      const json& exact = field(lp, "exact");
      if (!exact.is_boolean()) schema("exact must be a boolean");
      r.lp = viability::LpCertificate{number(field(lp, "phase1_objective"), "phase1_objective"), exact.get<bool>()};
    }
    const json& ineq = field(cert, "inequality");
    if (!ineq.is_null()) {
      viability::InequalityCertificate c;
      const json& kind = field(ineq, "kind");
      if (kind == "CHSH") {
        c.kind = viability::InequalityKind::kChsh;
      } else if (kind == "Bell") {
        c.kind = viability::InequalityKind::kBell;
      } else {
        schema("unknown inequality kind");
      }
      c.variables = subset_from(field(ineq, "variables"));
      const json& plus = field(ineq, "plus_values");
      if (!plus.is_array()) schema("plus_values must be an array");
      for (const auto& p : plus) {
        std::vector<std::size_t> values;
        if (!p.is_array()) schema("plus_values entries must be arrays");
        for (const auto& v : p) values.push_back(index(v, "plus value"));
        c.plus_values.push_back(std::move(values));
      }
      const std::size_t comb = index(field(ineq, "combination"), "combination");
      if (comb < 1 || comb > 4) schema("combination must be 1..4");
      c.combination = comb - 1;
      c.value = number(field(ineq, "value"), "value");
      c.correlators = numbers(field(ineq, "correlators"), "correlators");
      const std::size_t want = c.kind == viability::InequalityKind::kChsh ? 4 : 3;
      if (c.variables.size() != want || c.plus_values.size() != want || c.correlators.size() != want) {
        schema("inequality certificate has the wrong arity");
      }
      r.inequality = std::move(c);
    }
  }

  const bool consistent = (r.status == viability::Status::kViable) == r.witness.has_value() &&
                          (r.status == viability::Status::kNonViable) == r.lp.has_value();
  if (!consistent) schema("status does not match witness/certificate presence");
  return r;
}

}  // namespace qviab::io
