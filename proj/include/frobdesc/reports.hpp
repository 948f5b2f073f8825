#pragma once

// JSON and CSV projections of the engine reports. JSON objects use sorted
// keys (nlohmann::json's default map), rationals are "num/den" strings and
// field elements appear only inside polynomial strings, so every report is
// free of floating-point values.

#include <nlohmann/json.hpp>

#include <sstream>
#include <string>
#include <vector>

#include "curve_cohomology.hpp"
#include "descent_audit.hpp"
#include "fermat_ring.hpp"
#include "hilbert_kunz.hpp"
#include "syzygy_bundles.hpp"

namespace frobdesc {

using Json = nlohmann::json;

inline constexpr const char* kVersion = "frobdesc 1.0.0";

/// Row-oriented table; the CSV projection of a report.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add(std::vector<std::string> row) { rows.push_back(std::move(row)); }
};

inline std::string csv_escape(const std::string& cell) {
  if (cell.find_first_of(",\"\n") == std::string::npos) return cell;
  std::string out = "\"";
  for (char c : cell) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

inline std::string to_csv(const Table& t) {
  std::ostringstream os;
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) os << (i ? "," : "") << csv_escape(cells[i]);
    os << '\n';
  };
  line(t.header);
  for (const auto& r : t.rows) line(r);
  return os.str();
}

/// Two-column table of the scalar members of a flat JSON object.
inline Table key_value_table(const Json& obj) {
  Table t{{"key", "value"}, {}};
  for (const auto& [k, v] : obj.items()) {
    if (v.is_object() || v.is_array()) continue;
    t.add({k, v.is_string() ? v.get<std::string>() : v.dump()});
  }
  return t;
}

inline Json curve_json(const FermatCurve& c) {
  Json j{{"d", c.degree()}, {"char", c.characteristic()}, {"genus", c.genus()}};
  if (auto ell = c.ell()) j["ell"] = *ell;
  return j;
}

inline Json bundle_json(const BundleDescriptor& b) {
  return {{"label", b.label()}, {"rank", b.rank()}, {"degree", b.degree()}, {"slope", to_string(b.slope())}};
}

inline Json fill_json(const FillResult& f) {
  Json j{{"filled", f.filled}, {"n_max", f.n_max}};
  if (f.filled) j["degree"] = f.degree;
  return j;
}

template <ExactField F>
Json triple_json(std::span<const NormalPoly<F>> s) {
  Json arr = Json::array();
  for (const auto& c : s) arr.push_back(c.to_string());
  return arr;
}

inline Json hn_json(const HNReport& r) {
  return {{"curve", curve_json(r.curve)},
          {"p", r.p},
          {"ell", r.ell},
          {"k", r.twist.k},
          {"m0", r.twist.m0},
          {"bundle", "Syz(X^" + std::to_string(2 * r.p) + ",Y^" + std::to_string(2 * r.p) + ",Z^" +
                         std::to_string(2 * r.p) + ")(" + std::to_string(r.twist.m0) + ")"},
          {"degree", r.bundle_degree},
          {"section_dimension", r.section_dimension},
          {"section", triple_json<PrimeField>(r.section)},
          {"zero_free", fill_json(r.zero_free)},
          {"alpha", r.alpha},
          {"mu_max", to_string(r.mu_max)},
          {"mu_min", to_string(r.mu_min)},
          {"two_g_minus_two", r.shepherd_barron_bound}};
}

inline Json split_json(const SplitReport& r) {
  return {{"curve", curve_json(r.curve)},
          {"p", r.p},
          {"twist", r.twist},
          {"h0_observed", r.h0_observed},
          {"h0_if_split", r.h0_if_split},
          {"verdict", r.verdict == SplitVerdict::non_split ? "NonSplit" : "Split"},
          {"divisibility_certificate", r.divisibility_certificate}};
}

inline Json scan_json(const ScanReport& r) {
  Json entries = Json::array();
  for (const auto& e : r.entries) {
    entries.push_back(
        {{"shift", e.shift}, {"twist", e.twist}, {"degree", e.degree}, {"h0", e.h0}, {"status", to_string(e.status)}});
  }
  return {{"bundle", bundle_json(r.bundle)}, {"entries", entries}, {"verdict", r.verdict_text()}};
}

inline Table scan_table(const ScanReport& r) {
  Table t{{"shift", "twist", "degree", "h0", "status"}, {}};
  for (const auto& e : r.entries) {
    t.add({std::to_string(e.shift), std::to_string(e.twist), std::to_string(e.degree), std::to_string(e.h0),
           to_string(e.status)});
  }
  return t;
}

inline Json hk_json(const HKReport& r) {
  Json samples = Json::array();
  for (const auto& s : r.samples.samples) {
    samples.push_back(
        {{"e", s.e}, {"q", s.q}, {"exponent", s.exponent}, {"hk", s.hk}, {"ratio", to_string(s.ratio)}});
  }
  Json j{{"curve", curve_json(r.curve)}, {"p", r.p}, {"samples", samples}, {"partial", r.samples.partial}};
  if (r.monsky_value) j["monsky_value"] = to_string(*r.monsky_value);
  if (r.hn_value) j["hn_value"] = to_string(*r.hn_value);
  if (r.alpha_used) j["alpha_used"] = *r.alpha_used;
  return j;
}

inline Table hk_table(const HKReport& r) {
  Table t{{"q", "hk", "ratio"}, {}};
  for (const auto& s : r.samples.samples) t.add({std::to_string(s.q), std::to_string(s.hk), to_string(s.ratio)});
  if (r.monsky_value) t.add({"closed_form_monsky", "", to_string(*r.monsky_value)});
  if (r.hn_value) t.add({"closed_form_hn", "", to_string(*r.hn_value)});
  return t;
}

inline Json elliptic_json(const EllipticReport& r) {
  return {{"p", r.p},
          {"h0", r.h0},
          {"p_mod_3", r.p_mod_3},
          {"type", r.type == EllipticType::f2 ? "F2" : "trivial"}};
}

inline const char* to_string(CorollaryCase c) {
  switch (c) {
    case CorollaryCase::abelian_variety:
      return "abelian_variety";
    case CorollaryCase::homogeneous_space:
      return "homogeneous_space";
    case CorollaryCase::nonpositive_cotangent:
      return "nonpositive_cotangent";
    case CorollaryCase::none:
      break;
  }
  return "none";
}

inline Json scenario_json(const DescentScenario& s) {
  return {{"rank", s.rank},
          {"slope_bound", to_string(s.slope_bound)},
          {"deg_E", s.deg_e},
          {"descent_primes", s.descent_primes},
          {"strong_ss_assumed", s.strong_ss_assumed},
          {"generic_not_semistable_hypothesis", s.generic_not_semistable_hypothesis},
          {"corollary_case", to_string(s.corollary_case)}};
}

/// Reads the scenario document: rank, slope_bound ("num/den" or integer),
/// deg_E, descent_primes, strong_ss_assumed, generic_not_semistable_hypothesis
/// and an optional corollary_case.
inline DescentScenario parse_scenario(const Json& j) {
  auto need = [&](const char* key) -> const Json& {
    if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("scenario is missing '") + key + "'");
    return j.at(key);
  };
  try {
    DescentScenario s;
    s.rank = need("rank").get<int>();
    const auto& b = need("slope_bound");
    s.slope_bound = b.is_string() ? parse_rational(b.get<std::string>()) : Rational(b.get<long>());
    s.deg_e = need("deg_E").get<long>();
    s.descent_primes = need("descent_primes").get<std::vector<std::uint64_t>>();
    s.strong_ss_assumed = need("strong_ss_assumed").get<bool>();
    s.generic_not_semistable_hypothesis = need("generic_not_semistable_hypothesis").get<bool>();
    if (j.contains("corollary_case")) {
      const auto tag = j.at("corollary_case").get<std::string>();
      if (tag == "abelian_variety") {
        s.corollary_case = CorollaryCase::abelian_variety;
      } else if (tag == "homogeneous_space") {
        s.corollary_case = CorollaryCase::homogeneous_space;
      } else if (tag == "nonpositive_cotangent") {
        s.corollary_case = CorollaryCase::nonpositive_cotangent;
      } else if (tag != "none") {
        throw ParseError("unknown corollary_case '" + tag + "'");
      }
    }
    return s;
  } catch (const Json::exception& e) {
    throw ParseError(std::string("malformed scenario: ") + e.what());
  }
}

inline Json audit_json(const AuditVerdict& v) {
  Json j{{"degree_forced_zero", v.degree_forced_zero}, {"conclusion", to_string(v.conclusion)}, {"trace", v.trace}};
  j["contradiction_prime"] = v.contradiction_prime ? Json(*v.contradiction_prime) : Json(nullptr);
  return j;
}

inline Json replay_json(const CounterexampleReplay& r) {
  Json fibers = Json::array();
  for (const auto& f : r.fibers) fibers.push_back({{"p", f.hn.p}, {"hn", hn_json(f.hn)}, {"split", split_json(f.split)}});
  return {{"d", r.d},
          {"ell", r.ell},
          {"fibers", fibers},
          {"char0",
           {{"sections_of_syz_222_3", r.char0_sections_at_3},
            {"bundle_degree", r.char0_bundle_degree},
            {"bundle_slope", to_string(r.char0_bundle_slope)},
            {"sub_degree", r.char0_sub_degree},
            {"sub_slope", to_string(r.char0_sub_slope)},
            {"destabilized", r.char0_destabilized},
            {"extension_class", "Z^" + std::to_string(r.d - 1) + "/(X*Y)"},
            {"extension_class_nonzero", r.extension_class_nonzero},
            {"h1_canonical", r.h1_canonical}}},
          {"strong_ss_assumed", r.strong_ss_assumed},
          {"theorem_inapplicable_reason", r.inapplicability_reason},
          {"audit", audit_json(r.audit_verdict)}};
}

inline Table replay_table(const CounterexampleReplay& r) {
  Table t{{"p", "k", "m0", "alpha", "section_dimension", "zero_free_at", "h0_observed", "h0_if_split", "verdict",
           "certificate"},
          {}};
  for (const auto& f : r.fibers) {
    t.add({std::to_string(f.hn.p), std::to_string(f.hn.twist.k), std::to_string(f.hn.twist.m0),
           std::to_string(f.hn.alpha), std::to_string(f.hn.section_dimension),
           f.hn.zero_free.filled ? std::to_string(f.hn.zero_free.degree) : "inconclusive",
           std::to_string(f.split.h0_observed), std::to_string(f.split.h0_if_split),
           f.split.verdict == SplitVerdict::non_split ? "NonSplit" : "Split",
           f.split.divisibility_certificate ? "true" : "false"});
  }
  return t;
}

}  // namespace frobdesc
