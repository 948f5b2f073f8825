#pragma once

// Slope bookkeeping for Frobenius-descent scenarios.
//
// If E_m = F*(F_m) on a fiber of residue characteristic p and semistable
// bundles are strongly semistable there, then mu_max(E_m) = p mu_max(F_m)
// and deg E_m = p deg F_m. A non-semistable F_m has mu_max >= 1/r, so a
// uniform bound mu_max(E_m) <= b is violated as soon as p > r b.

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "arith.hpp"
#include "curve_cohomology.hpp"
#include "errors.hpp"
#include "syzygy_bundles.hpp"

namespace frobdesc {

/// Primes below `limit` by the sieve of Eratosthenes.
inline std::vector<std::uint64_t> sieve_primes(std::uint64_t limit) {
  std::vector<bool> composite(limit, false);
  std::vector<std::uint64_t> out;
  for (std::uint64_t n = 2; n < limit; ++n) {
    if (composite[n]) continue;
    out.push_back(n);
    for (std::uint64_t k = n * n; k < limit; k += n) composite[k] = true;
  }
  return out;
}

/// The first `count` primes congruent to `residue` mod `modulus`, ascending.
inline std::vector<std::uint64_t> primes_in_progression(std::int64_t residue, std::uint64_t modulus, std::size_t count) {
  if (modulus == 0) throw PreconditionError("modulus must be positive");
  const auto m = static_cast<std::int64_t>(modulus);
  const auto r = static_cast<std::uint64_t>(((residue % m) + m) % m);
  if (count == 0) return {};

  if (std::gcd(r, modulus) > 1) {
    // Only a prime dividing the modulus can lie in this progression.
    std::vector<std::uint64_t> finite;
    for (std::uint64_t f = 2; f <= modulus; ++f) {
      if (modulus % f == 0 && is_prime(f) && f % modulus == r) finite.push_back(f);
    }
    if (finite.size() < count) {
      throw PreconditionError("progression " + std::to_string(r) + " mod " + std::to_string(modulus) +
                              " contains only " + std::to_string(finite.size()) + " prime(s)");
    }
    finite.resize(count);
    return finite;
  }

  std::uint64_t limit = 1024;
  while (true) {
    std::vector<std::uint64_t> out;
    for (auto p : sieve_primes(limit)) {
      if (p % modulus == r) {
        out.push_back(p);
        if (out.size() == count) return out;
      }
    }
    if (limit > (std::uint64_t{1} << 34)) throw PreconditionError("prime search limit exceeded");
    limit *= 4;
  }
}

/// mu_max(E) = p mu_max(F) for E = F*(F) under strong semistability.
inline Rational mu_max_scaling(const Rational& mu_max_descended, std::uint64_t p) { return mu_max_descended * p; }

/// Descent at p forces p | deg E.
inline bool descent_degree_check(long deg_e, std::uint64_t p) {
  if (p == 0) throw PreconditionError("p must be a prime");
  return deg_e % static_cast<long>(p) == 0;
}

enum class CorollaryCase { none, abelian_variety, homogeneous_space, nonpositive_cotangent };

struct DescentScenario {
  int rank = 1;
  Rational slope_bound;  // b with mu_max(E_m) <= b on every fiber
  long deg_e = 0;
  std::vector<std::uint64_t> descent_primes;
  bool strong_ss_assumed = false;
  bool generic_not_semistable_hypothesis = false;
  CorollaryCase corollary_case = CorollaryCase::none;
};

enum class AuditConclusion { generically_semistable, inconsistent_scenario, inconclusive };

inline const char* to_string(AuditConclusion c) {
  switch (c) {
    case AuditConclusion::generically_semistable:
      return "generically-semistable";
    case AuditConclusion::inconsistent_scenario:
      return "inconsistent-scenario";
    case AuditConclusion::inconclusive:
      break;
  }
  return "inconclusive";
}

struct AuditVerdict {
  bool degree_forced_zero = false;
  std::optional<std::uint64_t> contradiction_prime;
  AuditConclusion conclusion = AuditConclusion::inconclusive;
  std::vector<std::string> trace;
};

inline AuditVerdict audit(const DescentScenario& s) {
  if (s.descent_primes.empty()) throw PreconditionError("scenario lists no descent primes");
  if (s.rank < 1) throw PreconditionError("rank must be positive");
  std::set<std::uint64_t> distinct;
  for (auto p : s.descent_primes) {
    if (!is_prime(p)) throw PreconditionError(std::to_string(p) + " is not prime");
    if (!distinct.insert(p).second) throw PreconditionError("descent prime " + std::to_string(p) + " repeated");
  }

  AuditVerdict v;
  const bool strong_ss = s.strong_ss_assumed || s.corollary_case != CorollaryCase::none;
  if (s.corollary_case != CorollaryCase::none) {
    v.trace.push_back("fiber class grants mu_max(Omega) <= 0, so semistable bundles are strongly semistable");
  }

  for (auto p : distinct) {
    if (!descent_degree_check(s.deg_e, p)) {
      v.trace.push_back("descent at p = " + std::to_string(p) + " needs p | deg E = " + std::to_string(s.deg_e) +
                        ", which fails");
      v.conclusion = AuditConclusion::inconsistent_scenario;
      return v;
    }
  }
  // deg E is divisible by the product of the descent primes.
  Integer product = 1;
  for (auto p : distinct) product *= p;
  v.degree_forced_zero = product > Integer(std::labs(s.deg_e));
  v.trace.push_back(v.degree_forced_zero ? "deg E = p deg F at every descent prime forces deg E = deg F = 0"
                                         : "descent primes do not force deg E = 0");

  if (!strong_ss) {
    v.trace.push_back("strong semistability is not assumed; mu_max(E) = p mu_max(F) is unavailable");
    v.conclusion = AuditConclusion::inconclusive;
    return v;
  }

  const Rational threshold = s.slope_bound * s.rank;
  std::optional<std::uint64_t> beyond;
  for (auto p : distinct) {
    if (Rational(p) > threshold) {
      beyond = p;
      break;
    }
  }
  if (!beyond) {
    v.trace.push_back("no descent prime exceeds r b = " + to_string(threshold));
    v.conclusion = AuditConclusion::inconclusive;
    return v;
  }

  if (s.generic_not_semistable_hypothesis) {
    v.contradiction_prime = beyond;
    v.trace.push_back("assume E_0 not semistable; then every E_m and F_m are not semistable, so mu_max(F_m) >= 1/" +
                      std::to_string(s.rank));
    v.trace.push_back("b = " + to_string(s.slope_bound) + " >= mu_max(E_m) = " + std::to_string(*beyond) +
                      " mu_max(F_m) >= " + to_string(Rational(*beyond, s.rank)) + ", contradiction at p = " +
                      std::to_string(*beyond));
  } else {
    v.trace.push_back("descent prime " + std::to_string(*beyond) + " exceeds r b = " + to_string(threshold) +
                      "; E_0 is semistable");
  }
  v.conclusion = AuditConclusion::generically_semistable;
  return v;
}

struct ReplayPrime {
  HNReport hn;
  SplitReport split;
};

struct CounterexampleReplay {
  int d = 0;
  int ell = 0;
  std::vector<ReplayPrime> fibers;
  std::size_t char0_sections_at_3 = 0;  // h0(Syz(X^2,Y^2,Z^2)(3)) over Q
  long char0_bundle_degree = 0;         // deg E_0
  Rational char0_bundle_slope;          // mu(E_0)
  long char0_sub_degree = 0;            // deg O(l - 1)
  Rational char0_sub_slope;
  bool char0_destabilized = false;
  bool extension_class_nonzero = false;  // Z^(d-1)/XY in H^1(O(d-3))
  std::size_t h1_canonical = 0;
  bool strong_ss_assumed = false;
  std::string inapplicability_reason;
  AuditVerdict audit_verdict;
};

/// Assembles the counterexample data for d = 2l + 1 >= 5 at the given primes
/// (each congruent to l mod d).
inline CounterexampleReplay counterexample_replay(int d, const std::vector<std::uint64_t>& primes,
                                                  std::optional<int> fill_cap = {}) {
  const FermatCurve generic(d, 0);
  const int ell = required_ell(generic);
  if (ell < 2) throw PreconditionError("counterexample needs l >= 2 (d >= 5)");
  if (primes.empty()) throw PreconditionError("replay needs at least one prime");

  CounterexampleReplay r;
  r.d = d;
  r.ell = ell;
  std::vector<std::uint64_t> sorted = primes;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  for (auto p : sorted) {
    const FermatCurve fiber(d, p);
    r.fibers.push_back({hn_filtration_rank2(fiber, fill_cap), extension_split_test(fiber)});
  }

  r.char0_sections_at_3 = section_dimension(BundleDescriptor::syzygy(generic, {2, 2, 2}, 3));
  r.char0_bundle_degree = 0;
  r.char0_bundle_slope = Rational(0);
  r.char0_sub_degree = BundleDescriptor::line(generic, ell - 1).degree();
  r.char0_sub_slope = Rational(r.char0_sub_degree);
  r.char0_destabilized = r.char0_sub_slope > r.char0_bundle_slope;
  r.extension_class_nonzero = class_is_nonzero(fermat_extension_class(generic, RationalField{}));
  r.h1_canonical = h1_line(generic, canonical_twist(generic));

  // The fibers above destabilize under Frobenius, so the audit runs without
  // strong semistability.
  r.strong_ss_assumed = false;
  r.inapplicability_reason =
      "fibers have genus " + std::to_string(generic.genus()) +
      " >= 2 and carry semistable bundles whose Frobenius pull-back is not semistable, so semistable does not imply "
      "strongly semistable";

  DescentScenario scenario;
  scenario.rank = 2;
  scenario.slope_bound = Rational(static_cast<long>(d) * (ell - 1));
  scenario.deg_e = 0;
  scenario.descent_primes = sorted;
  scenario.strong_ss_assumed = r.strong_ss_assumed;
  scenario.generic_not_semistable_hypothesis = true;
  r.audit_verdict = audit(scenario);

  for (const auto& f : r.fibers) {
    if (f.split.verdict != SplitVerdict::non_split) {
      throw InconsistencyError("extension splits at p = " + std::to_string(f.split.p));
    }
  }
  if (!r.char0_destabilized || !r.extension_class_nonzero || r.h1_canonical != 1) {
    throw InconsistencyError("generic fiber data does not exhibit a non-semistable non-split extension");
  }
  return r;
}

}  // namespace frobdesc
