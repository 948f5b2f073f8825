#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>

#include "frobdesc/descent_audit.hpp"
#include "oracles.hpp"

using namespace frobdesc;

namespace {

DescentScenario base_scenario() {
  DescentScenario s;
  s.rank = 2;
  s.slope_bound = 10;
  s.deg_e = 0;
  s.descent_primes = {7, 17, 37, 47, 67};
  s.strong_ss_assumed = true;
  s.generic_not_semistable_hypothesis = true;
  return s;
}

}  // namespace

TEST_CASE("primes in arithmetic progressions", "[audit]") {
  CHECK(primes_in_progression(2, 5, 5) == std::vector<std::uint64_t>{2, 7, 17, 37, 47});
  CHECK(primes_in_progression(1, 3, 5) == std::vector<std::uint64_t>{7, 13, 19, 31, 37});
  CHECK_THROWS_AS(primes_in_progression(0, 4, 1), PreconditionError);
  CHECK(primes_in_progression(0, 3, 1) == std::vector<std::uint64_t>{3});
  CHECK_THROWS_AS(primes_in_progression(0, 3, 2), PreconditionError);
  CHECK(primes_in_progression(-3, 5, 2) == std::vector<std::uint64_t>{2, 7});
  CHECK(primes_in_progression(4, 7, 0).empty());
  CHECK_THROWS_AS(primes_in_progression(1, 0, 1), PreconditionError);

  for (std::uint64_t m : {1ULL, 2ULL, 5ULL, 7ULL, 12ULL, 30ULL}) {
    for (std::uint64_t r = 0; r < m; ++r) {
      if (std::gcd(r, m) != 1) continue;
      INFO("residue " << r << " modulus " << m);
      CHECK(primes_in_progression(static_cast<long>(r), m, 40) == oracle::trial_division_primes_in_progression(r, m, 40));
    }
  }
  // enough primes to force the sieve to grow
  const auto far = primes_in_progression(1, 1000, 30);
  CHECK(far == oracle::trial_division_primes_in_progression(1, 1000, 30));
}

TEST_CASE("slope scaling and degree checks", "[audit]") {
  CHECK(mu_max_scaling(Rational(1, 2), 7) == Rational(7, 2));
  CHECK(mu_max_scaling(Rational(0), 13) == 0);
  CHECK(mu_max_scaling(Rational(1, 3), 11) == Rational(11, 3));
  CHECK(descent_degree_check(0, 5));
  CHECK_FALSE(descent_degree_check(-10, 7));
  CHECK(descent_degree_check(-10, 2));
}

TEST_CASE("audit examples", "[audit]") {
  const auto v = audit(base_scenario());
  CHECK(v.conclusion == AuditConclusion::generically_semistable);
  REQUIRE(v.contradiction_prime);
  CHECK(*v.contradiction_prime == 37);
  CHECK(v.degree_forced_zero);
  CHECK_FALSE(v.trace.empty());

  auto bad = base_scenario();
  bad.deg_e = -10;
  bad.descent_primes = {7};
  CHECK(audit(bad).conclusion == AuditConclusion::inconsistent_scenario);

  auto small = base_scenario();
  small.descent_primes = {3, 5};
  const auto low = audit(small);
  CHECK(low.conclusion == AuditConclusion::inconclusive);
  CHECK_FALSE(low.contradiction_prime);

  // a tie at p = r b is not a contradiction
  auto tie = base_scenario();
  tie.slope_bound = Rational(37, 2);
  tie.descent_primes = {37};
  CHECK(audit(tie).conclusion == AuditConclusion::inconclusive);

  auto no_ss = base_scenario();
  no_ss.strong_ss_assumed = false;
  CHECK(audit(no_ss).conclusion == AuditConclusion::inconclusive);
  no_ss.corollary_case = CorollaryCase::abelian_variety;
  CHECK(audit(no_ss).conclusion == AuditConclusion::generically_semistable);

  auto empty = base_scenario();
  empty.descent_primes = {};
  CHECK_THROWS_AS(audit(empty), PreconditionError);
  auto repeated = base_scenario();
  repeated.descent_primes = {7, 7};
  CHECK_THROWS_AS(audit(repeated), PreconditionError);
  auto composite = base_scenario();
  composite.descent_primes = {9};
  CHECK_THROWS_AS(audit(composite), PreconditionError);
}

TEST_CASE("audit invariants over random scenarios", "[audit][property]") {
  std::mt19937_64 rng(17);
  const auto pool = sieve_primes(120);
  for (int trial = 0; trial < 300; ++trial) {
    DescentScenario s;
    s.rank = 1 + static_cast<int>(rng() % 4);
    s.slope_bound = Rational(static_cast<long>(rng() % 60), 1 + static_cast<long>(rng() % 4));
    const long degrees[] = {0, 0, 6, -10, 210, 2 * 3 * 5 * 7 * 11};
    s.deg_e = degrees[rng() % 6];
    std::vector<std::uint64_t> chosen = pool;
    std::shuffle(chosen.begin(), chosen.end(), rng);
    chosen.resize(1 + rng() % 6);
    s.descent_primes = chosen;
    s.strong_ss_assumed = rng() % 4 != 0;
    s.generic_not_semistable_hypothesis = rng() % 2 == 0;

    const auto v = audit(s);
    const Rational threshold = s.slope_bound * s.rank;
    if (v.contradiction_prime) {
      CHECK(Rational(*v.contradiction_prime) > threshold);
      CHECK(std::find(chosen.begin(), chosen.end(), *v.contradiction_prime) != chosen.end());
      std::uint64_t least = 0;
      for (auto p : chosen) {
        if (Rational(p) > threshold && (least == 0 || p < least)) least = p;
      }
      CHECK(*v.contradiction_prime == least);
    }
    if (v.degree_forced_zero) {
      for (auto p : chosen) CHECK(descent_degree_check(s.deg_e, p));
    }

    auto permuted = s;
    std::shuffle(permuted.descent_primes.begin(), permuted.descent_primes.end(), rng);
    const auto w = audit(permuted);
    CHECK(w.conclusion == v.conclusion);
    CHECK(w.contradiction_prime == v.contradiction_prime);
    CHECK(w.degree_forced_zero == v.degree_forced_zero);

    auto looser = s;
    looser.slope_bound += Rational(1 + static_cast<long>(rng() % 30));
    const auto u = audit(looser);
    if (v.conclusion == AuditConclusion::generically_semistable) {
      CHECK(u.conclusion != AuditConclusion::inconsistent_scenario);
    }
    if (v.conclusion == AuditConclusion::inconclusive) CHECK(u.conclusion == AuditConclusion::inconclusive);
  }
}

TEST_CASE("counterexample replay", "[audit]") {
  const auto r = counterexample_replay(5, {2, 7, 17});
  REQUIRE(r.fibers.size() == 3);
  for (const auto& f : r.fibers) {
    CHECK(f.hn.alpha == 5);
    CHECK(f.hn.zero_free.filled);
    CHECK(f.split.verdict == SplitVerdict::non_split);
    CHECK(f.split.h0_observed == 6);
    CHECK(f.split.divisibility_certificate);
  }
  CHECK(r.char0_sub_slope == 5);
  CHECK(r.char0_bundle_slope == 0);
  CHECK(r.char0_destabilized);
  CHECK(r.char0_sections_at_3 == 0);
  CHECK(r.extension_class_nonzero);
  CHECK(r.h1_canonical == 1);
  CHECK_FALSE(r.strong_ss_assumed);
  CHECK_FALSE(r.inapplicability_reason.empty());
  CHECK(r.audit_verdict.conclusion == AuditConclusion::inconclusive);

  const auto r7 = counterexample_replay(7, {3});
  REQUIRE(r7.fibers.size() == 1);
  CHECK(r7.fibers[0].hn.alpha == 14);

  CHECK_THROWS_AS(counterexample_replay(3, {7}), PreconditionError);
  CHECK_THROWS_AS(counterexample_replay(5, {3}), PreconditionError);
  CHECK_THROWS_AS(counterexample_replay(5, {}), PreconditionError);
}
