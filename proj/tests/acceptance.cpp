// Acceptance run: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include <chrono>
#include <fstream>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>

#include "frobdesc/cli.hpp"

using namespace frobdesc;

namespace {

struct Check {
  std::vector<std::string> failures;

  void expect(bool ok, const std::string& what) {
    if (!ok) failures.push_back(what);
  }
};

struct Criterion {
  int id;
  std::string title;
  double budget_s;
  std::function<void(Check&)> body;
};

std::string str(const Rational& r) { return to_string(r); }

void lemma_instances(Check& c) {
  for (auto [d, p] : {std::pair{5, 7ULL}, std::pair{5, 17ULL}, std::pair{7, 3ULL}}) {
    const std::string tag = "(d=" + std::to_string(d) + ", p=" + std::to_string(p) + ") ";
    const auto start = std::chrono::steady_clock::now();
    const auto r = hn_filtration_rank2(FermatCurve(d, p));
    c.expect(std::chrono::steady_clock::now() - start < std::chrono::seconds(10), tag + "runtime over 10 s");
    const int ell = (d - 1) / 2;
    const int q = static_cast<int>(p);
    c.expect(r.twist.k % 2 == 0 && 2 * q == d * r.twist.k + 2 * ell, tag + "k");
    c.expect(r.twist.m0 == d * (r.twist.k + 1 + r.twist.k / 2) && r.twist.m0 == 3 * q - ell + 1, tag + "m0");
    c.expect(r.section_dimension >= 1 &&
                 std::any_of(r.section.begin(), r.section.end(), [](const auto& s) { return !s.is_zero(); }),
             tag + "nonzero section");
    c.expect(r.bundle_degree == static_cast<long>(d) * (-2 * ell + 2), tag + "degree");
    c.expect(r.alpha == static_cast<long>(d) * (ell - 1), tag + "alpha");
    c.expect(r.mu_max - r.mu_min == Rational(2L * r.curve.genus() - 2), tag + "mu spread");
    c.expect(r.zero_free.filled && r.zero_free.degree <= 60, tag + "fill certificate");
  }
}

void closed_forms(Check& c) {
  for (int d = 3; d <= 15; d += 2) {
    for (auto p : sieve_primes(50)) {
      if (d % static_cast<int>(p) == 0) continue;
      const long alpha = static_cast<long>(d) * ((d - 1) / 2 - 1);
      c.expect(hk_from_hn(d, p, alpha) == hk_closed_form_monsky(d, p),
               "d=" + std::to_string(d) + " p=" + std::to_string(p));
    }
  }
}

void hk_convergence(Check& c) {
  std::ifstream in(std::string(FROBDESC_GOLDEN_DIR) + "/hk.json");
  c.expect(static_cast<bool>(in), "golden file missing");
  if (!in) return;
  const auto golden = Json::parse(in);

  const auto two = hk_samples(FermatCurve(5, 2), 5);
  const Rational limit(65, 4);
  std::vector<std::uint64_t> values;
  for (const auto& s : two.samples) {
    values.push_back(s.hk);
    const Rational gap = abs(s.ratio - limit);
    c.expect(gap <= Rational(50, Integer(s.q)), "q=" + std::to_string(s.q) + " gap " + str(gap) + " > 50/q");
    if (s.q >= 8) c.expect(gap <= Rational(2, Integer(s.q)), "q=" + std::to_string(s.q) + " gap " + str(gap) + " > 2/q");
  }
  c.expect(two.samples.size() == 5 && two.samples.back().q == 32, "p=2 samples stop early");
  c.expect(values == golden.at("d5_p2").get<std::vector<std::uint64_t>>(), "p=2 values differ from golden");

  const auto seven = hk_samples(FermatCurve(5, 7), 1);
  c.expect(seven.samples.size() == 1, "p=7 sample missing");
  if (seven.samples.size() != 1) return;
  c.expect(abs(seven.samples[0].ratio - Rational(740, 49)) <= Rational(50, 7), "p=7 gap > 50/7");
  c.expect(std::vector<std::uint64_t>{seven.samples[0].hk} == golden.at("d5_p7").get<std::vector<std::uint64_t>>(),
           "p=7 value differs from golden");
}

void non_splitness(Check& c) {
  for (std::uint64_t p : {2ULL, 7ULL, 17ULL}) {
    const FermatCurve curve(5, p);
    const auto r = extension_split_test(curve);
    const std::string tag = "p=" + std::to_string(p) + " ";
    c.expect(r.h0_observed == hilbert_dim(curve, 2) && r.h0_observed == 6, tag + "h0");
    c.expect(r.h0_if_split == 7, tag + "h0 if split");
    c.expect(r.verdict == SplitVerdict::non_split, tag + "verdict");
    c.expect(r.divisibility_certificate, tag + "certificate");
  }
}

void cohomology(Check& c) {
  for (int d : {1, 3, 5, 7, 9}) {
    const FermatCurve curve(d, 0);
    for (int n = -15; n <= 28; ++n) {
      const std::string tag = "d=" + std::to_string(d) + " n=" + std::to_string(n) + " ";
      c.expect(static_cast<long>(h0_line(curve, n)) - static_cast<long>(h1_line(curve, n)) ==
                   static_cast<long>(d) * n + 1 - curve.genus(),
               tag + "Riemann-Roch");
      c.expect(h1_line(curve, n) == h0_line(curve, d - 3 - n) && h0_line(curve, n) == h1_line(curve, d - 3 - n),
               tag + "duality");
    }
  }
  for (int d : {5, 7, 9}) {
    const FermatCurve curve(d, 0);
    const auto basis = cech_h1_basis(curve, d - 3);
    c.expect(h1_line(curve, d - 3) == 1, "h1(omega) for d=" + std::to_string(d));
    c.expect(basis.size() == 1 && basis[0] == Monomial{-1, -1, d - 1}, "Cech basis for d=" + std::to_string(d));
  }
}

void char0_semistability(Check& c) {
  for (int d : {5, 7}) {
    const FermatCurve curve(d, 0);
    const std::string tag = "d=" + std::to_string(d) + " ";
    for (int m = -2; m <= 3; ++m) {
      c.expect(section_dimension(BundleDescriptor::syzygy(curve, {2, 2, 2}, m)) == 0, tag + "m=" + std::to_string(m));
    }
    c.expect(section_space<RationalField>(BundleDescriptor::syzygy(curve, {2, 2, 2}, 4)).dimension() == 3,
             tag + "Koszul sections at m=4");
    const auto scan = destabilization_scan(BundleDescriptor::syzygy(curve, {2, 2, 2}, 3), -3, 0);
    c.expect(scan.verdict == ScanStatus::none, tag + "scan verdict " + scan.verdict_text());
  }
}

void low_genus_remark(Check& c) {
  const auto line = BundleDescriptor::syzygy(FermatCurve(1, 0), {2, 2, 2}, 3);
  c.expect(section_dimension(line) == 2 && line.degree() == 0, "d=1 trivial type");
  for (std::uint64_t p : {7ULL, 13ULL}) {
    const auto r = remark_elliptic_check(p);
    c.expect(r.h0 == 1 && r.type == EllipticType::f2, "p=" + std::to_string(p) + " F2 type");
  }
  for (std::uint64_t p : {2ULL, 5ULL}) {
    const auto r = remark_elliptic_check(p);
    c.expect(r.h0 == 2 && r.type == EllipticType::trivial, "p=" + std::to_string(p) + " trivial type");
  }
}

void descent(Check& c) {
  DescentScenario s;
  s.rank = 2;
  s.slope_bound = 10;
  s.deg_e = 0;
  s.descent_primes = {7, 17, 37, 47, 67};
  s.strong_ss_assumed = true;
  s.generic_not_semistable_hypothesis = true;
  const auto v = audit(s);
  c.expect(v.contradiction_prime == std::optional<std::uint64_t>{37} &&
               v.conclusion == AuditConclusion::generically_semistable,
           "contradiction at 37");

  auto bad = s;
  bad.deg_e = -10;
  bad.descent_primes = {7};
  c.expect(audit(bad).conclusion == AuditConclusion::inconsistent_scenario, "degree inconsistency");

  auto low = s;
  low.descent_primes = {3, 5};
  c.expect(audit(low).conclusion == AuditConclusion::inconclusive, "below threshold");

  const auto r = counterexample_replay(5, {2, 7, 17});
  c.expect(r.fibers.size() == 3, "replay fibers");
  for (const auto& f : r.fibers) {
    const std::string tag = "replay p=" + std::to_string(f.hn.p) + " ";
    c.expect(f.hn.alpha == 5 && f.hn.bundle_degree == -10 && f.hn.zero_free.filled, tag + "HN data");
    c.expect(f.split.verdict == SplitVerdict::non_split && f.split.h0_observed == 6 && f.split.divisibility_certificate,
             tag + "split data");
  }
  c.expect(!r.strong_ss_assumed && !r.inapplicability_reason.empty(), "strong semistability flagged as missing");
  c.expect(r.char0_sub_slope > r.char0_bundle_slope, "generic fiber destabilized");
}

void pullbacks(Check& c) {
  std::mt19937_64 rng(100);
  const std::uint64_t primes[] = {2, 3, 5, 7, 11, 13};
  for (int i = 0; i < 100; ++i) {
    const std::uint64_t p = primes[rng() % 6];
    int d = 1 + static_cast<int>(rng() % 12);
    while (d % static_cast<int>(p) == 0) ++d;
    const FermatCurve curve(d, p);
    const int twist = static_cast<int>(rng() % 41) - 20;
    const auto b = rng() % 4 == 0
                       ? BundleDescriptor::line(curve, twist)
                       : BundleDescriptor::syzygy(curve, {1 + static_cast<int>(rng() % 8), 1 + static_cast<int>(rng() % 8),
                                                          1 + static_cast<int>(rng() % 8)},
                                                  twist);
    int n = 1 + static_cast<int>(rng() % 5);
    while (n % static_cast<int>(p) == 0) ++n;  // keeps the cover curve smooth
    c.expect(frobenius_pullback(b, p).degree() == static_cast<long>(p) * b.degree(), b.label() + " Frobenius");
    c.expect(cover_pullback(b, n).degree() == static_cast<long>(n) * n * b.degree(), b.label() + " cover");
  }
}

void determinism(Check& c) {
  const std::string scenario = std::string(FROBDESC_SOURCE_DIR) + "/scenarios/threshold_contradiction.json";
  const std::vector<std::vector<std::string>> commands{
      {"hn", "--d", "5", "--p", "7"},
      {"hn", "--d", "5", "--p", "17"},
      {"hn", "--d", "7", "--p", "3"},
      {"hk", "--d", "5", "--p", "2", "--e-max", "5"},
      {"hk", "--d", "5", "--p", "7", "--format", "csv"},
      {"ext-split", "--d", "5", "--p", "7"},
      {"hilbert", "--d", "9", "--shift-range", "-15..28"},
      {"sections", "--d", "5", "--exponents", "2,2,2", "--twist", "4"},
      {"scan", "--d", "5", "--exponents", "2,2,2", "--twist", "3", "--shift-range", "-3..0"},
      {"elliptic", "--p", "13"},
      {"audit", "--scenario", scenario},
      {"replay", "--d", "5", "--primes", "2,7,17"},
      {"primes", "--residue", "2", "--modulus", "5", "--count", "5"},
  };
  auto once = [](const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = run_cli(args, out, err);
    std::string text = out.str();
    if (!text.empty() && text.front() == '{') {
      auto j = Json::parse(text);
      j.erase("timing_ms");
      text = j.dump(2);
    }
    return std::pair{code, text};
  };
  for (const auto& args : commands) {
    const auto a = once(args), b = once(args);
    c.expect(a.first == 0, args[0] + " exit code " + std::to_string(a.first));
    c.expect(a == b, args[0] + " output differs between runs");
  }
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "Harder-Narasimhan instances (5,7) (5,17) (7,3)", 30, lemma_instances},
      {2, "closed forms agree for odd d <= 15, p < 50", 1, closed_forms},
      {3, "Hilbert-Kunz convergence and goldens", 60, hk_convergence},
      {4, "non-split extension for d=5, p in {2,7,17}", 10, non_splitness},
      {5, "Riemann-Roch, duality and the canonical class", 5, cohomology},
      {6, "characteristic-0 section scans for d in {5,7}", 10, char0_semistability},
      {7, "projective line and Fermat cubic types", 10, low_genus_remark},
      {8, "descent audit and counterexample replay", 30, descent},
      {9, "pull-back degree identities on 100 descriptors", 1, pullbacks},
      {10, "byte-identical reports across runs", 180, determinism},
  };
  int failed = 0;
  for (const auto& cr : criteria) {
    Check check;
    const auto start = std::chrono::steady_clock::now();
    try {
      cr.body(check);
    } catch (const std::exception& e) {
      check.failures.push_back(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (secs > cr.budget_s) {
      check.failures.push_back("runtime " + std::to_string(secs) + " s over budget " + std::to_string(cr.budget_s) +
                               " s");
    }
    const bool ok = check.failures.empty();
    failed += !ok;
    std::cout << (ok ? "PASS" : "FAIL") << " criterion " << cr.id << ": " << cr.title;
    std::ostringstream t;
    t.precision(2);
    t << std::fixed << secs;
    std::cout << " (" << t.str() << " s)";
    for (const auto& f : check.failures) std::cout << "\n    " << f;
    std::cout << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
