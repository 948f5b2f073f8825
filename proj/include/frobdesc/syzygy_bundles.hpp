#pragma once

// Syzygy bundles Syz(X^e1, Y^e2, Z^e3)(m) and twisted line bundles on a Fermat
// curve, their degree/slope calculus, global sections, and the rank-two
// Harder-Narasimhan and splitting checks built on top of section counts.
//
// Syz(X^e1, Y^e2, Z^e3)(m) is the kernel of
//   O(m - e1) + O(m - e2) + O(m - e3) -> O(m),  (s1, s2, s3) -> s1 X^e1 + s2 Y^e2 + s3 Z^e3,
// so its global sections are the kernel of the corresponding map on graded
// pieces of R, and its degree is d (2m - e1 - e2 - e3).

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "curve_cohomology.hpp"
#include "errors.hpp"
#include "fermat_ring.hpp"

namespace frobdesc {

struct SyzygyTwist {
  std::array<int, 3> exponents{};
  int twist = 0;

  bool operator==(const SyzygyTwist&) const = default;
};

struct LineTwist {
  int twist = 0;

  bool operator==(const LineTwist&) const = default;
};

class BundleDescriptor {
 public:
  using Variant = std::variant<SyzygyTwist, LineTwist>;

  BundleDescriptor(FermatCurve curve, Variant kind) : curve_(curve), kind_(kind) {
    if (const auto* s = std::get_if<SyzygyTwist>(&kind_)) {
      for (int e : s->exponents) {
        if (e <= 0) throw PreconditionError("syzygy exponents must be positive");
      }
    }
  }

  static BundleDescriptor syzygy(FermatCurve curve, std::array<int, 3> exponents, int twist) {
    return {curve, SyzygyTwist{exponents, twist}};
  }
  static BundleDescriptor line(FermatCurve curve, int twist) { return {curve, LineTwist{twist}}; }

  const FermatCurve& curve() const noexcept { return curve_; }
  const Variant& kind() const noexcept { return kind_; }
  bool is_syzygy() const noexcept { return std::holds_alternative<SyzygyTwist>(kind_); }
  const SyzygyTwist& as_syzygy() const {
    if (!is_syzygy()) throw PreconditionError("descriptor is a line bundle, not a syzygy bundle");
    return std::get<SyzygyTwist>(kind_);
  }

  int rank() const noexcept { return is_syzygy() ? 2 : 1; }

  long degree() const noexcept {
    const long d = curve_.degree();
    if (const auto* s = std::get_if<SyzygyTwist>(&kind_)) {
      return d * (2L * s->twist - s->exponents[0] - s->exponents[1] - s->exponents[2]);
    }
    return d * std::get<LineTwist>(kind_).twist;
  }

  Rational slope() const { return Rational(degree(), rank()); }

  /// The same bundle tensored with O(j).
  BundleDescriptor twisted(int j) const {
    if (const auto* s = std::get_if<SyzygyTwist>(&kind_)) return syzygy(curve_, s->exponents, s->twist + j);
    return line(curve_, std::get<LineTwist>(kind_).twist + j);
  }

  std::string label() const {
    if (const auto* s = std::get_if<SyzygyTwist>(&kind_)) {
      return "Syz(X^" + std::to_string(s->exponents[0]) + ",Y^" + std::to_string(s->exponents[1]) + ",Z^" +
             std::to_string(s->exponents[2]) + ")(" + std::to_string(s->twist) + ")";
    }
    return "O(" + std::to_string(std::get<LineTwist>(kind_).twist) + ")";
  }

  bool operator==(const BundleDescriptor&) const = default;

 private:
  FermatCurve curve_;
  Variant kind_;
};

inline long degree(const BundleDescriptor& b) { return b.degree(); }
inline Rational slope(const BundleDescriptor& b) { return b.slope(); }

/// F*(Syz(e)(m)) = Syz(p e)(p m) and F*(O(t)) = O(p t).
inline BundleDescriptor frobenius_pullback(const BundleDescriptor& b, std::uint64_t p) {
  if (b.curve().characteristic() == 0 || b.curve().characteristic() != p) {
    throw PreconditionError("Frobenius pull-back needs p equal to the curve characteristic");
  }
  const int q = static_cast<int>(p);
  if (const auto* s = std::get_if<SyzygyTwist>(&b.kind())) {
    return BundleDescriptor::syzygy(b.curve(), {q * s->exponents[0], q * s->exponents[1], q * s->exponents[2]},
                                    q * s->twist);
  }
  return BundleDescriptor::line(b.curve(), q * std::get<LineTwist>(b.kind()).twist);
}

/// Pull-back along C_{nd} -> C_d, [X:Y:Z] -> [X^n:Y^n:Z^n].
inline BundleDescriptor cover_pullback(const BundleDescriptor& b, int n) {
  if (n <= 0) throw PreconditionError("cover degree must be positive");
  const FermatCurve cover(b.curve().degree() * n, b.curve().characteristic());
  if (const auto* s = std::get_if<SyzygyTwist>(&b.kind())) {
    return BundleDescriptor::syzygy(cover, {n * s->exponents[0], n * s->exponents[1], n * s->exponents[2]},
                                    n * s->twist);
  }
  return BundleDescriptor::line(cover, n * std::get<LineTwist>(b.kind()).twist);
}

template <ExactField F>
using SyzygyTriple = std::array<NormalPoly<F>, 3>;

template <ExactField F>
struct SectionSpace {
  BundleDescriptor bundle;
  std::vector<SyzygyTriple<F>> basis;

  std::size_t dimension() const noexcept { return basis.size(); }
};

/// X^e1, Y^e2, Z^e3 in normal form.
template <ExactField F>
std::array<NormalPoly<F>, 3> syzygy_generators(const FermatCurve& curve, const F& field,
                                               const std::array<int, 3>& e) {
  return {monomial_element(curve, field, {e[0], 0, 0}), monomial_element(curve, field, {0, e[1], 0}),
          monomial_element(curve, field, {0, 0, e[2]})};
}

template <ExactField F>
NormalPoly<F> syzygy_relation(const SyzygyTriple<F>& s, const std::array<NormalPoly<F>, 3>& gens, int twist) {
  const auto& curve = gens[0].curve();
  Polynomial<F> sum(gens[0].field());
  for (int i = 0; i < 3; ++i) {
    if (!s[i].is_zero()) sum = sum + (s[i] * gens[i]).poly();
  }
  return NormalPoly<F>(curve, twist, sum);
}

/// H^0 of a syzygy bundle: kernel of R_{m-e1} + R_{m-e2} + R_{m-e3} -> R_m.
/// Each basis triple is re-checked against the relation before returning.
template <ExactField F>
SectionSpace<F> section_space(const BundleDescriptor& b) {
  const auto& syz = b.as_syzygy();
  const auto& curve = b.curve();
  const F field = field_for<F>(curve);
  const int m = syz.twist;
  const auto gens = syzygy_generators(curve, field, syz.exponents);

  std::array<int, 3> src_deg{};
  std::array<std::size_t, 3> width{};
  for (int i = 0; i < 3; ++i) {
    src_deg[i] = m - syz.exponents[i];
    width[i] = hilbert_dim(curve, src_deg[i]);
  }

  SectionSpace<F> out{b, {}};
  if (width[0] + width[1] + width[2] == 0) return out;

  const auto matrix = ideal_matrix<F>(curve, field, gens, m);
  for (const auto& v : kernel_basis(matrix)) {
    std::size_t offset = 0;
    std::vector<NormalPoly<F>> parts;
    for (int i = 0; i < 3; ++i) {
      std::span<const typename F::Element> slice(v.data() + offset, width[i]);
      if (width[i] == 0) {
        parts.emplace_back(curve, src_deg[i], Polynomial<F>(field));
      } else {
        parts.push_back(from_coordinates(curve, field, src_deg[i], slice));
      }
      offset += width[i];
    }
    SyzygyTriple<F> triple{parts[0], parts[1], parts[2]};
    if (!syzygy_relation(triple, gens, m).is_zero()) {
      throw InconsistencyError("kernel vector of " + b.label() + " fails the syzygy relation");
    }
    out.basis.push_back(std::move(triple));
  }
  return out;
}

/// dim H^0(b) as a column count minus a rank, without extracting a basis.
inline std::size_t section_dimension(const BundleDescriptor& b) {
  if (!b.is_syzygy()) return h0_line(b.curve(), std::get<LineTwist>(b.kind()).twist);
  const auto& syz = b.as_syzygy();
  return with_field(b.curve(), [&](auto field) -> std::size_t {
    using F = decltype(field);
    const auto gens = syzygy_generators(b.curve(), field, syz.exponents);
    std::size_t cols = 0;
    for (int e : syz.exponents) cols += hilbert_dim(b.curve(), syz.twist - e);
    if (cols == 0) return 0;
    return cols - rank(ideal_matrix<F>(b.curve(), field, gens, syz.twist));
  });
}

struct SectionTwist {
  int k = 0;   // 2p = d k + 2 l, k even
  int m0 = 0;  // d (k + 1 + k/2), the twist carrying the destabilizing section

  bool operator==(const SectionTwist&) const = default;
};

inline int required_ell(const FermatCurve& curve) {
  auto ell = curve.ell();
  if (!ell) throw PreconditionError("requires odd degree d = 2l + 1");
  return *ell;
}

/// Solves 2p = d k + 2 l for p = l (mod d).
inline SectionTwist expected_section_twist(const FermatCurve& curve, std::uint64_t p) {
  const int d = curve.degree();
  const int ell = required_ell(curve);
  if (!is_prime(p)) throw PreconditionError(std::to_string(p) + " is not prime");
  if (p % static_cast<std::uint64_t>(d) == 0) throw PreconditionError("p divides d");
  if (p % static_cast<std::uint64_t>(d) != static_cast<std::uint64_t>(ell) % static_cast<std::uint64_t>(d)) {
    throw PreconditionError("not applicable: p = " + std::to_string(p) + " is not congruent to l = " +
                            std::to_string(ell) + " mod " + std::to_string(d));
  }
  const int k = 2 * (static_cast<int>(p) - ell) / d;
  return {k, d * (k + 1 + k / 2)};
}

struct HNReport {
  FermatCurve curve;
  std::uint64_t p = 0;
  int ell = 0;
  SectionTwist twist;
  long bundle_degree = 0;  // degree of Syz(X^2p, Y^2p, Z^2p)(m0)
  std::size_t section_dimension = 0;
  std::vector<NormalPoly<PrimeField>> section;  // first kernel-basis triple
  FillResult zero_free;
  long alpha = 0;  // degree of the maximal destabilizing line subbundle of Syz(...)(3p)
  Rational mu_max;
  Rational mu_min;
  long shepherd_barron_bound = 0;  // 2g - 2
};

/// Harder-Narasimhan filtration O(l - 1) in Syz(X^2p, Y^2p, Z^2p)(3p) for
/// d = 2l + 1, l >= 2, p = l (mod d). The line subbundle is produced from an
/// explicit global section at twist m0; its zero-freeness is certified by the
/// section's components generating an ideal that fills R_n.
inline HNReport hn_filtration_rank2(const FermatCurve& curve, std::optional<int> fill_cap = {}) {
  const std::uint64_t p = curve.characteristic();
  if (p == 0) throw PreconditionError("Harder-Narasimhan check needs positive characteristic");
  const int ell = required_ell(curve);
  if (ell < 2) throw PreconditionError("lemma out of range: requires l >= 2 (d >= 5)");
  const int d = curve.degree();
  const int q = static_cast<int>(p);

  HNReport r{curve, p, ell, expected_section_twist(curve, p), 0, 0, {}, {}, 0, 0, 0, curve.genus() * 2L - 2};
  if (r.twist.m0 != 3 * q - ell + 1) {
    throw InconsistencyError("m0 = " + std::to_string(r.twist.m0) + " differs from 3p - l + 1");
  }

  const auto bundle = BundleDescriptor::syzygy(curve, {2 * q, 2 * q, 2 * q}, r.twist.m0);
  r.bundle_degree = bundle.degree();
  if (r.bundle_degree != static_cast<long>(d) * (2 - 2 * ell)) {
    throw InconsistencyError("degree of " + bundle.label() + " is not d(2 - 2l)");
  }

  auto sections = section_space<PrimeField>(bundle);
  r.section_dimension = sections.dimension();
  if (sections.basis.empty()) {
    throw InconsistencyError("no global section of " + bundle.label() + " over F_" + std::to_string(p));
  }
  r.section.assign(sections.basis.front().begin(), sections.basis.front().end());

  std::vector<NormalPoly<PrimeField>> components;
  for (const auto& s : r.section) {
    if (!s.is_zero()) components.push_back(s);
  }
  r.zero_free = fills_at<PrimeField>(curve, components, fill_cap);

  // The section gives O(3p - m0) -> Syz(...)(3p), so alpha >= d (3p - m0);
  // the semistability bound mu_max - mu_min <= 2g - 2 caps it from above.
  r.alpha = static_cast<long>(d) * (3 * q - r.twist.m0);
  const long total_degree = BundleDescriptor::syzygy(curve, {2 * q, 2 * q, 2 * q}, 3 * q).degree();
  r.mu_max = Rational(r.alpha);
  r.mu_min = Rational(total_degree - r.alpha);
  const Rational spread = r.mu_max - r.mu_min;
  if (spread > r.shepherd_barron_bound) {
    throw InconsistencyError("mu_max - mu_min exceeds 2g - 2");
  }
  if (r.alpha != static_cast<long>(d) * (ell - 1) || spread != r.shepherd_barron_bound) {
    throw InconsistencyError("destabilizing degree differs from d(l - 1)");
  }
  return r;
}

enum class ScanStatus { none, marginal, destabilized };

inline const char* to_string(ScanStatus s) {
  switch (s) {
    case ScanStatus::destabilized:
      return "destabilized";
    case ScanStatus::marginal:
      return "marginal";
    case ScanStatus::none:
      break;
  }
  return "none";
}

struct ScanEntry {
  int shift = 0;
  int twist = 0;
  long degree = 0;
  std::size_t h0 = 0;
  ScanStatus status = ScanStatus::none;
};

struct ScanReport {
  BundleDescriptor bundle;
  std::vector<ScanEntry> entries;
  ScanStatus verdict = ScanStatus::none;

  std::string verdict_text() const {
    switch (verdict) {
      case ScanStatus::destabilized:
        return "destabilized";
      case ScanStatus::marginal:
        return "marginal";
      case ScanStatus::none:
        break;
    }
    return "no section-based destabilizer found up to bound";
  }
};

/// Looks for global sections of b(j) at twists where b(j) has non-positive
/// degree. A section at negative degree destabilizes; at degree zero the
/// verdict is marginal and left unresolved.
inline ScanReport destabilization_scan(const BundleDescriptor& b, int shift_lo, int shift_hi) {
  b.as_syzygy();
  if (shift_lo > shift_hi) throw PreconditionError("empty shift range");
  ScanReport report{b, {}, ScanStatus::none};
  for (int j = shift_lo; j <= shift_hi; ++j) {
    const auto tw = b.twisted(j);
    ScanEntry e{j, tw.as_syzygy().twist, tw.degree(), 0, ScanStatus::none};
    if (e.degree <= 0) e.h0 = section_dimension(tw);
    if (e.h0 > 0) e.status = e.degree < 0 ? ScanStatus::destabilized : ScanStatus::marginal;
    report.verdict = std::max(report.verdict, e.status);
    report.entries.push_back(e);
  }
  return report;
}

enum class SplitVerdict { non_split, split };

struct SplitReport {
  FermatCurve curve;
  std::uint64_t p = 0;
  int twist = 0;  // 3p + l - 1
  std::size_t h0_observed = 0;
  std::size_t h0_if_split = 0;
  SplitVerdict verdict = SplitVerdict::non_split;
  bool divisibility_certificate = false;  // p does not divide d(l - 1)
};

/// Decides whether 0 -> O(l-1) -> Syz(X^2p,Y^2p,Z^2p)(3p) -> O(1-l) -> 0 splits.
/// Twisting by l - 1 gives 0 -> O(d-3) -> S -> O -> 0 with h^1(O(d-3)) = 1, so
/// h^0(S) = g + 1 when split and g when the connecting map is injective.
inline SplitReport extension_split_test(const FermatCurve& curve) {
  const std::uint64_t p = curve.characteristic();
  if (p == 0) throw PreconditionError("split test needs positive characteristic");
  const int ell = required_ell(curve);
  if (ell < 2) throw PreconditionError("not applicable: requires l >= 2 (d >= 5)");
  expected_section_twist(curve, p);
  const int d = curve.degree();
  const int q = static_cast<int>(p);

  SplitReport r{curve, p, 3 * q + ell - 1, 0, hilbert_dim(curve, d - 3) + 1, SplitVerdict::non_split, false};
  r.h0_observed = section_dimension(BundleDescriptor::syzygy(curve, {2 * q, 2 * q, 2 * q}, r.twist));
  if (r.h0_observed + 1 != r.h0_if_split && r.h0_observed != r.h0_if_split) {
    throw InconsistencyError("h0 = " + std::to_string(r.h0_observed) + " is incompatible with the extension");
  }
  r.verdict = r.h0_observed + 1 == r.h0_if_split ? SplitVerdict::non_split : SplitVerdict::split;
  r.divisibility_certificate = (static_cast<std::uint64_t>(d) * static_cast<std::uint64_t>(ell - 1)) % p != 0;
  return r;
}

enum class EllipticType { f2, trivial };

struct EllipticReport {
  std::uint64_t p = 0;
  std::size_t h0 = 0;
  EllipticType type = EllipticType::f2;
  std::uint64_t p_mod_3 = 0;
};

/// On the Fermat cubic, F*(Syz(X^2,Y^2,Z^2)(3)) is F_2 (one section) when
/// p = 1 mod 3 and O^2 (two sections) when p = 2 mod 3.
inline EllipticReport remark_elliptic_check(std::uint64_t p) {
  if (p == 0 || p == 3) throw PreconditionError("characteristic must be a prime other than 3");
  const FermatCurve cubic(3, p);
  const int q = static_cast<int>(p);
  EllipticReport r{p, section_dimension(BundleDescriptor::syzygy(cubic, {2 * q, 2 * q, 2 * q}, 3 * q)),
                   EllipticType::f2, p % 3};
  if (r.h0 == 1) {
    r.type = EllipticType::f2;
  } else if (r.h0 == 2) {
    r.type = EllipticType::trivial;
  } else {
    throw InconsistencyError("h0 = " + std::to_string(r.h0) + " on the Fermat cubic is neither 1 nor 2");
  }
  const EllipticType expected = r.p_mod_3 == 1 ? EllipticType::f2 : EllipticType::trivial;
  if (r.type != expected) throw InconsistencyError("elliptic type disagrees with p mod 3");
  return r;
}

}  // namespace frobdesc
