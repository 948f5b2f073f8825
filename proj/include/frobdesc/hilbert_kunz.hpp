#pragma once

// Hilbert-Kunz function of I = (X^2, Y^2, Z^2) in R = K[X,Y,Z]/(X^d+Y^d+Z^d):
// HK(q) = dim_K R / (X^2q, Y^2q, Z^2q) for q = p^e, together with two closed
// forms for e_HK = lim HK(q)/q^2 (the trinomial formula and the value read off
// the Harder-Narasimhan data).

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "arith.hpp"
#include "errors.hpp"
#include "fermat_ring.hpp"
#include "parallel.hpp"

namespace frobdesc {

inline constexpr int kMaxColengthExponent = 256;

/// Degree-n piece of R / (X^a, Y^a, Z^a).
template <ExactField F>
std::size_t power_quotient_piece(const FermatCurve& curve, const F& field, int a, int n) {
  const std::size_t full = hilbert_dim(curve, n);
  if (n < a) return full;
  const auto gens = std::array{monomial_element(curve, field, {a, 0, 0}), monomial_element(curve, field, {0, a, 0}),
                               monomial_element(curve, field, {0, 0, a})};
  return full - rank(ideal_matrix<F>(curve, field, gens, n));
}

/// dim_K R / (X^a, Y^a, Z^a). The quotient is standard graded and cyclic, so
/// its pieces vanish from the first zero piece on; summation stops there.
/// The piece in degree 3a - 2 is always zero (the monomial quotient already
/// vanishes there).
inline std::uint64_t frobenius_power_colength(const FermatCurve& curve, int a, bool allow_large = false,
                                              unsigned workers = worker_count()) {
  if (a < 1) throw PreconditionError("Frobenius power exponent must be positive");
  if (a > kMaxColengthExponent && !allow_large) {
    throw PreconditionError("exponent " + std::to_string(a) + " exceeds the resource cap of " +
                            std::to_string(kMaxColengthExponent) + " (pass --allow-large to override)");
  }
  return with_field(curve, [&](auto field) -> std::uint64_t {
    std::uint64_t total = 0;
    for (int n = 0; n < a; ++n) total += hilbert_dim(curve, n);
    const unsigned batch = std::max(1u, workers);
    for (int start = a; start <= 3 * a - 2; start += static_cast<int>(batch)) {
      const int stop = std::min(start + static_cast<int>(batch), 3 * a - 1);
      std::vector<std::size_t> pieces(static_cast<std::size_t>(stop - start));
      parallel_for(pieces.size(), workers,
                   [&](std::size_t i) { pieces[i] = power_quotient_piece(curve, field, a, start + static_cast<int>(i)); });
      for (auto piece : pieces) {
        if (piece == 0) return total;
        total += piece;
      }
    }
    throw InconsistencyError("quotient piece in degree 3a - 2 is nonzero");
  });
}

struct HKSample {
  int e = 0;
  std::uint64_t q = 0;  // p^e
  int exponent = 0;     // 2q
  std::uint64_t hk = 0;
  Rational ratio;  // HK(q) / q^2
};

struct HKSamples {
  std::vector<HKSample> samples;
  bool partial = false;  // stopped at the resource cap
};

inline HKSamples hk_samples(const FermatCurve& curve, int e_max, bool allow_large = false) {
  const std::uint64_t p = curve.characteristic();
  if (p == 0) throw PreconditionError("Hilbert-Kunz samples need positive characteristic");
  if (e_max < 0) throw PreconditionError("e_max must be non-negative");
  HKSamples out;
  std::uint64_t q = 1;
  for (int e = 1; e <= e_max; ++e) {
    q *= p;
    if (2 * q > static_cast<std::uint64_t>(kMaxColengthExponent) && !allow_large) {
      out.partial = true;
      break;
    }
    const int a = static_cast<int>(2 * q);
    const auto hk = frobenius_power_colength(curve, a, allow_large);
    out.samples.push_back({e, q, a, hk, Rational(Integer(hk), Integer(q) * q)});
  }
  return out;
}

inline void require_closed_form_domain(int d, std::uint64_t p) {
  if (d < 3 || d % 2 == 0) throw PreconditionError("closed forms need odd d >= 3");
  if (!is_prime(p)) throw PreconditionError(std::to_string(p) + " is not prime");
  if (static_cast<std::uint64_t>(d) % p == 0) throw PreconditionError("p divides d");
}

/// 3d + (d/4) (d - 3)^2 / p^2.
inline Rational hk_closed_form_monsky(int d, std::uint64_t p) {
  require_closed_form_domain(d, p);
  const Integer pp = Integer(p) * p;
  return Rational(3 * d) + Rational(Integer(d) * (d - 3) * (d - 3), 4 * pp);
}

/// 3d + alpha^2 / (d p^2).
inline Rational hk_from_hn(int d, std::uint64_t p, long alpha) {
  if (d < 1) throw PreconditionError("degree must be positive");
  if (!is_prime(p)) throw PreconditionError(std::to_string(p) + " is not prime");
  const Integer pp = Integer(p) * p;
  return Rational(3 * d) + Rational(Integer(alpha) * alpha, Integer(d) * pp);
}

/// The alpha >= 0 making the two closed forms agree: alpha^2 = d p^2 (e_HK - 3d).
inline long solve_alpha_from_hk(int d, std::uint64_t p) {
  const Rational excess = (hk_closed_form_monsky(d, p) - 3 * d) * Rational(Integer(d) * p * p);
  if (boost::multiprecision::denominator(excess) != 1) {
    throw InconsistencyError("alpha^2 is not an integer");
  }
  const Integer square = boost::multiprecision::numerator(excess);
  const Integer root = boost::multiprecision::sqrt(square);
  if (root * root != square) throw InconsistencyError("alpha^2 is not a perfect square");
  return static_cast<long>(root);
}

struct HKReport {
  FermatCurve curve;
  std::uint64_t p = 0;
  HKSamples samples;
  std::optional<Rational> monsky_value;
  std::optional<Rational> hn_value;
  std::optional<long> alpha_used;
};

/// Samples plus both closed forms. For odd d >= 3 the closed forms are
/// evaluated at alpha = d(l - 1) and must agree exactly.
inline HKReport hk_report(const FermatCurve& curve, int e_max, bool allow_large = false) {
  HKReport r{curve, curve.characteristic(), hk_samples(curve, e_max, allow_large), {}, {}, {}};
  const int d = curve.degree();
  if (d >= 3 && d % 2 == 1) {
    const long alpha = static_cast<long>(d) * ((d - 1) / 2 - 1);
    r.monsky_value = hk_closed_form_monsky(d, r.p);
    r.hn_value = hk_from_hn(d, r.p, alpha);
    r.alpha_used = alpha;
    if (*r.monsky_value != *r.hn_value || solve_alpha_from_hk(d, r.p) != alpha) {
      throw InconsistencyError("closed forms for e_HK disagree at alpha = d(l - 1)");
    }
  }
  return r;
}

}  // namespace frobdesc
