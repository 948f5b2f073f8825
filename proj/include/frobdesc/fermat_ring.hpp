#pragma once

// The graded ring R = K[X,Y,Z]/(X^d + Y^d + Z^d).
//
// Elements are kept in normal form: every Z-exponent is below d, obtained by
// rewriting Z^d -> -X^d - Y^d. Since the relation is monic in Z this gives a
// canonical monomial basis of each graded piece with no Groebner machinery.

#include <algorithm>
#include <cctype>
#include <compare>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "errors.hpp"
#include "exact_linalg.hpp"

namespace frobdesc {

class FermatCurve {
 public:
  /// characteristic 0 means Q; otherwise a prime not dividing the degree.
  FermatCurve(int degree, std::uint64_t characteristic) : d_(degree), char_(characteristic) {
    if (degree < 1) throw PreconditionError("curve degree must be positive");
    if (characteristic != 0) {
      if (!is_prime(characteristic)) {
        throw PreconditionError("characteristic " + std::to_string(characteristic) + " is not prime");
      }
      if (static_cast<std::uint64_t>(degree) % characteristic == 0) {
        throw PreconditionError("characteristic divides the degree; the Fermat curve is singular");
      }
    }
  }

  int degree() const noexcept { return d_; }
  std::uint64_t characteristic() const noexcept { return char_; }
  /// l with d = 2l + 1, for odd d.
  std::optional<int> ell() const noexcept {
    if (d_ % 2 == 0) return std::nullopt;
    return (d_ - 1) / 2;
  }
  int genus() const noexcept { return (d_ - 1) * (d_ - 2) / 2; }

  FermatCurve with_characteristic(std::uint64_t p) const { return {d_, p}; }

  bool operator==(const FermatCurve&) const = default;

 private:
  int d_;
  std::uint64_t char_;
};

struct Monomial {
  int x = 0;
  int y = 0;
  int z = 0;

  constexpr int degree() const noexcept { return x + y + z; }
  constexpr Monomial operator*(const Monomial& o) const noexcept { return {x + o.x, y + o.y, z + o.z}; }
  constexpr bool operator==(const Monomial&) const = default;
};

/// Graded lexicographic order with X > Y > Z; "less" here means "comes first".
struct GrlexGreater {
  constexpr bool operator()(const Monomial& a, const Monomial& b) const noexcept {
    if (a.degree() != b.degree()) return a.degree() > b.degree();
    if (a.x != b.x) return a.x > b.x;
    return a.y > b.y;
  }
};

inline std::string format_monomial(const Monomial& m) {
  std::string out;
  auto factor = [&](char var, int e) {
    if (e == 0) return;
    if (!out.empty()) out += '*';
    out += var;
    if (e != 1) out += '^' + std::to_string(e);
  };
  factor('X', m.x);
  factor('Y', m.y);
  factor('Z', m.z);
  return out.empty() ? "1" : out;
}

template <ExactField F>
class Polynomial {
 public:
  using Element = typename F::Element;
  using Terms = std::map<Monomial, Element, GrlexGreater>;

  explicit Polynomial(F field) : field_(std::move(field)) {}
  Polynomial(F field, Monomial m, Element c) : field_(std::move(field)) { add_term(m, std::move(c)); }

  const F& field() const noexcept { return field_; }
  const Terms& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }

  void add_term(const Monomial& m, const Element& c) {
    if (field_.is_zero(c)) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second = field_.add(it->second, c);
      if (field_.is_zero(it->second)) terms_.erase(it);
    }
  }

  bool is_homogeneous() const noexcept {
    if (terms_.empty()) return true;
    const int deg = terms_.begin()->first.degree();
    return std::all_of(terms_.begin(), terms_.end(), [deg](const auto& t) { return t.first.degree() == deg; });
  }

  /// Degree of a nonzero homogeneous polynomial.
  std::optional<int> degree() const {
    if (terms_.empty() || !is_homogeneous()) return std::nullopt;
    return terms_.begin()->first.degree();
  }

  Polynomial operator+(const Polynomial& o) const {
    Polynomial out = *this;
    for (const auto& [m, c] : o.terms_) out.add_term(m, c);
    return out;
  }
  Polynomial operator-(const Polynomial& o) const {
    Polynomial out = *this;
    for (const auto& [m, c] : o.terms_) out.add_term(m, field_.neg(c));
    return out;
  }
  Polynomial operator*(const Polynomial& o) const {
    Polynomial out(field_);
    for (const auto& [m1, c1] : terms_) {
      for (const auto& [m2, c2] : o.terms_) out.add_term(m1 * m2, field_.mul(c1, c2));
    }
    return out;
  }
  Polynomial scaled(const Element& s) const {
    Polynomial out(field_);
    for (const auto& [m, c] : terms_) out.add_term(m, field_.mul(c, s));
    return out;
  }

  bool operator==(const Polynomial& o) const { return field_ == o.field_ && terms_ == o.terms_; }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (const auto& [m, c] : terms_) {
      std::string coeff = field_.format(c);
      bool negative = !coeff.empty() && coeff.front() == '-';
      if (negative) coeff.erase(0, 1);
      if (out.empty()) {
        if (negative) out += '-';
      } else {
        out += negative ? " - " : " + ";
      }
      const bool unit_monomial = m.x == 0 && m.y == 0 && m.z == 0;
      if (unit_monomial) {
        out += coeff;
      } else if (coeff == "1") {
        out += format_monomial(m);
      } else {
        out += coeff + "*" + format_monomial(m);
      }
    }
    return out;
  }

 private:
  F field_;
  Terms terms_;
};

/// The field attached to a curve's characteristic.
template <ExactField F>
F field_for(const FermatCurve& curve) {
  if constexpr (std::is_same_v<F, PrimeField>) {
    if (curve.characteristic() == 0) throw PreconditionError("curve is in characteristic 0, not over F_p");
    return PrimeField(curve.characteristic());
  } else {
    if (curve.characteristic() != 0) throw PreconditionError("curve is in positive characteristic, not over Q");
    return RationalField{};
  }
}

/// Calls fn(field) with the field matching the curve's characteristic.
template <class Fn>
decltype(auto) with_field(const FermatCurve& curve, Fn&& fn) {
  if (curve.characteristic() == 0) return fn(RationalField{});
  return fn(PrimeField(curve.characteristic()));
}

/// A homogeneous element of R in normal form (all Z-exponents < d).
template <ExactField F>
class NormalPoly {
 public:
  using Element = typename F::Element;

  NormalPoly(FermatCurve curve, int degree, Polynomial<F> poly)
      : curve_(curve), degree_(degree), poly_(std::move(poly)) {
    if (poly_.field().characteristic() != curve_.characteristic()) {
      throw PreconditionError("coefficient field does not match the curve characteristic");
    }
    for (const auto& [m, c] : poly_.terms()) {
      if (m.degree() != degree_ || m.x < 0 || m.y < 0 || m.z < 0 || m.z >= curve_.degree()) {
        throw PreconditionError("term " + format_monomial(m) + " violates normal form in degree " +
                                std::to_string(degree_));
      }
    }
  }

  const FermatCurve& curve() const noexcept { return curve_; }
  int degree() const noexcept { return degree_; }
  const Polynomial<F>& poly() const noexcept { return poly_; }
  const F& field() const noexcept { return poly_.field(); }
  bool is_zero() const noexcept { return poly_.is_zero(); }
  std::string to_string() const { return poly_.to_string(); }

  bool operator==(const NormalPoly& o) const {
    return curve_ == o.curve_ && degree_ == o.degree_ && poly_ == o.poly_;
  }

 private:
  FermatCurve curve_;
  int degree_;
  Polynomial<F> poly_;
};

namespace detail {

// Rewrites X^a Y^b Z^c with c = q*d + r as
// (-1)^q * sum_j C(q,j) X^(a + d*j) Y^(b + d*(q-j)) Z^r.
template <ExactField F>
class ZPowerReducer {
 public:
  using Element = typename F::Element;

  ZPowerReducer(const F& field, int d) : field_(field), d_(d) {}

  template <class Sink>
  void reduce(const Monomial& m, const Element& coeff, Sink&& sink) {
    if (m.z < d_) {
      sink(m, coeff);
      return;
    }
    const int q = m.z / d_;
    const int r = m.z % d_;
    const auto& row = binomial_row(q);
    const Element signed_coeff = (q % 2 == 0) ? coeff : field_.neg(coeff);
    for (int j = 0; j <= q; ++j) {
      if (field_.is_zero(row[j])) continue;
      sink(Monomial{m.x + d_ * j, m.y + d_ * (q - j), r}, field_.mul(signed_coeff, row[j]));
    }
  }

 private:
  const std::vector<Element>& binomial_row(int q) {
    while (static_cast<int>(rows_.size()) <= q) {
      std::vector<Element> next;
      if (rows_.empty()) {
        next.push_back(field_.one());
      } else {
        const auto& prev = rows_.back();
        next.resize(prev.size() + 1, field_.zero());
        next.front() = field_.one();
        next.back() = field_.one();
        for (std::size_t k = 1; k + 1 < next.size(); ++k) next[k] = field_.add(prev[k - 1], prev[k]);
      }
      rows_.push_back(std::move(next));
    }
    return rows_[q];
  }

  F field_;
  int d_;
  std::vector<std::vector<Element>> rows_;
};

}  // namespace detail

/// Number of normal-form monomials of degree n: #{(a,b,c) : a+b+c = n, 0 <= c < d}.
inline std::size_t hilbert_dim(const FermatCurve& curve, int n) {
  if (n < 0) return 0;
  std::size_t total = 0;
  for (int c = 0; c <= std::min(n, curve.degree() - 1); ++c) total += static_cast<std::size_t>(n - c + 1);
  return total;
}

/// Normal-form monomials of degree n in descending grlex order, with O(1) lookup.
class MonomialBasis {
 public:
  MonomialBasis(const FermatCurve& curve, int n) : degree_(n) {
    if (n < 0) return;
    index_.assign(static_cast<std::size_t>(n + 1) * (n + 1), npos);
    for (int a = n; a >= 0; --a) {
      for (int b = n - a; b >= 0; --b) {
        const int c = n - a - b;
        if (c >= curve.degree()) continue;
        index_[slot(a, b)] = monomials_.size();
        monomials_.push_back({a, b, c});
      }
    }
  }

  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  int degree() const noexcept { return degree_; }
  std::size_t size() const noexcept { return monomials_.size(); }
  const std::vector<Monomial>& monomials() const noexcept { return monomials_; }
  const Monomial& operator[](std::size_t i) const { return monomials_[i]; }

  std::size_t index_of(const Monomial& m) const {
    if (m.degree() != degree_ || m.x < 0 || m.y < 0 || m.z < 0) return npos;
    return index_[slot(m.x, m.y)];
  }

 private:
  std::size_t slot(int a, int b) const noexcept { return static_cast<std::size_t>(a) * (degree_ + 1) + b; }

  int degree_;
  std::vector<Monomial> monomials_;
  std::vector<std::size_t> index_;
};

inline std::vector<Monomial> monomial_basis(const FermatCurve& curve, int n) {
  return MonomialBasis(curve, n).monomials();
}

/// Normal form of a homogeneous polynomial of the given degree; the degree is
/// only needed to place the zero polynomial.
template <ExactField F>
NormalPoly<F> normal_form(const FermatCurve& curve, const Polynomial<F>& raw, std::optional<int> degree = {}) {
  if (!raw.is_homogeneous()) throw PreconditionError("polynomial is not homogeneous");
  for (const auto& [m, c] : raw.terms()) {
    if (m.x < 0 || m.y < 0 || m.z < 0) throw PreconditionError("negative exponent in polynomial");
  }
  const int deg = raw.degree().value_or(degree.value_or(0));
  if (degree && !raw.is_zero() && *degree != deg) throw PreconditionError("polynomial degree mismatch");
  Polynomial<F> out(raw.field());
  detail::ZPowerReducer<F> reducer(raw.field(), curve.degree());
  for (const auto& [m, c] : raw.terms()) {
    reducer.reduce(m, c, [&](const Monomial& r, const typename F::Element& rc) { out.add_term(r, rc); });
  }
  return NormalPoly<F>(curve, deg, std::move(out));
}

template <ExactField F>
NormalPoly<F> operator*(const NormalPoly<F>& f, const NormalPoly<F>& g) {
  if (!(f.curve() == g.curve())) throw PreconditionError("factors live on different curves");
  return normal_form(f.curve(), f.poly() * g.poly(), f.degree() + g.degree());
}

template <ExactField F>
NormalPoly<F> operator+(const NormalPoly<F>& f, const NormalPoly<F>& g) {
  if (!(f.curve() == g.curve()) || f.degree() != g.degree()) throw PreconditionError("summands differ in degree");
  return NormalPoly<F>(f.curve(), f.degree(), f.poly() + g.poly());
}

template <ExactField F>
NormalPoly<F> monomial_element(const FermatCurve& curve, const F& field, Monomial m) {
  return normal_form(curve, Polynomial<F>(field, m, field.one()));
}

/// Coordinates of f in the basis of R_deg(f).
template <ExactField F>
std::vector<typename F::Element> coordinates(const NormalPoly<F>& f) {
  MonomialBasis basis(f.curve(), f.degree());
  std::vector<typename F::Element> v(basis.size(), f.field().zero());
  for (const auto& [m, c] : f.poly().terms()) v[basis.index_of(m)] = c;
  return v;
}

template <ExactField F>
NormalPoly<F> from_coordinates(const FermatCurve& curve, const F& field, int n,
                               std::span<const typename F::Element> v) {
  MonomialBasis basis(curve, n);
  if (v.size() != basis.size()) throw PreconditionError("coordinate vector has wrong length");
  Polynomial<F> poly(field);
  for (std::size_t i = 0; i < v.size(); ++i) poly.add_term(basis[i], v[i]);
  return NormalPoly<F>(curve, n, std::move(poly));
}

/// Matrix of multiplication by f from R_n to R_{n + deg f}.
template <ExactField F>
Matrix<F> mult_matrix(const FermatCurve& curve, const NormalPoly<F>& f, int n) {
  const auto& field = f.field();
  const MonomialBasis source(curve, n);
  const MonomialBasis target(curve, n + f.degree());
  Matrix<F> m(field, target.size(), source.size());
  detail::ZPowerReducer<F> reducer(field, curve.degree());
  for (std::size_t j = 0; j < source.size(); ++j) {
    for (const auto& [t, c] : f.poly().terms()) {
      reducer.reduce(source[j] * t, c, [&](const Monomial& r, const typename F::Element& rc) {
        m.accumulate(target.index_of(r), j, rc);
      });
    }
  }
  return m;
}

/// [mult(g_1) | mult(g_2) | ...] : (+) R_{n - deg g_i} -> R_n. Generators of
/// degree above n contribute no columns.
template <ExactField F>
Matrix<F> ideal_matrix(const FermatCurve& curve, const F& field, std::span<const NormalPoly<F>> gens, int n) {
  std::vector<Matrix<F>> blocks;
  for (const auto& g : gens) {
    if (n - g.degree() >= 0) blocks.push_back(mult_matrix(curve, g, n - g.degree()));
  }
  return hconcat<F>(field, hilbert_dim(curve, n), blocks);
}

/// dim_K of the degree-n piece of the ideal (gens) in R.
template <ExactField F>
std::size_t ideal_piece_dim(const FermatCurve& curve, std::span<const NormalPoly<F>> gens, int n) {
  if (gens.empty() || n < 0) return 0;
  return rank(ideal_matrix(curve, gens.front().field(), gens, n));
}

struct FillResult {
  bool filled = false;
  int degree = -1;  // first degree where the ideal fills R_n, when filled
  int n_max = 0;

  bool operator==(const FillResult&) const = default;
};

template <ExactField F>
int default_fill_cap(const FermatCurve& curve, std::span<const NormalPoly<F>> gens) {
  int max_deg = 0;
  for (const auto& g : gens) max_deg = std::max(max_deg, g.degree());
  return 6 * max_deg + 3 * curve.degree();
}

/// Smallest n <= n_max at which the ideal (gens) contains all of R_n. Reaching
/// the full graded piece certifies that the generators have no common zero on C.
template <ExactField F>
FillResult fills_at(const FermatCurve& curve, std::span<const NormalPoly<F>> gens, std::optional<int> n_max = {}) {
  if (gens.empty()) throw PreconditionError("fills_at needs at least one generator");
  const int cap = n_max.value_or(default_fill_cap(curve, gens));
  int min_deg = gens.front().degree();
  for (const auto& g : gens) min_deg = std::min(min_deg, g.degree());
  for (int n = std::max(0, min_deg); n <= cap; ++n) {
    if (ideal_piece_dim(curve, gens, n) == hilbert_dim(curve, n)) return {true, n, cap};
  }
  return {false, -1, cap};
}

/// Parses sums of terms `coeff*X^a*Y^b*Z^c` (integer coefficients, every part optional).
template <ExactField F>
Polynomial<F> parse_polynomial(std::string_view text, const F& field) {
  std::string s;
  for (char ch : text) {
    if (!std::isspace(static_cast<unsigned char>(ch))) s += ch;
  }
  if (s.empty()) throw ParseError("empty polynomial");

  std::size_t pos = 0;
  auto fail = [&](const std::string& why) -> ParseError {
    return ParseError("malformed polynomial '" + std::string(text) + "': " + why);
  };
  auto read_uint = [&]() -> std::string {
    std::size_t start = pos;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) ++pos;
    return s.substr(start, pos - start);
  };

  Polynomial<F> out(field);
  bool first = true;
  while (pos < s.size()) {
    bool negative = false;
    if (s[pos] == '+' || s[pos] == '-') {
      negative = s[pos] == '-';
      ++pos;
    } else if (!first) {
      throw fail("expected '+' or '-'");
    }
    first = false;

    Integer coeff = 1;
    Monomial m;
    bool any_factor = false;
    while (true) {
      if (pos >= s.size()) break;
      const char ch = s[pos];
      if (std::isdigit(static_cast<unsigned char>(ch))) {
        coeff *= Integer(read_uint());
      } else if (ch == 'X' || ch == 'Y' || ch == 'Z' || ch == 'x' || ch == 'y' || ch == 'z') {
        ++pos;
        int e = 1;
        if (pos < s.size() && s[pos] == '^') {
          ++pos;
          auto digits = read_uint();
          if (digits.empty() || digits.size() > 6) throw fail("bad exponent");
          e = std::stoi(digits);
        }
        const char var = static_cast<char>(std::toupper(static_cast<unsigned char>(ch)));
        (var == 'X' ? m.x : var == 'Y' ? m.y : m.z) += e;
      } else {
        throw fail(std::string("unexpected character '") + ch + "'");
      }
      any_factor = true;
      if (pos < s.size() && s[pos] == '*') {
        ++pos;
        if (pos >= s.size() || s[pos] == '+' || s[pos] == '-') throw fail("dangling '*'");
        continue;
      }
      break;
    }
    if (!any_factor) throw fail("empty term");
    if (pos < s.size() && s[pos] != '+' && s[pos] != '-') throw fail("unexpected character");
    out.add_term(m, field.from_integer(negative ? Integer(-coeff) : coeff));
  }
  return out;
}

template <ExactField F>
NormalPoly<F> parse_normal(const FermatCurve& curve, std::string_view text, const F& field) {
  return normal_form(curve, parse_polynomial(text, field));
}

}  // namespace frobdesc
