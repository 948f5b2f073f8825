#pragma once

/**
 * Dense exact linear algebra over F_p (p < 2^32) and over Q.
 *
 * Three elimination kernels sit behind rank() and kernel_basis():
 *  - F_2: rows packed into 64-bit words, elimination by XOR;
 *  - F_p, p > 2: unreduced 64-bit accumulators, reduced only when the
 *    next update could overflow;
 *  - Q: rows cleared of denominators, then fraction-free (Bareiss) elimination
 *    over arbitrary-precision integers.
 *
 * Pivots are always the first nonzero entry in column order, so reduced
 * echelon forms and kernel bases are canonical.
 */

#include <algorithm>
#include <bit>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "arith.hpp"
#include "errors.hpp"

namespace frobdesc {

struct FieldSpec {
  enum class Kind { prime_field, rationals };
  Kind kind = Kind::rationals;
  std::uint64_t modulus = 0;  // zero iff rationals

  bool operator==(const FieldSpec&) const = default;
};

class PrimeField {
 public:
  using Element = std::uint64_t;

  explicit PrimeField(std::uint64_t p) : p_(p) {
    if (p >= (std::uint64_t{1} << 32)) throw PreconditionError("prime modulus must fit in 32 bits");
    if (!is_prime(p)) throw PreconditionError("modulus " + std::to_string(p) + " is not prime");
  }

  std::uint64_t characteristic() const noexcept { return p_; }
  FieldSpec spec() const noexcept { return {FieldSpec::Kind::prime_field, p_}; }

  Element zero() const noexcept { return 0; }
  Element one() const noexcept { return 1; }
  Element from_int(std::int64_t v) const noexcept {
    auto r = v % static_cast<std::int64_t>(p_);
    return static_cast<Element>(r < 0 ? r + static_cast<std::int64_t>(p_) : r);
  }
  Element from_integer(const Integer& v) const {
    Integer r = v % p_;
    if (r < 0) r += p_;
    return static_cast<Element>(r);
  }
  Element add(Element a, Element b) const noexcept {
    Element s = a + b;
    return s >= p_ ? s - p_ : s;
  }
  Element sub(Element a, Element b) const noexcept { return a >= b ? a - b : a + p_ - b; }
  Element neg(Element a) const noexcept { return a == 0 ? 0 : p_ - a; }
  Element mul(Element a, Element b) const noexcept { return a * b % p_; }
  Element inv(Element a) const {
    if (a == 0) throw PreconditionError("division by zero in F_p");
    return inverse_mod(a, p_);
  }
  bool is_zero(Element a) const noexcept { return a == 0; }
  bool is_valid(Element a) const noexcept { return a < p_; }
  Element normalize(Element a) const noexcept { return a % p_; }
  std::string format(Element a) const { return std::to_string(a); }

  bool operator==(const PrimeField&) const = default;

 private:
  std::uint64_t p_;
};

class RationalField {
 public:
  using Element = Rational;

  std::uint64_t characteristic() const noexcept { return 0; }
  FieldSpec spec() const noexcept { return {FieldSpec::Kind::rationals, 0}; }

  Element zero() const { return Rational(0); }
  Element one() const { return Rational(1); }
  Element from_int(std::int64_t v) const { return Rational(v); }
  Element from_integer(const Integer& v) const { return Rational(v); }
  Element add(const Element& a, const Element& b) const { return a + b; }
  Element sub(const Element& a, const Element& b) const { return a - b; }
  Element neg(const Element& a) const { return -a; }
  Element mul(const Element& a, const Element& b) const { return a * b; }
  Element inv(const Element& a) const {
    if (a == 0) throw PreconditionError("division by zero in Q");
    return 1 / a;
  }
  bool is_zero(const Element& a) const { return a == 0; }
  bool is_valid(const Element&) const noexcept { return true; }
  Element normalize(const Element& a) const { return a; }
  std::string format(const Element& a) const {
    if (boost::multiprecision::denominator(a) == 1) return boost::multiprecision::numerator(a).str();
    return to_string(a);
  }

  bool operator==(const RationalField&) const = default;
};

template <class F>
concept ExactField = requires(const F& f, const typename F::Element& a, std::int64_t n) {
  { f.characteristic() } -> std::convertible_to<std::uint64_t>;
  { f.spec() } -> std::same_as<FieldSpec>;
  { f.zero() } -> std::convertible_to<typename F::Element>;
  { f.one() } -> std::convertible_to<typename F::Element>;
  { f.from_int(n) } -> std::convertible_to<typename F::Element>;
  { f.add(a, a) } -> std::convertible_to<typename F::Element>;
  { f.sub(a, a) } -> std::convertible_to<typename F::Element>;
  { f.neg(a) } -> std::convertible_to<typename F::Element>;
  { f.mul(a, a) } -> std::convertible_to<typename F::Element>;
  { f.inv(a) } -> std::convertible_to<typename F::Element>;
  { f.is_zero(a) } -> std::convertible_to<bool>;
  { f.format(a) } -> std::convertible_to<std::string>;
};

/// Row-major dense matrix with entries in F.
template <ExactField F>
class Matrix {
 public:
  using Element = typename F::Element;

  Matrix(F field, std::size_t rows, std::size_t cols)
      : field_(std::move(field)), rows_(rows), cols_(cols), entries_(rows * cols, field_.zero()) {}

  Matrix(F field, std::size_t rows, std::size_t cols, std::vector<Element> entries)
      : field_(std::move(field)), rows_(rows), cols_(cols), entries_(std::move(entries)) {
    if (entries_.size() != rows_ * cols_) throw PreconditionError("matrix entry count does not match shape");
    for (auto& e : entries_) e = field_.normalize(e);
  }

  static Matrix identity(F field, std::size_t n) {
    Matrix m(field, n, n);
    for (std::size_t i = 0; i < n; ++i) m.entries_[i * n + i] = m.field_.one();
    return m;
  }

  const F& field() const noexcept { return field_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  const std::vector<Element>& entries() const noexcept { return entries_; }

  const Element& operator()(std::size_t r, std::size_t c) const { return entries_[r * cols_ + c]; }
  void set(std::size_t r, std::size_t c, Element v) { entries_[r * cols_ + c] = field_.normalize(std::move(v)); }
  /// Adds v to entry (r, c); used when assembling multiplication matrices.
  void accumulate(std::size_t r, std::size_t c, const Element& v) {
    auto& e = entries_[r * cols_ + c];
    e = field_.add(e, v);
  }

  std::span<const Element> row(std::size_t r) const { return {entries_.data() + r * cols_, cols_}; }

  bool operator==(const Matrix& o) const {
    return field_ == o.field_ && rows_ == o.rows_ && cols_ == o.cols_ && entries_ == o.entries_;
  }

 private:
  F field_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Element> entries_;
};

template <ExactField F>
Matrix<F> multiply(const Matrix<F>& a, const Matrix<F>& b) {
  if (a.cols() != b.rows()) throw PreconditionError("matrix product shape mismatch");
  const auto& f = a.field();
  Matrix<F> out(f, a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t k = 0; k < a.cols(); ++k) {
      if (f.is_zero(a(i, k))) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) {
        if (!f.is_zero(b(k, j))) out.accumulate(i, j, f.mul(a(i, k), b(k, j)));
      }
    }
  }
  return out;
}

template <ExactField F>
std::vector<typename F::Element> apply(const Matrix<F>& m, std::span<const typename F::Element> v) {
  if (v.size() != m.cols()) throw PreconditionError("vector length does not match matrix columns");
  const auto& f = m.field();
  std::vector<typename F::Element> out(m.rows(), f.zero());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (!f.is_zero(m(i, j)) && !f.is_zero(v[j])) out[i] = f.add(out[i], f.mul(m(i, j), v[j]));
    }
  }
  return out;
}

/// Horizontal concatenation [A | B | ...]; every block must have `rows` rows.
template <ExactField F>
Matrix<F> hconcat(const F& field, std::size_t rows, std::span<const Matrix<F>> blocks) {
  std::size_t cols = 0;
  for (const auto& b : blocks) {
    if (b.rows() != rows) throw PreconditionError("hconcat row mismatch");
    cols += b.cols();
  }
  Matrix<F> out(field, rows, cols);
  std::size_t offset = 0;
  for (const auto& b : blocks) {
    for (std::size_t i = 0; i < rows; ++i) {
      for (std::size_t j = 0; j < b.cols(); ++j) {
        if (!field.is_zero(b(i, j))) out.set(i, offset + j, b(i, j));
      }
    }
    offset += b.cols();
  }
  return out;
}

template <ExactField F>
struct ReducedEchelon {
  std::vector<std::size_t> pivot_cols;
  /// rank × cols, unit pivots, zeros above and below each pivot.
  Matrix<F> reduced;
};

namespace detail {

// Gauss-Jordan over F_2 on packed rows. Returns pivot columns; the first
// |pivots| rows hold the echelon form (reduced when full = true).
inline std::vector<std::size_t> eliminate_gf2(std::vector<std::uint64_t>& bits, std::size_t rows,
                                              std::size_t cols, bool full) {
  const std::size_t words = (cols + 63) / 64;
  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    const std::size_t w = c / 64;
    const std::uint64_t mask = std::uint64_t{1} << (c % 64);
    std::size_t piv = r;
    while (piv < rows && !(bits[piv * words + w] & mask)) ++piv;
    if (piv == rows) continue;
    if (piv != r) {
      std::swap_ranges(bits.begin() + piv * words, bits.begin() + (piv + 1) * words, bits.begin() + r * words);
    }
    const std::uint64_t* prow = bits.data() + r * words;
    for (std::size_t i = full ? 0 : r + 1; i < rows; ++i) {
      if (i == r) continue;
      std::uint64_t* row = bits.data() + i * words;
      if (!(row[w] & mask)) continue;
      for (std::size_t k = w; k < words; ++k) row[k] ^= prow[k];
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

// Gauss-Jordan over F_p with delayed reduction. Entries may sit unreduced
// (but below 2^64) between pivots; column c is reduced on demand when
// searching for a pivot. Everything is reduced on return.
inline std::vector<std::size_t> eliminate_mod_p(std::vector<std::uint64_t>& a, std::size_t rows,
                                                std::size_t cols, std::uint64_t p, bool full) {
  const std::uint64_t q = p - 1;
  const std::uint64_t budget = std::max<std::uint64_t>(1, (std::numeric_limits<std::uint64_t>::max() - q) / (q * q));
  std::uint64_t pending = 0;
  auto reduce_all = [&] {
    for (auto& x : a) x %= p;
    pending = 0;
  };

  std::vector<std::size_t> pivots;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = rows;
    for (std::size_t i = r; i < rows; ++i) {
      auto& x = a[i * cols + c];
      x %= p;
      if (x != 0) {
        piv = i;
        break;
      }
    }
    if (piv == rows) continue;
    if (pending >= budget) reduce_all();
    if (piv != r) {
      std::swap_ranges(a.begin() + piv * cols, a.begin() + (piv + 1) * cols, a.begin() + r * cols);
    }
    std::uint64_t* prow = a.data() + r * cols;
    const std::uint64_t scale = inverse_mod(prow[c] % p, p);
    for (std::size_t j = c; j < cols; ++j) prow[j] = (prow[j] % p) * scale % p;

    for (std::size_t i = full ? 0 : r + 1; i < rows; ++i) {
      if (i == r) continue;
      std::uint64_t* row = a.data() + i * cols;
      const std::uint64_t f = row[c] % p;
      if (f == 0) continue;
      const std::uint64_t g = p - f;
      for (std::size_t j = c; j < cols; ++j) row[j] += g * prow[j];
    }
    ++pending;
    pivots.push_back(c);
    ++r;
  }
  reduce_all();
  return pivots;
}

// Fraction-free elimination over Z. On return the first |pivots| rows are an
// echelon form whose entries are minors of the input.
inline std::vector<std::size_t> eliminate_bareiss(std::vector<Integer>& a, std::size_t rows, std::size_t cols) {
  std::vector<std::size_t> pivots;
  Integer prev = 1;
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t piv = r;
    while (piv < rows && a[piv * cols + c] == 0) ++piv;
    if (piv == rows) continue;
    if (piv != r) {
      std::swap_ranges(a.begin() + piv * cols, a.begin() + (piv + 1) * cols, a.begin() + r * cols);
    }
    const Integer pivot = a[r * cols + c];
    for (std::size_t i = r + 1; i < rows; ++i) {
      Integer lead = a[i * cols + c];
      for (std::size_t j = c + 1; j < cols; ++j) {
        Integer& x = a[i * cols + j];
        x = (pivot * x - lead * a[r * cols + j]) / prev;
      }
      a[i * cols + c] = 0;
    }
    prev = pivot;
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

inline std::vector<std::uint64_t> pack_gf2(const Matrix<PrimeField>& m) {
  const std::size_t words = (m.cols() + 63) / 64;
  std::vector<std::uint64_t> bits(m.rows() * words, 0);
  for (std::size_t i = 0; i < m.rows(); ++i) {
    for (std::size_t j = 0; j < m.cols(); ++j) {
      if (m(i, j) & 1) bits[i * words + j / 64] |= std::uint64_t{1} << (j % 64);
    }
  }
  return bits;
}

inline std::vector<Integer> clear_denominators(const Matrix<RationalField>& m) {
  std::vector<Integer> out(m.rows() * m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i) {
    Integer lcm = 1;
    for (const auto& e : m.row(i)) {
      const Integer den = boost::multiprecision::denominator(e);
      lcm = lcm / boost::multiprecision::gcd(lcm, den) * den;
    }
    for (std::size_t j = 0; j < m.cols(); ++j) {
      const auto& e = m(i, j);
      out[i * m.cols() + j] = boost::multiprecision::numerator(e) * (lcm / boost::multiprecision::denominator(e));
    }
  }
  return out;
}

template <ExactField F>
std::vector<std::size_t> echelon_pivots(const Matrix<F>& m, bool full, Matrix<F>* reduced) {
  const std::size_t rows = m.rows(), cols = m.cols();
  if constexpr (std::is_same_v<F, PrimeField>) {
    const std::uint64_t p = m.field().characteristic();
    if (p == 2) {
      auto bits = pack_gf2(m);
      auto pivots = eliminate_gf2(bits, rows, cols, full);
      if (reduced) {
        const std::size_t words = (cols + 63) / 64;
        *reduced = Matrix<F>(m.field(), pivots.size(), cols);
        for (std::size_t i = 0; i < pivots.size(); ++i) {
          for (std::size_t j = 0; j < cols; ++j) {
            if ((bits[i * words + j / 64] >> (j % 64)) & 1) reduced->set(i, j, 1);
          }
        }
      }
      return pivots;
    }
    std::vector<std::uint64_t> a = m.entries();
    auto pivots = eliminate_mod_p(a, rows, cols, p, full);
    if (reduced) {
      a.resize(pivots.size() * cols);
      *reduced = Matrix<F>(m.field(), pivots.size(), cols, std::move(a));
    }
    return pivots;
  } else {
    auto a = clear_denominators(m);
    auto pivots = eliminate_bareiss(a, rows, cols);
    if (reduced) {
      const std::size_t rank = pivots.size();
      std::vector<Rational> e(rank * cols);
      for (std::size_t i = 0; i < rank; ++i) {
        const Integer& lead = a[i * cols + pivots[i]];
        for (std::size_t j = 0; j < cols; ++j) e[i * cols + j] = make_rational(a[i * cols + j], lead);
      }
      for (std::size_t i = rank; i-- > 0;) {
        const std::size_t pc = pivots[i];
        for (std::size_t k = 0; k < i; ++k) {
          const Rational f = e[k * cols + pc];
          if (f == 0) continue;
          for (std::size_t j = pc; j < cols; ++j) e[k * cols + j] -= f * e[i * cols + j];
        }
      }
      *reduced = Matrix<F>(m.field(), rank, cols, std::move(e));
    }
    return pivots;
  }
}

}  // namespace detail

template <ExactField F>
std::size_t rank(const Matrix<F>& m) {
  return detail::echelon_pivots<F>(m, false, nullptr).size();
}

template <ExactField F>
ReducedEchelon<F> reduced_echelon(const Matrix<F>& m) {
  Matrix<F> reduced(m.field(), 0, m.cols());
  auto pivots = detail::echelon_pivots<F>(m, true, &reduced);
  return {std::move(pivots), std::move(reduced)};
}

/// Basis of {v : M v = 0}. One vector per non-pivot column f, ascending in f,
/// with v[f] = 1 and v zero on the other free columns.
template <ExactField F>
std::vector<std::vector<typename F::Element>> kernel_basis(const Matrix<F>& m) {
  const auto& field = m.field();
  auto [pivots, reduced] = reduced_echelon(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto c : pivots) is_pivot[c] = true;

  std::vector<std::vector<typename F::Element>> basis;
  for (std::size_t free = 0; free < m.cols(); ++free) {
    if (is_pivot[free]) continue;
    std::vector<typename F::Element> v(m.cols(), field.zero());
    v[free] = field.one();
    for (std::size_t i = 0; i < pivots.size(); ++i) v[pivots[i]] = field.neg(reduced(i, free));
    basis.push_back(std::move(v));
  }
  return basis;
}

}  // namespace frobdesc
