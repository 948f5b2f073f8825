#pragma once

// Cohomology of the twists O_C(n) on a Fermat curve.
//
// h^0 comes from the Hilbert function (C is arithmetically Cohen-Macaulay),
// h^1 from Serre duality against omega_C = O_C(d - 3). H^1(C, O_C(m)) is
// modelled as the degree-m piece of the local cohomology H^2 of R, which has
// the monomial basis X^a Y^b Z^c with a < 0, b < 0, 0 <= c < d.

#include <map>
#include <vector>

#include "errors.hpp"
#include "fermat_ring.hpp"

namespace frobdesc {

inline std::size_t h0_line(const FermatCurve& curve, int n) { return n < 0 ? 0 : hilbert_dim(curve, n); }

inline int canonical_twist(const FermatCurve& curve) { return curve.degree() - 3; }

inline std::size_t h1_line(const FermatCurve& curve, int n) { return h0_line(curve, canonical_twist(curve) - n); }

/// Euler characteristic d*n + 1 - g, the right-hand side of Riemann-Roch.
inline long euler_characteristic(const FermatCurve& curve, int n) {
  return static_cast<long>(curve.degree()) * n + 1 - curve.genus();
}

/// Fraction monomials spanning H^1(C, O_C(m)), ordered by descending Z-exponent
/// and then descending X-exponent.
inline std::vector<Monomial> cech_h1_basis(const FermatCurve& curve, int m) {
  std::vector<Monomial> out;
  for (int c = curve.degree() - 1; c >= 0; --c) {
    // a + b = m - c with a, b <= -1
    for (int a = -1; m - c - a <= -1; --a) out.push_back({a, m - c - a, c});
  }
  return out;
}

inline bool is_cech_monomial(const FermatCurve& curve, const Monomial& m) {
  return m.x < 0 && m.y < 0 && m.z >= 0 && m.z < curve.degree();
}

/// An element of H^1(C, O_C(m)) written in the fraction-monomial basis.
template <ExactField F>
class CechClass {
 public:
  using Element = typename F::Element;
  using Terms = std::map<Monomial, Element, GrlexGreater>;

  CechClass(FermatCurve curve, F field, int degree) : curve_(curve), field_(std::move(field)), degree_(degree) {}

  CechClass(FermatCurve curve, F field, int degree, const Terms& terms) : CechClass(curve, std::move(field), degree) {
    for (const auto& [m, c] : terms) add_term(m, c);
  }

  void add_term(const Monomial& m, const Element& c) {
    if (!is_cech_monomial(curve_, m) || m.degree() != degree_) {
      throw PreconditionError("monomial " + format_monomial(m) + " is not a basis element of H^1 in degree " +
                              std::to_string(degree_));
    }
    if (field_.is_zero(c)) return;
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
      it->second = field_.add(it->second, c);
      if (field_.is_zero(it->second)) terms_.erase(it);
    }
  }

  const FermatCurve& curve() const noexcept { return curve_; }
  int degree() const noexcept { return degree_; }
  const Terms& terms() const noexcept { return terms_; }

  std::string to_string() const {
    if (terms_.empty()) return "0";
    std::string out;
    for (const auto& [m, c] : terms_) {
      if (!out.empty()) out += " + ";
      out += field_.format(c) + "*" + format_monomial(m);
    }
    return out;
  }

 private:
  FermatCurve curve_;
  F field_;
  int degree_;
  Terms terms_;
};

/// Nonzero iff some basis coefficient is nonzero.
template <ExactField F>
bool class_is_nonzero(const CechClass<F>& cls) {
  return !cls.terms().empty();
}

/// The extension class Z^(d-1) / (XY) in H^1(C, O_C(d - 3)).
template <ExactField F>
CechClass<F> fermat_extension_class(const FermatCurve& curve, const F& field) {
  CechClass<F> cls(curve, field, canonical_twist(curve));
  cls.add_term({-1, -1, curve.degree() - 1}, field.one());
  return cls;
}

}  // namespace frobdesc
