#pragma once

#include <compare>
#include <cstdint>
#include <initializer_list>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ffmobius/field.hpp"

namespace ffm {

/// Dense polynomial over GF(q), coefficients low-to-high with no trailing
/// zeros. The zero polynomial has no coefficients and no degree.
class Poly {
 public:
  /// The zero polynomial over `F`.
  explicit Poly(const Field& F) : F_(&F) {}
  Poly(const Field& F, std::vector<Elem> coeffs) : F_(&F), c_(std::move(coeffs)) { normalize(); }

  static Poly constant(const Field& F, Elem c) { return Poly(F, std::vector<Elem>{c}); }
  static Poly one(const Field& F) { return constant(F, Field::one()); }
  /// c * T^n.
  static Poly monomial(const Field& F, Elem c, unsigned n);
  static Poly T(const Field& F) { return monomial(F, Field::one(), 1); }
  /// Coefficients given as element codes, low-to-high.
  static Poly from_codes(const Field& F, std::initializer_list<std::uint32_t> codes);

  const Field& field() const { return *F_; }
  /// Absent for the zero polynomial.
  std::optional<unsigned> degree() const {
    if (c_.empty()) return std::nullopt;
    return static_cast<unsigned>(c_.size() - 1);
  }
  bool is_zero() const { return c_.empty(); }
  bool is_one() const { return c_.size() == 1 && c_[0] == Field::one(); }
  /// Zero or a nonzero constant.
  bool is_constant() const { return c_.size() <= 1; }
  bool is_monic() const { return !c_.empty() && c_.back() == Field::one(); }
  /// Leading coefficient; zero for the zero polynomial.
  Elem lc() const { return c_.empty() ? Field::zero() : c_.back(); }
  Elem coeff(std::size_t i) const { return i < c_.size() ? c_[i] : Field::zero(); }
  std::span<const Elem> coeffs() const { return c_; }
  /// q^deg, and 0 for the zero polynomial. Throws ResourceLimit on overflow.
  std::uint64_t norm() const;

  Poly& operator+=(const Poly& o);
  Poly& operator-=(const Poly& o);
  Poly& operator*=(const Poly& o) { return *this = *this * o; }
  Poly& operator*=(Elem c);

  friend Poly operator+(Poly a, const Poly& b) { return a += b; }
  friend Poly operator-(Poly a, const Poly& b) { return a -= b; }
  friend Poly operator*(const Poly& a, const Poly& b);
  friend Poly operator*(Poly a, Elem c) { return a *= c; }
  friend Poly operator*(Elem c, Poly a) { return a *= c; }
  Poly operator-() const;

  friend bool operator==(const Poly& a, const Poly& b) { return a.c_ == b.c_; }
  /// Canonical order: by degree (zero first), then by the base-q encoding
  /// of the coefficient vector.
  friend std::strong_ordering operator<=>(const Poly& a, const Poly& b);

  /// Value at x.
  Elem operator()(Elem x) const;

 private:
  void normalize() {
    while (!c_.empty() && c_.back().code == 0) c_.pop_back();
  }

  const Field* F_;
  std::vector<Elem> c_;
};

struct DivRem {
  Poly quotient;
  Poly remainder;
};

/// f = quotient * g + remainder with d(remainder) < d(g). Throws DivisionByZero for g = 0.
DivRem divrem(const Poly& f, const Poly& g);
Poly operator/(const Poly& f, const Poly& g);
Poly operator%(const Poly& f, const Poly& g);

/// Monic gcd; gcd(0, 0) = 0.
Poly gcd(const Poly& a, const Poly& b);

struct Xgcd {
  Poly g;  // monic gcd
  Poly s;
  Poly t;  // s*a + t*b = g
};
Xgcd xgcd(const Poly& a, const Poly& b);

Poly monic(const Poly& f);
Poly derivative(const Poly& f);
Poly pow(const Poly& f, std::uint64_t e);
Poly mulmod(const Poly& a, const Poly& b, const Poly& m);
Poly powmod(const Poly& f, std::uint64_t e, const Poly& m);
/// s(T)^p = Frobenius on coefficients composed with T -> T^p.
Poly frobenius_power(const Poly& s);
/// The unique h with h^p = f; requires f' = 0.
Poly pth_root(const Poly& f);
bool divides(const Poly& d, const Poly& f);
/// Monic square root of an exact square of a monic polynomial (odd p),
/// or nullopt if `f` is not such a square.
std::optional<Poly> monic_sqrt(const Poly& f);

/// Res(g, f) = lc(g)^{d(f)} * prod_{g(theta) = 0} f(theta). Throws DomainError when
/// either argument is zero.
Elem resultant(const Poly& g, const Poly& f);
/// (-1)^{n(n-1)/2} lc(f)^{n-2} prod f'(theta_i) for d(f) = n >= 1; 0 if f' = 0.
Elem discriminant(const Poly& f);
bool is_squarefree(const Poly& f);

/// Sum c_i q^i over the coefficients below degree d (the position of a monic
/// of degree d inside monics(d), or of a degree < d polynomial in polys_below(d)).
std::uint64_t low_index(const Poly& f, unsigned d);
/// T^d + (polynomial with low_index idx).
Poly monic_from_index(const Field& F, unsigned d, std::uint64_t idx);
/// Polynomial of degree < t with low_index idx.
Poly poly_from_index(const Field& F, std::uint64_t idx);
/// q^e, throwing ResourceLimit on overflow.
std::uint64_t checked_pow(std::uint64_t q, unsigned e);

/// Forward range over monics of degree d (size q^d) or over all
/// polynomials of degree < t (size q^t), in canonical order.
class PolyRange {
 public:
  class iterator {
   public:
    using value_type = Poly;
    using difference_type = std::ptrdiff_t;
    iterator(const PolyRange* r, std::uint64_t i) : range_(r), index_(i) {}
    Poly operator*() const { return range_->at(index_); }
    iterator& operator++() {
      ++index_;
      return *this;
    }
    iterator operator++(int) {
      auto t = *this;
      ++index_;
      return t;
    }
    bool operator==(const iterator& o) const { return index_ == o.index_; }

   private:
    const PolyRange* range_;
    std::uint64_t index_;
  };

  PolyRange(const Field& F, unsigned d, bool monic);
  std::uint64_t size() const { return size_; }
  Poly at(std::uint64_t idx) const;
  iterator begin() const { return {this, 0}; }
  iterator end() const { return {this, size_}; }

 private:
  const Field* F_;
  unsigned d_;
  bool monic_;
  std::uint64_t size_;
};

/// All monic polynomials of degree d.
inline PolyRange monics(const Field& F, unsigned d) { return PolyRange(F, d, true); }
/// All polynomials of degree < t, including 0.
inline PolyRange polys_below(const Field& F, unsigned t) { return PolyRange(F, t, false); }

/// Parses `term ('+' term)*` with term := COEFF ['*'] 'T' ['^' EXP] | COEFF,
/// or `coeffs:[c0,c1,...]`. COEFF is an element code; a missing COEFF means 1.
Poly parse_poly(const Field& F, std::string_view text);
/// Canonical literal, highest degree first, e.g. "T^4+2*T+1"; "0" for zero.
std::string to_string(const Poly& f);
std::ostream& operator<<(std::ostream& os, const Poly& f);

namespace detail {
/// Res(a, b) on raw coefficient buffers (both nonzero, no trailing zeros).
/// The buffers are clobbered.
Elem resultant_inplace(const Field& F, std::vector<Elem>& a, std::vector<Elem>& b);
}  // namespace detail

}  // namespace ffm
