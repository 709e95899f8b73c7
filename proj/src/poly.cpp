#include "ffmobius/poly.hpp"

#include <algorithm>
#include <cctype>
#include <limits>
#include <ostream>
#include <sstream>

namespace ffm {

namespace {

void trim(std::vector<Elem>& c) {
  while (!c.empty() && c.back().code == 0) c.pop_back();
}

// a <- a mod b, in place. b nonzero and trimmed.
void reduce_inplace(const Field& F, std::vector<Elem>& a, const std::vector<Elem>& b) {
  const std::size_t db = b.size() - 1;
  const Elem lc_inv = F.inv(b.back());
  trim(a);
  while (a.size() > db) {
    const Elem c = F.mul(a.back(), lc_inv);
    const std::size_t shift = a.size() - 1 - db;
    for (std::size_t i = 0; i < db; ++i) a[shift + i] = F.sub(a[shift + i], F.mul(c, b[i]));
    a.pop_back();
    trim(a);
  }
}

void require_same_field(const Poly& a, const Poly& b) {
  if (&a.field() != &b.field()) throw DomainError("polynomials over different fields");
}

}  // namespace

std::uint64_t checked_pow(std::uint64_t q, unsigned e) {
  std::uint64_t r = 1;
  for (unsigned i = 0; i < e; ++i) {
    if (r > std::numeric_limits<std::uint64_t>::max() / q) throw ResourceLimit("q^e overflows 64 bits");
    r *= q;
  }
  return r;
}

Poly Poly::monomial(const Field& F, Elem c, unsigned n) {
  std::vector<Elem> v(n + 1, Field::zero());
  v[n] = c;
  return Poly(F, std::move(v));
}

Poly Poly::from_codes(const Field& F, std::initializer_list<std::uint32_t> codes) {
  std::vector<Elem> v;
  v.reserve(codes.size());
  for (auto c : codes) {
    if (c >= F.q()) throw DomainError("coefficient code " + std::to_string(c) + " out of range");
    v.push_back(Elem{c});
  }
  return Poly(F, std::move(v));
}

std::uint64_t Poly::norm() const {
  if (c_.empty()) return 0;
  return checked_pow(F_->q(), static_cast<unsigned>(c_.size() - 1));
}

Poly& Poly::operator+=(const Poly& o) {
  require_same_field(*this, o);
  if (c_.size() < o.c_.size()) c_.resize(o.c_.size(), Field::zero());
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] = F_->add(c_[i], o.c_[i]);
  normalize();
  return *this;
}

Poly& Poly::operator-=(const Poly& o) {
  require_same_field(*this, o);
  if (c_.size() < o.c_.size()) c_.resize(o.c_.size(), Field::zero());
  for (std::size_t i = 0; i < o.c_.size(); ++i) c_[i] = F_->sub(c_[i], o.c_[i]);
  normalize();
  return *this;
}

Poly& Poly::operator*=(Elem c) {
  for (auto& x : c_) x = F_->mul(x, c);
  normalize();
  return *this;
}

Poly operator*(const Poly& a, const Poly& b) {
  require_same_field(a, b);
  const Field& F = a.field();
  if (a.is_zero() || b.is_zero()) return Poly(F);
  std::vector<Elem> out(a.c_.size() + b.c_.size() - 1, Field::zero());
  for (std::size_t i = 0; i < a.c_.size(); ++i) {
    if (a.c_[i].code == 0) continue;
    for (std::size_t j = 0; j < b.c_.size(); ++j) out[i + j] = F.add(out[i + j], F.mul(a.c_[i], b.c_[j]));
  }
  return Poly(F, std::move(out));
}

Poly Poly::operator-() const {
  Poly r = *this;
  for (auto& x : r.c_) x = F_->neg(x);
  return r;
}

std::strong_ordering operator<=>(const Poly& a, const Poly& b) {
  if (a.c_.size() != b.c_.size()) return a.c_.size() <=> b.c_.size();
  for (std::size_t i = a.c_.size(); i-- > 0;) {
    if (a.c_[i] != b.c_[i]) return a.c_[i].code <=> b.c_[i].code;
  }
  return std::strong_ordering::equal;
}

Elem Poly::operator()(Elem x) const {
  Elem acc = Field::zero();
  for (std::size_t i = c_.size(); i-- > 0;) acc = F_->add(F_->mul(acc, x), c_[i]);
  return acc;
}

DivRem divrem(const Poly& f, const Poly& g) {
  require_same_field(f, g);
  const Field& F = f.field();
  if (g.is_zero()) throw DivisionByZero("polynomial division by zero");
  std::vector<Elem> r(f.coeffs().begin(), f.coeffs().end());
  const auto gc = g.coeffs();
  const std::size_t dg = gc.size() - 1;
  if (r.size() <= dg) return {Poly(F), f};
  std::vector<Elem> quo(r.size() - dg, Field::zero());
  const Elem lc_inv = F.inv(g.lc());
  while (r.size() > dg) {
    const Elem c = F.mul(r.back(), lc_inv);
    const std::size_t shift = r.size() - 1 - dg;
    quo[shift] = c;
    for (std::size_t i = 0; i < dg; ++i) r[shift + i] = F.sub(r[shift + i], F.mul(c, gc[i]));
    r.pop_back();
    trim(r);
  }
  return {Poly(F, std::move(quo)), Poly(F, std::move(r))};
}

Poly operator/(const Poly& f, const Poly& g) { return divrem(f, g).quotient; }

Poly operator%(const Poly& f, const Poly& g) {
  require_same_field(f, g);
  if (g.is_zero()) throw DivisionByZero("polynomial reduction modulo zero");
  std::vector<Elem> r(f.coeffs().begin(), f.coeffs().end());
  std::vector<Elem> m(g.coeffs().begin(), g.coeffs().end());
  reduce_inplace(f.field(), r, m);
  return Poly(f.field(), std::move(r));
}

Poly monic(const Poly& f) {
  if (f.is_zero() || f.is_monic()) return f;
  return f * f.field().inv(f.lc());
}

Poly gcd(const Poly& a, const Poly& b) {
  require_same_field(a, b);
  const Field& F = a.field();
  std::vector<Elem> x(a.coeffs().begin(), a.coeffs().end());
  std::vector<Elem> y(b.coeffs().begin(), b.coeffs().end());
  while (!y.empty()) {
    reduce_inplace(F, x, y);
    std::swap(x, y);
  }
  return monic(Poly(F, std::move(x)));
}

Xgcd xgcd(const Poly& a, const Poly& b) {
  require_same_field(a, b);
  const Field& F = a.field();
  Poly r0 = a, r1 = b;
  Poly s0 = Poly::one(F), s1(F);
  Poly t0(F), t1 = Poly::one(F);
  while (!r1.is_zero()) {
    auto [quo, rem] = divrem(r0, r1);
    r0 = std::move(r1);
    r1 = std::move(rem);
    Poly s2 = s0 - quo * s1;
    s0 = std::move(s1);
    s1 = std::move(s2);
    Poly t2 = t0 - quo * t1;
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  if (r0.is_zero()) return {r0, s0, t0};
  const Elem scale = F.inv(r0.lc());
  return {r0 * scale, s0 * scale, t0 * scale};
}

Poly derivative(const Poly& f) {
  const Field& F = f.field();
  const auto c = f.coeffs();
  if (c.size() <= 1) return Poly(F);
  std::vector<Elem> out(c.size() - 1);
  for (std::size_t i = 1; i < c.size(); ++i) out[i - 1] = F.mul(F.from_int(static_cast<long long>(i % F.p())), c[i]);
  return Poly(F, std::move(out));
}

Poly pow(const Poly& f, std::uint64_t e) {
  Poly result = Poly::one(f.field()), base = f;
  for (; e > 0; e >>= 1) {
    if (e & 1) result = result * base;
    if (e > 1) base = base * base;
  }
  return result;
}

Poly mulmod(const Poly& a, const Poly& b, const Poly& m) { return (a * b) % m; }

Poly powmod(const Poly& f, std::uint64_t e, const Poly& m) {
  Poly result = Poly::one(f.field()) % m, base = f % m;
  for (; e > 0; e >>= 1) {
    if (e & 1) result = mulmod(result, base, m);
    if (e > 1) base = mulmod(base, base, m);
  }
  return result;
}

Poly frobenius_power(const Poly& s) {
  const Field& F = s.field();
  const auto c = s.coeffs();
  if (c.empty()) return Poly(F);
  std::vector<Elem> out((c.size() - 1) * F.p() + 1, Field::zero());
  for (std::size_t i = 0; i < c.size(); ++i) out[i * F.p()] = F.frobenius(c[i]);
  return Poly(F, std::move(out));
}

Poly pth_root(const Poly& f) {
  const Field& F = f.field();
  const auto c = f.coeffs();
  std::vector<Elem> out;
  for (std::size_t i = 0; i < c.size(); ++i) {
    if (i % F.p() != 0) {
      if (c[i].code != 0) throw DomainError("pth_root of a polynomial with nonzero derivative");
      continue;
    }
    out.push_back(F.frobenius_inv(c[i]));
  }
  return Poly(F, std::move(out));
}

bool divides(const Poly& d, const Poly& f) {
  if (d.is_zero()) return f.is_zero();
  return (f % d).is_zero();
}

std::optional<Poly> monic_sqrt(const Poly& f) {
  const Field& F = f.field();
  if (F.p() == 2) throw Unsupported("monic_sqrt requires odd characteristic");
  if (!f.is_monic()) return std::nullopt;
  const unsigned d = *f.degree();
  if (d % 2 != 0) return std::nullopt;
  const unsigned n = d / 2;
  std::vector<Elem> b(n + 1, Field::zero());
  b[n] = Field::one();
  const Elem half = F.inv(F.from_int(2));
  for (unsigned j = 1; j <= n; ++j) {
    Elem acc = f.coeff(d - j);
    for (unsigned i = 1; i < j; ++i) acc = F.sub(acc, F.mul(b[n - i], b[n - j + i]));
    b[n - j] = F.mul(acc, half);
  }
  Poly root(F, std::move(b));
  if (root * root != f) return std::nullopt;
  return root;
}

namespace detail {

Elem resultant_inplace(const Field& F, std::vector<Elem>& a, std::vector<Elem>& b) {
  Elem res = Field::one();
  for (;;) {
    const std::size_t n = a.size() - 1;
    const std::size_t m = b.size() - 1;
    if (n == 0) return F.mul(res, F.pow(a[0], m));
    if (m == 0) return F.mul(res, F.pow(b[0], n));
    // Res(A, B) = (-1)^{nm} lc(B)^{n - r} Res(B, A mod B)
    reduce_inplace(F, a, b);
    if (a.empty()) return Field::zero();
    const std::size_t r = a.size() - 1;
    if ((n & 1) && (m & 1)) res = F.neg(res);
    res = F.mul(res, F.pow(b.back(), n - r));
    std::swap(a, b);
  }
}

}  // namespace detail

Elem resultant(const Poly& g, const Poly& f) {
  require_same_field(g, f);
  if (g.is_zero() || f.is_zero()) throw DomainError("resultant with the zero polynomial");
  std::vector<Elem> a(g.coeffs().begin(), g.coeffs().end());
  std::vector<Elem> b(f.coeffs().begin(), f.coeffs().end());
  return detail::resultant_inplace(g.field(), a, b);
}

Elem discriminant(const Poly& f) {
  if (f.is_constant()) throw DomainError("discriminant of a constant");
  const Field& F = f.field();
  const Poly df = derivative(f);
  if (df.is_zero()) return Field::zero();
  const unsigned n = *f.degree();
  const unsigned dd = *df.degree();
  // Res(f, f') = lc^{d(f')} prod f'(theta); Disc = (-1)^{n(n-1)/2} lc^{n-2} prod f'(theta).
  Elem r = resultant(f, df);
  const Elem lc = f.lc();
  const long long shift = static_cast<long long>(n) - 2 - static_cast<long long>(dd);
  if (shift >= 0) {
    r = F.mul(r, F.pow(lc, static_cast<std::uint64_t>(shift)));
  } else {
    r = F.mul(r, F.pow(F.inv(lc), static_cast<std::uint64_t>(-shift)));
  }
  if ((static_cast<std::uint64_t>(n) * (n - 1) / 2) % 2 == 1) r = F.neg(r);
  return r;
}

bool is_squarefree(const Poly& f) {
  if (f.is_zero()) throw DomainError("is_squarefree of zero");
  if (f.is_constant()) return true;
  const Poly df = derivative(f);
  if (df.is_zero()) return false;
  return gcd(f, df).is_one();
}

std::uint64_t low_index(const Poly& f, unsigned d) {
  const std::uint64_t q = f.field().q();
  std::uint64_t idx = 0;
  for (unsigned i = d; i-- > 0;) idx = idx * q + f.coeff(i).code;
  return idx;
}

Poly monic_from_index(const Field& F, unsigned d, std::uint64_t idx) {
  std::vector<Elem> c(d + 1);
  for (unsigned i = 0; i < d; ++i) {
    c[i] = Elem{static_cast<std::uint32_t>(idx % F.q())};
    idx /= F.q();
  }
  c[d] = Field::one();
  return Poly(F, std::move(c));
}

Poly poly_from_index(const Field& F, std::uint64_t idx) {
  std::vector<Elem> c;
  while (idx > 0) {
    c.push_back(Elem{static_cast<std::uint32_t>(idx % F.q())});
    idx /= F.q();
  }
  return Poly(F, std::move(c));
}

PolyRange::PolyRange(const Field& F, unsigned d, bool monic)
    : F_(&F), d_(d), monic_(monic), size_(checked_pow(F.q(), d)) {}

Poly PolyRange::at(std::uint64_t idx) const {
  return monic_ ? monic_from_index(*F_, d_, idx) : poly_from_index(*F_, idx);
}

Poly parse_poly(const Field& F, std::string_view text) {
  std::string s;
  for (char ch : text)
    if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
  auto fail = [&](const std::string& why) -> DomainError {
    return DomainError("cannot parse polynomial '" + std::string(text) + "': " + why);
  };
  auto read_uint = [&](std::size_t& pos) -> std::optional<std::uint64_t> {
    if (pos >= s.size() || !std::isdigit(static_cast<unsigned char>(s[pos]))) return std::nullopt;
    std::uint64_t v = 0;
    while (pos < s.size() && std::isdigit(static_cast<unsigned char>(s[pos]))) {
      v = v * 10 + static_cast<std::uint64_t>(s[pos] - '0');
      if (v > (std::uint64_t{1} << 40)) throw fail("number too large");
      ++pos;
    }
    return v;
  };
  auto to_elem = [&](std::uint64_t code) {
    if (code >= F.q()) throw fail("coefficient " + std::to_string(code) + " is not an element of " + F.name());
    return Elem{static_cast<std::uint32_t>(code)};
  };

  const std::string_view prefix = "coeffs:[";
  if (s.rfind(prefix, 0) == 0) {
    if (s.back() != ']') throw fail("missing ']'");
    std::vector<Elem> c;
    std::size_t pos = prefix.size();
    while (pos < s.size() - 1) {
      auto v = read_uint(pos);
      if (!v) throw fail("expected coefficient");
      c.push_back(to_elem(*v));
      if (pos < s.size() - 1) {
        if (s[pos] != ',') throw fail("expected ','");
        ++pos;
      }
    }
    return Poly(F, std::move(c));
  }

  if (s.empty()) throw fail("empty");
  Poly result(F);
  std::size_t pos = 0;
  for (;;) {
    auto coeff = read_uint(pos);
    Elem c = coeff ? to_elem(*coeff) : Field::one();
    unsigned exponent = 0;
    if (pos < s.size() && s[pos] == '*') {
      if (!coeff) throw fail("'*' without coefficient");
      ++pos;
      if (pos >= s.size() || s[pos] != 'T') throw fail("expected 'T' after '*'");
    }
    if (pos < s.size() && s[pos] == 'T') {
      ++pos;
      exponent = 1;
      if (pos < s.size() && s[pos] == '^') {
        ++pos;
        auto e = read_uint(pos);
        if (!e) throw fail("expected exponent");
        if (*e > 100000) throw fail("exponent too large");
        exponent = static_cast<unsigned>(*e);
      }
    } else if (!coeff) {
      throw fail("expected term");
    }
    result += Poly::monomial(F, c, exponent);
    if (pos == s.size()) break;
    if (s[pos] != '+') throw fail(std::string("unexpected '") + s[pos] + "'");
    ++pos;
  }
  return result;
}

std::string to_string(const Poly& f) {
  const auto c = f.coeffs();
  if (c.empty()) return "0";
  std::ostringstream os;
  bool first = true;
  for (std::size_t i = c.size(); i-- > 0;) {
    if (c[i].code == 0) continue;
    if (!first) os << '+';
    first = false;
    if (i == 0) {
      os << c[i].code;
      continue;
    }
    if (c[i].code != 1) os << c[i].code << '*';
    os << 'T';
    if (i > 1) os << '^' << i;
  }
  return os.str();
}

std::ostream& operator<<(std::ostream& os, const Poly& f) { return os << to_string(f); }

}  // namespace ffm
