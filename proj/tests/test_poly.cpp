#include <sstream>
#include <vector>

#include "doctest.h"
#include "ffmobius/poly.hpp"

using namespace ffm;

namespace {

// Determinant by Gaussian elimination over the field.
Elem determinant(const Field& F, std::vector<std::vector<Elem>> m) {
  const std::size_t n = m.size();
  Elem det = F.one();
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t pivot = col;
    while (pivot < n && m[pivot][col] == F.zero()) ++pivot;
    if (pivot == n) return F.zero();
    if (pivot != col) {
      std::swap(m[pivot], m[col]);
      det = F.neg(det);
    }
    det = F.mul(det, m[col][col]);
    const Elem inv = F.inv(m[col][col]);
    for (std::size_t r = col + 1; r < n; ++r) {
      const Elem c = F.mul(m[r][col], inv);
      for (std::size_t j = col; j < n; ++j) m[r][j] = F.sub(m[r][j], F.mul(c, m[col][j]));
    }
  }
  return det;
}

// Resultant as the Sylvester determinant, with Res(c, g) = c^{d(g)} for constants.
Elem sylvester_resultant(const Poly& a, const Poly& b) {
  const Field& F = a.field();
  const unsigned n = *a.degree(), m = *b.degree();
  if (n == 0) return F.pow(a.lc(), m);
  if (m == 0) return F.pow(b.lc(), n);
  const unsigned size = n + m;
  std::vector<std::vector<Elem>> s(size, std::vector<Elem>(size, F.zero()));
  for (unsigned r = 0; r < m; ++r)
    for (unsigned i = 0; i <= n; ++i) s[r][r + i] = a.coeff(n - i);
  for (unsigned r = 0; r < n; ++r)
    for (unsigned i = 0; i <= m; ++i) s[m + r][r + i] = b.coeff(m - i);
  return determinant(F, s);
}

std::vector<Poly> all_polys(const Field& F, unsigned max_deg) {
  std::vector<Poly> out;
  for (auto f : polys_below(F, max_deg + 1)) out.push_back(f);
  return out;
}

}  // namespace

TEST_CASE("representation and canonical order") {
  auto F = Field::make(3, 1);
  Poly zero(*F);
  CHECK(zero.is_zero());
  CHECK(!zero.degree());
  CHECK(zero.norm() == 0);
  CHECK(Poly::T(*F).norm() == 3);
  CHECK(Poly::from_codes(*F, {1, 2, 0, 0}).degree() == 1u);
  CHECK(zero < Poly::one(*F));
  CHECK(Poly::from_codes(*F, {2}) < Poly::T(*F));
  CHECK(Poly::from_codes(*F, {2, 1}) < Poly::from_codes(*F, {0, 2}));
  CHECK_THROWS_AS(Poly::from_codes(*F, {3}), DomainError);
}

TEST_CASE("literal grammar round trip") {
  auto F = Field::make(3, 2);
  const Poly f = parse_poly(*F, "T^4+2*T+1");
  CHECK(f == Poly::from_codes(*F, {1, 2, 0, 0, 1}));
  CHECK(to_string(f) == "T^4+2*T+1");
  CHECK(parse_poly(*F, "coeffs:[1,2,0,0,1]") == f);
  CHECK(parse_poly(*F, " 8 T^2 + T + T ") == Poly::from_codes(*F, {0, 2, 8}));
  CHECK(to_string(parse_poly(*F, "0")) == "0");
  CHECK(parse_poly(*F, "5") == Poly::from_codes(*F, {5}));
  CHECK_THROWS_AS(parse_poly(*F, "9*T"), DomainError);
  CHECK_THROWS_AS(parse_poly(*F, "T^"), DomainError);
  CHECK_THROWS_AS(parse_poly(*F, ""), DomainError);
  CHECK_THROWS_AS(parse_poly(*F, "T-1"), DomainError);
  for (auto g : polys_below(*F, 3)) CHECK(parse_poly(*F, to_string(g)) == g);
  std::ostringstream os;
  os << Poly::T(*F);
  CHECK(os.str() == "T");
}

TEST_CASE("enumeration") {
  auto F = Field::make(3, 1);
  CHECK(monics(*F, 2).size() == 9);
  CHECK(polys_below(*F, 1).size() == 3);
  CHECK(monics(*F, 0).size() == 1);
  CHECK((*monics(*F, 0).begin()).is_one());
  Poly prev(*F);
  std::uint64_t count = 0;
  for (auto f : monics(*F, 3)) {
    CHECK(f.is_monic());
    CHECK(f.degree() == 3u);
    if (count > 0) CHECK(prev < f);
    CHECK(low_index(f, 3) == count);
    prev = f;
    ++count;
  }
  CHECK(count == 27);
  CHECK(checked_pow(3, 40) > 0);
  CHECK_THROWS_AS(checked_pow(3, 41), ResourceLimit);
}

TEST_CASE("divrem examples and exhaustive reconstruction") {
  auto F = Field::make(3, 1);
  auto [q1, r1] = divrem(parse_poly(*F, "T^2+1"), Poly::T(*F));
  CHECK(q1 == Poly::T(*F));
  CHECK(r1.is_one());
  const Poly f = parse_poly(*F, "T^3+2*T+1");
  auto [q2, r2] = divrem(f, parse_poly(*F, "T+1"));
  CHECK(r2 == Poly::one(*F));
  CHECK(q2 * parse_poly(*F, "T+1") + r2 == f);
  CHECK(divrem(f, Poly::one(*F)).quotient == f);
  CHECK_THROWS_AS(divrem(f, Poly(*F)), DivisionByZero);

  const auto polys = all_polys(*F, 4);
  for (const auto& a : polys) {
    for (const auto& b : polys) {
      if (b.is_zero()) continue;
      auto [quo, rem] = divrem(a, b);
      REQUIRE(quo * b + rem == a);
      REQUIRE((rem.is_zero() || *rem.degree() < *b.degree()));
      REQUIRE(a % b == rem);
    }
  }
}

TEST_CASE("gcd and xgcd") {
  for (auto spec : {"3", "3^2"}) {
    auto F = Field::from_spec(spec);
    const auto polys = all_polys(*F, F->q() == 3 ? 3 : 2);
    for (const auto& a : polys) {
      for (const auto& b : polys) {
        const Poly g = gcd(a, b);
        if (a.is_zero() && b.is_zero()) {
          CHECK(g.is_zero());
          continue;
        }
        REQUIRE(g.is_monic());
        REQUIRE(divides(g, a));
        REQUIRE(divides(g, b));
        auto x = xgcd(a, b);
        REQUIRE(x.g == g);
        REQUIRE(x.s * a + x.t * b == g);
      }
    }
  }
}

TEST_CASE("resultant against the Sylvester determinant") {
  for (auto spec : {"3", "3^2"}) {
    auto F = Field::from_spec(spec);
    const auto polys = all_polys(*F, F->q() == 3 ? 3 : 2);
    for (const auto& a : polys) {
      if (a.is_zero()) continue;
      for (const auto& b : polys) {
        if (b.is_zero()) continue;
        const Elem r = resultant(a, b);
        REQUIRE(r == sylvester_resultant(a, b));
        const bool odd = (*a.degree() * *b.degree()) % 2 == 1;
        const Elem swapped = resultant(b, a);
        REQUIRE(swapped == (odd ? F->neg(r) : r));
        REQUIRE((r == F->zero()) == !gcd(a, b).is_constant());
      }
    }
  }
}

TEST_CASE("resultant and discriminant examples") {
  auto F = Field::make(3, 1);
  CHECK(resultant(parse_poly(*F, "T+1"), Poly::T(*F)) == Elem{2});
  const Poly g = parse_poly(*F, "2*T^2+T+1");
  CHECK(resultant(g, Poly::constant(*F, Elem{2})) == F->pow(Elem{2}, 2));
  CHECK_THROWS_AS(resultant(g, Poly(*F)), DomainError);
  const Poly f1 = parse_poly(*F, "T^2+1"), f2 = parse_poly(*F, "T+2");
  CHECK(resultant(f1 * f2, g) == F->mul(resultant(f1, g), resultant(f2, g)));

  CHECK(discriminant(parse_poly(*F, "T^2+1")) == Elem{2});
  CHECK(discriminant(parse_poly(*F, "T^2+T")) == Elem{1});
  CHECK(discriminant(parse_poly(*F, "T^2+2*T+1")) == Elem{0});
  CHECK(discriminant(parse_poly(*F, "T^3+1")) == Elem{0});
  CHECK_THROWS_AS(discriminant(Poly::one(*F)), DomainError);
  // b^2 - 4ac for every quadratic over GF(5), including non-monic ones.
  auto F5 = Field::make(5, 1);
  for (auto f : polys_below(*F5, 3)) {
    if (f.degree() != 2u) continue;
    const Elem a = f.coeff(2), b = f.coeff(1), c = f.coeff(0);
    const Elem expected = F5->sub(F5->mul(b, b), F5->mul(F5->from_int(4), F5->mul(a, c)));
    REQUIRE(discriminant(f) == expected);
  }
  // Cubic discriminant -4p^3 - 27q^2 for T^3 + pT + q over GF(7).
  auto F7 = Field::make(7, 1);
  for (std::uint32_t pc = 0; pc < 7; ++pc) {
    for (std::uint32_t qc = 0; qc < 7; ++qc) {
      const Poly f = Poly::from_codes(*F7, {qc, pc, 0, 1});
      const long long expected = -4LL * pc * pc * pc - 27LL * qc * qc;
      REQUIRE(discriminant(f) == F7->from_int(expected));
    }
  }
}

TEST_CASE("squarefree detection") {
  auto F = Field::make(3, 1);
  CHECK(is_squarefree(parse_poly(*F, "T^2+T")));
  CHECK(!is_squarefree(parse_poly(*F, "T^2")));
  CHECK(!is_squarefree(parse_poly(*F, "T^3+1")));
  CHECK(is_squarefree(Poly::constant(*F, Elem{2})));
  CHECK_THROWS_AS(is_squarefree(Poly(*F)), DomainError);
}

TEST_CASE("derivative, p-th powers and square roots") {
  auto F = Field::make(3, 2);
  for (auto s : polys_below(*F, 3)) {
    const Poly sp = frobenius_power(s);
    CHECK(sp == pow(s, 3));
    CHECK(derivative(sp).is_zero());
    CHECK(pth_root(sp) == s);
  }
  CHECK_THROWS_AS(pth_root(Poly::T(*F)), DomainError);
  for (auto a : monics(*F, 2)) {
    for (auto b : monics(*F, 1)) {
      CHECK(derivative(a * b) == derivative(a) * b + a * derivative(b));
      auto r = monic_sqrt(pow(a * b, 2));
      REQUIRE(r);
      CHECK(*r == a * b);
    }
    CHECK(!monic_sqrt(a * Poly::T(*F)));
  }
  CHECK(monic_sqrt(Poly::one(*F))->is_one());
  CHECK(!monic_sqrt(parse_poly(*F, "T^2+1")));
  CHECK(!monic_sqrt(parse_poly(*F, "2*T^2")));
}

TEST_CASE("powmod and evaluation") {
  auto F = Field::make(5, 1);
  const Poly m = parse_poly(*F, "T^3+T+1");
  const Poly f = parse_poly(*F, "2*T^2+3");
  CHECK(powmod(f, 7, m) == pow(f, 7) % m);
  CHECK(powmod(f, 0, m).is_one());
  CHECK(f(Elem{2}) == Elem{1});
  CHECK(mulmod(f, f, m) == (f * f) % m);
}
