#include <cstdlib>
#include <vector>

#include "doctest.h"
#include "ffmobius/field.hpp"

using namespace ffm;

namespace {

// Schoolbook product of two elements as digit vectors, reduced by the modulus.
std::vector<std::uint32_t> slow_mul(const Field& F, const std::vector<std::uint32_t>& a,
                                    const std::vector<std::uint32_t>& b) {
  const std::uint32_t p = F.p();
  const unsigned k = F.k();
  std::vector<std::uint64_t> prod(2 * k, 0);
  for (unsigned i = 0; i < k; ++i)
    for (unsigned j = 0; j < k; ++j) prod[i + j] = (prod[i + j] + std::uint64_t{a[i]} * b[j]) % p;
  const auto& m = F.modulus();
  for (unsigned top = 2 * k - 1; top >= k; --top) {
    const std::uint64_t c = prod[top];
    if (c == 0) continue;
    for (unsigned i = 0; i <= k; ++i) prod[top - k + i] = (prod[top - k + i] + (p - c) * m[i]) % p;
  }
  return {prod.begin(), prod.begin() + k};
}

}  // namespace

TEST_CASE("prime field GF(3)") {
  auto F = Field::make(3, 1);
  CHECK(F->q() == 3);
  CHECK(F->generator() == Elem{2});
  CHECK(F->quad_char(Elem{1}) == 1);
  CHECK(F->quad_char(Elem{2}) == -1);
  CHECK(F->quad_char(Elem{0}) == 0);
  CHECK(F->dlog(Elem{2}) == 1);
  CHECK(F->dlog(Elem{1}) == 0);
  CHECK(F->mul(Elem{2}, Elem{2}) == Elem{1});
  CHECK_THROWS_AS(F->dlog(Elem{0}), DomainError);
  CHECK_THROWS_AS(F->inv(Elem{0}), DivisionByZero);
}

TEST_CASE("construction errors") {
  CHECK_THROWS_AS(Field::make(4, 1), DomainError);
  CHECK_THROWS_AS(Field::make(9, 1), DomainError);
  const std::vector<std::uint32_t> reducible{2, 0, 1};  // T^2 + 2 = (T+1)(T+2) over GF(3)
  CHECK_THROWS_AS(Field::make(3, 2, reducible), DomainError);
  const std::vector<std::uint32_t> wrong_degree{1, 1};
  CHECK_THROWS_AS(Field::make(3, 2, wrong_degree), DomainError);
  CHECK_THROWS_AS(Field::make(3, 13, {}, 1 << 20), ResourceLimit);
  CHECK_THROWS_AS(Field::make(3, 3, {}, 20), ResourceLimit);
  CHECK_THROWS_AS(Field::from_spec("3^x"), DomainError);
}

TEST_CASE("default GF(9) modulus is the first irreducible monic quadratic") {
  auto F = Field::make(3, 2);
  // Monic quadratics c0 + c1 T + T^2 in encoding order: the first one without a root in GF(3).
  std::vector<std::uint32_t> expected;
  for (std::uint32_t idx = 0; idx < 9 && expected.empty(); ++idx) {
    const std::uint32_t c0 = idx % 3, c1 = idx / 3;
    bool has_root = false;
    for (std::uint32_t x = 0; x < 3; ++x) has_root |= (x * x + c1 * x + c0) % 3 == 0;
    if (!has_root) expected = {c0, c1, 1};
  }
  CHECK(F->modulus() == expected);
  CHECK(F->name() == "GF(3^2)");
}

TEST_CASE("spec parsing") {
  CHECK(Field::from_spec("3^2")->q() == 9);
  CHECK(Field::from_spec("7")->q() == 7);
  CHECK(Field::from_spec("2^3")->q() == 8);
  CHECK(Field::from_spec("9")->k() == 2);
  CHECK(Field::parse_size("125") == std::pair<std::uint32_t, unsigned>{5, 3});
  CHECK_THROWS_AS(Field::parse_size("12"), DomainError);
  CHECK_THROWS_AS(Field::parse_size("1"), DomainError);
}

TEST_CASE("table cap from the environment") {
  setenv("FFMOBIUS_TABLE_CAP", "100", 1);
  CHECK(default_table_cap() == 100);
  CHECK_THROWS_AS(Field::make(11, 2), ResourceLimit);
  unsetenv("FFMOBIUS_TABLE_CAP");
  CHECK(default_table_cap() == (1u << 20));
}

TEST_CASE("field axioms against schoolbook arithmetic") {
  for (auto [p, k] : {std::pair{3u, 1u}, {5u, 1u}, {3u, 2u}, {5u, 2u}, {3u, 3u}, {2u, 4u}, {7u, 2u}, {3u, 7u}}) {
    auto F = Field::make(p, k);
    CAPTURE(F->name());
    const std::uint32_t q = F->q();
    // Generator order is exactly q-1.
    Elem x = F->one();
    for (std::uint32_t e = 1; e < q - 1; ++e) {
      x = F->mul(x, F->generator());
      REQUIRE(x != F->one());
    }
    CHECK(F->mul(x, F->generator()) == F->one());

    const std::uint32_t step = q > 100 ? 37 : 1;
    for (std::uint32_t a = 0; a < q; a += step) {
      const Elem ea{a};
      CHECK(F->from_digits(F->digits(ea)) == ea);
      if (a != 0) {
        CHECK(F->mul(ea, F->inv(ea)) == F->one());
        CHECK(F->exp(F->dlog(ea)) == ea);
      }
      Elem fr = ea;
      for (unsigned i = 0; i < k; ++i) fr = F->frobenius(fr);
      CHECK(fr == ea);
      CHECK(F->frobenius_inv(F->frobenius(ea)) == ea);
      for (std::uint32_t b = 0; b < q; b += step) {
        const Elem eb{b};
        const auto da = F->digits(ea), db = F->digits(eb);
        std::vector<std::uint32_t> sum(k);
        for (unsigned i = 0; i < k; ++i) sum[i] = (da[i] + db[i]) % p;
        REQUIRE(F->add(ea, eb) == F->from_digits(sum));
        REQUIRE(F->mul(ea, eb) == F->from_digits(slow_mul(*F, da, db)));
        CHECK(F->frobenius(F->add(ea, eb)) == F->add(F->frobenius(ea), F->frobenius(eb)));
        CHECK(F->frobenius(F->mul(ea, eb)) == F->mul(F->frobenius(ea), F->frobenius(eb)));
        if (p != 2) CHECK(F->quad_char(F->mul(ea, eb)) == F->quad_char(ea) * F->quad_char(eb));
      }
    }
  }
}

TEST_CASE("quadratic character matches Euler criterion and squares") {
  for (auto [p, k] : {std::pair{3u, 1u}, {5u, 1u}, {7u, 1u}, {3u, 2u}, {5u, 2u}, {3u, 3u}}) {
    auto F = Field::make(p, k);
    const std::uint32_t q = F->q();
    std::vector<bool> is_square(q, false);
    for (std::uint32_t y = 1; y < q; ++y) is_square[F->mul(Elem{y}, Elem{y}).code] = true;
    int total = 0, plus = 0;
    for (std::uint32_t x = 1; x < q; ++x) {
      const int chi = F->quad_char(Elem{x});
      CHECK(chi == (is_square[x] ? 1 : -1));
      const Elem euler = F->pow(Elem{x}, (q - 1) / 2);
      CHECK(euler == (chi == 1 ? F->one() : F->neg(F->one())));
      total += chi;
      plus += chi == 1;
    }
    CHECK(total == 0);
    CHECK(plus == static_cast<int>((q - 1) / 2));
  }
  CHECK_THROWS_AS(Field::make(2, 3)->quad_char(Elem{1}), Unsupported);
}

TEST_CASE("trace is additive, Frobenius invariant and onto GF(p)") {
  auto F = Field::make(3, 3);
  std::vector<int> hits(3, 0);
  for (std::uint32_t a = 0; a < F->q(); ++a) {
    const Elem ea{a};
    CHECK(F->trace(F->frobenius(ea)) == F->trace(ea));
    CHECK(F->trace(F->add(ea, Elem{5})) == (F->trace(ea) + F->trace(Elem{5})) % 3);
    ++hits[F->trace(ea)];
  }
  CHECK(hits == std::vector<int>{9, 9, 9});
}
