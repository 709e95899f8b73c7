#include <random>
#include <set>

#include "doctest.h"
#include "ffmobius/arith.hpp"
#include "ffmobius/decomposition.hpp"
#include "ffmobius/factor.hpp"

using namespace ffm;

namespace {

void check_invariants(const DecompositionData& data) {
  REQUIRE(gcd(data.M, data.E).is_one());
  REQUIRE(divides(data.E1, data.E));
  REQUIRE((data.S.has_value() || data.degenerate));
  REQUIRE((data.S == 0) == data.D.is_zero());
  if (data.E.is_one()) return;
  REQUIRE(is_squarefree(data.E));
  const auto chi = data.character();
  REQUIRE(chi);
  REQUIRE(chi->conductor() == data.E1);
  for (auto f : polys_below(data.a.field(), 3)) REQUIRE(chi->exact(f) == data.chi(f));
}

}  // namespace

TEST_CASE("derivative classes partition the monic polynomials") {
  for (auto q : {"3", "5", "3^2"}) {
    auto F = Field::from_spec(q);
    for (unsigned d = 1; d <= (F->q() == 9 ? 3u : 4u); ++d) {
      std::uint64_t total = 0;
      std::set<Poly> seen;
      for (const auto& r : DerivativeClass::all_derivatives(*F, d)) {
        const DerivativeClass cls(*F, r, d);
        CHECK(cls.size() == checked_pow(F->q(), (d - 1) / F->p() + 1));
        for (std::uint64_t i = 0; i < cls.size(); ++i) {
          const Poly g = cls.at(i);
          REQUIRE(g.is_monic());
          REQUIRE(g.degree() == d);
          REQUIRE(derivative(g) == r);
          seen.insert(g);
        }
        total += cls.size();
      }
      CHECK(total == checked_pow(F->q(), d));
      CHECK(seen.size() == total);
    }
  }
  auto F = Field::make(3, 1);
  CHECK_THROWS_AS(DerivativeClass(*F, parse_poly(*F, "T^3"), 3), DomainError);
  CHECK(DerivativeClass(*F, Poly::T(*F), 3).representative() == parse_poly(*F, "T^3+2*T^2"));
  CHECK_THROWS_AS(DerivativeClass(*F, parse_poly(*F, "T^2"), 3), DomainError);
  CHECK_THROWS_AS(DerivativeClass(*F, Poly::one(*F), 2), DomainError);
  CHECK(DerivativeClass(*F, parse_poly(*F, "2*T"), 2).size() == 3);
}

TEST_CASE("decomposition of mu(T^4 + g) over GF(3)") {
  auto F = Field::make(3, 1);
  const Poly a = parse_poly(*F, "T^4");
  const auto data = decompose(a, Poly::one(*F), Poly(*F), 3);
  CHECK(data.D == parse_poly(*F, "T^3"));
  CHECK(data.E == Poly::T(*F));
  CHECK(data.E1 == Poly::T(*F));
  CHECK(data.w.is_zero());
  REQUIRE(data.S);
  CHECK(data.class_size == 3);
  for (std::uint32_t c = 0; c < 3; ++c) {
    const Poly g = Poly::from_codes(*F, {c, 0, 0, 1});
    CHECK(data.chi(g) == F->quad_char(Elem{c}));
    CHECK(mobius_oracle(a + g) == *data.S * F->quad_char(Elem{c}));
  }
  const auto rep = verify_decomposition(data);
  CHECK(rep.checks == 3);
  CHECK(rep.counterexamples == 0);
  CHECK(rep.ratios.size() == 1);
  check_invariants(data);
  const auto pc = principal_implies_square(data);
  CHECK(!pc.is_principal);
}

TEST_CASE("D = 0 forces S = 0 and mu = 0 on the class") {
  auto F = Field::make(3, 1);
  const auto data = decompose(parse_poly(*F, "T^3"), Poly::one(*F), Poly(*F), 6);
  CHECK(data.D.is_zero());
  CHECK(data.S == 0);
  const auto rep = verify_decomposition(data);
  CHECK(rep.checks == 9);
  CHECK(rep.counterexamples == 0);
  CHECK_THROWS_AS(principal_implies_square(data), DomainError);
}

TEST_CASE("decomposition input validation") {
  auto F = Field::make(3, 1);
  const Poly T = Poly::T(*F);
  CHECK_THROWS_AS(decompose(T, T, Poly(*F), 3), DomainError);
  CHECK_THROWS_AS(decompose(parse_poly(*F, "T^4+1"), T, Poly(*F), 3), DomainError);
  CHECK_THROWS_AS(decompose(parse_poly(*F, "2*T+1"), Poly::one(*F), Poly(*F), 3), DomainError);
  CHECK_THROWS_AS(decompose(T, Poly::one(*F), parse_poly(*F, "T^2"), 3), DomainError);
  CHECK_THROWS_AS(decompose(T, Poly::one(*F), Poly(*F), 0), DomainError);
  auto F2 = Field::make(2, 2);
  CHECK_THROWS_AS(decompose(Poly::T(*F2), Poly::one(*F2), Poly(*F2), 2), DomainError);
}

TEST_CASE("exhaustive decomposition sweeps") {
  struct Case {
    const char* q;
    unsigned max_m, max_k, d;
  };
  for (auto [q, max_m, max_k, d] : {Case{"3", 1, 3, 3}, Case{"3", 1, 2, 4}, Case{"5", 1, 2, 2}, Case{"5", 0, 2, 3}}) {
    auto F = Field::from_spec(q);
    CAPTURE(q);
    CAPTURE(d);
    std::uint64_t classes = 0;
    for (unsigned m = 0; m <= max_m; ++m)
      for (auto M : monics(*F, m))
        for (unsigned k = 0; k <= max_k; ++k)
          for (auto a : monics(*F, k)) {
            if (!gcd(a, M).is_one() || k == d + m) continue;
            for (const auto& r : DerivativeClass::all_derivatives(*F, d)) {
              const auto data = decompose(a, M, r, d);
              check_invariants(data);
              const auto rep = verify_decomposition(data);
              REQUIRE(rep.counterexamples == 0);
              REQUIRE(rep.ratios.size() <= 1);
              ++classes;
            }
          }
    CHECK(classes > 0);
  }
}

TEST_CASE("random decompositions over GF(9)") {
  auto F = Field::make(3, 2);
  std::mt19937_64 rng(7);
  auto random_monic = [&](unsigned deg) {
    return monics(*F, deg).at(rng() % checked_pow(F->q(), deg));
  };
  int done = 0;
  while (done < 40) {
    const unsigned m = rng() % 3, k = rng() % 4, d = 1 + rng() % 4;
    const Poly M = random_monic(m), a = random_monic(k);
    if (!gcd(a, M).is_one() || k == d + m) continue;
    const auto ders = DerivativeClass::all_derivatives(*F, d);
    const Poly r = ders[rng() % ders.size()];
    const auto data = decompose(a, M, r, d);
    check_invariants(data);
    REQUIRE(verify_decomposition(data).counterexamples == 0);
    ++done;
  }
}

TEST_CASE("square witnesses") {
  auto F = Field::make(3, 1);
  std::mt19937_64 rng(11);
  const Poly M = parse_poly(*F, "T^3+2*T");  // T(T+1)(T+2)
  const auto divisors = monic_divisors(M);
  for (int trial = 0; trial < 50; ++trial) {
    const Poly A = divisors[rng() % divisors.size()];
    const unsigned degB = rng() % 3;
    const Poly Bv = monics(*F, degB).at(rng() % checked_pow(3, degB));
    const Elem lambda{static_cast<std::uint32_t>(1 + rng() % 2)};
    const Poly D = A * Bv * Bv * lambda;
    const auto w = square_witness(D, M);
    REQUIRE(w);
    CHECK(w->A * w->B * w->B * w->lambda == D);
    CHECK(divides(w->A, M));
    CHECK(w->lambda == lambda);
  }
  CHECK(!square_witness(parse_poly(*F, "T^2+1"), M));
  const auto unit_square = square_witness(parse_poly(*F, "2*T^2+T+2"), Poly::one(*F));  // 2 (T+2)^2
  REQUIRE(unit_square);
  CHECK(unit_square->A.is_one());
  CHECK_THROWS_AS(square_witness(Poly(*F), M), DomainError);

  // Principal classes found by the decomposition carry a witness.
  int principal = 0;
  for (auto a : monics(*F, 2))
    for (const auto& r : DerivativeClass::all_derivatives(*F, 5)) {
      const auto data = decompose(a, Poly::one(*F), r, 5);
      if (data.D.is_zero()) continue;
      const auto pc = principal_implies_square(data);
      if (!pc.is_principal) continue;
      REQUIRE(pc.witness);
      CHECK(pc.witness->A.is_one());
      ++principal;
    }
  CHECK(principal > 0);
}
