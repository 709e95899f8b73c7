#include <map>
#include <vector>

#include "doctest.h"
#include "ffmobius/factor.hpp"

using namespace ffm;

namespace {

// Irreducibility by trial division by every monic polynomial of degree <= n/2.
bool irreducible_by_trial_division(const Poly& f) {
  if (f.is_constant()) return false;
  const unsigned n = *f.degree();
  for (unsigned d = 1; 2 * d <= n; ++d)
    for (auto g : monics(f.field(), d))
      if (divides(g, f)) return false;
  return true;
}

}  // namespace

TEST_CASE("factorization examples") {
  auto F = Field::make(3, 1);
  auto fac = factor(parse_poly(*F, "T^2+2"));
  REQUIRE(fac.factors.size() == 2);
  CHECK(fac.factors[0].prime == parse_poly(*F, "T+1"));
  CHECK(fac.factors[1].prime == parse_poly(*F, "T+2"));
  CHECK(fac.leading == F->one());

  auto prime = factor(parse_poly(*F, "T^2+1"));
  REQUIRE(prime.factors.size() == 1);
  CHECK(prime.factors[0].multiplicity == 1);

  auto cube = factor(parse_poly(*F, "T^3+1"));
  REQUIRE(cube.factors.size() == 1);
  CHECK(cube.factors[0].prime == parse_poly(*F, "T+1"));
  CHECK(cube.factors[0].multiplicity == 3);

  auto scaled = factor(parse_poly(*F, "2*T^2+2*T"));
  CHECK(scaled.leading == Elem{2});
  CHECK(scaled.factors.size() == 2);

  CHECK(factor(Poly::constant(*F, Elem{2})).factors.empty());
  CHECK_THROWS_AS(factor(Poly(*F)), DomainError);
}

TEST_CASE("T^9 - T is the product of the primes of degree 1 and 2 over GF(3)") {
  auto F = Field::make(3, 1);
  const Poly f = pow(Poly::T(*F), 9) - Poly::T(*F);
  Poly expected = Poly::one(*F);
  unsigned count = 0;
  for (unsigned d : {1u, 2u})
    for (auto g : monics(*F, d))
      if (irreducible_by_trial_division(g)) {
        expected = expected * g;
        ++count;
      }
  CHECK(expected == f);
  const auto fac = factor(f);
  CHECK(fac.factors.size() == count);
  for (const auto& x : fac.factors) CHECK(x.multiplicity == 1);
}

TEST_CASE("factorization invariants, exhaustive over small fields") {
  struct Case {
    const char* q;
    unsigned max_deg;
  };
  for (auto [q, max_deg] : {Case{"3", 6}, Case{"5", 4}, Case{"3^2", 3}, Case{"2^2", 4}, Case{"2", 8}}) {
    auto F = Field::from_spec(q);
    CAPTURE(q);
    for (unsigned d = 1; d <= max_deg; ++d) {
      for (auto f : monics(*F, d)) {
        const auto fac = factor(f);
        REQUIRE(fac.expand(*F) == f);
        bool multiple = false;
        for (std::size_t i = 0; i < fac.factors.size(); ++i) {
          const auto& x = fac.factors[i];
          REQUIRE(x.prime.is_monic());
          REQUIRE(irreducible_by_trial_division(x.prime));
          if (i > 0) REQUIRE(fac.factors[i - 1].prime < x.prime);
          multiple |= x.multiplicity > 1;
        }
        REQUIRE(is_squarefree(f) == !multiple);
        REQUIRE(is_irreducible(f) == irreducible_by_trial_division(f));
      }
    }
  }
}

TEST_CASE("factorization is reproducible and seed independent in value") {
  auto F = Field::make(3, 2);
  const Poly f = parse_poly(*F, "T^8+3*T^5+T+7");
  const auto a = factor(f, 1), b = factor(f, 99);
  REQUIRE(a.factors.size() == b.factors.size());
  for (std::size_t i = 0; i < a.factors.size(); ++i) CHECK(a.factors[i].prime == b.factors[i].prime);
}

TEST_CASE("necklace count of irreducibles") {
  for (auto q : {"3", "2^2", "5"}) {
    auto F = Field::from_spec(q);
    for (unsigned n = 1; n <= (F->q() == 5 ? 4u : 6u); ++n) {
      std::uint64_t brute = 0;
      for (auto f : monics(*F, n)) brute += is_irreducible(f);
      CHECK(count_irreducibles(F->q(), n) == brute);
    }
  }
  CHECK(count_irreducibles(9, 7) == (4782969 - 9) / 7);
  CHECK(mobius_int(1) == 1);
  CHECK(mobius_int(6) == 1);
  CHECK(mobius_int(12) == 0);
  CHECK(mobius_int(30) == -1);
}

TEST_CASE("radicals and divisors") {
  auto F = Field::make(3, 1);
  const Poly f = parse_poly(*F, "T^2") * parse_poly(*F, "T+1");
  CHECK(rad(f) == parse_poly(*F, "T^2+T"));
  CHECK(rad1(f) == parse_poly(*F, "T+1"));
  CHECK(rad(Poly::one(*F)).is_one());
  CHECK(rad1(Poly::one(*F)).is_one());
  for (auto g : monics(*F, 3)) CHECK(rad1(g * g).is_one());

  const auto divs = monic_divisors(f);
  CHECK(divs.size() == 6);
  std::vector<Poly> brute;
  for (unsigned d = 0; d <= 3; ++d)
    for (auto g : monics(*F, d))
      if (divides(g, f)) brute.push_back(g);
  CHECK(divs == brute);
}
