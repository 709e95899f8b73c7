#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "ffmobius/poly.hpp"

namespace ffm {

inline constexpr std::uint64_t kDefaultSeed = 0x5eed;

struct Factor {
  Poly prime;  // monic irreducible
  unsigned multiplicity;
};

/// leading * prod prime^multiplicity, primes sorted by canonical order.
struct Factorization {
  Elem leading;
  std::vector<Factor> factors;

  Poly expand(const Field& F) const;
};

/// Squarefree decomposition, distinct-degree and equal-degree splitting.
/// The equal-degree step draws from a generator seeded by `seed` and `f`, so
/// the result is reproducible. Throws DomainError for f = 0.
Factorization factor(const Poly& f, std::uint64_t seed = kDefaultSeed);

/// Rabin-style test: f nonconstant shares no factor with T^{q^j} - T for j <= d(f)/2.
bool is_irreducible(const Poly& f);

/// Product of the distinct monic primes dividing f.
Poly rad(const Poly& f);
/// Product of the monic primes dividing f to an odd power.
Poly rad1(const Poly& f);

/// All monic divisors of f in canonical order.
std::vector<Poly> monic_divisors(const Poly& f);
std::vector<Poly> monic_divisors(const Factorization& fac, const Field& F);

/// Number of monic irreducibles of degree n >= 1 over GF(q).
std::uint64_t count_irreducibles(std::uint64_t q, unsigned n);

/// Integer Mobius function.
int mobius_int(std::uint64_t n);

}  // namespace ffm
