#include "ffmobius/factor.hpp"

#include <algorithm>
#include <random>

namespace ffm {

namespace {

std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t poly_hash(const Poly& f) {
  std::uint64_t h = 0x243f6a8885a308d3ULL;
  for (Elem c : f.coeffs()) h = splitmix(h ^ c.code);
  return h;
}

// Monic squarefree parts with the multiplicity they carry in f (monic, nonconstant).
void squarefree_parts(const Poly& f, unsigned scale, std::vector<Factor>& out) {
  const Field& F = f.field();
  Poly c = gcd(f, derivative(f));
  Poly w = f / c;
  for (unsigned i = 1; !w.is_one(); ++i) {
    Poly y = gcd(w, c);
    Poly part = w / y;
    if (!part.is_one()) out.push_back({monic(part), i * scale});
    w = std::move(y);
    c = c / w;
  }
  if (!c.is_one()) squarefree_parts(monic(pth_root(c)), scale * F.p(), out);
}

// Splits a monic squarefree f into products of primes of equal degree.
std::vector<std::pair<Poly, unsigned>> distinct_degree(Poly f) {
  const Field& F = f.field();
  std::vector<std::pair<Poly, unsigned>> out;
  const Poly T = Poly::T(F);
  Poly h = T % f;
  for (unsigned i = 1; f.degree() >= 2 * i; ++i) {
    h = powmod(h, F.q(), f);
    Poly g = gcd(h - T, f);
    if (!g.is_one()) {
      f = f / g;
      h = h % f;
      out.emplace_back(std::move(g), i);
    }
  }
  if (!f.is_one()) {
    const unsigned d = *f.degree();
    out.emplace_back(std::move(f), d);
  }
  return out;
}

Poly random_below(const Field& F, unsigned n, std::mt19937_64& rng) {
  std::vector<Elem> c(n);
  std::uniform_int_distribution<std::uint32_t> dist(0, F.q() - 1);
  for (auto& x : c) x = Elem{dist(rng)};
  return Poly(F, std::move(c));
}

// Cantor-Zassenhaus on a monic squarefree product of primes of degree d.
void equal_degree(const Poly& f, unsigned d, std::mt19937_64& rng, std::vector<Poly>& out) {
  const Field& F = f.field();
  const unsigned n = *f.degree();
  if (n == d) {
    out.push_back(f);
    return;
  }
  for (;;) {
    const Poly a = random_below(F, n, rng);
    if (a.is_constant()) continue;
    Poly b(F);
    if (F.p() == 2) {
      // Absolute trace from GF(2^{kd}) to GF(2): sum of a^{2^i}, i < kd.
      Poly t = a, acc = a;
      for (unsigned i = 1; i < F.k() * d; ++i) {
        t = mulmod(t, t, f);
        acc += t;
      }
      b = acc;
    } else {
      // a^{(q^d - 1)/2} = N(a)^{(q-1)/2} with N(a) = prod_{i<d} a^{q^i}.
      Poly t = a % f, norm = t;
      for (unsigned i = 1; i < d; ++i) {
        t = powmod(t, F.q(), f);
        norm = mulmod(norm, t, f);
      }
      b = powmod(norm, (F.q() - 1) / 2, f) - Poly::one(F);
    }
    Poly g = gcd(b, f);
    if (g.is_one() || g == f || g.is_zero()) continue;
    equal_degree(g, d, rng, out);
    equal_degree(f / g, d, rng, out);
    return;
  }
}

}  // namespace

Poly Factorization::expand(const Field& F) const {
  Poly r = Poly::constant(F, leading);
  for (const auto& [p, e] : factors) r = r * pow(p, e);
  return r;
}

Factorization factor(const Poly& f, std::uint64_t seed) {
  if (f.is_zero()) throw DomainError("factor of zero");
  Factorization result{f.lc(), {}};
  if (f.is_constant()) return result;
  std::mt19937_64 rng(splitmix(seed) ^ poly_hash(f));
  std::vector<Factor> parts;
  squarefree_parts(monic(f), 1, parts);
  for (const auto& [part, mult] : parts) {
    for (auto& [block, d] : distinct_degree(part)) {
      std::vector<Poly> primes;
      equal_degree(block, d, rng, primes);
      for (auto& p : primes) result.factors.push_back({std::move(p), mult});
    }
  }
  std::sort(result.factors.begin(), result.factors.end(),
            [](const Factor& a, const Factor& b) { return a.prime < b.prime; });
  // Merge repeated primes defensively; the decomposition above yields each prime once.
  std::vector<Factor> merged;
  for (auto& fac : result.factors) {
    if (!merged.empty() && merged.back().prime == fac.prime) {
      merged.back().multiplicity += fac.multiplicity;
    } else {
      merged.push_back(std::move(fac));
    }
  }
  result.factors = std::move(merged);
  return result;
}

bool is_irreducible(const Poly& f) {
  if (f.is_constant()) return false;
  const Field& F = f.field();
  const Poly m = monic(f);
  const unsigned n = *m.degree();
  const Poly T = Poly::T(F);
  Poly h = T % m;
  for (unsigned j = 1; 2 * j <= n; ++j) {
    h = powmod(h, F.q(), m);
    if (!gcd(h - T, m).is_one()) return false;
  }
  return true;
}

Poly rad(const Poly& f) {
  Poly r = Poly::one(f.field());
  for (const auto& fac : factor(f).factors) r = r * fac.prime;
  return r;
}

Poly rad1(const Poly& f) {
  Poly r = Poly::one(f.field());
  for (const auto& fac : factor(f).factors)
    if (fac.multiplicity % 2 == 1) r = r * fac.prime;
  return r;
}

std::vector<Poly> monic_divisors(const Factorization& fac, const Field& F) {
  std::vector<Poly> divs{Poly::one(F)};
  for (const auto& [p, e] : fac.factors) {
    const std::size_t base = divs.size();
    Poly power = Poly::one(F);
    for (unsigned i = 1; i <= e; ++i) {
      power = power * p;
      for (std::size_t j = 0; j < base; ++j) divs.push_back(divs[j] * power);
    }
  }
  std::sort(divs.begin(), divs.end());
  return divs;
}

std::vector<Poly> monic_divisors(const Poly& f) { return monic_divisors(factor(f), f.field()); }

int mobius_int(std::uint64_t n) {
  int mu = 1;
  for (std::uint64_t p = 2; p * p <= n; ++p) {
    if (n % p != 0) continue;
    n /= p;
    if (n % p == 0) return 0;
    mu = -mu;
  }
  if (n > 1) mu = -mu;
  return mu;
}

std::uint64_t count_irreducibles(std::uint64_t q, unsigned n) {
  if (n == 0) throw DomainError("count_irreducibles needs n >= 1");
  // Signed accumulation: the positive terms dominate, so the total stays in range.
  __int128 total = 0;
  for (unsigned j = 1; j <= n; ++j) {
    if (n % j != 0) continue;
    total += static_cast<__int128>(mobius_int(j)) * checked_pow(q, n / j);
  }
  return static_cast<std::uint64_t>(total / n);
}

}  // namespace ffm
