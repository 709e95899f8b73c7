#pragma once

#include <gmpxx.h>

#include <cstdint>
#include <string>

#include "ffmobius/factor.hpp"
#include "ffmobius/poly.hpp"

namespace ffm {

/// mu(f) = (-1)^{d(f)} psi(Disc f) for monic f, without factoring. Odd p only.
int mobius_pellet(const Poly& f);
/// mu(f) from the factorization of a monic f.
int mobius_oracle(const Poly& f);
/// Default Mobius path (discriminant based in odd characteristic, factoring in characteristic 2).
int mobius(const Poly& f);

/// deg P if f = P^n for a monic prime P, else 0. f monic.
unsigned von_mangoldt(const Poly& f);
/// Same value through the factorization.
unsigned von_mangoldt_oracle(const Poly& f);

/// |(F_q[T]/M)^x| for M != 0.
std::uint64_t euler_phi(const Poly& M);
std::uint64_t euler_phi(const Factorization& fac, std::uint64_t q);
/// Number of distinct monic primes dividing f.
unsigned omega(const Poly& f);
/// Number of monic divisors.
std::uint64_t divisor_count(const Poly& f);

/// Jacobi symbol (f/g) as psi(lc g)^{max(d(f),0)} psi(Res(g, f)). g nonconstant, odd q.
int jacobi(const Poly& f, const Poly& g);
/// Jacobi symbol as the product of Euler-criterion values over the prime factorization of g.
int jacobi_oracle(const Poly& f, const Poly& g);
/// Euler criterion in F_q[T]/P for a monic prime P: psi(N(f mod P)).
int legendre(const Poly& f, const Poly& P);

/// r with d(r) < d(M) and f r = 1 mod M. Throws DomainError unless gcd(f, M) = 1 and M nonconstant.
Poly inverse_mod(const Poly& f, const Poly& M);

enum class SeriesMethod { EulerProduct, CoefficientSum };

struct SingularSeriesApprox {
  mpq_class value;
  unsigned truncation;
  SeriesMethod method;
};

/// Truncated singular series of a != 0 at degree N >= 1.
///
/// EulerProduct: prod (1 - |P|^{-1})^{-1} over P | a and prod (1 - (|P|-1)^{-2})
/// over P not dividing a, both restricted to d(P) <= N.
/// CoefficientSum: -sum_{k<=N} k sum_{M in M_k, (M,a)=1} mu(M)/phi(M), computed from
/// the generating function prod_{P not dividing a} (1 - u^{d(P)}/(|P|-1)).
SingularSeriesApprox singular_series(const Poly& a, unsigned N, SeriesMethod method);

/// Coefficients c_0..c_N of prod_{P not dividing a} (1 - u^{d(P)}/(|P|-1)), i.e.
/// c_k = sum_{M in M_k, (M,a)=1} mu(M)/phi(M).
std::vector<mpq_class> mu_over_phi_coefficients(const Poly& a, unsigned N);

std::string series_method_name(SeriesMethod m);

/// Fixed-point rendering with `digits` digits after the point, rounded half up.
std::string format_decimal(const mpq_class& x, int digits = 17);

}  // namespace ffm
