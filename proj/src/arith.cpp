#include "ffmobius/arith.hpp"

#include <algorithm>
#include <map>

namespace ffm {

namespace {

void require_odd(const Field& F, const char* what) {
  if (F.p() == 2) throw Unsupported(std::string(what) + " requires odd characteristic");
}

void require_monic(const Poly& f, const char* what) {
  if (!f.is_monic()) throw DomainError(std::string(what) + " expects a monic polynomial, got " + to_string(f));
}

}  // namespace

int mobius_pellet(const Poly& f) {
  require_odd(f.field(), "mobius_pellet");
  require_monic(f, "mobius_pellet");
  if (f.is_one()) return 1;
  const int sign = (*f.degree() % 2 == 0) ? 1 : -1;
  return sign * f.field().quad_char(discriminant(f));
}

int mobius_oracle(const Poly& f) {
  require_monic(f, "mobius_oracle");
  const auto fac = factor(f);
  for (const auto& x : fac.factors)
    if (x.multiplicity > 1) return 0;
  return fac.factors.size() % 2 == 0 ? 1 : -1;
}

int mobius(const Poly& f) { return f.field().p() == 2 ? mobius_oracle(f) : mobius_pellet(f); }

unsigned von_mangoldt(const Poly& f) {
  require_monic(f, "von_mangoldt");
  Poly g = f;
  for (;;) {
    if (g.is_one()) return 0;
    const Poly dg = derivative(g);
    if (dg.is_zero()) {
      g = pth_root(g);
      continue;
    }
    const Poly P = g / gcd(g, dg);
    if (!is_irreducible(P)) return 0;
    Poly rest = g;
    while (!rest.is_one()) {
      auto [quo, rem] = divrem(rest, P);
      if (!rem.is_zero()) return 0;
      rest = std::move(quo);
    }
    return *P.degree();
  }
}

unsigned von_mangoldt_oracle(const Poly& f) {
  require_monic(f, "von_mangoldt_oracle");
  const auto fac = factor(f);
  return fac.factors.size() == 1 ? *fac.factors[0].prime.degree() : 0;
}

std::uint64_t euler_phi(const Factorization& fac, std::uint64_t q) {
  std::uint64_t phi = 1;
  for (const auto& [P, e] : fac.factors) {
    const std::uint64_t norm = checked_pow(q, *P.degree());
    phi *= checked_pow(norm, e - 1) * (norm - 1);
  }
  return phi;
}

std::uint64_t euler_phi(const Poly& M) {
  if (M.is_zero()) throw DomainError("euler_phi of zero");
  return euler_phi(factor(M), M.field().q());
}

unsigned omega(const Poly& f) { return static_cast<unsigned>(factor(f).factors.size()); }

std::uint64_t divisor_count(const Poly& f) {
  std::uint64_t n = 1;
  for (const auto& x : factor(f).factors) n *= x.multiplicity + 1;
  return n;
}

int legendre(const Poly& f, const Poly& P) {
  const Field& F = f.field();
  require_odd(F, "legendre");
  const Poly r = f % P;
  if (r.is_zero()) return 0;
  // Norm from F_q[T]/P down to F_q: prod_{i<d} r^{q^i}.
  Poly t = r, norm = r;
  for (unsigned i = 1; i < *P.degree(); ++i) {
    t = powmod(t, F.q(), P);
    norm = mulmod(norm, t, P);
  }
  return F.quad_char(norm.coeff(0));
}

int jacobi(const Poly& f, const Poly& g) {
  const Field& F = g.field();
  require_odd(F, "jacobi");
  if (g.is_constant()) throw DomainError("jacobi symbol needs a nonconstant modulus");
  if (f.is_zero()) return 0;
  const int lc_part = (*f.degree() % 2 == 0) ? 1 : F.quad_char(g.lc());
  return lc_part * F.quad_char(resultant(g, f));
}

int jacobi_oracle(const Poly& f, const Poly& g) {
  require_odd(g.field(), "jacobi_oracle");
  if (g.is_constant()) throw DomainError("jacobi symbol needs a nonconstant modulus");
  int result = 1;
  for (const auto& [P, e] : factor(g).factors) {
    const int l = legendre(f, P);
    if (l == 0) return 0;
    if (e % 2 == 1) result *= l;
  }
  return result;
}

Poly inverse_mod(const Poly& f, const Poly& M) {
  if (M.is_constant()) throw DomainError("inverse_mod needs a nonconstant modulus");
  auto x = xgcd(f % M, M);
  if (!x.g.is_one())
    throw DomainError(to_string(f) + " is not invertible modulo " + to_string(M));
  return x.s % M;
}

namespace {

// Number of monic primes of each degree 1..N dividing a.
std::vector<std::uint64_t> divisor_prime_counts(const Poly& a, unsigned N) {
  std::vector<std::uint64_t> counts(N + 1, 0);
  if (a.is_constant()) return counts;
  for (const auto& x : factor(a).factors) {
    const unsigned d = *x.prime.degree();
    if (d <= N) ++counts[d];
  }
  return counts;
}

std::vector<std::pair<std::uint64_t, long long>> factor_u64(std::uint64_t n) {
  std::vector<std::pair<std::uint64_t, long long>> out;
  for (std::uint64_t p = 2; p * p <= n; p += (p == 2 ? 1 : 2)) {
    long long m = 0;
    while (n % p == 0) {
      n /= p;
      ++m;
    }
    if (m > 0) out.emplace_back(p, m);
  }
  if (n > 1) out.emplace_back(n, 1);
  return out;
}

mpz_class mpz_from_u64(std::uint64_t v) {
  mpz_class r;
  mpz_import(r.get_mpz_t(), 1, 1, sizeof(v), 0, 0, &v);
  return r;
}

}  // namespace

std::vector<mpq_class> mu_over_phi_coefficients(const Poly& a, unsigned N) {
  if (a.is_zero()) throw DomainError("singular series of zero");
  const std::uint64_t q = a.field().q();
  const auto dividing = divisor_prime_counts(a, N);
  std::vector<mpq_class> series(N + 1, mpq_class(0));
  series[0] = 1;
  for (unsigned n = 1; n <= N; ++n) {
    const std::uint64_t e = count_irreducibles(q, n) - dividing[n];
    const mpz_class norm = mpz_from_u64(checked_pow(q, n));
    const mpq_class x(mpz_class(1), norm - 1);
    // (1 - x u^n)^e = sum_j C(e, j) (-x)^j u^{nj}
    std::vector<mpq_class> factor_series(N + 1, mpq_class(0));
    mpq_class xpow = 1;
    for (unsigned j = 0; j * n <= N; ++j) {
      mpz_class binom;
      mpz_bin_ui(binom.get_mpz_t(), mpz_from_u64(e).get_mpz_t(), j);
      factor_series[j * n] = (j % 2 == 0 ? 1 : -1) * mpq_class(binom) * xpow;
      xpow *= x;
    }
    std::vector<mpq_class> next(N + 1, mpq_class(0));
    for (unsigned i = 0; i <= N; ++i) {
      if (series[i] == 0) continue;
      for (unsigned j = 0; i + j <= N; j += n) next[i + j] += series[i] * factor_series[j];
    }
    series = std::move(next);
  }
  return series;
}

SingularSeriesApprox singular_series(const Poly& a, unsigned N, SeriesMethod method) {
  if (a.is_zero()) throw DomainError("singular series of zero");
  if (N == 0) throw DomainError("singular series truncation must be at least 1");
  const std::uint64_t q = a.field().q();
  SingularSeriesApprox out{mpq_class(0), N, method};
  if (method == SeriesMethod::CoefficientSum) {
    const auto c = mu_over_phi_coefficients(a, N);
    mpq_class total = 0;
    for (unsigned k = 1; k <= N; ++k) total -= k * c[k];
    out.value = total;
    return out;
  }
  const auto dividing = divisor_prime_counts(a, N);
  // Collect the value as a product of integer primes so that no big gcd is needed.
  std::map<std::uint64_t, long long> exponents;
  auto add = [&](std::uint64_t n, long long k) {
    if (k == 0) return;
    for (auto [prime, mult] : factor_u64(n)) exponents[prime] += k * mult;
  };
  for (unsigned n = 1; n <= N; ++n) {
    const std::uint64_t norm = checked_pow(q, n);
    const long long c = static_cast<long long>(dividing[n]);
    const long long e = static_cast<long long>(count_irreducibles(q, n) - dividing[n]);
    // (1 - |P|^{-1})^{-1} = |P| / (|P| - 1) and 1 - (|P|-1)^{-2} = |P| (|P| - 2) / (|P| - 1)^2
    add(norm, c + e);
    if (norm > 2) add(norm - 2, e);
    add(norm - 1, -c - 2 * e);
    if (norm == 2 && e > 0) {
      out.value = 0;
      return out;
    }
  }
  mpz_class num = 1, den = 1, t;
  for (auto [prime, k] : exponents) {
    if (k == 0) continue;
    const mpz_class base = mpz_from_u64(prime);
    mpz_pow_ui(t.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>(k > 0 ? k : -k));
    (k > 0 ? num : den) *= t;
  }
  out.value = mpq_class(num, den);
  return out;
}

std::string series_method_name(SeriesMethod m) {
  return m == SeriesMethod::EulerProduct ? "euler-product" : "coefficient-sum";
}

std::string format_decimal(const mpq_class& x, int digits) {
  mpz_class scale;
  mpz_ui_pow_ui(scale.get_mpz_t(), 10, static_cast<unsigned long>(digits));
  const mpz_class num = abs(x.get_num()) * scale;
  mpz_class scaled;
  // Round half up on the absolute value.
  mpz_class twice = 2 * num + x.get_den();
  mpz_fdiv_q(scaled.get_mpz_t(), twice.get_mpz_t(), mpz_class(2 * x.get_den()).get_mpz_t());
  std::string s = scaled.get_str();
  if (s.size() <= static_cast<std::size_t>(digits)) s.insert(0, digits + 1 - s.size(), '0');
  const std::size_t point = s.size() - digits;
  std::string out = (sgn(x) < 0 && scaled != 0 ? "-" : "") + s.substr(0, point);
  if (digits > 0) out += "." + s.substr(point);
  return out;
}

}  // namespace ffm
