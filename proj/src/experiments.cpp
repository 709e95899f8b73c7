#include "ffmobius/experiments.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <numeric>
#include <random>
#include <set>

#include "ffmobius/arith.hpp"
#include "ffmobius/parallel.hpp"

namespace ffm {

namespace {

constexpr std::size_t kMaxExactDigits = 1000;

Report make_report(std::string name, const Field& F, std::uint64_t seed = 0) {
  Report r;
  r.experiment = std::move(name);
  r.p = F.p();
  r.k = F.k();
  r.modulus = F.modulus();
  r.seed = seed;
  return r;
}

std::string lit(const Poly& f) { return to_string(f); }

mpq_class power_q(std::uint64_t q, int e) {
  mpz_class base(static_cast<unsigned long>(q)), v;
  mpz_pow_ui(v.get_mpz_t(), base.get_mpz_t(), static_cast<unsigned long>(std::abs(e)));
  if (e >= 0) return mpq_class(v);
  return mpq_class(mpz_class(1), v);
}

double pow_q(std::uint64_t q, double e) { return std::pow(static_cast<double>(q), e); }

void require_monic(const Poly& f, const char* what) {
  if (!f.is_monic()) throw DomainError(std::string(what) + " must be monic, got " + lit(f));
}

void require_squarefree_monic(const Poly& M, const char* what) {
  require_monic(M, what);
  if (!is_squarefree(M)) throw DomainError(std::string(what) + " must be squarefree, got " + lit(M));
}

/// monic(a + gM); the Mobius and von Mangoldt values of a + gM are those of its monic associate.
Poly affine_value(const AffinePair& pair, const Poly& g) { return monic(pair.first + g * pair.second); }

void validate_pairs(unsigned d, const std::vector<AffinePair>& pairs) {
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    const auto& [a, M] = pairs[i];
    require_monic(M, "M");
    if (!a.is_zero() && *a.degree() == d + *M.degree())
      throw DomainError("d(a) = d + d(M) for the pair (" + lit(a) + ", " + lit(M) + ")");
    for (std::size_t j = 0; j < i; ++j) {
      const auto& [b, N] = pairs[j];
      if (a * N == b * M) throw DomainError("the fractions " + lit(a) + "/" + lit(M) + " repeat");
    }
  }
}

Json pairs_json(const std::vector<AffinePair>& pairs) {
  Json out = Json::array();
  for (const auto& [a, M] : pairs) out.push_back(Json{{"a", lit(a)}, {"M", lit(M)}});
  return out;
}

/// sum_{g in M_d} [Lambda(lead(g))] prod_i mu(pairs_i(g)).
std::int64_t affine_product_sum(const Field& F, unsigned d, const std::optional<AffinePair>& lead,
                                const std::vector<AffinePair>& pairs, unsigned threads) {
  return parallel_sum<std::int64_t>(checked_pow(F.q(), d), threads, [&](std::uint64_t i) -> std::int64_t {
    const Poly g = monic_from_index(F, d, i);
    std::int64_t v = 1;
    if (lead) {
      v = von_mangoldt(affine_value(*lead, g));
      if (v == 0) return 0;
    }
    for (const auto& pair : pairs) {
      v *= mobius(affine_value(pair, g));
      if (v == 0) return 0;
    }
    return v;
  });
}

/// The f in M_D with f = a mod M, as r + gM with g in M_{D - m}, or the single
/// residue itself when D < m.
template <class Term>
auto progression_sum(unsigned D, const Poly& M, const Poly& a, unsigned threads, Term term) {
  require_monic(M, "M");
  const Field& F = M.field();
  const unsigned m = *M.degree();
  const Poly r = m == 0 ? Poly(F) : a % M;
  using T = decltype(term(r));
  if (D < m) return (r.is_monic() && r.degree() == D) ? term(r) : T{};
  return parallel_sum<T>(checked_pow(F.q(), D - m), threads,
                         [&](std::uint64_t i) { return term(r + monic_from_index(F, D - m, i) * M); });
}

/// Squarefree divisors of f through its factorization: degree and Mobius sign
/// per support mask, plus the primes that occur at least squared.
struct SquarefreeDivisors {
  std::vector<unsigned> degree;
  std::vector<int> mu;
  std::uint32_t repeated = 0;  // mask of primes with multiplicity >= 2
};

SquarefreeDivisors squarefree_divisors(const Poly& f) {
  const auto fac = factor(f);
  if (fac.factors.size() > 20) throw ResourceLimit("too many prime factors for divisor enumeration");
  const std::size_t r = fac.factors.size();
  SquarefreeDivisors out;
  out.degree.assign(std::size_t{1} << r, 0);
  out.mu.assign(std::size_t{1} << r, 1);
  for (std::size_t i = 0; i < r; ++i)
    if (fac.factors[i].multiplicity >= 2) out.repeated |= 1u << i;
  for (std::uint32_t mask = 1; mask < out.degree.size(); ++mask) {
    const unsigned low = std::countr_zero(mask);
    const std::uint32_t rest = mask & (mask - 1);
    out.degree[mask] = out.degree[rest] + *fac.factors[low].prime.degree();
    out.mu[mask] = -out.mu[rest];
  }
  return out;
}

/// table[i][j] = sum of mu(g) mu(h) over gh | f with d(g) = i, d(h) = j.
std::vector<std::vector<std::int64_t>> vaughan_table(const Poly& f) {
  const auto divs = squarefree_divisors(f);
  const unsigned n = *f.degree();
  std::vector<std::vector<std::int64_t>> table(n + 1, std::vector<std::int64_t>(n + 1, 0));
  const auto count = static_cast<std::uint32_t>(divs.degree.size());
  for (std::uint32_t g = 0; g < count; ++g)
    for (std::uint32_t h = 0; h < count; ++h)
      if ((g & h & ~divs.repeated) == 0) table[divs.degree[g]][divs.degree[h]] += divs.mu[g] * divs.mu[h];
  return table;
}

bool vaughan_holds(const std::vector<std::vector<std::int64_t>>& table, int mu, unsigned alpha, unsigned beta) {
  std::int64_t low = 0, high = 0;
  for (unsigned i = 0; i < table.size(); ++i)
    for (unsigned j = 0; j < table.size(); ++j) {
      if (i <= alpha && j <= beta) low += table[i][j];
      if (i > alpha && j > beta) high += table[i][j];
    }
  return mu == -low + high;
}

bool convolution_holds(const Poly& f, const SquarefreeDivisors& divs) {
  std::int64_t rhs = 0;
  for (std::size_t mask = 0; mask < divs.degree.size(); ++mask)
    rhs -= static_cast<std::int64_t>(divs.degree[mask]) * divs.mu[mask];
  return static_cast<std::int64_t>(von_mangoldt(f)) == rhs;
}

std::vector<Poly> monic_primes(const Field& F, unsigned deg) {
  std::vector<Poly> out;
  for (auto P : monics(F, deg))
    if (is_irreducible(P)) out.push_back(P);
  return out;
}

std::vector<Poly> squarefree_moduli(const Field& F, unsigned lo, unsigned hi) {
  std::vector<Poly> out;
  for (unsigned m = lo; m <= hi; ++m)
    for (auto M : monics(F, m))
      if (is_squarefree(M)) out.push_back(M);
  return out;
}

/// GF(q^L) together with the image of every element of GF(q).
struct Extension {
  FieldPtr K;
  std::vector<Elem> image;

  Poly lift(const Poly& f) const {
    std::vector<Elem> c;
    for (Elem x : f.coeffs()) c.push_back(image[x.code]);
    return Poly(*K, std::move(c));
  }
};

Extension extension(const Field& F, unsigned L) {
  Extension ext{Field::make(F.p(), F.k() * L), {}};
  const Field& K = *ext.K;
  // A root in K of the modulus defining F.
  Elem beta = K.zero();
  bool found = F.k() == 1;
  for (std::uint32_t code = 0; code < K.q() && !found; ++code) {
    Elem acc = K.zero();
    const auto& mod = F.modulus();
    for (std::size_t i = mod.size(); i-- > 0;) acc = K.add(K.mul(acc, Elem{code}), K.from_int(mod[i]));
    if (acc == K.zero()) {
      beta = Elem{code};
      found = true;
    }
  }
  if (!found) throw Error("no embedding of " + F.name() + " into " + K.name());
  ext.image.resize(F.q());
  for (std::uint32_t code = 0; code < F.q(); ++code) {
    Elem acc = K.zero();
    const auto digits = F.digits(Elem{code});
    for (std::size_t i = digits.size(); i-- > 0;) acc = K.add(K.mul(acc, beta), K.from_int(digits[i]));
    ext.image[code] = acc;
  }
  return ext;
}

}  // namespace

std::uint64_t binomial(unsigned n, unsigned k) {
  if (k > n) return 0;
  std::uint64_t v = 1;
  for (unsigned i = 1; i <= k; ++i) v = v * (n - k + i) / i;
  return v;
}

double to_double(const mpq_class& x) { return x.get_d(); }

Json rational_json(const mpq_class& x) {
  Json out = Json::object();
  const std::size_t digits = mpz_sizeinbase(x.get_num_mpz_t(), 10) + mpz_sizeinbase(x.get_den_mpz_t(), 10);
  if (digits <= kMaxExactDigits) out["exact"] = x.get_str();
  out["decimal"] = format_decimal(x);
  return out;
}

Json complex_json(std::complex<double> z) {
  return Json{{"re", z.real()}, {"im", z.imag()}, {"abs", std::abs(z)}};
}

Json cyclo_json(const CycloSum& s) {
  Json out = complex_json(s.value());
  out["root_counts"] = s.counts;
  if (auto n = s.as_integer()) out["integer"] = *n;
  return out;
}

Json Report::to_json() const {
  Json out;
  out["experiment"] = experiment;
  out["field"] = Json{{"p", p}, {"k", k}, {"q", checked_pow(p, k)}, {"modulus", modulus}};
  out["params"] = params;
  out["value"] = value;
  out["reference"] = reference;
  out["ratio"] = ratio ? Json(*ratio) : Json(nullptr);
  out["ok"] = ok ? Json(*ok) : Json(nullptr);
  out["advisory"] = advisory;
  out["seed"] = seed;
  out["details"] = details;
  if (runtime_ms) out["runtime_ms"] = *runtime_ms;
  return out;
}

// ---------------------------------------------------------------------------
// Character sums

Report char_sum_check(const DirichletCharacter& chi, const Poly& f, unsigned t) {
  const Poly& g = chi.modulus();
  const Field& F = g.field();
  const unsigned m = *g.degree();
  if (chi.is_principal()) throw DomainError("char_sum_check needs a nontrivial character");
  if (t > m) throw DomainError("t = " + std::to_string(t) + " exceeds d(g) = " + std::to_string(m));
  std::complex<double> sum = 0;
  for (auto h : polys_below(F, t))
    if (auto ph = chi.phase(f + h)) sum += root_of_unity(*ph, chi.group().root_order());
  const double bound = (std::sqrt(static_cast<double>(F.q())) + 1) * static_cast<double>(binomial(m - 1, t)) *
                       pow_q(F.q(), t / 2.0);
  Report r = make_report("char_sum_check", F);
  r.params = Json{{"g", lit(g)}, {"character", chi.exponents()}, {"f", lit(f)}, {"t", t}};
  r.value = std::abs(sum);
  r.reference = bound;
  r.ratio = std::abs(sum) / bound;
  r.ok = std::abs(sum) <= bound + kComplexTolerance;
  r.details["sum"] = complex_json(sum);
  return r;
}

Report char_sum_sweep(const Field& F, unsigned max_deg, const RunOptions& opts) {
  const auto moduli = squarefree_moduli(F, 1, max_deg);
  struct Tally {
    std::uint64_t moduli = 0, characters = 0, checks = 0, violations = 0, full_interval_nonzero = 0;
    double max_ratio = 0;
    Json first_violation;
  };
  const double sqrt_q = std::sqrt(static_cast<double>(F.q()));
  const Tally tally = parallel_reduce(
      moduli.size(), opts.threads, Tally{},
      [&](std::uint64_t lo, std::uint64_t hi) {
        Tally acc;
        for (std::uint64_t gi = lo; gi < hi; ++gi) {
          const Poly& g = moduli[gi];
          const unsigned m = *g.degree();
          const auto group = CharacterGroup::make(g);
          const std::uint64_t L = group->root_order();
          const std::uint64_t size = checked_pow(F.q(), m);
          const std::size_t r = group->locals().size();
          // Scaled local logs of every residue, indexed by low_index.
          std::vector<std::uint64_t> scaled(size * r, 0);
          std::vector<char> unit(size, 0);
          for (std::uint64_t idx = 0; idx < size; ++idx) {
            const auto logs = group->logs(poly_from_index(F, idx));
            if (!logs) continue;
            unit[idx] = 1;
            for (std::size_t i = 0; i < r; ++i) scaled[idx * r + i] = (*logs)[i] * (L / group->locals()[i].order);
          }
          std::vector<std::complex<double>> roots(L);
          for (std::uint64_t k = 0; k < L; ++k) roots[k] = root_of_unity(k, L);
          std::vector<double> bounds(m + 1);
          for (unsigned t = 0; t <= m; ++t)
            bounds[t] = (sqrt_q + 1) * static_cast<double>(binomial(m - 1, t)) * pow_q(F.q(), t / 2.0);

          std::vector<std::complex<double>> values(size);
          for (std::uint64_t ci = 1; ci < group->size(); ++ci) {
            const auto chi = group->character(ci);
            const auto& e = chi.exponents();
            for (std::uint64_t idx = 0; idx < size; ++idx) {
              if (!unit[idx]) {
                values[idx] = 0;
                continue;
              }
              std::uint64_t ph = 0;
              for (std::size_t i = 0; i < r; ++i) ph = (ph + e[i] * scaled[idx * r + i]) % L;
              values[idx] = roots[ph];
            }
            ++acc.characters;
            for (unsigned t = 0; t <= m; ++t) {
              const std::uint64_t block = checked_pow(F.q(), t);
              for (std::uint64_t start = 0; start < size; start += block) {
                std::complex<double> s = 0;
                for (std::uint64_t idx = start; idx < start + block; ++idx) s += values[idx];
                const double v = std::abs(s);
                ++acc.checks;
                if (bounds[t] > 0) acc.max_ratio = std::max(acc.max_ratio, v / bounds[t]);
                if (t == m && v > kComplexTolerance) ++acc.full_interval_nonzero;
                if (v > bounds[t] + kComplexTolerance) {
                  if (acc.violations++ == 0)
                    acc.first_violation = Json{{"g", lit(g)}, {"character", e},
                                               {"f", lit(poly_from_index(F, start))}, {"t", t}, {"value", v}};
                }
              }
            }
          }
          ++acc.moduli;
        }
        return acc;
      },
      [](Tally a, Tally b) {
        if (a.violations == 0 && b.violations > 0) a.first_violation = b.first_violation;
        a.moduli += b.moduli;
        a.characters += b.characters;
        a.checks += b.checks;
        a.violations += b.violations;
        a.full_interval_nonzero += b.full_interval_nonzero;
        a.max_ratio = std::max(a.max_ratio, b.max_ratio);
        return a;
      },
      1);

  Report rep = make_report("char_sum_sweep", F, opts.seed);
  rep.params = Json{{"max_deg", max_deg}};
  rep.value = Json{{"violations", tally.violations}, {"full_interval_nonzero", tally.full_interval_nonzero}};
  rep.reference = "(sqrt(q)+1) C(m-1,t) q^(t/2)";
  rep.ratio = tally.max_ratio;
  rep.ok = tally.violations == 0 && tally.full_interval_nonzero == 0;
  rep.details = Json{{"moduli", tally.moduli},
                     {"characters", tally.characters},
                     {"coset_checks", tally.checks},
                     {"first_violation", tally.first_violation}};
  return rep;
}

Report rk_bound(const Poly& f, const Poly& g, unsigned t) {
  const Field& F = g.field();
  require_squarefree_monic(g, "g");
  const unsigned m = *g.degree();
  if (m == 0) throw DomainError("rk_bound needs d(g) >= 1");
  if (t > m) throw DomainError("t = " + std::to_string(t) + " exceeds d(g) = " + std::to_string(m));
  if (m > 20) throw ResourceLimit("rk_bound enumerates subsets of the roots of g; d(g) <= 20");

  unsigned L = 1;
  for (const auto& fa : factor(g).factors) L = std::lcm(L, *fa.prime.degree());
  const Extension ext = extension(F, L);
  const Field& K = *ext.K;
  const Poly gK = ext.lift(g), fK = ext.lift(f);
  std::vector<Poly> linear;
  for (const auto& fa : factor(gK).factors) linear.push_back(fa.prime);

  // h with d(h) < t and d(gcd(f + h, g)) > t is -f reduced modulo a divisor of
  // degree > t, so it suffices to run over those divisors.
  std::set<Poly> hs;
  for (std::uint32_t mask = 1; mask < (1u << m); ++mask) {
    if (static_cast<unsigned>(std::popcount(mask)) <= t) continue;
    Poly D = Poly::one(K);
    for (unsigned i = 0; i < m; ++i)
      if (mask >> i & 1u) D = D * linear[i];
    const Poly h = (-fK) % D;
    if (h.is_zero() || *h.degree() < t) hs.insert(h);
  }
  std::uint64_t r = 0;
  for (const auto& h : hs) {
    const unsigned e = *gcd(fK + h, gK).degree();
    r += binomial(e - 1, t);
  }
  const std::uint64_t bound = binomial(m - 1, t);
  Report rep = make_report("rk_bound", F);
  rep.params = Json{{"f", lit(f)}, {"g", lit(g)}, {"t", t}};
  rep.value = r;
  rep.reference = bound;
  rep.ratio = bound == 0 ? 0.0 : static_cast<double>(r) / static_cast<double>(bound);
  rep.ok = r <= bound;
  rep.details = Json{{"splitting_field", K.name()}, {"contributing_h", hs.size()}};
  return rep;
}

// ---------------------------------------------------------------------------
// Affine forms

Report chowla_sum(unsigned d, const std::vector<AffinePair>& pairs, const RunOptions& opts) {
  if (pairs.empty()) throw DomainError("chowla_sum needs at least one pair");
  validate_pairs(d, pairs);
  const Field& F = pairs.front().second.field();
  const std::int64_t v = affine_product_sum(F, d, std::nullopt, pairs, opts.threads);
  const std::uint64_t trivial = checked_pow(F.q(), d);
  Report rep = make_report("chowla_sum", F, opts.seed);
  rep.params = Json{{"d", d}, {"pairs", pairs_json(pairs)}};
  rep.value = v;
  rep.reference = trivial;
  rep.ratio = std::abs(static_cast<double>(v)) / static_cast<double>(trivial);
  return rep;
}

std::int64_t mobius_progression_sum(unsigned D, const Poly& M, const Poly& a, unsigned threads) {
  return progression_sum(D, M, a, threads, [](const Poly& f) -> std::int64_t { return mobius(f); });
}

std::uint64_t lambda_progression_sum(unsigned D, const Poly& M, const Poly& a, unsigned threads) {
  return progression_sum(D, M, a, threads, [](const Poly& f) -> std::uint64_t { return von_mangoldt(f); });
}

Report mobius_ap_sum(unsigned D, const Poly& M, const Poly& a, const RunOptions& opts) {
  require_monic(M, "M");
  if (!gcd(a, M).is_one()) throw DomainError("a and M must be coprime");
  const Field& F = M.field();
  const std::int64_t v = mobius_progression_sum(D, M, a, opts.threads);
  const mpq_class expected = power_q(F.q(), static_cast<int>(D)) / mpq_class(mpz_class(M.norm()));
  Report rep = make_report("mobius_ap_sum", F, opts.seed);
  rep.params = Json{{"D", D}, {"M", lit(M)}, {"a", lit(a)}};
  rep.value = v;
  rep.reference = rational_json(expected);
  rep.ratio = static_cast<double>(v) / to_double(expected);
  return rep;
}

Report lambda_ap_sum(unsigned D, const Poly& M, const Poly& a, const RunOptions& opts) {
  require_squarefree_monic(M, "M");
  if (!gcd(a, M).is_one()) throw DomainError("a and M must be coprime");
  const Field& F = M.field();
  const std::uint64_t v = lambda_progression_sum(D, M, a, opts.threads);
  const mpq_class main = power_q(F.q(), static_cast<int>(D)) / mpq_class(mpz_class(euler_phi(M)));
  const mpq_class error = mpq_class(mpz_class(v)) - main;
  Report rep = make_report("lambda_ap_sum", F, opts.seed);
  rep.params = Json{{"D", D}, {"M", lit(M)}, {"a", lit(a)}};
  rep.value = v;
  rep.reference = rational_json(main);
  rep.ratio = to_double(error / main);
  rep.details["error"] = rational_json(error);
  return rep;
}

Report mobius_prime_power_ap(unsigned D, const Poly& P, unsigned n, const RunOptions& opts) {
  require_monic(P, "P");
  if (!is_irreducible(P)) throw DomainError("P must be irreducible, got " + lit(P));
  if (n == 0) throw DomainError("mobius_prime_power_ap needs n >= 1");
  if (n * *P.degree() > D) throw DomainError("n d(P) exceeds D");
  const Field& F = P.field();
  const Poly M = pow(P, n);
  const std::int64_t v = mobius_progression_sum(D, M, Poly::one(F), opts.threads);
  const mpq_class scale = power_q(F.q(), static_cast<int>(D)) / mpq_class(mpz_class(M.norm()));
  Report rep = make_report("mobius_prime_power_ap", F, opts.seed);
  rep.params = Json{{"D", D}, {"P", lit(P)}, {"n", n}};
  rep.value = v;
  rep.reference = rational_json(scale);
  rep.ratio = static_cast<double>(v) / to_double(scale);
  return rep;
}

Report mobius_lambda_corr(unsigned d, const AffinePair& lead, const std::vector<AffinePair>& pairs,
                          const RunOptions& opts) {
  std::vector<AffinePair> all{lead};
  all.insert(all.end(), pairs.begin(), pairs.end());
  validate_pairs(d, all);
  if (!gcd(lead.first, lead.second).is_one()) throw DomainError("a and M must be coprime");
  const Field& F = lead.second.field();
  const std::int64_t v = affine_product_sum(F, d, lead, pairs, opts.threads);
  const std::uint64_t trivial = checked_pow(F.q(), d);
  Report rep = make_report("mobius_lambda_corr", F, opts.seed);
  rep.params = Json{{"d", d}, {"a", lit(lead.first)}, {"M", lit(lead.second)}, {"pairs", pairs_json(pairs)}};
  rep.value = v;
  rep.reference = trivial;
  rep.ratio = static_cast<double>(v) / static_cast<double>(trivial);
  return rep;
}

Report mobius_inv_additive(unsigned d, const Poly& M, const Poly& h, const RunOptions& opts) {
  require_squarefree_monic(M, "M");
  if (M.is_one()) throw DomainError("mobius_inv_additive needs d(M) >= 1");
  const Field& F = M.field();
  const AdditiveCharacter psi(M, h);
  const CycloSum s = parallel_reduce(
      checked_pow(F.q(), d), opts.threads, CycloSum(F.p()),
      [&](std::uint64_t lo, std::uint64_t hi) {
        CycloSum acc(F.p());
        for (std::uint64_t i = lo; i < hi; ++i) {
          const Poly g = monic_from_index(F, d, i);
          if (!gcd(g, M).is_one()) continue;
          const int mu = mobius(g);
          if (mu != 0) acc.add(psi.trace(inverse_mod(g, M)), mu);
        }
        return acc;
      },
      [](CycloSum a, const CycloSum& b) { return a += b; });
  const unsigned m = *M.degree();
  const double reference = pow_q(F.q(), 3.0 * m / 16.0 + 25.0 * d / 32.0);
  const double trivial = static_cast<double>(checked_pow(F.q(), d));
  const double mag = std::abs(s.value());
  Report rep = make_report("mobius_inv_additive", F, opts.seed);
  rep.params = Json{{"d", d}, {"M", lit(M)}, {"h", lit(h)}};
  rep.value = cyclo_json(s);
  rep.reference = reference;
  rep.ratio = mag / reference;
  rep.ok = mag <= trivial + kComplexTolerance;
  rep.details = Json{{"trivial_bound", trivial},
                     {"below_reference", mag <= reference + kComplexTolerance},
                     {"regime", d <= m ? "d <= d(M)" : "d > d(M)"}};
  return rep;
}

// ---------------------------------------------------------------------------
// Combinatorial identities

bool convolution_check(const Poly& f) {
  require_monic(f, "f");
  return convolution_holds(f, squarefree_divisors(f));
}

bool vaughan_check(const Poly& f, unsigned alpha, unsigned beta) {
  require_monic(f, "f");
  if (std::max(alpha, beta) >= *f.degree()) throw DomainError("Vaughan's identity needs max(alpha, beta) < d(f)");
  return vaughan_holds(vaughan_table(f), mobius(f), alpha, beta);
}

Report identity_sweep(const Field& F, unsigned max_deg, const RunOptions& opts) {
  struct Tally {
    std::uint64_t polys = 0, convolution_failures = 0, vaughan_checks = 0, vaughan_failures = 0;
  };
  Tally total;
  for (unsigned d = 0; d <= max_deg; ++d) {
    const Tally t = parallel_reduce(
        checked_pow(F.q(), d), opts.threads, Tally{},
        [&](std::uint64_t lo, std::uint64_t hi) {
          Tally acc;
          for (std::uint64_t i = lo; i < hi; ++i) {
            const Poly f = monic_from_index(F, d, i);
            ++acc.polys;
            if (!convolution_holds(f, squarefree_divisors(f))) ++acc.convolution_failures;
            if (d == 0) continue;
            const auto table = vaughan_table(f);
            const int mu = mobius(f);
            for (unsigned alpha = 0; alpha < d; ++alpha)
              for (unsigned beta = 0; beta < d; ++beta) {
                ++acc.vaughan_checks;
                if (!vaughan_holds(table, mu, alpha, beta)) ++acc.vaughan_failures;
              }
          }
          return acc;
        },
        [](Tally a, const Tally& b) {
          a.polys += b.polys;
          a.convolution_failures += b.convolution_failures;
          a.vaughan_checks += b.vaughan_checks;
          a.vaughan_failures += b.vaughan_failures;
          return a;
        });
    total.polys += t.polys;
    total.convolution_failures += t.convolution_failures;
    total.vaughan_checks += t.vaughan_checks;
    total.vaughan_failures += t.vaughan_failures;
  }
  Report rep = make_report("identity_sweep", F, opts.seed);
  rep.params = Json{{"max_deg", max_deg}};
  rep.value = Json{{"convolution_failures", total.convolution_failures},
                   {"vaughan_failures", total.vaughan_failures}};
  rep.reference = 0;
  rep.ok = total.convolution_failures == 0 && total.vaughan_failures == 0;
  rep.details = Json{{"polynomials", total.polys}, {"vaughan_checks", total.vaughan_checks}};
  return rep;
}

// ---------------------------------------------------------------------------
// Main terms and the singular series

namespace {

mpq_class partial_main_term(unsigned d, const Poly& M) {
  const Field& F = M.field();
  mpq_class s = 0;
  for (unsigned k = 1; k <= d; ++k) {
    std::int64_t c = 0;
    for (auto A : monics(F, k))
      if (gcd(A, M).is_one()) c += mobius(A);
    s += mpq_class(static_cast<long>(k) * c) * power_q(F.q(), -static_cast<int>(k));
  }
  return s;
}

}  // namespace

Report main_term_partial(unsigned d, const Poly& M) {
  require_squarefree_monic(M, "M");
  const Field& F = M.field();
  const mpq_class main =
      -power_q(F.q(), static_cast<int>(*M.degree())) / mpq_class(mpz_class(euler_phi(M)));
  const mpq_class value = partial_main_term(d, M);
  const mpq_class diff = value - main;
  const mpq_class diff2 = partial_main_term(d + 2, M) - main;
  Report rep = make_report("main_term_partial", F);
  rep.params = Json{{"d", d}, {"M", lit(M)}};
  rep.value = rational_json(value);
  rep.reference = rational_json(main);
  rep.ratio = to_double(abs(diff) * power_q(F.q(), static_cast<int>(d)));
  rep.ok = abs(diff2) <= abs(diff);
  rep.details = Json{{"difference", rational_json(diff)}, {"difference_at_d_plus_2", rational_json(diff2)}};
  return rep;
}

Report twin_count(unsigned d, const Poly& a, std::optional<unsigned> truncation, const RunOptions& opts) {
  const Field& F = a.field();
  if (a.is_zero()) throw DomainError("twin_count needs a != 0");
  if (*a.degree() >= d) throw DomainError("twin_count needs d(a) < d");
  const std::uint64_t n = checked_pow(F.q(), d);
  std::vector<std::uint8_t> lambda = parallel_reduce(
      n, opts.threads, std::vector<std::uint8_t>{},
      [&](std::uint64_t lo, std::uint64_t hi) {
        std::vector<std::uint8_t> part;
        part.reserve(hi - lo);
        for (std::uint64_t i = lo; i < hi; ++i) part.push_back(static_cast<std::uint8_t>(von_mangoldt(monic_from_index(F, d, i))));
        return part;
      },
      [](std::vector<std::uint8_t> acc, std::vector<std::uint8_t> part) {
        acc.insert(acc.end(), part.begin(), part.end());
        return acc;
      });
  struct Pair {
    std::uint64_t lambda_sum = 0, prime_pairs = 0;
    Pair& operator+=(const Pair& o) {
      lambda_sum += o.lambda_sum;
      prime_pairs += o.prime_pairs;
      return *this;
    }
  };
  const Pair pair = parallel_sum<Pair>(n, opts.threads, [&](std::uint64_t i) {
    Pair p;
    if (lambda[i] == 0) return p;
    const std::uint64_t j = low_index(monic_from_index(F, d, i) + a, d);
    p.lambda_sum = static_cast<std::uint64_t>(lambda[i]) * lambda[j];
    p.prime_pairs = lambda[i] == d && lambda[j] == d;
    return p;
  });
  const unsigned N = truncation.value_or(d);
  const auto series = singular_series(a, N, SeriesMethod::EulerProduct);
  const mpq_class reference = series.value * power_q(F.q(), static_cast<int>(d));
  Report rep = make_report("twin_count", F, opts.seed);
  rep.params = Json{{"d", d}, {"a", lit(a)}, {"truncation", N}};
  rep.value = pair.lambda_sum;
  rep.reference = rational_json(reference);
  rep.ratio = static_cast<double>(pair.lambda_sum) / to_double(reference);
  rep.details = Json{{"prime_pairs", pair.prime_pairs}, {"singular_series", rational_json(series.value)}};
  return rep;
}

Report singular_series_compare(const Poly& a, unsigned N) {
  const Field& F = a.field();
  const auto euler = singular_series(a, N, SeriesMethod::EulerProduct);
  const auto coeff = singular_series(a, N, SeriesMethod::CoefficientSum);
  const mpq_class gap = abs(euler.value - coeff.value);
  const mpq_class tolerance = 2 * power_q(F.q() - 1, -static_cast<int>(N));
  Report rep = make_report("singular_series", F);
  rep.params = Json{{"a", lit(a)}, {"truncation", N}};
  rep.value = rational_json(gap);
  rep.reference = rational_json(tolerance);
  rep.ratio = to_double(gap / tolerance);
  rep.ok = gap <= tolerance;
  rep.details = Json{{series_method_name(euler.method), rational_json(euler.value)},
                     {series_method_name(coeff.method), rational_json(coeff.value)}};
  return rep;
}

// ---------------------------------------------------------------------------
// Derivatives and squares

Report derivative_ratio(unsigned d, const Poly& M, const Poly& a) {
  require_squarefree_monic(M, "M");
  const Field& F = M.field();
  const auto ders = DerivativeClass::all_derivatives(F, d);
  std::uint64_t hits = 0;
  for (const auto& r : ders)
    if (M.is_one() || ((r - a) % M).is_zero()) ++hits;
  const int m = static_cast<int>(*M.degree());
  const int lower = d == 0 ? -1 : static_cast<int>((d - 1) / F.p());
  const int e = std::min(m, lower);
  mpq_class ratio(mpz_class(hits), mpz_class(ders.size()));
  ratio.canonicalize();
  const mpq_class bound = power_q(F.q(), -e);
  Report rep = make_report("derivative_ratio", F);
  rep.params = Json{{"d", d}, {"M", lit(M)}, {"a", lit(a)}};
  rep.value = rational_json(ratio);
  rep.reference = rational_json(bound);
  rep.ratio = to_double(ratio / bound);
  rep.ok = ratio <= bound;
  rep.details = Json{{"hits", hits}, {"derivatives", ders.size()}, {"exponent", e}};
  return rep;
}

Report square_class_count(unsigned d, const Poly& M, const Poly& A, const Poly& a, double alpha) {
  require_monic(M, "M");
  require_monic(A, "A");
  const Field& F = M.field();
  auto scalar_times_square = [&](const Poly& f) {
    if (F.p() != 2) return monic_sqrt(monic(f)).has_value();
    for (const auto& fa : factor(f).factors)
      if (fa.multiplicity % 2 != 0) return false;
    return true;
  };
  std::uint64_t count = 0;
  for (auto g : polys_below(F, d)) {
    const Poly f = a + g * M;
    if (f.is_zero()) {
      ++count;  // lambda = 0
      continue;
    }
    const auto [quotient, remainder] = divrem(f, A);
    if (remainder.is_zero() && scalar_times_square(quotient)) ++count;
  }
  const double reference = pow_q(F.q(), (0.5 + alpha) * d);
  Report rep = make_report("square_class_count", F);
  rep.params = Json{{"d", d}, {"M", lit(M)}, {"A", lit(A)}, {"a", lit(a)}, {"alpha", alpha}};
  rep.value = count;
  rep.reference = reference;
  rep.ratio = static_cast<double>(count) / reference;
  rep.ok = static_cast<double>(count) <= reference;
  rep.advisory = true;
  rep.details = Json{{"count_over_q_half_d", static_cast<double>(count) / pow_q(F.q(), d / 2.0)}};
  return rep;
}

Report sign_change_search(const Poly& f, double eta) {
  const Field& F = f.field();
  if (F.p() != 3) throw Unsupported("sign_change_search works in characteristic 3");
  require_monic(f, "f");
  if (!(eta > 0 && eta < 1)) throw DomainError("eta must lie in (0, 1)");
  const unsigned d = *f.degree();
  const double limit = eta * d;
  if (std::floor(limit) < 5) throw DomainError("sign_change_search needs floor(eta d(f)) >= 5");

  // Largest even c < eta d not divisible by 3.
  auto c = static_cast<unsigned>(std::floor(limit));
  if (static_cast<double>(c) >= limit) --c;
  while (c % 2 != 0 || c % 3 == 0) --c;

  std::vector<Elem> coeffs(f.coeffs().begin(), f.coeffs().end());
  coeffs[c] = F.one();
  for (unsigned i = 0; i < c; ++i)
    if (i % 3 != 0) coeffs[i] = F.zero();
  const Poly base(F, std::move(coeffs));

  std::optional<Json> plus, minus;
  std::uint64_t probes = 0;
  bool within_budget = true;
  std::array<std::uint64_t, 3> counts{};  // mu = -1, 0, 1 over the whole perturbation set
  for (auto b : monics(F, c / 3)) ++counts[mobius(base + pow(b, 3)) + 1];
  for (auto b : monics(F, c / 3)) {
    const Poly candidate = base + pow(b, 3);
    ++probes;
    const int mu = mobius(candidate);
    const Poly perturbation = candidate - f;
    auto witness = [&] {
      within_budget = within_budget && (perturbation.is_zero() || *perturbation.degree() <= c);
      return Json{{"b", lit(b)}, {"perturbation", lit(perturbation)}, {"polynomial", lit(candidate)}};
    };
    if (mu == 1 && !plus) plus = witness();
    if (mu == -1 && !minus) minus = witness();
    if (plus && minus) break;
  }
  Report rep = make_report("sign_change_search", F);
  rep.params = Json{{"f", lit(f)}, {"eta", eta}};
  rep.value = Json{{"plus", plus ? *plus : Json(nullptr)}, {"minus", minus ? *minus : Json(nullptr)}};
  rep.reference = Json{{"c", c}, {"b_degree", c / 3}, {"budget", checked_pow(F.q(), c / 3)}};
  rep.ok = plus.has_value() && minus.has_value() && within_budget;
  rep.details = Json{{"probes", probes},
                     {"normalized", lit(base)},
                     {"mu_counts", Json{{"-1", counts[0]}, {"0", counts[1]}, {"1", counts[2]}}}};
  if (eta <= 3.0 / 7.0) rep.details["warning"] = "eta <= 3/7 is outside the range where both signs are guaranteed";
  return rep;
}

std::vector<Poly> random_monics(const Field& F, unsigned d, std::uint64_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Poly> out;
  for (std::uint64_t i = 0; i < count; ++i) {
    std::vector<Elem> coeffs(d + 1, F.one());
    for (unsigned j = 0; j < d; ++j) coeffs[j] = Elem{static_cast<std::uint32_t>(rng() % F.q())};
    out.emplace_back(F, std::move(coeffs));
  }
  return out;
}

Report decomposition_report(const DecompositionData& data, bool verify) {
  const Field& F = data.a.field();
  Report rep = make_report("decompose", F);
  rep.params = Json{{"a", lit(data.a)}, {"M", lit(data.M)}, {"rprime", lit(data.rprime)}, {"d", data.d}};
  rep.value = data.S ? Json(*data.S) : Json(nullptr);
  rep.reference = Json{{"E", lit(data.E)}, {"E1", lit(data.E1)}, {"w", lit(data.w)}};
  rep.details = Json{{"D", lit(data.D)},
                     {"class_size", data.class_size},
                     {"degenerate", data.degenerate},
                     {"calibration_point", data.calibration_point ? Json(lit(*data.calibration_point))
                                                                  : Json(nullptr)}};
  if (auto chi = data.character()) rep.details["character"] = chi->exponents();
  if (verify) {
    const auto v = verify_decomposition(data);
    rep.ok = v.counterexamples == 0 && v.ratios.size() <= 1;
    rep.ratio = static_cast<double>(v.nonzero_chi) / static_cast<double>(v.checks);
    rep.details["checks"] = v.checks;
    rep.details["counterexamples"] = v.counterexamples;
    rep.details["first_counterexample"] =
        v.first_counterexample ? Json(lit(*v.first_counterexample)) : Json(nullptr);
  }
  return rep;
}

Report decomposition_sweep(const Field& F, unsigned max_m, unsigned max_k, unsigned d_lo, unsigned d_hi,
                           const RunOptions& opts) {
  struct Task {
    Poly a, M, r;
    unsigned d;
  };
  std::vector<Task> tasks;
  for (unsigned d = d_lo; d <= d_hi; ++d) {
    const auto ders = DerivativeClass::all_derivatives(F, d);
    for (unsigned m = 0; m <= max_m; ++m)
      for (auto M : monics(F, m))
        for (unsigned k = 0; k <= max_k; ++k)
          for (auto a : monics(F, k)) {
            if (k == d + m || !gcd(a, M).is_one()) continue;
            for (const auto& r : ders) tasks.push_back({a, M, r, d});
          }
  }
  struct Tally {
    std::uint64_t classes = 0, checks = 0, counterexamples = 0, multi_s = 0, degenerate = 0, zero_d = 0;
    Json first_failure;
  };
  const Tally tally = parallel_reduce(
      tasks.size(), opts.threads, Tally{},
      [&](std::uint64_t lo, std::uint64_t hi) {
        Tally acc;
        for (std::uint64_t i = lo; i < hi; ++i) {
          const auto& task = tasks[i];
          const auto data = decompose(task.a, task.M, task.r, task.d);
          const auto v = verify_decomposition(data);
          ++acc.classes;
          acc.checks += v.checks;
          acc.degenerate += data.degenerate;
          acc.zero_d += data.D.is_zero();
          const bool bad = v.counterexamples > 0 || v.ratios.size() > 1;
          acc.counterexamples += v.counterexamples;
          acc.multi_s += v.ratios.size() > 1;
          if (bad && acc.first_failure.is_null())
            acc.first_failure = Json{{"a", lit(task.a)}, {"M", lit(task.M)}, {"rprime", lit(task.r)}, {"d", task.d}};
        }
        return acc;
      },
      [](Tally a, const Tally& b) {
        if (a.first_failure.is_null()) a.first_failure = b.first_failure;
        a.classes += b.classes;
        a.checks += b.checks;
        a.counterexamples += b.counterexamples;
        a.multi_s += b.multi_s;
        a.degenerate += b.degenerate;
        a.zero_d += b.zero_d;
        return a;
      },
      64);
  Report rep = make_report("decomposition_sweep", F, opts.seed);
  rep.params = Json{{"max_m", max_m}, {"max_k", max_k}, {"d_lo", d_lo}, {"d_hi", d_hi}};
  rep.value = Json{{"counterexamples", tally.counterexamples}, {"classes_with_several_S", tally.multi_s}};
  rep.reference = 0;
  rep.ok = tally.counterexamples == 0 && tally.multi_s == 0;
  rep.details = Json{{"classes", tally.classes},
                     {"checks", tally.checks},
                     {"degenerate_classes", tally.degenerate},
                     {"classes_with_D_zero", tally.zero_d},
                     {"first_failure", tally.first_failure}};
  return rep;
}

// ---------------------------------------------------------------------------
// Exact identities

Report zeta_identities(const Field& F, unsigned d, const RunOptions& opts) {
  struct Sums {
    std::int64_t mu = 0;
    std::uint64_t lambda = 0;
    Sums& operator+=(const Sums& o) {
      mu += o.mu;
      lambda += o.lambda;
      return *this;
    }
  };
  const Sums s = parallel_sum<Sums>(checked_pow(F.q(), d), opts.threads, [&](std::uint64_t i) {
    const Poly f = monic_from_index(F, d, i);
    return Sums{mobius(f), von_mangoldt(f)};
  });
  const std::int64_t q = F.q();
  const std::int64_t mu_expected = d == 0 ? 1 : d == 1 ? -q : 0;
  const std::uint64_t lambda_expected = d == 0 ? 0 : checked_pow(F.q(), d);
  Report rep = make_report("zeta_identities", F, opts.seed);
  rep.params = Json{{"d", d}};
  rep.value = Json{{"mu_sum", s.mu}, {"lambda_sum", s.lambda}};
  rep.reference = Json{{"mu_sum", mu_expected}, {"lambda_sum", lambda_expected}};
  rep.ok = s.mu == mu_expected && s.lambda == lambda_expected;
  return rep;
}

Report pellet_check(const Field& F, unsigned d, const RunOptions& opts) {
  const std::uint64_t n = checked_pow(F.q(), d);
  const auto mismatches = parallel_sum<std::uint64_t>(n, opts.threads, [&](std::uint64_t i) -> std::uint64_t {
    const Poly f = monic_from_index(F, d, i);
    return mobius_pellet(f) != mobius_oracle(f);
  });
  Report rep = make_report("pellet_check", F, opts.seed);
  rep.params = Json{{"d", d}};
  rep.value = mismatches;
  rep.reference = 0;
  rep.ok = mismatches == 0;
  rep.details["polynomials"] = n;
  return rep;
}

// ---------------------------------------------------------------------------
// Complete exponential sums

Report weil_sweep(const Field& F, unsigned max_deg) {
  std::uint64_t primes = 0, checks = 0, violations = 0;
  double max_ratio = 0;
  for (unsigned deg = 1; deg <= max_deg; ++deg)
    for (const auto& P : monic_primes(F, deg)) {
      ++primes;
      const AdditiveCharacter psi(P, Poly::one(F));
      const double bound = 2 * std::sqrt(static_cast<double>(P.norm()));
      for (auto x : polys_below(F, deg))
        for (auto z : polys_below(F, deg)) {
          if (x.is_zero() && z.is_zero()) continue;
          const double v = std::abs(kloosterman(psi, x, z).value());
          ++checks;
          max_ratio = std::max(max_ratio, v / bound);
          if (v > bound + kComplexTolerance) ++violations;
        }
    }
  Report rep = make_report("weil_sweep", F);
  rep.params = Json{{"max_deg", max_deg}};
  rep.value = violations;
  rep.reference = "2 sqrt|P|";
  rep.ratio = max_ratio;
  rep.ok = violations == 0;
  rep.details = Json{{"primes", primes}, {"checks", checks}};
  return rep;
}

Report c_sum_sweep(const Field& F, unsigned max_deg, const RunOptions& opts) {
  const auto moduli = squarefree_moduli(F, 1, max_deg);
  struct Tally {
    std::uint64_t checks = 0, violations = 0;
    double max_ratio = 0;
  };
  const Tally t = parallel_reduce(
      moduli.size(), opts.threads, Tally{},
      [&](std::uint64_t lo, std::uint64_t hi) {
        Tally acc;
        for (std::uint64_t i = lo; i < hi; ++i) {
          const Poly& M = moduli[i];
          const AdditiveCharacter psi(M, Poly::one(F));
          for (auto g : polys_below(F, *M.degree()))
            for (auto h : polys_below(F, *M.degree())) {
              const auto res = c_sum(psi, g, h);
              ++acc.checks;
              acc.violations += !res.ok;
              acc.max_ratio = std::max(acc.max_ratio, std::abs(res.value) / res.bound);
            }
        }
        return acc;
      },
      [](Tally a, const Tally& b) {
        a.checks += b.checks;
        a.violations += b.violations;
        a.max_ratio = std::max(a.max_ratio, b.max_ratio);
        return a;
      },
      1);
  Report rep = make_report("c_sum_sweep", F, opts.seed);
  rep.params = Json{{"max_deg", max_deg}};
  rep.value = t.violations;
  rep.reference = "d_2(M) sqrt(|M| |gcd(M,g,h)|)";
  rep.ratio = t.max_ratio;
  rep.ok = t.violations == 0;
  rep.details = Json{{"moduli", moduli.size()}, {"checks", t.checks}};
  return rep;
}

Report aggregate_sample(const Field& F, unsigned deg, std::uint64_t samples, const RunOptions& opts) {
  if (deg == 0) throw DomainError("aggregate_sample needs d(P) >= 1");
  const auto primes = monic_primes(F, deg);
  std::vector<AdditiveCharacter> psis;
  for (const auto& P : primes) psis.emplace_back(P, Poly::one(F));
  const std::uint64_t size = checked_pow(F.q(), deg);

  struct Sample {
    std::size_t prime;
    std::vector<Poly> b;
    Poly z;
  };
  std::mt19937_64 rng(opts.seed);
  std::vector<Sample> draws;
  std::uint64_t nondegenerate = 0;
  while (nondegenerate < samples) {
    Sample s{static_cast<std::size_t>(rng() % primes.size()), {}, Poly(F)};
    for (int i = 0; i < 6; ++i) s.b.push_back(poly_from_index(F, rng() % size));
    s.z = poly_from_index(F, rng() % size);
    nondegenerate += !kloosterman_aggregate_degenerate(primes[s.prime], s.b, s.z);
    draws.push_back(std::move(s));
  }
  struct Tally {
    std::uint64_t nondegenerate = 0, degenerate = 0, violations = 0;
    double max_ratio = 0;
  };
  const Tally t = parallel_reduce(
      draws.size(), opts.threads, Tally{},
      [&](std::uint64_t lo, std::uint64_t hi) {
        Tally acc;
        for (std::uint64_t i = lo; i < hi; ++i) {
          const auto& s = draws[i];
          const auto res = rational_kloosterman_aggregate(psis[s.prime], s.b, s.z);
          if (res.degenerate) {
            ++acc.degenerate;
          } else {
            ++acc.nondegenerate;
            acc.max_ratio = std::max(acc.max_ratio, std::abs(res.value) / res.bound);
          }
          acc.violations += !res.ok;
        }
        return acc;
      },
      [](Tally a, const Tally& b) {
        a.nondegenerate += b.nondegenerate;
        a.degenerate += b.degenerate;
        a.violations += b.violations;
        a.max_ratio = std::max(a.max_ratio, b.max_ratio);
        return a;
      },
      256);
  Report rep = make_report("aggregate_sample", F, opts.seed);
  rep.params = Json{{"deg", deg}, {"samples", samples}};
  rep.value = t.violations;
  rep.reference = "16 |A| (|A|^2 for degenerate tuples)";
  rep.ratio = t.max_ratio;
  rep.ok = t.violations == 0 && t.nondegenerate >= samples;
  rep.details = Json{{"primes", primes.size()}, {"nondegenerate", t.nondegenerate}, {"degenerate", t.degenerate}};
  return rep;
}

}  // namespace ffm
