#pragma once

#include <gmpxx.h>

#include <complex>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "ffmobius/characters.hpp"
#include "ffmobius/decomposition.hpp"
#include "ffmobius/factor.hpp"
#include "ffmobius/poly.hpp"

namespace ffm {

using Json = nlohmann::ordered_json;

struct RunOptions {
  unsigned threads = 1;  // 0 = hardware concurrency
  std::uint64_t seed = kDefaultSeed;
};

/// One experiment result. Polynomials are serialized as canonical literals,
/// exact rationals as {"exact": "a/b", "decimal": "..."}.
struct Report {
  std::string experiment;
  std::uint32_t p = 0;
  unsigned k = 0;
  std::vector<std::uint32_t> modulus;
  Json params = Json::object();
  Json value;
  Json reference;
  std::optional<double> ratio;
  std::optional<bool> ok;
  /// `ok` is informational and never fails a run.
  bool advisory = false;
  std::uint64_t seed = 0;
  Json details = Json::object();
  std::optional<std::int64_t> runtime_ms;

  Json to_json() const;
  /// False only for a non-advisory ok == false.
  bool passed() const { return advisory || !ok || *ok; }
};

Json rational_json(const mpq_class& x);
Json complex_json(std::complex<double> z);
Json cyclo_json(const CycloSum& s);
/// Big-integer ratio a / b as a double.
double to_double(const mpq_class& x);
std::uint64_t binomial(unsigned n, unsigned k);

/// (a, M) for the affine form a + gM.
using AffinePair = std::pair<Poly, Poly>;

// Character sums over short intervals.

/// |sum_{d(h) < t, gcd(f+h, g) = 1} chi(f + h)| against (sqrt q + 1) C(m-1, t) q^{t/2}.
Report char_sum_check(const DirichletCharacter& chi, const Poly& f, unsigned t);
/// The same check for every squarefree monic g with 1 <= d(g) <= max_deg, every nontrivial
/// chi mod g, every f (the sum only depends on f mod g and on the coset f + {d(h) < t}) and
/// every t <= d(g).
Report char_sum_sweep(const Field& F, unsigned max_deg, const RunOptions& opts = {});
/// r(f, g, t) over the splitting field of g, against C(m-1, t).
Report rk_bound(const Poly& f, const Poly& g, unsigned t);

// Mobius and von Mangoldt along affine forms.

Report chowla_sum(unsigned d, const std::vector<AffinePair>& pairs, const RunOptions& opts = {});
/// sum of mu(f) over f in M_D with f = a mod M; no coprimality requirement.
std::int64_t mobius_progression_sum(unsigned D, const Poly& M, const Poly& a, unsigned threads = 1);
/// sum of Lambda(f) over f in M_D with f = a mod M.
std::uint64_t lambda_progression_sum(unsigned D, const Poly& M, const Poly& a, unsigned threads = 1);
Report mobius_ap_sum(unsigned D, const Poly& M, const Poly& a, const RunOptions& opts = {});
Report lambda_ap_sum(unsigned D, const Poly& M, const Poly& a, const RunOptions& opts = {});
Report mobius_prime_power_ap(unsigned D, const Poly& P, unsigned n, const RunOptions& opts = {});
Report mobius_lambda_corr(unsigned d, const AffinePair& lead, const std::vector<AffinePair>& pairs,
                          const RunOptions& opts = {});
Report mobius_inv_additive(unsigned d, const Poly& M, const Poly& h, const RunOptions& opts = {});

/// Lambda(f) = -sum_{AB = f} d(A) mu(A).
bool convolution_check(const Poly& f);
/// mu(f) = -sum_{gh | f, d(g) <= alpha, d(h) <= beta} mu(g) mu(h)
///         + sum_{gh | f, d(g) > alpha, d(h) > beta} mu(g) mu(h). Needs max(alpha, beta) < d(f).
bool vaughan_check(const Poly& f, unsigned alpha, unsigned beta);
/// Both identities for every monic f with d(f) <= max_deg and every admissible (alpha, beta).
Report identity_sweep(const Field& F, unsigned max_deg, const RunOptions& opts = {});

/// sum_{k=1}^d k q^{-k} sum_{A in M_k, (A, M) = 1} mu(A) against -q^m / phi(M).
Report main_term_partial(unsigned d, const Poly& M);
/// sum_{f in M_d} Lambda(f) Lambda(f + a) against S_q(a) q^d (S truncated at degree N, default d).
Report twin_count(unsigned d, const Poly& a, std::optional<unsigned> truncation = std::nullopt,
                  const RunOptions& opts = {});
/// Euler product against coefficient sum of the singular series at truncation N.
Report singular_series_compare(const Poly& a, unsigned N);

// Derivative classes and squares.

Report derivative_ratio(unsigned d, const Poly& M, const Poly& a);
Report square_class_count(unsigned d, const Poly& M, const Poly& A, const Poly& a, double alpha = 0.1);
/// Normalizes the low coefficients of f and searches f + b^3, b in M_{floor(c/3)}, for mu = 1 and -1.
Report sign_change_search(const Poly& f, double eta);
/// `count` monic polynomials of degree d with coefficients drawn in turn from mt19937_64(seed).
std::vector<Poly> random_monics(const Field& F, unsigned d, std::uint64_t count, std::uint64_t seed);
Report decomposition_report(const DecompositionData& data, bool verify);
/// decompose + verify on every class with d(M) <= max_m, d(a) <= max_k, d in [d_lo, d_hi].
Report decomposition_sweep(const Field& F, unsigned max_m, unsigned max_k, unsigned d_lo, unsigned d_hi,
                           const RunOptions& opts = {});

// Exact identities and oracles.

/// sum mu and sum Lambda over M_d.
Report zeta_identities(const Field& F, unsigned d, const RunOptions& opts = {});
/// mobius_pellet against mobius_oracle on M_d.
Report pellet_check(const Field& F, unsigned d, const RunOptions& opts = {});

// Complete exponential sums.

/// |S(x, z)| <= 2 sqrt|P| for every monic prime P with d(P) <= max_deg and (x, z) != (0, 0).
Report weil_sweep(const Field& F, unsigned max_deg);
/// |C(g, h)| <= d_2(M) sqrt(|M| |gcd(M, g, h)|) for squarefree M with d(M) <= max_deg, all g, h.
Report c_sum_sweep(const Field& F, unsigned max_deg, const RunOptions& opts = {});
/// Sampled six-shift aggregates for monic primes of degree `deg`: at least `samples`
/// nondegenerate tuples (b, z), each checked against 16 |A|.
Report aggregate_sample(const Field& F, unsigned deg, std::uint64_t samples, const RunOptions& opts = {});

}  // namespace ffm
