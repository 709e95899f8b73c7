#pragma once

#include <complex>
#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "ffmobius/poly.hpp"

namespace ffm {

/// Local data of (F_q[T]/P)^x for one prime P of a squarefree modulus.
struct LocalUnitGroup {
  Poly prime;
  unsigned degree;
  std::uint64_t order;  // q^degree - 1
  Poly generator;       // smallest residue, by low_index, of full order
  std::vector<std::uint32_t> dlog;  // indexed by low_index(r, degree); unused entry at 0
};

class DirichletCharacter;

/// The character group of (F_q[T]/M)^x for squarefree monic M, with local
/// generators and discrete-log tables for every prime factor.
///
/// Characters are indexed in mixed radix over the local exponents (e_1, ..., e_r),
/// e_1 most significant, so index 0 is the principal character and the order is
/// lexicographic in the exponent vector.
class CharacterGroup : public std::enable_shared_from_this<CharacterGroup> {
 public:
  /// Throws DomainError unless M is monic, nonconstant and squarefree.
  static std::shared_ptr<const CharacterGroup> make(const Poly& M);

  const Poly& modulus() const { return M_; }
  const Field& field() const { return M_.field(); }
  const std::vector<LocalUnitGroup>& locals() const { return locals_; }
  /// phi(M), the number of characters.
  std::uint64_t size() const { return size_; }
  /// lcm of the local orders: every character value is a power of exp(2 pi i / root_order()).
  std::uint64_t root_order() const { return root_order_; }

  DirichletCharacter character(std::uint64_t index) const;
  DirichletCharacter character(std::vector<std::uint64_t> exponents) const;
  DirichletCharacter principal() const;
  /// Half-order exponent at every prime: f -> jacobi(f, M).
  DirichletCharacter quadratic() const;

  /// Discrete logs of f modulo each prime, or nullopt if gcd(f, M) != 1.
  std::optional<std::vector<std::uint64_t>> logs(const Poly& f) const;

 private:
  explicit CharacterGroup(const Poly& M) : M_(M) {}

  Poly M_;
  std::vector<LocalUnitGroup> locals_;
  std::uint64_t size_ = 1;
  std::uint64_t root_order_ = 1;
};

class DirichletCharacter {
 public:
  DirichletCharacter(std::shared_ptr<const CharacterGroup> group, std::vector<std::uint64_t> exponents);

  const CharacterGroup& group() const { return *group_; }
  const Poly& modulus() const { return group_->modulus(); }
  const std::vector<std::uint64_t>& exponents() const { return exps_; }
  /// Position in the group's enumeration.
  std::uint64_t index() const;

  bool is_principal() const;
  /// All exponents 0 or half the local order, so values are in {-1, 0, 1}.
  bool is_real() const;
  /// Product of the primes with nonzero exponent.
  Poly conductor() const;

  /// Value as k with chi = exp(2 pi i k / root_order()), or nullopt when gcd(f, M) != 1.
  std::optional<std::uint64_t> phase(const Poly& f) const;
  std::optional<std::uint64_t> phase_from_logs(const std::vector<std::uint64_t>& logs) const;
  std::complex<double> operator()(const Poly& f) const;
  /// Exact value of a real character. Throws Unsupported for non-real characters.
  int exact(const Poly& f) const;

 private:
  std::shared_ptr<const CharacterGroup> group_;
  std::vector<std::uint64_t> exps_;
};

/// All characters mod M, principal first.
std::vector<DirichletCharacter> characters_mod(const Poly& M);
/// The character f -> jacobi(f, E) for squarefree monic E.
DirichletCharacter jacobi_character(const Poly& E);

/// exp(2 pi i k / n).
std::complex<double> root_of_unity(std::uint64_t k, std::uint64_t n);

/// Sum of p-th roots of unity kept as exact multiplicities counts[k] of e_p(k).
struct CycloSum {
  std::vector<std::int64_t> counts;

  explicit CycloSum(std::uint32_t p = 1) : counts(p, 0) {}
  void add(std::uint32_t k, std::int64_t times = 1) { counts[k] += times; }
  CycloSum& operator+=(const CycloSum& o);
  std::complex<double> value() const;
  /// When the sum is an integer (all counts at k != 0 equal), that integer.
  std::optional<std::int64_t> as_integer() const;
};

/// z -> e_p(Tr^A_{F_p}(h z)) on A = F_q[T]/M, where Tr^A_{F_p} is the trace of
/// multiplication on A as an F_p-vector space.
class AdditiveCharacter {
 public:
  /// M nonconstant; only the ideal (M) matters.
  AdditiveCharacter(const Poly& M, const Poly& h);

  const Poly& modulus() const { return M_; }
  const Poly& twist() const { return h_; }
  /// Tr^A_{F_p}(h z) in [0, p).
  std::uint32_t trace(const Poly& z) const;
  /// Same, for z given by its coefficient codes below d(M).
  std::uint32_t trace_coeffs(std::span<const Elem> z) const;
  std::complex<double> operator()(const Poly& z) const;

 private:
  Poly M_;
  Poly h_;
  std::vector<Elem> functional_;  // Tr^A_{F_q}(h T^j), j < d(M)
};

/// Tr^A_{F_q}(T^j) for j < d(M): the trace of multiplication by T^j on F_q[T]/M.
std::vector<Elem> algebra_traces(const Poly& M);

/// S(x, z) = sum_{y in A^x} psi(x / y + z y).
CycloSum kloosterman(const AdditiveCharacter& psi, const Poly& x, const Poly& z);

/// Sum over x in A with all x + b_i invertible of S(R_b(x), z), with
/// R_b(x) = sum_i 1/(x + b_i) - 1/(x + b_{i+3}). b has six entries (b_1, b_2, b_3, b_1', b_2', b_3').
/// The bound multiplies, over the primes P | M, |A_P|^2 for locally degenerate data
/// with z = 0 mod P and 16 |A_P| otherwise.
struct AggregateResult {
  std::complex<double> value;
  CycloSum exact;
  double bound;
  bool ok;
  bool degenerate;  // every local factor degenerate
};
AggregateResult rational_kloosterman_aggregate(const AdditiveCharacter& psi, const std::vector<Poly>& b,
                                               const Poly& z);
/// True when z = 0 mod P and R_b vanishes identically mod P.
bool kloosterman_aggregate_degenerate(const Poly& P, const std::vector<Poly>& b, const Poly& z);

/// C(g, h) = sum_{z in A^x} psi(g / z) e_p(Tr^A_{F_p}(h z)) with bound
/// d_2(M) sqrt(|M| |gcd(M, g, h)|).
struct CSumResult {
  std::complex<double> value;
  CycloSum exact;
  double bound;
  bool ok;
};
CSumResult c_sum(const AdditiveCharacter& psi, const Poly& g, const Poly& h);

inline constexpr double kComplexTolerance = 1e-9;

}  // namespace ffm
