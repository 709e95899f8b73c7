#pragma once

#include <cstdint>
#include <optional>
#include <set>
#include <vector>

#include "ffmobius/characters.hpp"
#include "ffmobius/poly.hpp"

namespace ffm {

/// The monic polynomials of degree d whose derivative equals `rprime`, as
/// r0 + sum c_i T^i over the exponents i < d divisible by p (plus T^d when p | d).
class DerivativeClass {
 public:
  /// Throws DomainError when no monic g of degree d has g' = rprime.
  DerivativeClass(const Field& F, const Poly& rprime, unsigned d);

  /// The member with all free coefficients zero.
  const Poly& representative() const { return base_; }
  std::uint64_t size() const { return size_; }
  Poly at(std::uint64_t idx) const;
  /// Every distinct derivative of a monic polynomial of degree d, in canonical order.
  static std::vector<Poly> all_derivatives(const Field& F, unsigned d);

 private:
  const Field* F_;
  Poly base_;
  std::vector<unsigned> free_;  // exponents with a free coefficient
  std::uint64_t size_ = 1;
};

/// mu(a + gM) = S chi(w + g) on a derivative class, with chi a real character mod E.
struct DecompositionData {
  Poly a, M, rprime;
  unsigned d = 0;
  Poly D;  // M^2 rprime + a' M - a M'
  Poly E;  // rad(D) / gcd(M, rad D)
  Poly E1; // rad1(D) / gcd(M, rad1 D)
  Poly w;  // a * inverse(M) mod E
  /// Primes of E, and whether each carries the nontrivial quadratic component.
  std::vector<std::pair<Poly, bool>> local_primes;
  /// 0 when D = 0; absent when chi(w + g) = 0 on the whole class.
  std::optional<int> S;
  bool degenerate = false;
  std::uint64_t class_size = 0;
  /// Representative g used to calibrate S.
  std::optional<Poly> calibration_point;

  /// chi(f) in {-1, 0, 1}; identically 1 when E = 1.
  int chi(const Poly& f) const;
  /// chi as a DirichletCharacter mod E; nullopt when E = 1.
  std::optional<DirichletCharacter> character() const;
};

/// Builds D, E, E1, w, chi and calibrates S at the first g (in class order) with chi(w + g) != 0.
/// Requires monic a and M with gcd(a, M) = 1, d >= 1, d(a) != d + d(M), odd p.
DecompositionData decompose(const Poly& a, const Poly& M, const Poly& rprime, unsigned d);

struct VerifyReport {
  std::uint64_t checks = 0;
  std::uint64_t counterexamples = 0;
  std::optional<Poly> first_counterexample;
  /// Distinct values of mu(a + gM) / chi(w + g) over g with chi(w + g) != 0.
  std::set<int> ratios;
  std::uint64_t nonzero_chi = 0;
};

/// Checks mu(a + gM) = S chi(w + g) with the factoring Mobius function on every g in the class.
/// A degenerate class is checked against mu = 0.
VerifyReport verify_decomposition(const DecompositionData& data);

struct SquareWitness {
  Poly A;
  Poly B;
  Elem lambda;
};

/// D = lambda A B^2 with A = rad1(D), provided rad1(D) divides M. Throws DomainError for D = 0.
std::optional<SquareWitness> square_witness(const Poly& D, const Poly& M);

struct PrincipalCheck {
  bool is_principal;
  std::optional<SquareWitness> witness;
};
/// When chi is principal (E1 = 1) returns a witness D = lambda A B^2 with A | M.
PrincipalCheck principal_implies_square(const DecompositionData& data);

}  // namespace ffm
