#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ffmobius/error.hpp"

namespace ffm {

/// Element of GF(p^k) in the polynomial basis. `code` is the canonical
/// integer encoding sum c_i p^i of the coordinates c_0..c_{k-1}.
struct Elem {
  std::uint32_t code = 0;

  constexpr auto operator<=>(const Elem&) const = default;
};

/// Largest field size for which tables are built. Reads FFMOBIUS_TABLE_CAP
/// when set, otherwise 2^20.
std::uint64_t default_table_cap();

/// Immutable description of GF(p^k): modulus, primitive element, and the
/// exp/log, addition, quadratic-character and trace tables.
///
/// Instances are created through `Field::make` and shared read-only; the
/// polynomial types keep a raw pointer to their field, so a Field must
/// outlive every Poly built over it.
class Field {
 public:
  /// Builds GF(p^k). When `modulus` is empty the smallest monic irreducible
  /// of degree k in encoding order is used. `modulus` lists GF(p) digits
  /// low-to-high and must have degree exactly k.
  static std::shared_ptr<const Field> make(std::uint32_t p, unsigned k,
                                           std::span<const std::uint32_t> modulus = {},
                                           std::uint64_t table_cap = default_table_cap());

  /// (p, k) from "P^K", "P" or a prime power such as "9".
  static std::pair<std::uint32_t, unsigned> parse_size(const std::string& q_spec);
  /// Parses "P^K", "P" or a prime power.
  static std::shared_ptr<const Field> from_spec(const std::string& q_spec,
                                                std::span<const std::uint32_t> modulus = {},
                                                std::uint64_t table_cap = default_table_cap());

  Field(const Field&) = delete;
  Field& operator=(const Field&) = delete;

  std::uint32_t p() const { return p_; }
  unsigned k() const { return k_; }
  std::uint32_t q() const { return q_; }
  /// Monic modulus over GF(p), low-to-high, length k+1.
  const std::vector<std::uint32_t>& modulus() const { return modulus_; }
  Elem generator() const { return generator_; }

  static constexpr Elem zero() { return Elem{0}; }
  static constexpr Elem one() { return Elem{1}; }
  /// Image of an integer in the prime subfield.
  Elem from_int(long long n) const;
  Elem from_digits(std::span<const std::uint32_t> digits) const;
  std::vector<std::uint32_t> digits(Elem x) const;
  bool contains(Elem x) const { return x.code < q_; }

  Elem add(Elem a, Elem b) const {
    if (add_table_.empty()) return add_slow(a, b);
    return Elem{add_table_[a.code * q_ + b.code]};
  }
  Elem neg(Elem a) const { return Elem{neg_[a.code]}; }
  Elem sub(Elem a, Elem b) const { return add(a, neg(b)); }
  Elem mul(Elem a, Elem b) const {
    if (a.code == 0 || b.code == 0) return zero();
    return Elem{exp_[log_[a.code] + log_[b.code]]};
  }
  /// Throws DivisionByZero for a = 0.
  Elem inv(Elem a) const;
  Elem div(Elem a, Elem b) const { return mul(a, inv(b)); }
  Elem pow(Elem a, std::uint64_t e) const;
  /// x -> x^p.
  Elem frobenius(Elem a) const { return Elem{frob_[a.code]}; }
  /// Inverse of the Frobenius, x -> x^{p^{k-1}}.
  Elem frobenius_inv(Elem a) const { return Elem{frob_inv_[a.code]}; }

  /// Quadratic character: 0 at 0, +1 on nonzero squares, -1 otherwise.
  /// Throws Unsupported in characteristic 2.
  int quad_char(Elem x) const;
  /// Discrete log to the base `generator()`. Throws DomainError at 0.
  std::uint32_t dlog(Elem x) const;
  /// generator()^e.
  Elem exp(std::uint64_t e) const { return Elem{exp_[e % (q_ - 1)]}; }
  /// Absolute trace Tr_{GF(q)/GF(p)}(x) as an integer in [0, p).
  std::uint32_t trace(Elem x) const { return trace_[x.code]; }

  /// Short human-readable description, e.g. "GF(3^2)".
  std::string name() const;

 private:
  Field() = default;
  void build(std::uint32_t p, unsigned k, std::span<const std::uint32_t> modulus,
             std::uint64_t table_cap);
  Elem add_slow(Elem a, Elem b) const;

  std::uint32_t p_ = 0;
  unsigned k_ = 0;
  std::uint32_t q_ = 0;
  std::vector<std::uint32_t> modulus_;
  Elem generator_{};
  std::vector<std::uint32_t> exp_;  // length 2(q-1), so log sums index without a mod
  std::vector<std::uint32_t> log_;
  std::vector<std::uint32_t> add_table_;  // q*q, only for small q
  std::vector<std::uint32_t> zech_;       // log(1 + g^i), q-1 entries; kNoLog for -1
  std::vector<std::uint32_t> neg_;
  std::vector<std::uint32_t> frob_;
  std::vector<std::uint32_t> frob_inv_;
  std::vector<std::uint32_t> trace_;
  std::vector<std::int8_t> quad_;
};

using FieldPtr = std::shared_ptr<const Field>;

/// Trial-division primality test for small integers.
bool is_prime_u64(std::uint64_t n);
/// Distinct prime factors in increasing order.
std::vector<std::uint64_t> prime_factors_u64(std::uint64_t n);

}  // namespace ffm
