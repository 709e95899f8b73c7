#include "ffmobius/characters.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <numeric>

#include "ffmobius/arith.hpp"
#include "ffmobius/factor.hpp"

namespace ffm {

namespace {

constexpr std::uint32_t kNoLog = std::numeric_limits<std::uint32_t>::max();

LocalUnitGroup build_local(const Poly& P) {
  const Field& F = P.field();
  const unsigned d = *P.degree();
  const std::uint64_t size = checked_pow(F.q(), d);
  if (size > default_table_cap())
    throw ResourceLimit("residue field of " + to_string(P) + " exceeds the table cap");
  const std::uint64_t order = size - 1;
  const auto ell = prime_factors_u64(order);
  Poly gen(F);
  for (std::uint64_t idx = 1; idx < size; ++idx) {
    const Poly r = poly_from_index(F, idx);
    bool full = true;
    for (auto l : ell) {
      if (powmod(r, order / l, P).is_one()) {
        full = false;
        break;
      }
    }
    if (full) {
      gen = r;
      break;
    }
  }
  std::vector<std::uint32_t> dlog(size, kNoLog);
  Poly x = Poly::one(F);
  for (std::uint64_t j = 0; j < order; ++j) {
    dlog[low_index(x, d)] = static_cast<std::uint32_t>(j);
    x = mulmod(x, gen, P);
  }
  return {P, d, order, gen, std::move(dlog)};
}

__int128 mulmod_u64(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<__int128>(a) * b % m;
}

}  // namespace

std::shared_ptr<const CharacterGroup> CharacterGroup::make(const Poly& M) {
  if (!M.is_monic() || M.is_constant())
    throw DomainError("character modulus must be monic and nonconstant: " + to_string(M));
  if (!is_squarefree(M)) throw DomainError("character modulus must be squarefree: " + to_string(M));
  std::shared_ptr<CharacterGroup> g(new CharacterGroup(M));
  for (const auto& fac : factor(M).factors) {
    g->locals_.push_back(build_local(fac.prime));
    const std::uint64_t n = g->locals_.back().order;
    g->size_ *= n;
    g->root_order_ = std::lcm(g->root_order_, n);
  }
  return g;
}

DirichletCharacter CharacterGroup::character(std::uint64_t index) const {
  if (index >= size_) throw DomainError("character index out of range");
  std::vector<std::uint64_t> e(locals_.size());
  for (std::size_t i = locals_.size(); i-- > 0;) {
    e[i] = index % locals_[i].order;
    index /= locals_[i].order;
  }
  return DirichletCharacter(shared_from_this(), std::move(e));
}

DirichletCharacter CharacterGroup::character(std::vector<std::uint64_t> exponents) const {
  return DirichletCharacter(shared_from_this(), std::move(exponents));
}

DirichletCharacter CharacterGroup::principal() const { return character(std::uint64_t{0}); }

DirichletCharacter CharacterGroup::quadratic() const {
  if (field().p() == 2) throw Unsupported("quadratic characters require odd characteristic");
  std::vector<std::uint64_t> e;
  for (const auto& l : locals_) e.push_back(l.order / 2);
  return character(std::move(e));
}

std::optional<std::vector<std::uint64_t>> CharacterGroup::logs(const Poly& f) const {
  std::vector<std::uint64_t> out(locals_.size());
  for (std::size_t i = 0; i < locals_.size(); ++i) {
    const Poly r = f % locals_[i].prime;
    if (r.is_zero()) return std::nullopt;
    out[i] = locals_[i].dlog[low_index(r, locals_[i].degree)];
  }
  return out;
}

DirichletCharacter::DirichletCharacter(std::shared_ptr<const CharacterGroup> group, std::vector<std::uint64_t> exponents)
    : group_(std::move(group)), exps_(std::move(exponents)) {
  const auto& locals = group_->locals();
  if (exps_.size() != locals.size()) throw DomainError("exponent vector has the wrong length");
  for (std::size_t i = 0; i < exps_.size(); ++i)
    if (exps_[i] >= locals[i].order) throw DomainError("character exponent out of range");
}

std::uint64_t DirichletCharacter::index() const {
  std::uint64_t idx = 0;
  const auto& locals = group_->locals();
  for (std::size_t i = 0; i < exps_.size(); ++i) idx = idx * locals[i].order + exps_[i];
  return idx;
}

bool DirichletCharacter::is_principal() const {
  return std::all_of(exps_.begin(), exps_.end(), [](std::uint64_t e) { return e == 0; });
}

bool DirichletCharacter::is_real() const {
  const auto& locals = group_->locals();
  for (std::size_t i = 0; i < exps_.size(); ++i)
    if (exps_[i] != 0 && 2 * exps_[i] != locals[i].order) return false;
  return true;
}

Poly DirichletCharacter::conductor() const {
  Poly c = Poly::one(group_->field());
  const auto& locals = group_->locals();
  for (std::size_t i = 0; i < exps_.size(); ++i)
    if (exps_[i] != 0) c = c * locals[i].prime;
  return c;
}

std::optional<std::uint64_t> DirichletCharacter::phase_from_logs(const std::vector<std::uint64_t>& logs) const {
  const auto& locals = group_->locals();
  const std::uint64_t L = group_->root_order();
  std::uint64_t k = 0;
  for (std::size_t i = 0; i < exps_.size(); ++i) {
    if (exps_[i] == 0) continue;
    const std::uint64_t local = static_cast<std::uint64_t>(mulmod_u64(exps_[i], logs[i], locals[i].order));
    k = (k + static_cast<std::uint64_t>(mulmod_u64(local, L / locals[i].order, L))) % L;
  }
  return k;
}

std::optional<std::uint64_t> DirichletCharacter::phase(const Poly& f) const {
  auto l = group_->logs(f);
  if (!l) return std::nullopt;
  return phase_from_logs(*l);
}

std::complex<double> DirichletCharacter::operator()(const Poly& f) const {
  auto k = phase(f);
  if (!k) return {0.0, 0.0};
  return root_of_unity(*k, group_->root_order());
}

int DirichletCharacter::exact(const Poly& f) const {
  if (!is_real()) throw Unsupported("exact values exist only for real characters");
  auto l = group_->logs(f);
  if (!l) return 0;
  int v = 1;
  for (std::size_t i = 0; i < exps_.size(); ++i)
    if (exps_[i] != 0 && (*l)[i] % 2 == 1) v = -v;
  return v;
}

std::vector<DirichletCharacter> characters_mod(const Poly& M) {
  const auto group = CharacterGroup::make(M);
  std::vector<DirichletCharacter> out;
  out.reserve(group->size());
  for (std::uint64_t i = 0; i < group->size(); ++i) out.push_back(group->character(i));
  return out;
}

DirichletCharacter jacobi_character(const Poly& E) { return CharacterGroup::make(E)->quadratic(); }

std::complex<double> root_of_unity(std::uint64_t k, std::uint64_t n) {
  k %= n;
  if (k == 0) return {1.0, 0.0};
  if (2 * k == n) return {-1.0, 0.0};
  if (4 * k == n) return {0.0, 1.0};
  if (4 * k == 3 * n) return {0.0, -1.0};
  const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) / static_cast<double>(n);
  return {std::cos(angle), std::sin(angle)};
}

CycloSum& CycloSum::operator+=(const CycloSum& o) {
  if (counts.size() < o.counts.size()) counts.resize(o.counts.size(), 0);
  for (std::size_t i = 0; i < o.counts.size(); ++i) counts[i] += o.counts[i];
  return *this;
}

std::complex<double> CycloSum::value() const {
  std::complex<double> v{0.0, 0.0};
  const std::uint64_t p = counts.size();
  for (std::uint64_t k = 0; k < p; ++k)
    if (counts[k] != 0) v += static_cast<double>(counts[k]) * root_of_unity(k, p);
  return v;
}

std::optional<std::int64_t> CycloSum::as_integer() const {
  // sum_{k} e_p(k) = 0, so the sum is an integer exactly when counts[1..p-1] agree.
  for (std::size_t k = 2; k < counts.size(); ++k)
    if (counts[k] != counts[1]) return std::nullopt;
  return counts.size() > 1 ? counts[0] - counts[1] : counts[0];
}

std::vector<Elem> algebra_traces(const Poly& M) {
  const Field& F = M.field();
  const Poly m = monic(M);
  const unsigned n = *m.degree();
  // Powers T^k mod M for k < 2n - 1.
  std::vector<Poly> powers;
  Poly x = Poly::one(F) % m;
  for (unsigned k = 0; k + 1 < 2 * n; ++k) {
    powers.push_back(x);
    x = (x * Poly::T(F)) % m;
  }
  std::vector<Elem> tr(n, F.zero());
  for (unsigned j = 0; j < n; ++j)
    for (unsigned i = 0; i < n; ++i) tr[j] = F.add(tr[j], powers[i + j].coeff(i));
  return tr;
}

AdditiveCharacter::AdditiveCharacter(const Poly& M, const Poly& h) : M_(monic(M)), h_(h % M) {
  if (M.is_constant()) throw DomainError("additive character modulus must be nonconstant");
  const Field& F = M_.field();
  const unsigned n = *M_.degree();
  const auto tr = algebra_traces(M_);
  functional_.assign(n, F.zero());
  Poly x = h_;
  for (unsigned j = 0; j < n; ++j) {
    Elem acc = F.zero();
    for (unsigned l = 0; l < n; ++l) acc = F.add(acc, F.mul(x.coeff(l), tr[l]));
    functional_[j] = acc;
    x = (x * Poly::T(F)) % M_;
  }
}

std::uint32_t AdditiveCharacter::trace_coeffs(std::span<const Elem> z) const {
  const Field& F = M_.field();
  Elem acc = F.zero();
  const std::size_t n = std::min(z.size(), functional_.size());
  for (std::size_t j = 0; j < n; ++j) acc = F.add(acc, F.mul(z[j], functional_[j]));
  return F.trace(acc);
}

std::uint32_t AdditiveCharacter::trace(const Poly& z) const {
  if (z.degree() && *z.degree() >= functional_.size()) return trace_coeffs((z % M_).coeffs());
  return trace_coeffs(z.coeffs());
}

std::complex<double> AdditiveCharacter::operator()(const Poly& z) const {
  return root_of_unity(trace(z), M_.field().p());
}

CycloSum kloosterman(const AdditiveCharacter& psi, const Poly& x, const Poly& z) {
  const Poly& M = psi.modulus();
  const Field& F = M.field();
  CycloSum s(F.p());
  for (auto y : polys_below(F, *M.degree())) {
    if (y.is_zero() || !gcd(y, M).is_one()) continue;
    const Poly arg = (x * inverse_mod(y, M) + z * y) % M;
    s.add(psi.trace(arg));
  }
  return s;
}

bool kloosterman_aggregate_degenerate(const Poly& P, const std::vector<Poly>& b, const Poly& z) {
  if (b.size() != 6) throw DomainError("the aggregate takes six shifts");
  if (!(z % P).is_zero()) return false;
  std::vector<Poly> r;
  for (const auto& x : b) r.push_back(x % P);
  std::array<int, 3> sigma{0, 1, 2};
  do {
    if (r[0] == r[3 + sigma[0]] && r[1] == r[3 + sigma[1]] && r[2] == r[3 + sigma[2]]) return true;
  } while (std::next_permutation(sigma.begin(), sigma.end()));
  return P.field().p() == 3 && r[0] == r[1] && r[1] == r[2] && r[3] == r[4] && r[4] == r[5];
}

AggregateResult rational_kloosterman_aggregate(const AdditiveCharacter& psi, const std::vector<Poly>& b,
                                               const Poly& z) {
  if (b.size() != 6) throw DomainError("the aggregate takes six shifts");
  const Poly& M = psi.modulus();
  const Field& F = M.field();
  const unsigned m = *M.degree();
  const std::uint64_t size = checked_pow(F.q(), m);

  // S(w, z) for every residue w, then one lookup per x.
  std::vector<CycloSum> table;
  table.reserve(size);
  for (std::uint64_t w = 0; w < size; ++w) table.push_back(kloosterman(psi, poly_from_index(F, w), z));

  CycloSum total(F.p());
  for (auto x : polys_below(F, m)) {
    Poly R(F);
    bool admissible = true;
    for (int i = 0; i < 6 && admissible; ++i) {
      const Poly shifted = (x + b[i]) % M;
      if (shifted.is_zero() || !gcd(shifted, M).is_one()) {
        admissible = false;
        break;
      }
      const Poly inv = inverse_mod(shifted, M);
      if (i < 3) {
        R += inv;
      } else {
        R -= inv;
      }
    }
    if (!admissible) continue;
    total += table[low_index(R % M, m)];
  }

  double bound = 1.0;
  bool all_degenerate = true;
  for (const auto& fac : factor(M).factors) {
    const double local = static_cast<double>(fac.prime.norm());
    if (kloosterman_aggregate_degenerate(fac.prime, b, z)) {
      bound *= local * local;
    } else {
      bound *= 16.0 * local;
      all_degenerate = false;
    }
  }
  const auto v = total.value();
  return {v, total, bound, std::abs(v) <= bound + kComplexTolerance, all_degenerate};
}

CSumResult c_sum(const AdditiveCharacter& psi, const Poly& g, const Poly& h) {
  const Poly& M = psi.modulus();
  const Field& F = M.field();
  const AdditiveCharacter eh(M, h);
  CycloSum s(F.p());
  for (auto z : polys_below(F, *M.degree())) {
    if (z.is_zero() || !gcd(z, M).is_one()) continue;
    const std::uint32_t k = psi.trace((g * inverse_mod(z, M)) % M) + eh.trace(z);
    s.add(k % F.p());
  }
  const Poly common = gcd(gcd(M, g), h);
  const double bound = static_cast<double>(divisor_count(M)) *
                       std::sqrt(static_cast<double>(M.norm()) * static_cast<double>(common.norm()));
  const auto v = s.value();
  return {v, s, bound, std::abs(v) <= bound + kComplexTolerance};
}

}  // namespace ffm
