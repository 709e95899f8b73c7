#include "ffmobius/decomposition.hpp"

#include <algorithm>

#include "ffmobius/arith.hpp"
#include "ffmobius/factor.hpp"

namespace ffm {

DerivativeClass::DerivativeClass(const Field& F, const Poly& rprime, unsigned d) : F_(&F), base_(F) {
  if (d == 0) throw DomainError("derivative classes need degree d >= 1");
  if (rprime.degree() && *rprime.degree() >= d)
    throw DomainError("derivative " + to_string(rprime) + " is too large for degree " + std::to_string(d));
  const std::uint32_t p = F.p();
  std::vector<Elem> c(d + 1, F.zero());
  c[d] = F.one();
  for (unsigned i = 1; i <= d; ++i) {
    const Elem target = rprime.coeff(i - 1);
    if (i % p == 0) {
      if (target != F.zero())
        throw DomainError("no polynomial has derivative " + to_string(rprime) + ": coefficient of T^" +
                          std::to_string(i - 1) + " must vanish");
      continue;
    }
    const Elem ci = F.div(target, F.from_int(i % p));
    if (i == d && ci != F.one())
      throw DomainError("no monic polynomial of degree " + std::to_string(d) + " has derivative " + to_string(rprime));
    c[i] = ci;
  }
  base_ = Poly(F, std::move(c));
  for (unsigned i = 0; i < d; i += p) free_.push_back(i);
  size_ = checked_pow(F.q(), static_cast<unsigned>(free_.size()));
}

Poly DerivativeClass::at(std::uint64_t idx) const {
  std::vector<Elem> c(base_.coeffs().begin(), base_.coeffs().end());
  for (unsigned pos : free_) {
    c[pos] = Elem{static_cast<std::uint32_t>(idx % F_->q())};
    idx /= F_->q();
  }
  return Poly(*F_, std::move(c));
}

std::vector<Poly> DerivativeClass::all_derivatives(const Field& F, unsigned d) {
  if (d == 0) return {Poly(F)};
  std::vector<unsigned> positions;
  for (unsigned i = 1; i < d; ++i)
    if (i % F.p() != 0) positions.push_back(i - 1);
  const Elem top = F.from_int(d % F.p());
  std::vector<Poly> out;
  const std::uint64_t n = checked_pow(F.q(), static_cast<unsigned>(positions.size()));
  for (std::uint64_t idx = 0; idx < n; ++idx) {
    std::vector<Elem> c(d, F.zero());
    c[d - 1] = top;
    std::uint64_t rest = idx;
    for (unsigned pos : positions) {
      c[pos] = Elem{static_cast<std::uint32_t>(rest % F.q())};
      rest /= F.q();
    }
    out.emplace_back(F, std::move(c));
  }
  std::sort(out.begin(), out.end());
  return out;
}

int DecompositionData::chi(const Poly& f) const {
  int v = 1;
  for (const auto& [P, quadratic] : local_primes) {
    if ((f % P).is_zero()) return 0;
    if (quadratic) v *= legendre(f, P);
  }
  return v;
}

std::optional<DirichletCharacter> DecompositionData::character() const {
  if (E.is_one()) return std::nullopt;
  const auto group = CharacterGroup::make(E);
  std::vector<std::uint64_t> exps;
  for (const auto& local : group->locals()) {
    auto it = std::find_if(local_primes.begin(), local_primes.end(),
                           [&](const auto& lp) { return lp.first == local.prime; });
    exps.push_back(it != local_primes.end() && it->second ? local.order / 2 : 0);
  }
  return group->character(std::move(exps));
}

DecompositionData decompose(const Poly& a, const Poly& M, const Poly& rprime, unsigned d) {
  const Field& F = a.field();
  if (F.p() == 2) throw DomainError("the decomposition requires odd characteristic");
  if (!a.is_monic() || !M.is_monic()) throw DomainError("a and M must be monic");
  if (!gcd(a, M).is_one()) throw DomainError("a and M must be coprime");
  if (d == 0) throw DomainError("the decomposition needs d >= 1");
  if (*a.degree() == d + *M.degree()) throw DomainError("d(a) must differ from d + d(M)");

  const DerivativeClass cls(F, rprime, d);
  DecompositionData out{a, M, rprime, d, Poly(F), Poly::one(F), Poly::one(F), Poly(F), {}, std::nullopt,
                        false, cls.size(), std::nullopt};
  out.D = M * M * rprime + derivative(a) * M - a * derivative(M);
  if (out.D.is_zero()) {
    out.S = 0;
    return out;
  }
  const auto fac = factor(out.D);
  Poly radD = Poly::one(F), rad1D = Poly::one(F);
  for (const auto& [P, e] : fac.factors) {
    radD = radD * P;
    if (e % 2 == 1) rad1D = rad1D * P;
    if (!divides(P, M)) out.local_primes.emplace_back(P, e % 2 == 1);
  }
  out.E = radD / gcd(M, radD);
  out.E1 = rad1D / gcd(M, rad1D);
  out.w = out.E.is_one() ? Poly(F) : (a * inverse_mod(M, out.E)) % out.E;

  for (std::uint64_t idx = 0; idx < cls.size(); ++idx) {
    const Poly g = cls.at(idx);
    const int c = out.chi(out.w + g);
    if (c == 0) continue;
    out.S = mobius_pellet(a + g * M) * c;
    out.calibration_point = g;
    return out;
  }
  out.degenerate = true;
  return out;
}

VerifyReport verify_decomposition(const DecompositionData& data) {
  const Field& F = data.a.field();
  const DerivativeClass cls(F, data.rprime, data.d);
  VerifyReport rep;
  for (std::uint64_t idx = 0; idx < cls.size(); ++idx) {
    const Poly g = cls.at(idx);
    const int mu = mobius_oracle(data.a + g * data.M);
    const int c = data.D.is_zero() ? 0 : data.chi(data.w + g);
    const int predicted = data.S ? *data.S * c : 0;
    ++rep.checks;
    if (c != 0) {
      ++rep.nonzero_chi;
      rep.ratios.insert(mu * c);
    }
    if (mu != predicted) {
      ++rep.counterexamples;
      if (!rep.first_counterexample) rep.first_counterexample = g;
    }
  }
  return rep;
}

std::optional<SquareWitness> square_witness(const Poly& D, const Poly& M) {
  if (D.is_zero()) throw DomainError("square witness of zero");
  const Field& F = D.field();
  Poly A = Poly::one(F), B = Poly::one(F);
  for (const auto& [P, e] : factor(D).factors) {
    if (e % 2 == 1) A = A * P;
    B = B * pow(P, e / 2);
  }
  if (!divides(A, M)) return std::nullopt;
  SquareWitness w{A, B, D.lc()};
  if (A * B * B * w.lambda != D) throw Error("square witness does not reconstruct " + to_string(D));
  return w;
}

PrincipalCheck principal_implies_square(const DecompositionData& data) {
  if (data.D.is_zero()) throw DomainError("principal_implies_square needs D != 0");
  if (!data.E1.is_one()) return {false, std::nullopt};
  return {true, square_witness(data.D, data.M)};
}

}  // namespace ffm
