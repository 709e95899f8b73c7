#include "ffmobius/field.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <sstream>

namespace ffm {

namespace {

constexpr std::uint32_t kNoLog = std::numeric_limits<std::uint32_t>::max();

// Dense polynomials over GF(p) as low-to-high digit vectors. Only used while
// the field tables do not exist yet (modulus search, generator search).
using Digits = std::vector<std::uint32_t>;

void trim(Digits& a) {
  while (!a.empty() && a.back() == 0) a.pop_back();
}

std::uint32_t inv_mod_p(std::uint32_t a, std::uint32_t p) {
  std::uint64_t result = 1, base = a % p;
  for (std::uint64_t e = p - 2; e > 0; e >>= 1) {
    if (e & 1) result = result * base % p;
    base = base * base % p;
  }
  return static_cast<std::uint32_t>(result);
}

Digits mul_raw(const Digits& a, const Digits& b, std::uint32_t p) {
  if (a.empty() || b.empty()) return {};
  std::vector<std::uint64_t> acc(a.size() + b.size() - 1, 0);
  for (std::size_t i = 0; i < a.size(); ++i)
    for (std::size_t j = 0; j < b.size(); ++j) acc[i + j] = (acc[i + j] + std::uint64_t{a[i]} * b[j]) % p;
  Digits out(acc.begin(), acc.end());
  trim(out);
  return out;
}

Digits mod_raw(Digits a, const Digits& m, std::uint32_t p) {
  const std::size_t dm = m.size() - 1;
  const std::uint32_t lc_inv = inv_mod_p(m.back(), p);
  trim(a);
  while (a.size() > dm) {
    const std::uint64_t c = std::uint64_t{a.back()} * lc_inv % p;
    const std::size_t shift = a.size() - 1 - dm;
    for (std::size_t i = 0; i <= dm; ++i)
      a[shift + i] = static_cast<std::uint32_t>((a[shift + i] + (p - c) * m[i]) % p);
    trim(a);
  }
  return a;
}

Digits mulmod_raw(const Digits& a, const Digits& b, const Digits& m, std::uint32_t p) {
  return mod_raw(mul_raw(a, b, p), m, p);
}

Digits powmod_raw(Digits base, std::uint64_t e, const Digits& m, std::uint32_t p) {
  Digits result{1};
  base = mod_raw(std::move(base), m, p);
  for (; e > 0; e >>= 1) {
    if (e & 1) result = mulmod_raw(result, base, m, p);
    base = mulmod_raw(base, base, m, p);
  }
  return mod_raw(std::move(result), m, p);
}

Digits gcd_raw(Digits a, Digits b, std::uint32_t p) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    a = mod_raw(std::move(a), b, p);
    std::swap(a, b);
  }
  return a;
}

Digits sub_raw(Digits a, const Digits& b, std::uint32_t p) {
  if (a.size() < b.size()) a.resize(b.size(), 0);
  for (std::size_t i = 0; i < b.size(); ++i) a[i] = (a[i] + p - b[i]) % p;
  trim(a);
  return a;
}

// Rabin's test: f of degree k is irreducible iff f | x^{p^k} - x and
// gcd(x^{p^{k/r}} - x, f) = 1 for every prime r | k.
bool irreducible_over_prime_field(const Digits& f, std::uint32_t p) {
  const unsigned k = static_cast<unsigned>(f.size() - 1);
  if (k == 1) return true;
  const Digits x{0, 1};
  auto x_pow_p_pow = [&](unsigned j) {
    Digits h = x;
    for (unsigned i = 0; i < j; ++i) h = powmod_raw(h, p, f, p);
    return h;
  };
  if (sub_raw(x_pow_p_pow(k), x, p).size() != 0) return false;
  for (std::uint64_t r : prime_factors_u64(k)) {
    const Digits g = gcd_raw(f, sub_raw(x_pow_p_pow(static_cast<unsigned>(k / r)), x, p), p);
    if (g.size() > 1) return false;
  }
  return true;
}

}  // namespace

bool is_prime_u64(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d)
    if (n % d == 0) return false;
  return true;
}

std::vector<std::uint64_t> prime_factors_u64(std::uint64_t n) {
  std::vector<std::uint64_t> out;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) {
      out.push_back(d);
      while (n % d == 0) n /= d;
    }
  }
  if (n > 1) out.push_back(n);
  return out;
}

std::uint64_t default_table_cap() {
  if (const char* env = std::getenv("FFMOBIUS_TABLE_CAP")) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return v;
  }
  return std::uint64_t{1} << 20;
}

std::shared_ptr<const Field> Field::make(std::uint32_t p, unsigned k, std::span<const std::uint32_t> modulus,
                                         std::uint64_t table_cap) {
  std::shared_ptr<Field> f(new Field());
  f->build(p, k, modulus, table_cap);
  return f;
}

std::pair<std::uint32_t, unsigned> Field::parse_size(const std::string& q_spec) {
  const auto caret = q_spec.find('^');
  try {
    std::size_t used = 0;
    unsigned long p = std::stoul(q_spec.substr(0, caret), &used);
    if (used != (caret == std::string::npos ? q_spec.size() : caret)) throw std::invalid_argument("p");
    unsigned long k = 1;
    if (caret != std::string::npos) {
      const std::string ks = q_spec.substr(caret + 1);
      k = std::stoul(ks, &used);
      if (used != ks.size()) throw std::invalid_argument("k");
    } else if (p > 1 && !is_prime_u64(p)) {
      // A bare prime power q = p^k.
      unsigned long base = 2;
      while (p % base != 0) ++base;
      unsigned long rest = p;
      k = 0;
      while (rest % base == 0) {
        rest /= base;
        ++k;
      }
      if (rest != 1) throw DomainError(q_spec + " is not a prime power");
      p = base;
    }
    if (p < 2) throw DomainError(q_spec + " is not a prime power");
    if (p > UINT32_MAX) throw std::out_of_range("p");
    return {static_cast<std::uint32_t>(p), static_cast<unsigned>(k)};
  } catch (const std::invalid_argument&) {
    throw DomainError("field spec must look like P^K, P or a prime power, got '" + q_spec + "'");
  } catch (const std::out_of_range&) {
    throw DomainError("field spec out of range: '" + q_spec + "'");
  }
}

std::shared_ptr<const Field> Field::from_spec(const std::string& q_spec, std::span<const std::uint32_t> modulus,
                                              std::uint64_t table_cap) {
  const auto [p, k] = parse_size(q_spec);
  return make(p, k, modulus, table_cap);
}

void Field::build(std::uint32_t p, unsigned k, std::span<const std::uint32_t> modulus, std::uint64_t table_cap) {
  if (!is_prime_u64(p)) throw DomainError("characteristic " + std::to_string(p) + " is not prime");
  if (k == 0) throw DomainError("extension degree must be at least 1");
  std::uint64_t q = 1;
  for (unsigned i = 0; i < k; ++i) {
    q *= p;
    if (q > table_cap || q > (std::uint64_t{1} << 31))
      throw ResourceLimit("field size " + std::to_string(p) + "^" + std::to_string(k) + " exceeds table cap " +
                          std::to_string(table_cap));
  }
  p_ = p;
  k_ = k;
  q_ = static_cast<std::uint32_t>(q);

  if (!modulus.empty()) {
    Digits m(modulus.begin(), modulus.end());
    for (auto& c : m) {
      if (c >= p) throw DomainError("modulus coefficient out of range for GF(" + std::to_string(p) + ")");
    }
    trim(m);
    if (m.size() != k + 1) throw DomainError("modulus must have degree " + std::to_string(k));
    const std::uint32_t lc_inv = inv_mod_p(m.back(), p);
    for (auto& c : m) c = static_cast<std::uint32_t>(std::uint64_t{c} * lc_inv % p);
    if (!irreducible_over_prime_field(m, p)) throw DomainError("modulus is reducible over GF(" + std::to_string(p) + ")");
    modulus_ = std::move(m);
  } else {
    const std::uint64_t candidates = q;
    for (std::uint64_t idx = 0; idx < candidates; ++idx) {
      Digits m(k + 1, 0);
      std::uint64_t v = idx;
      for (unsigned i = 0; i < k; ++i) {
        m[i] = static_cast<std::uint32_t>(v % p);
        v /= p;
      }
      m[k] = 1;
      if (irreducible_over_prime_field(m, p)) {
        modulus_ = std::move(m);
        break;
      }
    }
  }

  auto to_digits = [&](std::uint32_t code) {
    Digits d(k, 0);
    for (unsigned i = 0; i < k; ++i) {
      d[i] = code % p;
      code /= p;
    }
    trim(d);
    return d;
  };
  auto to_code = [&](const Digits& d) {
    std::uint64_t code = 0, scale = 1;
    for (std::size_t i = 0; i < d.size(); ++i) {
      code += d[i] * scale;
      scale *= p;
    }
    return static_cast<std::uint32_t>(code);
  };

  const std::uint32_t order = q_ - 1;
  const auto order_primes = prime_factors_u64(order);
  generator_ = Elem{1};
  for (std::uint32_t c = 1; c < q_; ++c) {
    const Digits g = to_digits(c);
    bool primitive = true;
    for (std::uint64_t r : order_primes) {
      if (powmod_raw(g, order / r, modulus_, p) == Digits{1}) {
        primitive = false;
        break;
      }
    }
    if (primitive) {
      generator_ = Elem{c};
      break;
    }
  }

  exp_.assign(2 * std::size_t{order}, 0);
  log_.assign(q_, kNoLog);
  {
    const Digits g = to_digits(generator_.code);
    Digits cur{1};
    for (std::uint32_t i = 0; i < order; ++i) {
      const std::uint32_t code = to_code(cur);
      exp_[i] = code;
      exp_[i + order] = code;
      log_[code] = i;
      cur = mulmod_raw(cur, g, modulus_, p);
    }
  }

  neg_.assign(q_, 0);
  for (std::uint32_t c = 0; c < q_; ++c) {
    Digits d = to_digits(c);
    for (auto& x : d) x = (p - x) % p;
    neg_[c] = to_code(d);
  }

  if (q_ <= 1024) {
    add_table_.assign(std::size_t{q_} * q_, 0);
    for (std::uint32_t a = 0; a < q_; ++a) {
      for (std::uint32_t b = 0; b < q_; ++b) {
        std::uint32_t x = a, y = b, code = 0, scale = 1;
        for (unsigned i = 0; i < k; ++i) {
          code += ((x % p + y % p) % p) * scale;
          x /= p;
          y /= p;
          scale *= p;
        }
        add_table_[std::size_t{a} * q_ + b] = code;
      }
    }
  } else if (k_ > 1) {
    zech_.assign(order, kNoLog);
    for (std::uint32_t i = 0; i < order; ++i) {
      const std::uint32_t x = exp_[i];
      const std::uint32_t d0 = x % p;
      const std::uint32_t one_plus = x - d0 + (d0 + 1) % p;
      zech_[i] = one_plus == 0 ? kNoLog : log_[one_plus];
    }
  }

  frob_.assign(q_, 0);
  frob_inv_.assign(q_, 0);
  for (std::uint32_t c = 1; c < q_; ++c) {
    const std::uint32_t img = exp_[static_cast<std::uint64_t>(log_[c]) * p % order];
    frob_[c] = img;
    frob_inv_[img] = c;
  }

  trace_.assign(q_, 0);
  for (std::uint32_t c = 0; c < q_; ++c) {
    Elem acc = zero(), x{c};
    for (unsigned i = 0; i < k; ++i) {
      acc = add(acc, x);
      x = frobenius(x);
    }
    trace_[c] = acc.code;  // lies in the prime subfield
  }

  quad_.assign(q_, 0);
  if (p_ != 2) {
    for (std::uint32_t c = 1; c < q_; ++c) quad_[c] = (log_[c] % 2 == 0) ? 1 : -1;
  }
}

Elem Field::add_slow(Elem a, Elem b) const {
  if (k_ == 1) return Elem{static_cast<std::uint32_t>((std::uint64_t{a.code} + b.code) % p_)};
  if (a.code == 0) return b;
  if (b.code == 0) return a;
  const std::uint32_t order = q_ - 1;
  const std::uint32_t la = log_[a.code];
  const std::uint32_t diff = (log_[b.code] + order - la) % order;
  const std::uint32_t z = zech_[diff];
  if (z == kNoLog) return zero();
  return Elem{exp_[la + z]};
}

Elem Field::from_int(long long n) const {
  long long r = n % static_cast<long long>(p_);
  if (r < 0) r += p_;
  return Elem{static_cast<std::uint32_t>(r)};
}

Elem Field::from_digits(std::span<const std::uint32_t> digits) const {
  if (digits.size() > k_) throw DomainError("too many digits for an element of " + name());
  std::uint64_t code = 0, scale = 1;
  for (std::uint32_t d : digits) {
    if (d >= p_) throw DomainError("digit out of range for " + name());
    code += d * scale;
    scale *= p_;
  }
  return Elem{static_cast<std::uint32_t>(code)};
}

std::vector<std::uint32_t> Field::digits(Elem x) const {
  std::vector<std::uint32_t> d(k_, 0);
  std::uint32_t c = x.code;
  for (unsigned i = 0; i < k_; ++i) {
    d[i] = c % p_;
    c /= p_;
  }
  return d;
}

Elem Field::inv(Elem a) const {
  if (a.code == 0) throw DivisionByZero("inverse of zero in " + name());
  const std::uint32_t order = q_ - 1;
  return Elem{exp_[(order - log_[a.code]) % order]};
}

Elem Field::pow(Elem a, std::uint64_t e) const {
  if (e == 0) return one();
  if (a.code == 0) return zero();
  const std::uint64_t order = q_ - 1;
  return Elem{exp_[(std::uint64_t{log_[a.code]} * (e % order)) % order]};
}

int Field::quad_char(Elem x) const {
  if (p_ == 2) throw Unsupported("quadratic character requires odd characteristic");
  return quad_[x.code];
}

std::uint32_t Field::dlog(Elem x) const {
  if (x.code == 0) throw DomainError("discrete log of zero");
  return log_[x.code];
}

std::string Field::name() const {
  std::ostringstream os;
  os << "GF(" << p_;
  if (k_ > 1) os << "^" << k_;
  os << ")";
  return os.str();
}

}  // namespace ffm
