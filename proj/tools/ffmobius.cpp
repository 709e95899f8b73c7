// Command-line front end: one JSON line (or CSV row) per report.

#include <chrono>
#include <cstdlib>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "CLI11.hpp"

#include "ffmobius/arith.hpp"
#include "ffmobius/characters.hpp"
#include "ffmobius/decomposition.hpp"
#include "ffmobius/experiments.hpp"

using namespace ffm;

namespace {

struct Common {
  std::string q;
  std::uint32_t p = 0;
  unsigned k = 1;
  std::string modulus;
  std::string out = "json";
  std::uint64_t seed = kDefaultSeed;
  unsigned threads = 1;
  std::string d_range;
  std::optional<unsigned> d;
  bool timing = false;
};

FieldPtr make_field(const Common& c) {
  std::vector<std::uint32_t> digits;
  std::uint32_t p = c.p;
  unsigned k = c.k;
  if (!c.q.empty()) {
    std::tie(p, k) = Field::parse_size(c.q);
  }
  if (p == 0) throw DomainError("give the field with --q P^K or --p P --k K");
  if (!c.modulus.empty()) {
    if (c.modulus.find_first_not_of("0123456789, ") == std::string::npos) {
      // Digits c0,c1,...,ck, low to high.
      std::stringstream ss(c.modulus);
      for (std::string item; std::getline(ss, item, ',');) digits.push_back(static_cast<std::uint32_t>(std::stoul(item)));
    } else {
      const auto prime = Field::make(p, 1);
      const Poly m = parse_poly(*prime, c.modulus);
      for (Elem e : m.coeffs()) digits.push_back(e.code);
    }
  }
  return Field::make(p, k, digits);
}

std::vector<unsigned> degrees(const Common& c) {
  if (!c.d_range.empty()) {
    const auto dots = c.d_range.find("..");
    if (dots == std::string::npos) throw DomainError("--d-range expects lo..hi");
    const auto lo = static_cast<unsigned>(std::stoul(c.d_range.substr(0, dots)));
    const auto hi = static_cast<unsigned>(std::stoul(c.d_range.substr(dots + 2)));
    if (lo > hi) throw DomainError("--d-range has lo > hi");
    std::vector<unsigned> out;
    for (unsigned d = lo; d <= hi; ++d) out.push_back(d);
    return out;
  }
  if (!c.d) throw DomainError("give --d or --d-range");
  return {*c.d};
}

std::vector<AffinePair> parse_pairs(const Field& F, const std::vector<std::string>& specs) {
  std::vector<AffinePair> out;
  for (const auto& s : specs) {
    const auto colon = s.find(':');
    if (colon == std::string::npos) throw DomainError("--pair expects a:M, got " + s);
    out.emplace_back(parse_poly(F, s.substr(0, colon)), parse_poly(F, s.substr(colon + 1)));
  }
  return out;
}

DirichletCharacter parse_character(const Poly& g, const std::string& spec) {
  const auto group = CharacterGroup::make(g);
  if (spec == "principal") return group->principal();
  if (spec == "quadratic") return group->quadratic();
  if (spec.rfind("index:", 0) == 0) return group->character(std::stoull(spec.substr(6)));
  if (spec.rfind("idx:", 0) == 0) {
    std::vector<std::uint64_t> exps;
    std::stringstream ss(spec.substr(4));
    for (std::string part; std::getline(ss, part, ',');) exps.push_back(std::stoull(part));
    return group->character(std::move(exps));
  }
  throw DomainError("--char expects principal, quadratic, idx:e1,...,er or index:N");
}

std::string csv_field(const Json& j) {
  std::string s = j.is_string() ? j.get<std::string>() : j.dump();
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

void emit(const Common& c, const std::vector<Report>& reports) {
  if (c.out == "csv") {
    std::cout << "experiment,p,k,params,value,reference,ratio,ok\n";
    for (const auto& r : reports) {
      const Json j = r.to_json();
      std::cout << r.experiment << ',' << r.p << ',' << r.k << ',' << csv_field(j["params"]) << ','
                << csv_field(j["value"]) << ',' << csv_field(j["reference"]) << ','
                << (r.ratio ? Json(*r.ratio).dump() : "") << ',' << (r.ok ? (*r.ok ? "true" : "false") : "")
                << '\n';
    }
    return;
  }
  for (const auto& r : reports) std::cout << r.to_json().dump() << '\n';
}

Report timed(const Common& c, const std::function<Report()>& run) {
  const auto start = std::chrono::steady_clock::now();
  Report r = run();
  if (c.timing)
    r.runtime_ms =
        std::chrono::duration_cast<std::chrono::milliseconds>(std::chrono::steady_clock::now() - start).count();
  return r;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact experiments with Mobius and von Mangoldt sums over F_q[T]"};
  app.require_subcommand(1);

  Common c;
  // Experiment-specific inputs, shared by name across subcommands.
  std::string g_s, f_s, a_s, M_s = "1", h_s = "1", A_s = "1", P_s, chr = "quadratic", rprime_s = "0";
  std::vector<std::string> pair_s;
  unsigned t = 0, n = 1, alpha = 0, beta = 0, max_deg = 2, max_m = 1, max_k = 2, deg = 1, random_degree = 0;
  std::optional<unsigned> sing_trunc;
  std::uint64_t samples = 10000, random_count = 1;
  double eta = 0.5, sq_alpha = 0.1;
  bool verify = false;

  std::vector<Report> reports;
  std::function<void(const Field&)> action;

  auto sub = [&](const std::string& name, const std::string& help) {
    CLI::App* s = app.add_subcommand(name, help);
    s->add_option("--q", c.q, "field size P^K");
    s->add_option("--p", c.p, "characteristic");
    s->add_option("--k", c.k, "extension degree");
    s->add_option("--modulus", c.modulus, "defining polynomial over GF(p): digits c0,...,ck or a literal");
    s->add_option("--out", c.out, "json or csv")->check(CLI::IsMember({"json", "csv"}));
    s->add_option("--seed", c.seed, "seed for sampled experiments");
    s->add_option("--threads", c.threads, "worker threads, 0 = all cores");
    s->add_flag("--timing", c.timing, "record runtime_ms");
    return s;
  };
  auto with_degree = [&](CLI::App* s) {
    s->add_option("--d", c.d, "degree");
    s->add_option("--d-range", c.d_range, "degree sweep lo..hi");
  };
  auto run_degrees = [&](const std::function<Report(unsigned)>& f) {
    for (unsigned d : degrees(c)) reports.push_back(timed(c, [&] { return f(d); }));
  };
  auto options = [&] { return RunOptions{c.threads, c.seed}; };

  {
    auto* s = sub("char_sum_check", "|sum_{d(h)<t} chi(f+h)| against the short-interval bound");
    s->add_option("--g", g_s)->required();
    s->add_option("--f", f_s)->required();
    s->add_option("--t", t)->required();
    s->add_option("--char", chr, "principal|quadratic|idx:e1,..,er|index:N");
    s->callback([&] {
      action = [&](const Field& F) {
        const Poly g = parse_poly(F, g_s);
        reports.push_back(timed(c, [&] { return char_sum_check(parse_character(g, chr), parse_poly(F, f_s), t); }));
      };
    });
  }
  {
    auto* s = sub("char_sum_sweep", "the short-interval bound for all squarefree g, characters, f and t");
    s->add_option("--max-deg", max_deg);
    s->callback([&] { action = [&](const Field& F) { reports.push_back(timed(c, [&] { return char_sum_sweep(F, max_deg, options()); })); }; });
  }
  {
    auto* s = sub("rk_bound", "r(f, g, t) over the splitting field of g");
    s->add_option("--f", f_s)->required();
    s->add_option("--g", g_s)->required();
    s->add_option("--t", t)->required();
    s->callback([&] {
      action = [&](const Field& F) { reports.push_back(timed(c, [&] { return rk_bound(parse_poly(F, f_s), parse_poly(F, g_s), t); })); };
    });
  }
  {
    auto* s = sub("chowla_sum", "sum_{g in M_d} prod mu(a_i + g M_i)");
    with_degree(s);
    s->add_option("--pair", pair_s, "a:M, repeatable")->required();
    s->callback([&] {
      action = [&](const Field& F) {
        const auto pairs = parse_pairs(F, pair_s);
        run_degrees([&](unsigned d) { return chowla_sum(d, pairs, options()); });
      };
    });
  }
  for (const std::string name : {"mobius_ap_sum", "lambda_ap_sum"}) {
    auto* s = sub(name, "sum over f in M_D, f = a mod M (D given by --d)");
    with_degree(s);
    s->add_option("--M", M_s)->required();
    s->add_option("--a", a_s)->required();
    s->callback([&, name] {
      action = [&, name](const Field& F) {
        const Poly M = parse_poly(F, M_s), a = parse_poly(F, a_s);
        run_degrees([&](unsigned D) {
          return name == "mobius_ap_sum" ? mobius_ap_sum(D, M, a, options()) : lambda_ap_sum(D, M, a, options());
        });
      };
    });
  }
  {
    auto* s = sub("mobius_prime_power_ap", "sum of mu(f) over f in M_D with f = 1 mod P^n");
    with_degree(s);
    s->add_option("--P", P_s)->required();
    s->add_option("--n", n);
    s->callback([&] {
      action = [&](const Field& F) {
        const Poly P = parse_poly(F, P_s);
        run_degrees([&](unsigned D) { return mobius_prime_power_ap(D, P, n, options()); });
      };
    });
  }
  {
    auto* s = sub("mobius_lambda_corr", "sum_{g in M_d} Lambda(a + gM) prod mu(a_i + g M_i)");
    with_degree(s);
    s->add_option("--a", a_s)->required();
    s->add_option("--M", M_s);
    s->add_option("--pair", pair_s, "a:M, repeatable");
    s->callback([&] {
      action = [&](const Field& F) {
        const AffinePair lead{parse_poly(F, a_s), parse_poly(F, M_s)};
        const auto pairs = parse_pairs(F, pair_s);
        run_degrees([&](unsigned d) { return mobius_lambda_corr(d, lead, pairs, options()); });
      };
    });
  }
  {
    auto* s = sub("mobius_inv_additive", "sum of mu(g) psi_h(1/g) over g in M_d coprime to M");
    with_degree(s);
    s->add_option("--M", M_s)->required();
    s->add_option("--psi-h", h_s, "twist of the additive character");
    s->callback([&] {
      action = [&](const Field& F) {
        const Poly M = parse_poly(F, M_s), h = parse_poly(F, h_s);
        run_degrees([&](unsigned d) { return mobius_inv_additive(d, M, h, options()); });
      };
    });
  }
  {
    auto* s = sub("identity_sweep", "convolution and Vaughan identities for all monic f of degree <= max-deg");
    s->add_option("--max-deg", max_deg);
    s->callback([&] { action = [&](const Field& F) { reports.push_back(timed(c, [&] { return identity_sweep(F, max_deg, options()); })); }; });
  }
  {
    auto* s = sub("vaughan_check", "Vaughan's identity for one f");
    s->add_option("--f", f_s)->required();
    s->add_option("--alpha", alpha);
    s->add_option("--beta", beta);
    s->callback([&] {
      action = [&](const Field& F) {
        const Poly f = parse_poly(F, f_s);
        reports.push_back(timed(c, [&] {
          Report r;
          r.experiment = "vaughan_check";
          r.p = F.p();
          r.k = F.k();
          r.modulus = F.modulus();
          r.params = Json{{"f", to_string(f)}, {"alpha", alpha}, {"beta", beta}};
          r.value = mobius(f);
          r.ok = vaughan_check(f, alpha, beta) && convolution_check(f);
          return r;
        }));
      };
    });
  }
  {
    auto* s = sub("main_term_partial", "sum_{k<=d} k q^-k sum_{A in M_k,(A,M)=1} mu(A) against -q^m/phi(M)");
    with_degree(s);
    s->add_option("--M", M_s);
    s->callback([&] {
      action = [&](const Field& F) {
        const Poly M = parse_poly(F, M_s);
        run_degrees([&](unsigned d) { return main_term_partial(d, M); });
      };
    });
  }
  {
    auto* s = sub("twin_count", "sum_{f in M_d} Lambda(f) Lambda(f + a) against S_q(a) q^d");
    with_degree(s);
    s->add_option("--a", a_s)->required();
    s->add_option("--sing-trunc", sing_trunc, "singular series truncation (default d)");
    s->callback([&] {
      action = [&](const Field& F) {
        const Poly a = parse_poly(F, a_s);
        run_degrees([&](unsigned d) { return twin_count(d, a, sing_trunc, options()); });
      };
    });
  }
  {
    auto* s = sub("singular_series", "Euler product against coefficient sum; --d is the truncation");
    with_degree(s);
    s->add_option("--a", a_s)->required();
    s->callback([&] {
      action = [&](const Field& F) {
        const Poly a = parse_poly(F, a_s);
        run_degrees([&](unsigned N) { return singular_series_compare(a, N); });
      };
    });
  }
  {
    auto* s = sub("derivative_ratio", "share of derivatives g' of g in M_d with g' = a mod M");
    with_degree(s);
    s->add_option("--M", M_s);
    s->add_option("--a", a_s)->required();
    s->callback([&] {
      action = [&](const Field& F) {
        const Poly M = parse_poly(F, M_s), a = parse_poly(F, a_s);
        run_degrees([&](unsigned d) { return derivative_ratio(d, M, a); });
      };
    });
  }
  {
    auto* s = sub("square_class_count", "#{g : d(g) < d, a + gM = lambda A B^2}");
    with_degree(s);
    s->add_option("--M", M_s);
    s->add_option("--A", A_s);
    s->add_option("--a", a_s)->required();
    s->add_option("--alpha", sq_alpha);
    s->callback([&] {
      action = [&](const Field& F) {
        const Poly M = parse_poly(F, M_s), A = parse_poly(F, A_s), a = parse_poly(F, a_s);
        run_degrees([&](unsigned d) { return square_class_count(d, M, A, a, sq_alpha); });
      };
    });
  }
  {
    auto* s = sub("sign_change_search", "mu = 1 and mu = -1 among low-degree perturbations (characteristic 3)");
    s->add_option("--f", f_s);
    s->add_option("--random-degree", random_degree, "draw random monic f of this degree from --seed");
    s->add_option("--count", random_count, "number of random f");
    s->add_option("--eta", eta);
    s->callback([&] {
      action = [&](const Field& F) {
        if (!f_s.empty()) {
          reports.push_back(timed(c, [&] { return sign_change_search(parse_poly(F, f_s), eta); }));
          return;
        }
        if (random_degree == 0) throw DomainError("give --f or --random-degree");
        for (const Poly& f : random_monics(F, random_degree, random_count, c.seed)) {
          reports.push_back(timed(c, [&] {
            Report r = sign_change_search(f, eta);
            r.seed = c.seed;
            return r;
          }));
        }
      };
    });
  }
  {
    auto* s = sub("decompose", "mu(a + gM) = S chi(w + g) on the class g' = rprime");
    s->add_option("--a", a_s)->required();
    s->add_option("--M", M_s);
    s->add_option("--rprime", rprime_s);
    s->add_option("--d", c.d)->required();
    s->add_flag("--verify", verify, "check every class member against the factoring Mobius function");
    s->callback([&] {
      action = [&](const Field& F) {
        reports.push_back(timed(c, [&] {
          return decomposition_report(
              decompose(parse_poly(F, a_s), parse_poly(F, M_s), parse_poly(F, rprime_s), *c.d), verify);
        }));
      };
    });
  }
  {
    auto* s = sub("decomposition_sweep", "decompose and verify every admissible class");
    s->add_option("--max-m", max_m);
    s->add_option("--max-k", max_k);
    with_degree(s);
    s->callback([&] {
      action = [&](const Field& F) {
        const auto ds = degrees(c);
        reports.push_back(timed(c, [&] { return decomposition_sweep(F, max_m, max_k, ds.front(), ds.back(), options()); }));
      };
    });
  }
  {
    auto* s = sub("zeta_identities", "sum mu and sum Lambda over M_d");
    with_degree(s);
    s->callback([&] { action = [&](const Field& F) { run_degrees([&](unsigned d) { return zeta_identities(F, d, options()); }); }; });
  }
  {
    auto* s = sub("pellet_check", "discriminant Mobius against factoring on M_d");
    with_degree(s);
    s->callback([&] { action = [&](const Field& F) { run_degrees([&](unsigned d) { return pellet_check(F, d, options()); }); }; });
  }
  {
    auto* s = sub("weil_sweep", "Kloosterman sums at prime moduli against 2 sqrt|P|");
    s->add_option("--max-deg", max_deg);
    s->callback([&] { action = [&](const Field& F) { reports.push_back(timed(c, [&] { return weil_sweep(F, max_deg); })); }; });
  }
  {
    auto* s = sub("c_sum_sweep", "complete sums C(g, h) against d_2(M) sqrt(|M| |gcd(M,g,h)|)");
    s->add_option("--max-deg", max_deg);
    s->callback([&] { action = [&](const Field& F) { reports.push_back(timed(c, [&] { return c_sum_sweep(F, max_deg, options()); })); }; });
  }
  {
    auto* s = sub("aggregate_sample", "sampled six-shift Kloosterman aggregates against 16 |A|");
    s->add_option("--deg", deg);
    s->add_option("--samples", samples);
    s->callback([&] {
      action = [&](const Field& F) { reports.push_back(timed(c, [&] { return aggregate_sample(F, deg, samples, options()); })); };
    });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  try {
    const auto F = make_field(c);
    action(*F);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  emit(c, reports);
  for (const auto& r : reports)
    if (!r.passed()) return 1;
  return 0;
}
