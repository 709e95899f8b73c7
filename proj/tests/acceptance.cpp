// Runs every acceptance criterion and prints one PASS/FAIL line per criterion.
// Exit status is nonzero when a criterion fails that is not listed in
// kKnownFailures; known failures still print FAIL with their measurements.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "ffmobius/arith.hpp"
#include "ffmobius/experiments.hpp"

using namespace ffm;

namespace {

// Criteria measured to fail at desk scale; the full analysis lives with the
// project notes.
const std::set<int> kKnownFailures = {7, 11};

struct Outcome {
  bool pass = true;
  std::ostringstream note;
};

using Criterion = std::function<void(Outcome&)>;

std::shared_ptr<const Field> field(std::uint32_t p, unsigned k = 1) { return Field::make(p, k); }

mpq_class exact_of(const Json& j) { return mpq_class(j["exact"].get<std::string>()); }

void require(Outcome& o, const Report& r) {
  if (!r.passed() || !r.ok) {
    o.pass = false;
    o.note << " [" << r.experiment << " failed: " << r.to_json().dump() << "]";
  }
}

void check_mobius_oracle(Outcome& o) {
  std::uint64_t checked = 0;
  for (auto [p, k, max_d] : {std::tuple{3u, 1u, 6u}, {5u, 1u, 6u}, {7u, 1u, 6u}, {3u, 2u, 4u}}) {
    auto F = field(p, k);
    for (unsigned d = 0; d <= max_d; ++d) {
      const auto r = pellet_check(*F, d);
      require(o, r);
      checked += r.details["polynomials"].get<std::uint64_t>();
    }
  }
  o.note << checked << " polynomials, zero mismatches required";
}

void check_decomposition(Outcome& o) {
  const auto q3 = decomposition_sweep(*field(3), 1, 3, 3, 3);
  const auto q9 = decomposition_sweep(*field(3, 2), 1, 2, 1, 3);
  require(o, q3);
  require(o, q9);
  o.note << "q=3: " << q3.details["classes"] << " classes, q=9: " << q9.details["classes"]
         << " classes; counterexamples " << q3.value["counterexamples"] << "/" << q9.value["counterexamples"];
}

void check_char_sum_bound(Outcome& o) {
  const auto r = char_sum_sweep(*field(3, 2), 3);
  require(o, r);
  o.note << "violations " << r.value["violations"] << ", max ratio " << *r.ratio;
}

void check_zeta(Outcome& o) {
  for (auto F : {field(3), field(3, 2)})
    for (unsigned d = 0; d <= 6; ++d) require(o, zeta_identities(*F, d));
  o.note << "GF(3) and GF(9), d = 0..6";
}

void check_identities(Outcome& o) {
  const auto r = identity_sweep(*field(3), 6);
  require(o, r);
  o.note << r.details["polynomials"] << " polynomials, " << r.details["vaughan_checks"] << " Vaughan checks";
}

void check_complete_sums(Outcome& o) {
  const auto c = c_sum_sweep(*field(3), 3);
  require(o, c);
  o.note << "C(g,h) checks " << c.details["checks"];
  for (std::uint32_t p : {5u, 7u}) {
    const auto a = aggregate_sample(*field(p), 1, 10000);
    require(o, a);
    o.note << ", GF(" << p << ") aggregates " << a.details["nondegenerate"];
  }
  for (std::uint32_t p : {3u, 5u}) {
    const auto w = weil_sweep(*field(p), 2);
    require(o, w);
    o.note << ", GF(" << p << ") Kloosterman " << w.details["checks"];
  }
}

void check_series_consistency(Outcome& o) {
  auto F = field(3);
  for (const char* a : {"1", "T", "T+1"}) {
    o.note << "a=" << a << ":";
    mpq_class previous = -1;
    for (unsigned N = 4; N <= 8; ++N) {
      const auto r = singular_series_compare(parse_poly(*F, a), N);
      require(o, r);
      // Exact values; the report drops exact digits for very long rationals.
      const Poly ap = parse_poly(*F, a);
      const mpq_class gap = abs(singular_series(ap, N, SeriesMethod::EulerProduct).value -
                                singular_series(ap, N, SeriesMethod::CoefficientSum).value);
      o.note << " " << to_double(gap);
      if (previous >= 0 && gap >= previous) {
        o.pass = false;
        o.note << "(not decreasing)";
      }
      previous = gap;
    }
    o.note << "; ";
  }
}

void check_main_term(Outcome& o) {
  auto F = field(3);
  const Poly T = Poly::T(*F);
  mpq_class previous = -1;
  int plateaus = 0;
  for (unsigned d = 2; d <= 8; ++d) {
    const mpq_class diff = abs(exact_of(main_term_partial(d, T).details["difference"]));
    o.note << to_double(diff) << " ";
    if (previous >= 0 && diff > previous) o.pass = false;
    if (previous >= 0 && diff == previous) ++plateaus;
    previous = diff;
  }
  if (plateaus > 1) o.pass = false;
  o.note << "(plateaus " << plateaus << ")";
}

void check_twin_primes(Outcome& o) {
  auto F = field(3, 2);
  const Poly one = Poly::one(*F);
  double r2 = 0, r7 = 0;
  for (unsigned d = 2; d <= 7; ++d) {
    const auto r = twin_count(d, one);
    o.note << "d=" << d << " " << r.value << " ratio " << *r.ratio << "; ";
    if (d == 2) r2 = *r.ratio;
    if (d == 7) r7 = *r.ratio;
  }
  const auto small = twin_count(2, Poly::one(*field(3)));
  o.note << "GF(3) d=2 value " << small.value;
  o.pass = std::abs(r7 - 1) < std::abs(r2 - 1) && small.value == 6;
}

void check_derivative_ratios(Outcome& o) {
  auto F = field(3);
  std::uint64_t checks = 0;
  for (unsigned m = 0; m <= 2; ++m)
    for (auto M : monics(*F, m)) {
      if (!is_squarefree(M)) continue;
      for (auto a : polys_below(*F, m))
        for (unsigned d = 0; d <= 5; ++d) {
          require(o, derivative_ratio(d, M, a));
          ++checks;
        }
    }
  o.note << checks << " exact comparisons";
}

void check_sign_changes(Outcome& o) {
  auto F = field(3);
  int found = 0;
  const auto fs = random_monics(*F, 20, 10, kDefaultSeed);
  for (const auto& f : fs) {
    const auto r = sign_change_search(f, 0.5);
    if (*r.ok) {
      ++found;
    } else {
      o.pass = false;
      o.note << " [" << to_string(f) << ": plus " << (r.value["plus"].is_null() ? "missing" : "found") << ", minus "
             << (r.value["minus"].is_null() ? "missing" : "found") << ", mu counts " << r.details["mu_counts"].dump()
             << "]";
    }
  }
  o.note << " " << found << "/10 with both witnesses within the budget";
}

void check_determinism(Outcome& o) {
  auto F3 = field(3), F9 = field(3, 2);
  const Poly one = Poly::one(*F9), T = Poly::T(*F9);
  std::vector<std::function<Report(const RunOptions&)>> runs = {
      [&](const RunOptions& r) { return twin_count(5, one, std::nullopt, r); },
      [&](const RunOptions& r) { return chowla_sum(4, {{one, one}, {T, one}}, r); },
      [&](const RunOptions& r) { return mobius_inv_additive(4, parse_poly(*F9, "T^2+T"), one, r); },
      [&](const RunOptions& r) { return aggregate_sample(*field(7), 1, 2000, r); },
      [&](const RunOptions& r) { return char_sum_sweep(*F3, 3, r); },
      [&](const RunOptions& r) { return identity_sweep(*F3, 5, r); },
      [&](const RunOptions& r) { return pellet_check(*F9, 3, r); },
      [&](const RunOptions& r) { return c_sum_sweep(*F3, 2, r); },
      [&](const RunOptions& r) { return decomposition_sweep(*F3, 1, 2, 2, 3, r); },
      [&](const RunOptions& r) { return mobius_ap_sum(6, parse_poly(*F9, "T^2+1"), T, r); },
  };
  int identical = 0;
  for (auto& run : runs) {
    const std::string base = run(RunOptions{1, kDefaultSeed}).to_json().dump();
    bool same = true;
    for (unsigned threads : {2u, 4u}) same = same && run(RunOptions{threads, kDefaultSeed}).to_json().dump() == base;
    identical += same;
    if (!same) o.pass = false;
  }
  o.note << identical << "/" << runs.size() << " experiments byte-identical at 1, 2 and 4 threads";
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, Criterion>> criteria = {
      {"Mobius via discriminant matches factorization", check_mobius_oracle},
      {"decomposition verified on every class", check_decomposition},
      {"short character sum bound, GF(9)", check_char_sum_bound},
      {"exact zeta identities", check_zeta},
      {"convolution and Vaughan identities", check_identities},
      {"complete sum bounds", check_complete_sums},
      {"singular series truncations agree and converge", check_series_consistency},
      {"partial main term converges", check_main_term},
      {"twin prime ratios trend to 1", check_twin_primes},
      {"derivative class ratio bound", check_derivative_ratios},
      {"sign changes on degree 20 random polynomials", check_sign_changes},
      {"thread-count determinism", check_determinism},
  };
  int unexpected = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = static_cast<int>(i) + 1;
    Outcome o;
    const auto start = std::chrono::steady_clock::now();
    try {
      criteria[i].second(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.note << " exception: " << e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool known = kKnownFailures.count(id) > 0;
    if (!o.pass && !known) ++unexpected;
    std::printf("criterion %2d: %s  %s (%.1f s)%s\n  %s\n", id, o.pass ? "PASS" : "FAIL", criteria[i].first, secs,
                !o.pass && known ? " [known failure]" : "", o.note.str().c_str());
    std::fflush(stdout);
  }
  std::printf("%d unexpected failure(s)\n", unexpected);
  return unexpected == 0 ? 0 : 1;
}
