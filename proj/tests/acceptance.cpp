// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit if any
// criterion fails.
#include <chrono>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "sfenc/encoder.hpp"
#include "sfenc/sn.hpp"
#include "sfenc/workbench.hpp"

namespace {

using namespace sfenc;

struct Verdict {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  int number;
  std::string title;
  double limit_seconds;
  std::function<Verdict()> run;
};

// -- 1 ---------------------------------------------------------------------------------

Verdict rule_set() {
  const auto& sys = trs::sf_applicative_system();
  auto canon = trs::check_canonical(sys);
  auto orth = trs::check_orthogonal(sys);
  std::ostringstream d;
  d << sys.rules.size() << " rules, canonical=" << canon.canonical << " complete=" << canon.complete
    << " orthogonal=" << orth.orthogonal();
  return {sys.rules.size() == 12 && canon.canonical && canon.complete && orth.orthogonal(), d.str()};
}

// -- 2 ---------------------------------------------------------------------------------

struct Family {
  std::string name;
  std::size_t required_steps;
  std::vector<std::string> displayed;  // every term of the displayed sequence
};

std::vector<Family> displayed_families() {
  return {
      {"S", 3,
       {"app(app(app(S0, M), N), X)", "app(app(S1(M), N), X)", "app(S2(M, N), X)", "app(app(M, X), app(N, X))"}},
      {"F atomic", 4,
       {"app(app(app(F0, S0), M), N)", "app(app(F1(S0), M), N)", "app(F2(S0, M), N)", "f-reduce(S0, M, N)", "M"}},
      {"F (S X)", 5,
       {"app(app(app(F0, app(S0, X)), M), N)", "app(app(app(F0, S1(X)), M), N)", "app(app(F1(S1(X)), M), N)",
        "app(F2(S1(X), M), N)", "f-reduce(S1(X), M, N)", "app(app(N, S0), X)"}},
      {"F (S X Y)", 7,
       {"app(app(app(F0, app(app(S0, X), Y)), M), N)", "app(app(app(F0, app(S1(X), Y)), M), N)",
        "app(app(app(F0, S2(X, Y)), M), N)", "app(app(F1(S2(X, Y)), M), N)", "app(F2(S2(X, Y), M), N)",
        "f-reduce(S2(X, Y), M, N)", "app(app(N, app(S0, X)), Y)"}},
  };
}

Verdict golden_traces() {
  const auto& sys = trs::sf_applicative_system();
  bool verbatim = true, counts = true;
  std::ostringstream d;
  for (const auto& fam : displayed_families()) {
    trs::Term start = trs::parse_term(sys.signature, fam.displayed.front());
    trs::Trace guided = trs::simulate_redex(start, {});
    auto innermost = trs::normalize(sys, start, fam.displayed.size() - 1, trs::Strategy::LeftmostInnermost);
    bool same = guided.steps.size() + 1 == fam.displayed.size() &&
                innermost.trace.steps.size() == guided.steps.size();
    for (std::size_t i = 0; same && i < guided.steps.size(); ++i) {
      same = guided.steps[i].after == trs::parse_term(sys.signature, fam.displayed[i + 1]) &&
             innermost.trace.steps[i].after == guided.steps[i].after;
    }
    verbatim = verbatim && same;
    counts = counts && guided.steps.size() == fam.required_steps;
    d << fam.name << ": " << guided.steps.size() << " steps (required " << fam.required_steps << ")"
      << (same ? "" : " SEQUENCE DIFFERS") << "; ";
  }
  d << (verbatim ? "all sequences match the displayed ones" : "sequence mismatch");
  if (!counts) d << "; the displayed two-argument sequence itself has 6 arrows, so 7 is not reachable";
  return {verbatim && counts, d.str()};
}

// -- 3 ---------------------------------------------------------------------------------

const char* kPeano = R"(
constructors: zero/0 succ/1
programs: add/2
rule add(zero, x) = x
rule add(succ(x), y) = succ(add(x, y))
)";

Verdict interpretation() {
  const auto& sf = enc::sf_representation();
  auto a = enc::verify_solution(sf.artifacts.system, sf.rep, 500);
  auto peano = enc::build_canonical_representation(trs::parse_system(kPeano));
  auto b = enc::verify_solution(peano.artifacts.system, peano.rep, 500);
  std::size_t pass = 0, total = 0;
  for (const auto* report : {&a, &b}) {
    for (const auto& r : report->rules) {
      ++total;
      pass += r.verdict == enc::Verdict::Pass;
    }
  }
  return {total == 14 && pass == 14, std::to_string(pass) + "/" + std::to_string(total) + " rules pass"};
}

// -- 4 ---------------------------------------------------------------------------------

Verdict simulation() {
  wb::SimOptions opts;
  opts.seed = 2024;
  opts.max_size = 10;
  opts.sf_fuel = 20;
  opts.beta_fuel = 100'000;
  opts.count = 1000;
  wb::RunReport report;
  // Terms that need more than 20 SF steps do not count toward the 1000.
  while (true) {
    report = wb::check_sim(opts);
    std::size_t checked = report.stats["checked"].get<std::size_t>();
    if (checked >= 1000) break;
    opts.count += 1000 - checked;
  }
  std::ostringstream d;
  d << report.stats["checked"] << " checked, " << report.stats["mismatch"] << " mismatches, "
    << report.stats["inconclusive"] << " inconclusive, " << report.stats["skipped"] << " skipped";
  return {report.outcome == wb::Outcome::Pass, d.str()};
}

// -- 5 ---------------------------------------------------------------------------------

Verdict sn_preservation() {
  wb::SnOptions opts;
  opts.max_size = 6;
  opts.budget = 100'000;
  auto report = wb::check_sn(opts);
  std::ostringstream d;
  d << report.stats["terms"] << " normal forms: " << report.stats["sn"] << " SN, " << report.stats["not_sn"]
    << " not SN, " << report.stats["unknown"] << " unknown";
  return {report.outcome == wb::Outcome::Pass, d.str()};
}

// -- 6 ---------------------------------------------------------------------------------

Verdict divergence() {
  sf::Term i = sf::parse_term("S (F F) (F F)");
  sf::Term omega = sf::Term::s()(i)(i);
  sf::Term w = omega(omega);
  auto sf_run = sf::normalize(w, wb::kDefaultRewriteFuel);
  auto trs_run = trs::normalize(trs::sf_applicative_system(), trs::translate_sf(w), wb::kDefaultRewriteFuel);
  auto lam_run = lam::normalize_beta(enc::encode_sf(w), wb::kDefaultBetaFuel);
  auto cycle = sf::find_cycle(w, 100'000);
  bool closed = cycle && !cycle->steps.empty() && cycle->steps.front().before == cycle->steps.back().after &&
                sf::replay(sf::Trace{cycle->steps}).has_value();
  std::ostringstream d;
  d << "sf " << (sf_run.normal ? "NORMAL" : "exhausted") << " after " << sf_run.steps() << ", trs "
    << (trs_run.normal ? "NORMAL" : "exhausted") << " after " << trs_run.steps() << ", lambda "
    << (lam_run.normal ? "NORMAL" : "exhausted") << " after " << lam_run.steps << ", sf cycle "
    << (closed ? "of length " + std::to_string(cycle->steps.size()) : std::string("not found"));
  return {!sf_run.normal && !trs_run.normal && !lam_run.normal && closed, d.str()};
}

// -- 7 ---------------------------------------------------------------------------------

Verdict k_behaviour() {
  std::size_t ok = 0;
  for (std::uint64_t p = 0; p < 100; ++p) {
    std::uint64_t seed = wb::derive_seed(77, p);
    sf::Term m = wb::gen_sf_normal(wb::derive_seed(seed, 1), 1 + seed % 8);
    sf::Term n = wb::gen_sf_normal(wb::derive_seed(seed, 2), 1 + (seed >> 8) % 8);
    sf::Term t = sf::parse_term("F F")(m)(n);
    auto r = sf::normalize(t, wb::kDefaultRewriteFuel);
    auto a = lam::normalize_beta(enc::encode_sf(t), wb::kDefaultBetaFuel);
    auto b = lam::normalize_beta(enc::encode_sf(m), wb::kDefaultBetaFuel);
    ok += r.normal && r.term == m && a.normal && b.normal && a.term == b.term;
  }
  return {ok == 100, std::to_string(ok) + "/100 pairs"};
}

// -- 8 ---------------------------------------------------------------------------------

Verdict peano() {
  auto sys = trs::parse_system(kPeano);
  auto rep = enc::build_canonical_representation(sys);
  auto numeral = [](int k) {
    trs::Term t = trs::Term::apply("zero");
    for (int i = 0; i < k; ++i) t = trs::Term::apply("succ", {t});
    return t;
  };
  int ok = 0;
  for (int a = 0; a <= 3; ++a) {
    for (int b = 0; b <= 3; ++b) {
      trs::Term sum = trs::Term::apply("add", {numeral(a), numeral(b)});
      trs::Term expected = numeral(a + b);  // integer arithmetic
      auto rewritten = trs::normalize(sys, sum, wb::kDefaultRewriteFuel);
      auto encoded = lam::normalize_beta(enc::apply_representation(rep.rep, sum), wb::kDefaultBetaFuel);
      auto target = lam::normalize_beta(enc::apply_representation(rep.rep, expected), wb::kDefaultBetaFuel);
      ok += rewritten.normal && rewritten.term == expected && encoded.normal && target.normal &&
            encoded.term == target.term;
    }
  }
  return {ok == 16, std::to_string(ok) + "/16 sums"};
}

// -- 9 ---------------------------------------------------------------------------------

Verdict identities() {
  int ok = 0;
  for (const char* x : {"S", "F", "S F"}) {
    sf::Term id = sf::parse_term(std::string("S (F F) (") + x + ")");
    for (std::uint64_t k = 0; k < 50; ++k) {
      std::uint64_t seed = wb::derive_seed(99, k);
      sf::Term m = wb::gen_sf_normal(seed, 1 + seed % 10);
      auto r = sf::normalize(id(m), wb::kDefaultRewriteFuel);
      ok += r.normal && r.term == m;
    }
  }
  return {ok == 150, std::to_string(ok) + "/150 applications"};
}

}  // namespace

int main() {
  std::vector<Criterion> criteria = {
      {1, "fixed rule set is canonical, complete and orthogonal", 1, rule_set},
      {2, "simulation golden traces", 1, golden_traces},
      {3, "representation solves every rule", 10, interpretation},
      {4, "end-to-end simulation on 1000 seeded terms", 300, simulation},
      {5, "encodings of normal forms up to size 6 are SN", 600, sn_preservation},
      {6, "omega omega diverges in every layer", 600, divergence},
      {7, "F F behaves as K", 600, k_behaviour},
      {8, "encoded Peano addition", 30, peano},
      {9, "S (F F) X is an identity", 600, identities},
  };
  int failures = 0;
  for (const auto& c : criteria) {
    auto start = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = c.run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    bool in_time = seconds <= c.limit_seconds;
    bool pass = v.pass && in_time;
    failures += !pass;
    std::printf("%s criterion %d: %s -- %s (%.2f s%s)\n", pass ? "PASS" : "FAIL", c.number, c.title.c_str(),
                v.detail.c_str(), seconds, in_time ? "" : ", over time limit");
    std::fflush(stdout);
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
