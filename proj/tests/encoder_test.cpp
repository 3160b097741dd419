#include "sfenc/encoder.hpp"

#include <gtest/gtest.h>

#include <fstream>
#include <random>
#include <sstream>
#include <unordered_set>

#include "sfenc/error.hpp"
#include "test_support.hpp"

namespace sfenc::enc {
namespace {

using lam::Term;

const char* kPeano = R"(
constructors: zero/0 succ/1
programs: add/2
rule add(zero, y) = y
rule add(succ(x), y) = succ(add(x, y))
)";

Term L(std::string_view text) { return lam::parse_term(text); }

// Parse with named placeholders replaced by given terms.
Term L(std::string_view text, std::initializer_list<std::pair<const char*, Term>> holes) {
  Term t = lam::parse_term(text);
  for (const auto& [name, value] : holes) t = lam::substitute(t, name, value);
  return t;
}

TEST(ConstructorRep, Formula) {
  EXPECT_EQ(constructor_rep(1, 0, 2), L("\\f. f (\\a b. a) f"));
  EXPECT_EQ(constructor_rep(2, 1, 2), L("\\x1 f. f (\\a b. b) x1 f"));
  EXPECT_EQ(constructor_rep(5, 1, 6), L("\\x1 f. f (\\a b c d e g. e) x1 f"));
  EXPECT_EQ(constructor_rep(3, 2, 6), L("\\p q f. f (\\a b c d e g. c) p q f"));
}

TEST(CanonicalRep, PeanoCasesByHand) {
  auto built = build_canonical_representation(trs::parse_system(kPeano));
  const Artifacts& art = built.artifacts;
  Term succ = constructor_rep(2, 1, 2);
  ASSERT_EQ(art.cases.size(), 1u);
  ASSERT_EQ(art.cases[0].size(), 2u);
  EXPECT_EQ(art.cases[0][0], L("\\v1 y. y"));
  EXPECT_EQ(art.cases[0][1], L("\\x v1 y. SUCC ((\\z. z v1) x y)", {{"SUCC", succ}}));
  Term t_add = L("\\x. x A B", {{"A", art.cases[0][0]}, {"B", art.cases[0][1]}});
  EXPECT_EQ(art.collations[0], t_add);
  EXPECT_EQ(built.rep.at("add"), L("\\x. x T", {{"T", t_add}}));
  EXPECT_EQ(built.rep.at("zero"), L("\\f. f (\\a b. a) f"));
  EXPECT_EQ(art.pre[0], L("\\z. z V", {{"V", Term::free(art.fresh[0])}}));
}

TEST(CanonicalRep, SfProgramsAreRotations) {
  const auto& sf = sf_representation();
  const auto& t = sf.artifacts.collations;
  ASSERT_EQ(t.size(), 2u);
  EXPECT_EQ(sf.rep.at("app"), lam::church_tuple({t[0], t[1]}));
  EXPECT_EQ(sf.rep.at("f-reduce"), lam::church_tuple({t[1], t[0]}));
  // app(S0, x) -> S1(x): nothing to pre-represent in the body.
  EXPECT_EQ(sf.artifacts.cases[0][0], L("\\v1 v2 x. S1 x", {{"S1", constructor_rep(2, 1, 6)}}));
  // f-reduce(S1(x), y, z) -> app(app(z, S0), x) uses the rotated tuple <v2, v1>.
  EXPECT_EQ(sf.artifacts.cases[1][1],
            L("\\x v2 v1 y z. (\\w. w v1 v2) ((\\w. w v1 v2) z S0) x", {{"S0", constructor_rep(1, 0, 6)}}));
}

TEST(CanonicalRep, AutoCompletesAndRejects) {
  auto pred = build_canonical_representation(
      trs::parse_system("constructors: zero/0 succ/1\nprograms: pred/1\nrule pred(succ(x)) = x\n"));
  EXPECT_EQ(pred.artifacts.system.rules.size(), 2u);
  EXPECT_EQ(pred.artifacts.cases[0][0], L("\\v1. ZERO", {{"ZERO", constructor_rep(1, 0, 2)}}));
  EXPECT_THROW(build_canonical_representation(
                   trs::parse_system("constructors: a/0 b/1\nprograms: f/1\nrule f(b(a)) = a\n")),
               NotCanonical);
}

TEST(ApplyRepresentation, Examples) {
  auto built = build_canonical_representation(trs::parse_system(kPeano));
  const auto& sig = built.rep.signature();
  EXPECT_EQ(apply_representation(built.rep, trs::parse_term(sig, "zero")), built.rep.at("zero"));
  EXPECT_EQ(apply_representation(built.rep, trs::parse_term(sig, "x")), Term::free("x"));
  Term t = apply_representation(built.rep, trs::parse_term(sig, "add(zero, y)"));
  EXPECT_EQ(t, lam::apply(built.rep.at("add"), {built.rep.at("zero"), Term::free("y")}));
  auto r = lam::normalize_beta(t, 1000);
  ASSERT_TRUE(r.normal);
  EXPECT_EQ(r.term, Term::free("y"));
  EXPECT_THROW(apply_representation(built.rep, trs::Term::apply("mul", {})), UnknownSymbol);
}

TEST(EncodeSf, Examples) {
  const auto& rep = sf_representation().rep;
  EXPECT_EQ(encode_sf(sf::parse_term("S")), L("\\f. f (\\a b c d e g. a) f"));
  EXPECT_EQ(encode_sf(sf::parse_term("F F")), lam::apply(rep.at("app"), {rep.at("F0"), rep.at("F0")}));
  auto lhs = lam::normalize_beta(encode_sf(sf::parse_term("F F S F")), 100000);
  auto rhs = lam::normalize_beta(encode_sf(sf::parse_term("S")), 100000);
  ASSERT_TRUE(lhs.normal);
  EXPECT_EQ(lhs.term, rhs.term);
}

TEST(VerifySolution, SfAndPeanoRulesAllPass) {
  const auto& sf = sf_representation();
  auto report = verify_solution(sf.artifacts.system, sf.rep, 500);
  ASSERT_EQ(report.rules.size(), 12u);
  for (const auto& r : report.rules) EXPECT_EQ(r.verdict, Verdict::Pass) << r.text;
  EXPECT_EQ(report.overall(), Verdict::Pass);

  auto peano = build_canonical_representation(trs::parse_system(kPeano));
  auto p = verify_solution(peano.artifacts.system, peano.rep, 500);
  ASSERT_EQ(p.rules.size(), 2u);
  EXPECT_EQ(p.overall(), Verdict::Pass);
}

TEST(VerifySolution, SwappedCasesFail) {
  const auto& sf = sf_representation();
  auto cases = sf.artifacts.cases;
  std::swap(cases[0][0], cases[0][3]);  // app on S0 and on F0 exchanged
  Term t_app = lam::church_tuple(cases[0]);
  Term t_fr = sf.artifacts.collations[1];
  Representation broken = sf.rep;
  broken.set("app", lam::church_tuple({t_app, t_fr}));
  broken.set("f-reduce", lam::church_tuple({t_fr, t_app}));
  auto report = verify_solution(sf.artifacts.system, broken, 500);
  EXPECT_EQ(report.overall(), Verdict::Fail);
}

TEST(VerifySolution, InconclusiveOnTinyFuel) {
  const auto& sf = sf_representation();
  auto report = verify_solution(sf.artifacts.system, sf.rep, 1);
  EXPECT_EQ(report.overall(), Verdict::Inconclusive);
}

// Applying a program to a constructed datum follows the displayed schema:
// pass the programs, select the case by projection, then substitute.
void check_schema(const CanonicalRepresentation& built) {
  const auto& sig = built.rep.signature();
  const auto& art = built.artifacts;
  const std::size_t r = sig.constructors().size();
  const std::size_t k = sig.programs().size();
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < r; ++j) {
      std::size_t m = sig.constructors()[j].arity;
      std::size_t n = sig.programs()[i].arity - 1;
      std::vector<Term> ds, as, ts;
      std::vector<trs::Term> d_vars, a_vars;
      for (std::size_t x = 1; x <= m; ++x) {
        ds.push_back(Term::free("d" + std::to_string(x)));
        d_vars.push_back(trs::Term::var("d" + std::to_string(x)));
      }
      for (std::size_t y = 1; y <= n; ++y) {
        as.push_back(Term::free("a" + std::to_string(y)));
        a_vars.push_back(trs::Term::var("a" + std::to_string(y)));
      }
      for (std::size_t l = 0; l < k; ++l) ts.push_back(art.collations[(i + l) % k]);

      // The datum alone reduces to \f. f P d1..dm f.
      Term datum = lam::apply(built.rep.at(sig.constructors()[j].name), ds);
      std::vector<Term> inner{lam::projection(r, j + 1)};
      inner.insert(inner.end(), ds.begin(), ds.end());
      inner.push_back(Term::free("f"));
      Term datum_nf = lam::lambda("f", lam::apply(Term::free("f"), inner));
      ASSERT_EQ(lam::normalize_beta(datum, 100).term, datum_nf);

      std::vector<Term> start_args{datum_nf};
      start_args.insert(start_args.end(), as.begin(), as.end());
      Term cur = lam::apply(built.rep.at(sig.programs()[i].name), start_args);
      auto advance = [&](std::size_t steps) {
        for (std::size_t s = 0; s < steps; ++s) {
          auto c = lam::beta_step(cur);
          ASSERT_TRUE(c);
          cur = c->result;
        }
      };

      std::vector<Term> pass{datum_nf};
      pass.insert(pass.end(), ts.begin(), ts.end());
      pass.insert(pass.end(), as.begin(), as.end());
      advance(1);
      EXPECT_EQ(cur, lam::apply(pass[0], std::span(pass).subspan(1)));

      std::vector<Term> select{lam::projection(r, j + 1)};
      select.insert(select.end(), ds.begin(), ds.end());
      select.insert(select.end(), ts.begin(), ts.end());
      select.insert(select.end(), as.begin(), as.end());
      advance(1);
      EXPECT_EQ(cur, lam::apply(art.collations[i], select));

      std::vector<Term> chosen(art.cases[i].begin(), art.cases[i].end());
      chosen.insert(chosen.end(), select.begin() + 1, select.end());
      advance(1);
      EXPECT_EQ(cur, lam::apply(lam::projection(r, j + 1), chosen));

      advance(r);
      EXPECT_EQ(cur, lam::apply(art.cases[i][j], std::span(select).subspan(1)));

      // Substituting the collations for the v's turns psi into zeta, so the
      // body is the representation of the instantiated right-hand side.
      advance(m + k + n);
      const auto& rule = *std::find_if(art.system.rules.begin(), art.system.rules.end(), [&](const auto& rl) {
        return rl.lhs.name() == sig.programs()[i].name && rl.lhs.args()[0].name() == sig.constructors()[j].name;
      });
      trs::Substitution sub;
      for (std::size_t x = 0; x < m; ++x) sub.emplace(rule.lhs.args()[0].args()[x].name(), d_vars[x]);
      for (std::size_t y = 0; y < n; ++y) sub.emplace(rule.lhs.args()[y + 1].name(), a_vars[y]);
      EXPECT_EQ(cur, apply_representation(built.rep, trs::substitute(rule.rhs, sub)))
          << sig.programs()[i].name << "/" << sig.constructors()[j].name;
    }
  }
}

TEST(Schema, Peano) { check_schema(build_canonical_representation(trs::parse_system(kPeano))); }
TEST(Schema, SfApplicative) { check_schema(sf_representation()); }

TEST(EncoderProperties, ImagesClosedAndConstructorsNormal) {
  const auto& sf = sf_representation();
  for (const auto& [name, image] : sf.rep.entries()) EXPECT_TRUE(image.is_closed()) << name;
  for (const auto& c : sf.rep.signature().constructors()) EXPECT_TRUE(sf.rep.at(c.name).is_normal());
  for (const auto& row : sf.artifacts.cases) {
    for (const auto& c : row) EXPECT_TRUE(c.is_closed());
  }
}

TEST(EncoderProperties, InjectiveUpToAlpha) {
  std::unordered_set<Term, lam::TermHash> seen;
  std::size_t total = 0;
  for (std::size_t n = 1; n <= 5; ++n) {
    for (const auto& m : testing::all_sf(n)) {
      Term e = encode_sf(m);
      EXPECT_TRUE(e.is_closed());
      seen.insert(e);
      ++total;
    }
  }
  EXPECT_EQ(seen.size(), total);
}

TEST(EncoderProperties, SimulationTransportsAlongSfSteps) {
  std::mt19937_64 rng(41);
  int compared = 0;
  for (int i = 0; i < 300; ++i) {
    sf::Term m = testing::random_sf(rng, 3 + static_cast<int>(rng() % 6));
    auto c = sf::step(m);
    if (!c) continue;
    auto a = lam::normalize_beta(encode_sf(m), 100000);
    auto b = lam::normalize_beta(encode_sf(c->result), 100000);
    if (!a.normal || !b.normal) continue;
    ++compared;
    EXPECT_EQ(a.term, b.term) << sf::to_string(m);
  }
  EXPECT_GT(compared, 100);
}

TEST(Export, JsonAndListing) {
  const auto& rep = sf_representation().rep;
  auto j = to_json(rep);
  ASSERT_EQ(j.size(), 8u);
  EXPECT_EQ(j.begin().key(), "S0");
  for (const auto& [name, text] : j.items()) {
    EXPECT_EQ(lam::parse_term(text.get<std::string>()), rep.at(name)) << name;
  }
  std::istringstream listing(to_listing(rep));
  std::string line;
  int lines = 0;
  while (std::getline(listing, line)) ++lines;
  EXPECT_EQ(lines, 8);
}

TEST(Export, MatchesCheckedInGolden) {
  std::ifstream json_in(std::string(SFENC_DATA_DIR) + "/phi_sf.json");
  ASSERT_TRUE(json_in) << "missing golden file";
  auto golden = nlohmann::ordered_json::parse(json_in);
  EXPECT_EQ(golden, to_json(sf_representation().rep));
  std::ifstream text_in(std::string(SFENC_DATA_DIR) + "/phi_sf.txt");
  ASSERT_TRUE(text_in);
  std::stringstream text;
  text << text_in.rdbuf();
  EXPECT_EQ(text.str(), to_listing(sf_representation().rep));
}

}  // namespace
}  // namespace sfenc::enc
