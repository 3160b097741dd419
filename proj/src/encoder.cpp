#include "sfenc/encoder.hpp"

#include <algorithm>
#include <future>

#include "sfenc/error.hpp"

namespace sfenc::enc {

const lam::Term& Representation::at(std::string_view symbol) const {
  for (const auto& [name, image] : images_) {
    if (name == symbol) return image;
  }
  throw UnknownSymbol("no representation for symbol " + std::string(symbol));
}

bool Representation::contains(std::string_view symbol) const {
  return std::any_of(images_.begin(), images_.end(), [&](const auto& e) { return e.first == symbol; });
}

void Representation::set(const std::string& symbol, lam::Term image) {
  if (!signature_.find(symbol)) throw UnknownSymbol("symbol " + symbol + " is not in the signature");
  for (auto& [name, old] : images_) {
    if (name == symbol) {
      old = std::move(image);
      return;
    }
  }
  images_.emplace_back(symbol, std::move(image));
}

std::vector<std::pair<std::string, lam::Term>> Representation::entries() const {
  std::vector<std::pair<std::string, lam::Term>> out;
  auto add = [&](const std::vector<trs::SymbolDecl>& decls) {
    for (const auto& d : decls) {
      if (contains(d.name)) out.emplace_back(d.name, at(d.name));
    }
  };
  add(signature_.constructors());
  add(signature_.programs());
  return out;
}

lam::Term constructor_rep(std::size_t i, std::size_t arity, std::size_t r) {
  std::vector<std::string> names;
  std::vector<lam::Term> args{lam::projection(r, i)};
  for (std::size_t n = 1; n <= arity; ++n) {
    names.push_back("x" + std::to_string(n));
    args.push_back(lam::Term::free(names.back()));
  }
  names.push_back("f");
  args.push_back(lam::Term::free("f"));
  return lam::lambda(names, lam::apply(lam::Term::free("f"), args));
}

namespace {

lam::Term homomorphic(const Representation& rep, const trs::Term& t) {
  if (t.is_var()) return lam::Term::free(t.name());
  std::vector<lam::Term> args;
  args.reserve(t.args().size());
  for (const auto& a : t.args()) args.push_back(homomorphic(rep, a));
  return lam::apply(rep.at(t.name()), args);
}

template <class T>
std::vector<T> rotate_from(const std::vector<T>& items, std::size_t i) {
  std::vector<T> out(items.begin() + static_cast<long>(i), items.end());
  out.insert(out.end(), items.begin(), items.begin() + static_cast<long>(i));
  return out;
}

}  // namespace

CanonicalRepresentation build_canonical_representation(const trs::System& input) {
  trs::System sys = trs::complete_system(input);
  const auto& ctors = sys.signature.constructors();
  const auto& progs = sys.signature.programs();
  const std::size_t r = ctors.size();
  const std::size_t k = progs.size();
  if (r == 0) throw NotCanonical("signature has no constructors");

  CanonicalRepresentation out{Representation(sys.signature), Artifacts{sys, {}, {}, {}, {}}};
  Artifacts& art = out.artifacts;

  for (std::size_t j = 0; j < r; ++j) out.rep.set(ctors[j].name, constructor_rep(j + 1, ctors[j].arity, r));

  // The '%' prefix cannot come out of any parser, so the v's are fresh for E.
  std::vector<lam::Term> vs;
  for (std::size_t i = 1; i <= k; ++i) {
    art.fresh.push_back("%v" + std::to_string(i));
    vs.push_back(lam::Term::free(art.fresh.back()));
  }

  // psi and theta merged: program symbols go to psi, constructors to theta.
  Representation pre(sys.signature);
  for (std::size_t j = 0; j < r; ++j) pre.set(ctors[j].name, out.rep.at(ctors[j].name));
  for (std::size_t i = 0; i < k; ++i) {
    art.pre.push_back(lam::church_tuple(rotate_from(vs, i)));
    pre.set(progs[i].name, art.pre.back());
  }

  art.cases.assign(k, std::vector<lam::Term>(r, lam::Term::free("_")));
  for (const auto& rule : sys.rules) {
    const auto& lhs = rule.lhs;
    std::size_t i = sys.signature.find(lhs.name())->index;
    const trs::Term& datum = lhs.args().front();
    std::size_t j = sys.signature.find(datum.name())->index;

    std::vector<std::string> binders;
    for (const auto& x : datum.args()) binders.push_back(x.name());
    for (const auto& v : rotate_from(art.fresh, i)) binders.push_back(v);
    for (std::size_t a = 1; a < lhs.args().size(); ++a) binders.push_back(lhs.args()[a].name());
    art.cases[i][j] = lam::lambda(binders, homomorphic(pre, rule.rhs));
  }

  for (std::size_t i = 0; i < k; ++i) art.collations.push_back(lam::church_tuple(art.cases[i]));
  for (std::size_t i = 0; i < k; ++i) {
    out.rep.set(progs[i].name, lam::church_tuple(rotate_from(art.collations, i)));
  }
  return out;
}

lam::Term apply_representation(const Representation& rep, const trs::Term& t) { return homomorphic(rep, t); }

const CanonicalRepresentation& sf_representation() {
  static const CanonicalRepresentation rep = build_canonical_representation(trs::sf_applicative_system());
  return rep;
}

lam::Term encode_sf(const sf::Term& m) {
  // Memoised atoms keep repeated encodings cheap; structure is shared.
  static const lam::Term s = sf_representation().rep.at("S0");
  static const lam::Term f = sf_representation().rep.at("F0");
  static const lam::Term app = sf_representation().rep.at("app");
  if (m.is_atom()) return m.atom() == sf::Atom::S ? s : f;
  return lam::apply(app, {encode_sf(m.left()), encode_sf(m.right())});
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::Pass:
      return "pass";
    case Verdict::Fail:
      return "fail";
    case Verdict::Inconclusive:
      return "inconclusive";
  }
  return "?";
}

Verdict SolutionReport::overall() const {
  bool inconclusive = false;
  for (const auto& r : rules) {
    if (r.verdict == Verdict::Fail) return Verdict::Fail;
    if (r.verdict == Verdict::Inconclusive) inconclusive = true;
  }
  return inconclusive ? Verdict::Inconclusive : Verdict::Pass;
}

SolutionReport verify_solution(const trs::System& sys, const Representation& rep, std::size_t fuel) {
  std::vector<std::future<RuleCheck>> jobs;
  for (std::size_t n = 0; n < sys.rules.size(); ++n) {
    jobs.push_back(std::async(std::launch::async, [&, n] {
      const auto& rule = sys.rules[n];
      RuleCheck check{n, trs::to_string(rule)};
      auto lhs = lam::normalize_beta(apply_representation(rep, rule.lhs), fuel);
      auto rhs = lam::normalize_beta(apply_representation(rep, rule.rhs), fuel);
      check.lhs_steps = lhs.steps;
      check.rhs_steps = rhs.steps;
      if (!lhs.normal || !rhs.normal) {
        check.verdict = Verdict::Inconclusive;
      } else {
        check.verdict = lhs.term == rhs.term ? Verdict::Pass : Verdict::Fail;
      }
      return check;
    }));
  }
  SolutionReport report;
  for (auto& j : jobs) report.rules.push_back(j.get());
  return report;
}

nlohmann::ordered_json to_json(const Representation& rep) {
  nlohmann::ordered_json out = nlohmann::ordered_json::object();
  for (const auto& [name, image] : rep.entries()) out[name] = lam::to_string(image);
  return out;
}

std::string to_listing(const Representation& rep) {
  std::string out;
  for (const auto& [name, image] : rep.entries()) out += name + " = " + lam::to_string(image) + "\n";
  return out;
}

}  // namespace sfenc::enc
