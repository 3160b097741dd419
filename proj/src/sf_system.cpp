// The curryfied applicative presentation of SF-calculus and the translation
// into it.
#include "sfenc/error.hpp"
#include "sfenc/trs.hpp"

namespace sfenc::trs {

const System& sf_applicative_system() {
  static const System sys = parse_system(R"(
constructors: S0/0 S1/1 S2/2 F0/0 F1/1 F2/2
programs: app/2 f-reduce/3
rule app(S0, x) = S1(x)
rule app(S1(x), y) = S2(x, y)
rule app(S2(x, y), z) = app(app(x, z), app(y, z))
rule app(F0, x) = F1(x)
rule app(F1(x), y) = F2(x, y)
rule app(F2(x, y), z) = f-reduce(x, y, z)
rule f-reduce(S0, y, z) = y
rule f-reduce(S1(x), y, z) = app(app(z, S0), x)
rule f-reduce(S2(p, q), y, z) = app(app(z, app(S0, p)), q)
rule f-reduce(F0, y, z) = y
rule f-reduce(F1(x), y, z) = app(app(z, F0), x)
rule f-reduce(F2(p, q), y, z) = app(app(z, app(F0, p)), q)
)");
  return sys;
}

Term translate_sf(const sf::Term& t) {
  if (t.is_atom()) return Term::apply(t.atom() == sf::Atom::S ? "S0" : "F0");
  return Term::apply("app", {translate_sf(t.left()), translate_sf(t.right())});
}

std::optional<sf::Term> readback_sf(const Term& t) {
  if (t.is_var()) return std::nullopt;
  const std::string& h = t.name();
  if (h == "app") {
    auto f = readback_sf(t.args()[0]);
    auto a = f ? readback_sf(t.args()[1]) : std::nullopt;
    if (!a) return std::nullopt;
    return sf::Term::app(*f, *a);
  }
  if (h.size() != 2 || (h[0] != 'S' && h[0] != 'F') || h[1] < '0' || h[1] > '2') return std::nullopt;
  sf::Term out = sf::Term::atom(h[0] == 'S' ? sf::Atom::S : sf::Atom::F);
  if (t.args().size() != static_cast<std::size_t>(h[1] - '0')) return std::nullopt;
  for (const auto& a : t.args()) {
    auto r = readback_sf(a);
    if (!r) return std::nullopt;
    out = sf::Term::app(out, *r);
  }
  return out;
}

sf::Path to_sf_path(const Position& pos) {
  sf::Path out;
  for (std::size_t i : pos) out.push_back(i == 0 ? sf::Dir::L : sf::Dir::R);
  return out;
}

Position to_trs_position(const sf::Path& path) {
  Position out;
  for (sf::Dir d : path) out.push_back(d == sf::Dir::L ? 0 : 1);
  return out;
}

namespace {

bool is_app(const Term& t) { return !t.is_var() && t.name() == "app"; }
bool is_atom0(const Term& t) { return !t.is_var() && (t.name() == "S0" || t.name() == "F0"); }

Position extend(Position base, std::initializer_list<std::size_t> tail) {
  base.insert(base.end(), tail);
  return base;
}

}  // namespace

Trace simulate_redex(const Term& before, const Position& q) {
  const Term& redex = subterm(before, q);
  auto shape_error = [&] {
    return MismatchError("no SF redex at " + to_string(q) + " in " + to_string(before));
  };
  if (!is_app(redex) || !is_app(redex.args()[0]) || !is_app(redex.args()[0].args()[0])) throw shape_error();
  const Term& innermost = redex.args()[0].args()[0];  // app(H, a)
  const Term& head = innermost.args()[0];
  if (!is_atom0(head)) throw shape_error();

  std::vector<Position> plan;
  if (head.name() == "S0") {
    plan = {extend(q, {0, 0}), extend(q, {0}), q};
  } else {
    const Term& a = innermost.args()[1];
    if (is_atom0(a)) {
      plan = {extend(q, {0, 0}), extend(q, {0}), q, q};
    } else if (is_app(a) && is_atom0(a.args()[0])) {
      plan = {extend(q, {0, 0, 1}), extend(q, {0, 0}), extend(q, {0}), q, q};
    } else if (is_app(a) && is_app(a.args()[0]) && is_atom0(a.args()[0].args()[0])) {
      plan = {extend(q, {0, 0, 1, 0}), extend(q, {0, 0, 1}), extend(q, {0, 0}), extend(q, {0}), q, q};
    } else {
      throw shape_error();
    }
  }

  const System& sys = sf_applicative_system();
  Trace trace;
  Term cur = before;
  for (const auto& p : plan) {
    auto c = rewrite_at(sys, cur, p);
    if (!c) throw MismatchError("planned step at " + to_string(p) + " is not a redex in " + to_string(cur));
    trace.steps.push_back({cur, p, c->result});
    cur = std::move(c->result);
  }
  return trace;
}

Trace simulate_sf_step(const sf::Term& before, const sf::Path& path) {
  auto contractum = sf::reduce_root(sf::subterm(before, path));
  if (!contractum) throw MismatchError("no SF redex at " + sf::to_string(path));
  Trace trace = simulate_redex(translate_sf(before), to_trs_position(path));
  Term expected = translate_sf(sf::replace_at(before, path, *contractum));
  if (!(trace.steps.back().after == expected)) {
    throw MismatchError("simulation ended in " + to_string(trace.steps.back().after) + ", expected " +
                        to_string(expected));
  }
  return trace;
}

}  // namespace sfenc::trs
