#include "sfenc/trs.hpp"

#include <algorithm>
#include <functional>
#include <set>
#include <stdexcept>
#include <unordered_map>

#include "sfenc/error.hpp"

namespace sfenc::trs {

Signature::Signature(std::vector<SymbolDecl> constructors, std::vector<SymbolDecl> programs)
    : constructors_(std::move(constructors)), programs_(std::move(programs)) {
  std::set<std::string> names;
  for (const auto& c : constructors_) {
    if (!names.insert(c.name).second) throw std::invalid_argument("duplicate symbol " + c.name);
  }
  for (const auto& p : programs_) {
    if (!names.insert(p.name).second) throw std::invalid_argument("duplicate symbol " + p.name);
    if (p.arity == 0) throw std::invalid_argument("program " + p.name + " must take a scrutinee");
  }
}

std::optional<SymbolInfo> Signature::find(std::string_view name) const {
  for (std::size_t i = 0; i < constructors_.size(); ++i) {
    if (constructors_[i].name == name) return SymbolInfo{Role::Constructor, i, constructors_[i].arity};
  }
  for (std::size_t i = 0; i < programs_.size(); ++i) {
    if (programs_[i].name == name) return SymbolInfo{Role::Program, i, programs_[i].arity};
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------

struct Term::Node {
  bool is_var = false;
  std::string name;
  std::vector<Term> args;
  std::size_t size = 1;
  std::size_t hash = 0;
};

Term Term::var(std::string name) {
  auto n = std::make_shared<Node>();
  n->is_var = true;
  n->hash = hash_mix(0x7a7, std::hash<std::string>{}(name));
  n->name = std::move(name);
  return Term(std::move(n));
}

Term Term::apply(std::string symbol, std::vector<Term> args) {
  auto n = std::make_shared<Node>();
  n->hash = hash_mix(0x5b1, std::hash<std::string>{}(symbol));
  for (const auto& a : args) {
    n->size += a.size();
    n->hash = hash_mix(n->hash, a.hash());
  }
  n->name = std::move(symbol);
  n->args = std::move(args);
  return Term(std::move(n));
}

bool Term::is_var() const noexcept { return node_->is_var; }
const std::string& Term::name() const noexcept { return node_->name; }
const std::vector<Term>& Term::args() const noexcept { return node_->args; }
std::size_t Term::size() const noexcept { return node_->size; }
std::size_t Term::hash() const noexcept { return node_->hash; }

bool operator==(const Term& a, const Term& b) noexcept {
  if (a.node_ == b.node_) return true;
  const auto& x = *a.node_;
  const auto& y = *b.node_;
  return x.hash == y.hash && x.size == y.size && x.is_var == y.is_var && x.name == y.name &&
         x.args == y.args;
}

namespace {

void collect_vars(const Term& t, std::vector<std::string>& order,
                  std::map<std::string, std::size_t>& counts) {
  if (t.is_var()) {
    if (counts[t.name()]++ == 0) order.push_back(t.name());
    return;
  }
  for (const auto& a : t.args()) collect_vars(a, order, counts);
}

}  // namespace

std::vector<std::string> variables(const Term& t) {
  std::vector<std::string> order;
  std::map<std::string, std::size_t> counts;
  collect_vars(t, order, counts);
  return order;
}

std::map<std::string, std::size_t> variable_occurrences(const Term& t) {
  std::vector<std::string> order;
  std::map<std::string, std::size_t> counts;
  collect_vars(t, order, counts);
  return counts;
}

Term substitute(const Term& t, const Substitution& subst) {
  if (t.is_var()) {
    auto it = subst.find(t.name());
    return it == subst.end() ? t : it->second;
  }
  std::vector<Term> args;
  args.reserve(t.args().size());
  for (const auto& a : t.args()) args.push_back(substitute(a, subst));
  return Term::apply(t.name(), std::move(args));
}

namespace {

bool match_into(const Term& pattern, const Term& t, Substitution& subst) {
  if (pattern.is_var()) {
    auto [it, inserted] = subst.emplace(pattern.name(), t);
    return inserted || it->second == t;
  }
  if (t.is_var() || t.name() != pattern.name() || t.args().size() != pattern.args().size()) {
    return false;
  }
  for (std::size_t i = 0; i < t.args().size(); ++i) {
    if (!match_into(pattern.args()[i], t.args()[i], subst)) return false;
  }
  return true;
}

Term resolve(const Term& t, const Substitution& subst) {
  if (t.is_var()) {
    auto it = subst.find(t.name());
    return it == subst.end() ? t : resolve(it->second, subst);
  }
  std::vector<Term> args;
  for (const auto& a : t.args()) args.push_back(resolve(a, subst));
  return Term::apply(t.name(), std::move(args));
}

bool occurs(const std::string& v, const Term& t, const Substitution& subst) {
  if (t.is_var()) {
    if (t.name() == v) return true;
    auto it = subst.find(t.name());
    return it != subst.end() && occurs(v, it->second, subst);
  }
  return std::any_of(t.args().begin(), t.args().end(),
                     [&](const Term& a) { return occurs(v, a, subst); });
}

bool unify_into(const Term& a, const Term& b, Substitution& subst) {
  auto walk = [&](Term t) {
    while (t.is_var()) {
      auto it = subst.find(t.name());
      if (it == subst.end()) break;
      t = it->second;
    }
    return t;
  };
  Term x = walk(a);
  Term y = walk(b);
  if (x.is_var() && y.is_var() && x.name() == y.name()) return true;
  if (x.is_var()) {
    if (occurs(x.name(), y, subst)) return false;
    subst.emplace(x.name(), y);
    return true;
  }
  if (y.is_var()) return unify_into(y, x, subst);
  if (x.name() != y.name() || x.args().size() != y.args().size()) return false;
  for (std::size_t i = 0; i < x.args().size(); ++i) {
    if (!unify_into(x.args()[i], y.args()[i], subst)) return false;
  }
  return true;
}

}  // namespace

std::optional<Substitution> match(const Term& pattern, const Term& t) {
  Substitution subst;
  if (!match_into(pattern, t, subst)) return std::nullopt;
  return subst;
}

std::optional<Substitution> unify(const Term& a, const Term& b) {
  Substitution subst;
  if (!unify_into(a, b, subst)) return std::nullopt;
  Substitution solved;
  for (const auto& [k, v] : subst) solved.emplace(k, resolve(v, subst));
  return solved;
}

const Term& subterm(const Term& t, const Position& pos) {
  const Term* cur = &t;
  for (std::size_t i : pos) cur = &cur->args().at(i);
  return *cur;
}

namespace {

Term replace_from(const Term& t, const Position& pos, std::size_t depth, const Term& replacement) {
  if (depth == pos.size()) return replacement;
  std::vector<Term> args = t.args();
  args.at(pos[depth]) = replace_from(args.at(pos[depth]), pos, depth + 1, replacement);
  return Term::apply(t.name(), std::move(args));
}

}  // namespace

Term replace_at(const Term& t, const Position& pos, const Term& replacement) {
  return replace_from(t, pos, 0, replacement);
}

// ---------------------------------------------------------------------------
// Canonical systems

namespace {

std::string pair_key(const std::string& program, const std::string& constructor) {
  return program + "/" + constructor;
}

// Returns the (program, constructor) pair if the rule has canonical shape,
// appending reasons to `violations` otherwise.
std::optional<std::pair<std::string, std::string>> canonical_shape(
    const Signature& sig, const Rule& rule, std::size_t index, std::vector<std::string>& violations) {
  std::string where = "rule " + std::to_string(index + 1) + " (" + to_string(rule) + "): ";
  std::size_t before = violations.size();

  std::function<void(const Term&)> check_arities = [&](const Term& t) {
    if (t.is_var()) return;
    auto info = sig.find(t.name());
    if (!info) {
      violations.push_back(where + "unknown symbol " + t.name());
    } else if (info->arity != t.args().size()) {
      violations.push_back(where + "arity mismatch for " + t.name());
    }
    for (const auto& a : t.args()) check_arities(a);
  };
  check_arities(rule.lhs);
  check_arities(rule.rhs);
  if (violations.size() != before) return std::nullopt;

  const Term& lhs = rule.lhs;
  auto head = lhs.is_var() ? std::nullopt : sig.find(lhs.name());
  if (!head || head->role != Role::Program) {
    violations.push_back(where + "left-hand side must be headed by a program symbol");
    return std::nullopt;
  }
  const Term& scrutinee = lhs.args().front();
  auto ctor = scrutinee.is_var() ? std::nullopt : sig.find(scrutinee.name());
  if (!ctor || ctor->role != Role::Constructor) {
    violations.push_back(where + "first argument must be a constructor pattern");
    return std::nullopt;
  }
  for (const auto& a : scrutinee.args()) {
    if (!a.is_var()) {
      violations.push_back(where + "pattern-matching too deeply (nested symbol " + a.name() +
                           " under constructor " + scrutinee.name() + ")");
    }
  }
  for (std::size_t i = 1; i < lhs.args().size(); ++i) {
    if (!lhs.args()[i].is_var()) {
      violations.push_back(where + "argument " + std::to_string(i + 1) +
                           " must be a variable (pattern-matching too deeply)");
    }
  }
  for (const auto& [v, n] : variable_occurrences(lhs)) {
    if (n > 1) violations.push_back(where + "variable " + v + " repeated on the left");
  }
  auto lhs_vars = variable_occurrences(lhs);
  for (const auto& v : variables(rule.rhs)) {
    if (!lhs_vars.count(v)) violations.push_back(where + "right-hand side variable " + v + " unbound");
  }
  if (violations.size() != before) return std::nullopt;
  return std::make_pair(lhs.name(), scrutinee.name());
}

}  // namespace

CanonicalReport check_canonical(const System& sys) {
  CanonicalReport report;
  std::set<std::string> covered;
  for (std::size_t i = 0; i < sys.rules.size(); ++i) {
    auto pair = canonical_shape(sys.signature, sys.rules[i], i, report.violations);
    if (!pair) continue;
    if (!covered.insert(pair_key(pair->first, pair->second)).second) {
      report.violations.push_back("rule " + std::to_string(i + 1) + ": second rule for (" +
                                  pair->second + ", " + pair->first + ")");
    }
  }
  report.canonical = report.violations.empty();
  for (const auto& f : sys.signature.programs()) {
    for (const auto& c : sys.signature.constructors()) {
      if (!covered.count(pair_key(f.name, c.name))) report.missing.emplace_back(f.name, c.name);
    }
  }
  report.complete = report.canonical && report.missing.empty();
  return report;
}

System complete_system(const System& sys) {
  auto report = check_canonical(sys);
  if (!report.canonical) {
    std::string message = "system is not canonical";
    for (const auto& v : report.violations) message += "\n  " + v;
    throw NotCanonical(message);
  }
  System out = sys;
  for (const auto& [program, constructor] : report.missing) {
    auto f = *sys.signature.find(program);
    auto c = *sys.signature.find(constructor);
    std::vector<Term> xs;
    for (std::size_t i = 1; i <= c.arity; ++i) xs.push_back(Term::var("x" + std::to_string(i)));
    Term datum = Term::apply(constructor, xs);
    std::vector<Term> args{datum};
    for (std::size_t i = 1; i < f.arity; ++i) args.push_back(Term::var("y" + std::to_string(i)));
    out.rules.push_back({Term::apply(program, std::move(args)), datum});
  }
  return out;
}

namespace {

Term rename_vars(const Term& t, const std::string& suffix) {
  if (t.is_var()) return Term::var(t.name() + suffix);
  std::vector<Term> args;
  for (const auto& a : t.args()) args.push_back(rename_vars(a, suffix));
  return Term::apply(t.name(), std::move(args));
}

void non_variable_positions(const Term& t, Position& pos, std::vector<Position>& out) {
  if (t.is_var()) return;
  out.push_back(pos);
  for (std::size_t i = 0; i < t.args().size(); ++i) {
    pos.push_back(i);
    non_variable_positions(t.args()[i], pos, out);
    pos.pop_back();
  }
}

}  // namespace

OrthogonalityReport check_orthogonal(const System& sys) {
  OrthogonalityReport report;
  report.left_linear = true;
  report.non_overlapping = true;
  for (std::size_t i = 0; i < sys.rules.size(); ++i) {
    for (const auto& [v, n] : variable_occurrences(sys.rules[i].lhs)) {
      if (n > 1) {
        report.left_linear = false;
        report.violations.push_back("rule " + std::to_string(i + 1) + " is not left-linear in " + v);
      }
    }
  }
  for (std::size_t i = 0; i < sys.rules.size(); ++i) {
    std::vector<Position> positions;
    Position scratch;
    non_variable_positions(sys.rules[i].lhs, scratch, positions);
    for (std::size_t j = 0; j < sys.rules.size(); ++j) {
      Term other = rename_vars(sys.rules[j].lhs, "'");
      for (const auto& p : positions) {
        if (i == j && p.empty()) continue;
        if (unify(subterm(sys.rules[i].lhs, p), other)) {
          report.non_overlapping = false;
          report.violations.push_back("rules " + std::to_string(i + 1) + " and " +
                                      std::to_string(j + 1) + " overlap at position " +
                                      to_string(p));
        }
      }
    }
  }
  return report;
}

// ---------------------------------------------------------------------------
// Rewriting

std::optional<Contraction> rewrite_root(const System& sys, const Term& t) {
  if (t.is_var()) return std::nullopt;
  for (std::size_t i = 0; i < sys.rules.size(); ++i) {
    const Term& lhs = sys.rules[i].lhs;
    if (lhs.name() != t.name()) continue;
    if (auto subst = match(lhs, t)) return Contraction{substitute(sys.rules[i].rhs, *subst), {}, i};
  }
  return std::nullopt;
}

std::optional<Contraction> rewrite_at(const System& sys, const Term& t, const Position& pos) {
  for (std::size_t d = 0, n = pos.size(); d < n; ++d) {
    const Term& s = subterm(t, Position(pos.begin(), pos.begin() + static_cast<long>(d)));
    if (s.is_var() || pos[d] >= s.args().size()) return std::nullopt;
  }
  auto c = rewrite_root(sys, subterm(t, pos));
  if (!c) return std::nullopt;
  return Contraction{replace_at(t, pos, c->result), pos, c->rule};
}

namespace {

std::optional<Contraction> find_redex(const System& sys, const Term& t, Position& pos, bool innermost) {
  if (!innermost) {
    if (auto c = rewrite_root(sys, t)) return Contraction{c->result, pos, c->rule};
  }
  for (std::size_t i = 0; i < t.args().size(); ++i) {
    pos.push_back(i);
    auto c = find_redex(sys, t.args()[i], pos, innermost);
    pos.pop_back();
    if (c) {
      std::vector<Term> args = t.args();
      args[i] = std::move(c->result);
      c->result = Term::apply(t.name(), std::move(args));
      return c;
    }
  }
  if (innermost) {
    if (auto c = rewrite_root(sys, t)) return Contraction{c->result, pos, c->rule};
  }
  return std::nullopt;
}

void collect_reducts(const System& sys, const Term& root, const Term& t, Position& pos,
                     std::vector<Contraction>& out) {
  if (auto c = rewrite_root(sys, t)) out.push_back({replace_at(root, pos, c->result), pos, c->rule});
  for (std::size_t i = 0; i < t.args().size(); ++i) {
    pos.push_back(i);
    collect_reducts(sys, root, t.args()[i], pos, out);
    pos.pop_back();
  }
}

}  // namespace

std::optional<Contraction> rewrite_step(const System& sys, const Term& t, Strategy strategy) {
  Position pos;
  return find_redex(sys, t, pos, strategy == Strategy::LeftmostInnermost);
}

std::vector<Contraction> rewrite_reducts(const System& sys, const Term& t) {
  std::vector<Contraction> out;
  Position pos;
  collect_reducts(sys, t, t, pos, out);
  return out;
}

nlohmann::json step_to_json(const TraceStep& s) {
  return {{"before", to_string(s.before)}, {"path", s.position}, {"after", to_string(s.after)}};
}

nlohmann::json to_json(const Trace& trace) {
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& s : trace.steps) steps.push_back(step_to_json(s));
  return {{"steps", steps}};
}

NormalizationResult normalize(const System& sys, const Term& t, std::size_t fuel, Strategy strategy) {
  if (fuel == 0) throw std::invalid_argument("fuel must be at least 1");
  NormalizationResult result{t, {}, false};
  for (std::size_t i = 0; i <= fuel; ++i) {
    auto c = rewrite_step(sys, result.term, strategy);
    if (!c) {
      result.normal = true;
      return result;
    }
    if (i == fuel) break;
    result.trace.steps.push_back({result.term, c->position, c->result});
    result.term = std::move(c->result);
  }
  return result;
}

TerminationReport explore_termination(const System& sys, const Term& t, std::size_t budget) {
  struct Frame {
    Term term;
    std::vector<Contraction> next;
    std::size_t cursor = 0;
    std::size_t longest = 0;
  };
  std::unordered_map<Term, std::optional<std::size_t>, TermHash> seen;  // nullopt: on stack
  std::vector<Frame> stack{{t, rewrite_reducts(sys, t)}};
  seen.emplace(t, std::nullopt);
  while (!stack.empty()) {
    Frame& top = stack.back();
    if (top.cursor < top.next.size()) {
      const Term& r = top.next[top.cursor++].result;
      auto it = seen.find(r);
      if (it != seen.end()) {
        if (!it->second) return {TerminationReport::Outcome::Cycle, 0, seen.size()};
        top.longest = std::max(top.longest, *it->second + 1);
        continue;
      }
      if (seen.size() >= budget) return {TerminationReport::Outcome::Unknown, 0, seen.size()};
      seen.emplace(r, std::nullopt);
      auto next = rewrite_reducts(sys, r);
      stack.push_back({r, std::move(next)});
      continue;
    }
    std::size_t longest = top.longest;
    seen[top.term] = longest;
    stack.pop_back();
    if (!stack.empty()) stack.back().longest = std::max(stack.back().longest, longest + 1);
  }
  return {TerminationReport::Outcome::Terminating, *seen.at(t), seen.size()};
}

}  // namespace sfenc::trs
