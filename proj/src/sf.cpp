#include "sfenc/sf.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <set>
#include <stdexcept>
#include <unordered_map>

#include "sfenc/error.hpp"

namespace sfenc::sf {

struct Term::Node {
  Atom atom = Atom::S;
  bool is_atom = true;
  std::optional<Term> left;
  std::optional<Term> right;
  std::size_t size = 1;
  std::size_t hash = 0;
};

Term Term::s() { return atom(Atom::S); }
Term Term::f() { return atom(Atom::F); }

Term Term::atom(Atom a) {
  static const Term s_term = [] {
    auto n = std::make_shared<Node>();
    n->atom = Atom::S;
    n->hash = 0x5eed5;
    return Term(std::move(n));
  }();
  static const Term f_term = [] {
    auto n = std::make_shared<Node>();
    n->atom = Atom::F;
    n->hash = 0xf00f;
    return Term(std::move(n));
  }();
  return a == Atom::S ? s_term : f_term;
}

Term Term::app(Term fun, Term arg) {
  auto n = std::make_shared<Node>();
  n->is_atom = false;
  n->size = fun.size() + arg.size();
  n->hash = hash_mix(hash_mix(0xa99, fun.hash()), arg.hash());
  n->left = std::move(fun);
  n->right = std::move(arg);
  return Term(std::move(n));
}

bool Term::is_atom() const noexcept { return node_->is_atom; }

Atom Term::atom() const {
  if (!node_->is_atom) throw std::logic_error("sf::Term::atom on application");
  return node_->atom;
}

const Term& Term::left() const {
  if (node_->is_atom) throw std::logic_error("sf::Term::left on atom");
  return *node_->left;
}

const Term& Term::right() const {
  if (node_->is_atom) throw std::logic_error("sf::Term::right on atom");
  return *node_->right;
}

std::size_t Term::size() const noexcept { return node_->size; }
std::size_t Term::hash() const noexcept { return node_->hash; }

bool operator==(const Term& a, const Term& b) noexcept {
  if (a.node_ == b.node_) return true;
  if (a.node_->hash != b.node_->hash || a.node_->size != b.node_->size) return false;
  if (a.node_->is_atom || b.node_->is_atom) {
    return a.node_->is_atom == b.node_->is_atom && a.node_->atom == b.node_->atom;
  }
  return *a.node_->left == *b.node_->left && *a.node_->right == *b.node_->right;
}

Spine unspine(const Term& t) {
  Spine spine;
  const Term* cur = &t;
  while (cur->is_app()) {
    spine.args.push_back(cur->right());
    cur = &cur->left();
  }
  spine.head = cur->atom();
  std::reverse(spine.args.begin(), spine.args.end());
  return spine;
}

// ---------------------------------------------------------------------------
// Printing and parsing

namespace {

void print(const Term& t, std::string& out, bool as_argument) {
  if (t.is_atom()) {
    out += t.atom() == Atom::S ? 'S' : 'F';
    return;
  }
  if (as_argument) out += '(';
  print(t.left(), out, false);
  out += ' ';
  print(t.right(), out, true);
  if (as_argument) out += ')';
}

class Parser {
 public:
  Parser(std::string_view text, bool allow_vars) : text_(text), allow_vars_(allow_vars) {}

  Pattern parse() {
    auto p = parse_application();
    skip_space();
    if (pos_ != text_.size()) throw SyntaxError("unexpected character", pos_);
    return p;
  }

 private:
  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool at_operand_start() {
    skip_space();
    if (pos_ >= text_.size()) return false;
    char c = text_[pos_];
    return c == '(' || c == 'S' || c == 'F' ||
           (allow_vars_ && (std::islower(static_cast<unsigned char>(c)) || c == '_'));
  }

  Pattern parse_application() {
    if (!at_operand_start()) {
      throw SyntaxError(pos_ >= text_.size() ? "unexpected end of input" : "expected a term", pos_);
    }
    Pattern acc = parse_operand();
    while (at_operand_start()) acc = Pattern::app(std::move(acc), parse_operand());
    return acc;
  }

  Pattern parse_operand() {
    skip_space();
    char c = text_[pos_];
    if (c == '(') {
      ++pos_;
      Pattern inner = parse_application();
      skip_space();
      if (pos_ >= text_.size() || text_[pos_] != ')') throw SyntaxError("expected ')'", pos_);
      ++pos_;
      return inner;
    }
    if (c == 'S' || c == 'F') {
      std::size_t start = pos_++;
      if (pos_ < text_.size() && is_ident_char(text_[pos_])) {
        throw SyntaxError("unknown atom", start);
      }
      return Pattern::atom(c == 'S' ? Atom::S : Atom::F);
    }
    std::size_t start = pos_;
    while (pos_ < text_.size() && is_ident_char(text_[pos_])) ++pos_;
    return Pattern::var(std::string(text_.substr(start, pos_ - start)));
  }

  static bool is_ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
  }

  std::string_view text_;
  bool allow_vars_;
  std::size_t pos_ = 0;
};

Term to_term(const Pattern& p) {
  if (p.is_atom()) return Term::atom(p.atom());
  if (p.is_var()) throw std::logic_error("pattern variable in closed term");
  return Term::app(to_term(p.left()), to_term(p.right()));
}

}  // namespace

std::string to_string(const Term& t) {
  std::string out;
  print(t, out, false);
  return out;
}

Term parse_term(std::string_view text) { return to_term(Parser(text, false).parse()); }

std::string to_string(const Path& path) {
  std::string out;
  for (Dir d : path) out += d == Dir::L ? 'L' : 'R';
  return out;
}

const Term& subterm(const Term& t, const Path& path) {
  const Term* cur = &t;
  for (Dir d : path) cur = d == Dir::L ? &cur->left() : &cur->right();
  return *cur;
}

namespace {

Term replace_from(const Term& t, const Path& path, std::size_t i, const Term& replacement) {
  if (i == path.size()) return replacement;
  if (path[i] == Dir::L) return Term::app(replace_from(t.left(), path, i + 1, replacement), t.right());
  return Term::app(t.left(), replace_from(t.right(), path, i + 1, replacement));
}

}  // namespace

Term replace_at(const Term& t, const Path& path, const Term& replacement) {
  return replace_from(t, path, 0, replacement);
}

// ---------------------------------------------------------------------------
// Reduction

bool is_factorable(const Term& t) {
  std::size_t arity = 0;
  const Term* cur = &t;
  while (cur->is_app()) {
    if (++arity > 2) return false;
    cur = &cur->left();
  }
  return true;
}

bool is_normal(const Term& t) {
  if (t.is_atom()) return true;
  return is_factorable(t) && is_normal(t.left()) && is_normal(t.right());
}

std::optional<Term> reduce_root(const Term& t) {
  // Root redexes have exactly three arguments.
  if (t.is_atom() || t.left().is_atom() || t.left().left().is_atom()) return std::nullopt;
  const Term& head_node = t.left().left().left();
  if (!head_node.is_atom()) return std::nullopt;
  const Term& a = t.left().left().right();
  const Term& m = t.left().right();
  const Term& n = t.right();
  if (head_node.atom() == Atom::S) return Term::app(Term::app(a, n), Term::app(m, n));
  if (a.is_atom()) return m;
  if (is_factorable(a)) return Term::app(Term::app(n, a.left()), a.right());
  return std::nullopt;
}

namespace {

// Preorder search; `innermost` prefers redexes inside the current node before
// the node itself.
std::optional<Contraction> find_redex(const Term& t, Path& path, bool innermost) {
  if (!innermost) {
    if (auto r = reduce_root(t)) return Contraction{*r, path};
  }
  if (t.is_app()) {
    path.push_back(Dir::L);
    if (auto c = find_redex(t.left(), path, innermost)) {
      path.pop_back();
      return Contraction{Term::app(c->result, t.right()), std::move(c->path)};
    }
    path.back() = Dir::R;
    if (auto c = find_redex(t.right(), path, innermost)) {
      path.pop_back();
      return Contraction{Term::app(t.left(), c->result), std::move(c->path)};
    }
    path.pop_back();
  }
  if (innermost) {
    if (auto r = reduce_root(t)) return Contraction{*r, path};
  }
  return std::nullopt;
}

void collect_reducts(const Term& root, const Term& t, Path& path, std::vector<Contraction>& out) {
  if (auto r = reduce_root(t)) out.push_back({replace_at(root, path, *r), path});
  if (t.is_app()) {
    path.push_back(Dir::L);
    collect_reducts(root, t.left(), path, out);
    path.back() = Dir::R;
    collect_reducts(root, t.right(), path, out);
    path.pop_back();
  }
}

}  // namespace

std::optional<Contraction> step(const Term& t, Strategy strategy) {
  Path path;
  return find_redex(t, path, strategy == Strategy::LeftmostInnermost);
}

std::vector<Contraction> reducts(const Term& t) {
  std::vector<Contraction> out;
  Path path;
  collect_reducts(t, t, path, out);
  return out;
}

nlohmann::json step_to_json(const TraceStep& s) {
  nlohmann::json path = nlohmann::json::array();
  for (Dir d : s.path) path.push_back(d == Dir::L ? "L" : "R");
  return {{"before", to_string(s.before)}, {"path", path}, {"after", to_string(s.after)}};
}

nlohmann::json to_json(const Trace& trace) {
  nlohmann::json steps = nlohmann::json::array();
  for (const auto& s : trace.steps) steps.push_back(step_to_json(s));
  return {{"steps", steps}};
}

Trace trace_from_json(const nlohmann::json& j) {
  Trace trace;
  for (const auto& s : j.at("steps")) {
    Path path;
    for (const auto& d : s.at("path")) {
      const auto& dir = d.get_ref<const std::string&>();
      if (dir != "L" && dir != "R") throw std::invalid_argument("bad path direction: " + dir);
      path.push_back(dir == "L" ? Dir::L : Dir::R);
    }
    trace.steps.push_back({parse_term(s.at("before").get<std::string>()), std::move(path),
                           parse_term(s.at("after").get<std::string>())});
  }
  return trace;
}

std::optional<Term> replay(const Trace& trace) {
  if (trace.steps.empty()) return std::nullopt;
  Term cur = trace.steps.front().before;
  for (const auto& s : trace.steps) {
    if (!(cur == s.before)) return std::nullopt;
    auto contracted = reduce_root(subterm(cur, s.path));
    if (!contracted) return std::nullopt;
    cur = replace_at(cur, s.path, *contracted);
    if (!(cur == s.after)) return std::nullopt;
  }
  return cur;
}

NormalizationResult normalize(const Term& t, std::size_t fuel, Strategy strategy) {
  if (fuel == 0) throw std::invalid_argument("fuel must be at least 1");
  NormalizationResult result{t, {}, false};
  for (std::size_t i = 0; i <= fuel; ++i) {
    auto c = step(result.term, strategy);
    if (!c) {
      result.normal = true;
      return result;
    }
    if (i == fuel) break;
    result.trace.steps.push_back({result.term, c->path, c->result});
    result.term = std::move(c->result);
  }
  return result;
}

std::optional<Cycle> find_cycle(const Term& t, std::size_t node_budget) {
  struct Visit {
    Term term;
    std::size_t parent;
    Path path;  // contraction leading here from parent
  };
  std::vector<Visit> nodes{{t, 0, {}}};
  std::unordered_map<Term, std::size_t, TermHash> index{{t, 0}};
  std::deque<std::size_t> queue{0};

  auto path_to = [&](std::size_t n) {
    std::vector<std::size_t> chain;
    for (; n != 0; n = nodes[n].parent) chain.push_back(n);
    chain.push_back(0);
    std::reverse(chain.begin(), chain.end());
    return chain;
  };

  while (!queue.empty()) {
    std::size_t u = queue.front();
    queue.pop_front();
    for (auto& c : reducts(nodes[u].term)) {
      auto it = index.find(c.result);
      if (it != index.end()) {
        // A back edge to a tree ancestor closes a cycle.
        auto chain = path_to(u);
        auto at = std::find(chain.begin(), chain.end(), it->second);
        if (at == chain.end()) continue;
        Cycle cycle;
        for (auto k = at; k + 1 != chain.end(); ++k) {
          cycle.steps.push_back({nodes[*k].term, nodes[*(k + 1)].path, nodes[*(k + 1)].term});
        }
        cycle.steps.push_back({nodes[u].term, c.path, c.result});
        return cycle;
      }
      if (nodes.size() >= node_budget) return std::nullopt;
      index.emplace(c.result, nodes.size());
      nodes.push_back({c.result, u, c.path});
      queue.push_back(nodes.size() - 1);
    }
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Patterns

struct Pattern::Node {
  enum class Kind { Atom, Var, App } kind;
  Atom atom = Atom::S;
  std::string name;
  std::optional<Pattern> left;
  std::optional<Pattern> right;
};

Pattern Pattern::atom(Atom a) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Atom;
  n->atom = a;
  return Pattern(std::move(n));
}

Pattern Pattern::var(std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::Var;
  n->name = std::move(name);
  return Pattern(std::move(n));
}

Pattern Pattern::app(Pattern fun, Pattern arg) {
  auto n = std::make_shared<Node>();
  n->kind = Node::Kind::App;
  n->left = std::move(fun);
  n->right = std::move(arg);
  return Pattern(std::move(n));
}

Pattern Pattern::from_term(const Term& t) {
  if (t.is_atom()) return atom(t.atom());
  return app(from_term(t.left()), from_term(t.right()));
}

bool Pattern::is_var() const noexcept { return node_->kind == Node::Kind::Var; }
bool Pattern::is_atom() const noexcept { return node_->kind == Node::Kind::Atom; }
bool Pattern::is_app() const noexcept { return node_->kind == Node::Kind::App; }

Atom Pattern::atom() const {
  if (!is_atom()) throw std::logic_error("sf::Pattern::atom on non-atom");
  return node_->atom;
}

const std::string& Pattern::name() const {
  if (!is_var()) throw std::logic_error("sf::Pattern::name on non-variable");
  return node_->name;
}

const Pattern& Pattern::left() const {
  if (!is_app()) throw std::logic_error("sf::Pattern::left on non-application");
  return *node_->left;
}

const Pattern& Pattern::right() const {
  if (!is_app()) throw std::logic_error("sf::Pattern::right on non-application");
  return *node_->right;
}

namespace {

void collect_vars(const Pattern& p, std::vector<std::string>& out) {
  if (p.is_var()) {
    out.push_back(p.name());
  } else if (p.is_app()) {
    collect_vars(p.left(), out);
    collect_vars(p.right(), out);
  }
}

// Head atom (if any) and argument count of a pattern spine.
std::pair<const Pattern*, std::size_t> pattern_spine(const Pattern& p) {
  std::size_t arity = 0;
  const Pattern* cur = &p;
  while (cur->is_app()) {
    ++arity;
    cur = &cur->left();
  }
  return {cur, arity};
}

bool pattern_factorable(const Pattern& p) {
  auto [head, arity] = pattern_spine(p);
  return head->is_atom() && arity <= 2;
}

bool pattern_normal(const Pattern& p) {
  if (!p.is_app()) return true;
  if (!pattern_normal(p.left()) || !pattern_normal(p.right())) return false;
  auto [head, arity] = pattern_spine(p);
  if (!head->is_atom() || arity <= 2) return true;
  if (arity > 3) return false;  // a redex sits in the function part
  if (head->atom() == Atom::S) return false;
  // F a m n: a redex unless `a` is a variable or a non-factorable compound.
  const Pattern& a = p.left().left().right();
  return !a.is_atom() && !pattern_factorable(a);
}

}  // namespace

std::vector<std::string> Pattern::variables() const {
  std::vector<std::string> out;
  collect_vars(*this, out);
  return out;
}

bool Pattern::is_linear() const {
  auto vars = variables();
  std::set<std::string> unique(vars.begin(), vars.end());
  return unique.size() == vars.size();
}

std::string to_string(const Pattern& p) {
  struct Printer {
    std::string out;
    void go(const Pattern& q, bool as_argument) {
      if (q.is_atom()) {
        out += q.atom() == Atom::S ? 'S' : 'F';
      } else if (q.is_var()) {
        out += q.name();
      } else {
        if (as_argument) out += '(';
        go(q.left(), false);
        out += ' ';
        go(q.right(), true);
        if (as_argument) out += ')';
      }
    }
  } printer;
  printer.go(p, false);
  return printer.out;
}

Pattern parse_pattern(std::string_view text) {
  Pattern p = Parser(text, true).parse();
  if (!p.is_linear()) throw SyntaxError("pattern is not linear", 0);
  if (!pattern_normal(p)) throw SyntaxError("pattern is not a normal form", 0);
  return p;
}

Pattern parse_body(std::string_view text) { return Parser(text, true).parse(); }

MatchResult match_pattern(const Pattern& p, const Term& u) {
  if (p.is_var()) return MatchSuccess{{{p.name(), u}}};
  if (p.is_atom() && u.is_atom() && p.atom() == u.atom()) return MatchSuccess{};
  if (p.is_app() && u.is_app() && is_factorable(u)) {
    MatchResult l = match_pattern(p.left(), u.left());
    MatchResult r = match_pattern(p.right(), u.right());
    // Both halves must be defined; failure then absorbs.
    if (std::holds_alternative<MatchUndefined>(l) || std::holds_alternative<MatchUndefined>(r)) {
      return MatchUndefined{};
    }
    if (std::holds_alternative<MatchFail>(l) || std::holds_alternative<MatchFail>(r)) {
      return MatchFail{};
    }
    auto subst = std::get<MatchSuccess>(std::move(l)).subst;
    for (auto& [k, v] : std::get<MatchSuccess>(r).subst) {
      if (!subst.emplace(k, v).second) throw std::logic_error("non-linear pattern variable " + k);
    }
    return MatchSuccess{std::move(subst)};
  }
  if (is_factorable(u)) return MatchFail{};
  return MatchUndefined{};
}

Term instantiate(const Pattern& body, const Substitution& subst) {
  if (body.is_atom()) return Term::atom(body.atom());
  if (body.is_var()) {
    auto it = subst.find(body.name());
    if (it == subst.end()) throw std::out_of_range("unbound pattern variable " + body.name());
    return it->second;
  }
  return Term::app(instantiate(body.left(), subst), instantiate(body.right(), subst));
}

Term apply_case(const Pattern& p, const Pattern& body, const Term& u) {
  MatchResult m = match_pattern(p, u);
  if (auto* ok = std::get_if<MatchSuccess>(&m)) return instantiate(body, ok->subst);
  if (std::holds_alternative<MatchFail>(m)) return u;
  throw UndefinedOnInput("case " + to_string(p) + " is undefined on " + to_string(u));
}

}  // namespace sfenc::sf
