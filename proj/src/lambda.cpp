#include "sfenc/lambda.hpp"

#include <algorithm>
#include <cctype>
#include <functional>
#include <stdexcept>

#include "sfenc/error.hpp"

namespace sfenc::lam {

struct Term::Node {
  Kind kind;
  std::size_t index = 0;
  std::string name;  // Free: the name; Abs: the hint
  std::optional<Term> a;
  std::optional<Term> b;
  std::size_t size = 1;
  std::size_t hash = 0;
  std::size_t loose = 0;
  bool normal = true;
  bool has_free = false;
};

Term Term::free(std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Free;
  n->hash = hash_mix(0xf4ee, std::hash<std::string>{}(name));
  n->name = std::move(name);
  n->has_free = true;
  return Term(std::move(n));
}

Term Term::bound(std::size_t index) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Bound;
  n->index = index;
  n->hash = hash_mix(0xb0b, index);
  n->loose = index + 1;
  return Term(std::move(n));
}

Term Term::abs(std::string hint, Term body) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::Abs;
  n->name = std::move(hint);
  n->size = body.size() + 1;
  n->hash = hash_mix(0xab5, body.hash());
  n->loose = body.loose() > 0 ? body.loose() - 1 : 0;
  n->normal = body.is_normal();
  n->has_free = body.has_free_names();
  n->a = std::move(body);
  return Term(std::move(n));
}

Term Term::app(Term fun, Term arg) {
  auto n = std::make_shared<Node>();
  n->kind = Kind::App;
  n->size = fun.size() + arg.size() + 1;
  n->hash = hash_mix(hash_mix(0xa99, fun.hash()), arg.hash());
  n->loose = std::max(fun.loose(), arg.loose());
  n->normal = fun.is_normal() && arg.is_normal() && !fun.is_abs();
  n->has_free = fun.has_free_names() || arg.has_free_names();
  n->a = std::move(fun);
  n->b = std::move(arg);
  return Term(std::move(n));
}

Term::Kind Term::kind() const noexcept { return node_->kind; }

const std::string& Term::name() const {
  if (!is_free()) throw std::logic_error("lam::Term::name on non-free term");
  return node_->name;
}

std::size_t Term::index() const {
  if (!is_bound()) throw std::logic_error("lam::Term::index on non-bound term");
  return node_->index;
}

const std::string& Term::hint() const {
  if (!is_abs()) throw std::logic_error("lam::Term::hint on non-abstraction");
  return node_->name;
}

const Term& Term::body() const {
  if (!is_abs()) throw std::logic_error("lam::Term::body on non-abstraction");
  return *node_->a;
}

const Term& Term::fun() const {
  if (!is_app()) throw std::logic_error("lam::Term::fun on non-application");
  return *node_->a;
}

const Term& Term::arg() const {
  if (!is_app()) throw std::logic_error("lam::Term::arg on non-application");
  return *node_->b;
}

std::size_t Term::size() const noexcept { return node_->size; }
std::size_t Term::hash() const noexcept { return node_->hash; }
bool Term::is_normal() const noexcept { return node_->normal; }
std::size_t Term::loose() const noexcept { return node_->loose; }
bool Term::has_free_names() const noexcept { return node_->has_free; }

bool operator==(const Term& x, const Term& y) noexcept {
  if (x.node_ == y.node_) return true;
  const auto& a = *x.node_;
  const auto& b = *y.node_;
  if (a.kind != b.kind || a.hash != b.hash || a.size != b.size) return false;
  switch (a.kind) {
    case Term::Kind::Free:
      return a.name == b.name;
    case Term::Kind::Bound:
      return a.index == b.index;
    case Term::Kind::Abs:
      return *a.a == *b.a;
    case Term::Kind::App:
      return *a.a == *b.a && *a.b == *b.b;
  }
  return false;
}

// ---------------------------------------------------------------------------

namespace {

Term abstract_at(const Term& t, const std::string& name, std::size_t depth) {
  switch (t.kind()) {
    case Term::Kind::Free:
      return t.name() == name ? Term::bound(depth) : t;
    case Term::Kind::Bound:
      return t.index() >= depth ? Term::bound(t.index() + 1) : t;
    case Term::Kind::Abs:
      if (!t.has_free_names() && t.loose() <= depth) return t;
      return Term::abs(t.hint(), abstract_at(t.body(), name, depth + 1));
    case Term::Kind::App:
      if (!t.has_free_names() && t.loose() <= depth) return t;
      return Term::app(abstract_at(t.fun(), name, depth), abstract_at(t.arg(), name, depth));
  }
  return t;
}

Term open_at(const Term& t, std::size_t depth, const Term& arg) {
  if (t.loose() <= depth) return t;
  switch (t.kind()) {
    case Term::Kind::Bound:
      if (t.index() == depth) return shift(arg, depth);
      return Term::bound(t.index() - 1);
    case Term::Kind::Abs:
      return Term::abs(t.hint(), open_at(t.body(), depth + 1, arg));
    case Term::Kind::App:
      return Term::app(open_at(t.fun(), depth, arg), open_at(t.arg(), depth, arg));
    case Term::Kind::Free:
      break;
  }
  return t;
}

Term substitute_at(const Term& t, const std::string& x, const Term& s, std::size_t depth) {
  if (!t.has_free_names()) return t;
  switch (t.kind()) {
    case Term::Kind::Free:
      return t.name() == x ? shift(s, depth) : t;
    case Term::Kind::Abs:
      return Term::abs(t.hint(), substitute_at(t.body(), x, s, depth + 1));
    case Term::Kind::App:
      return Term::app(substitute_at(t.fun(), x, s, depth), substitute_at(t.arg(), x, s, depth));
    case Term::Kind::Bound:
      break;
  }
  return t;
}

void collect_free(const Term& t, std::set<std::string>& out) {
  if (!t.has_free_names()) return;
  switch (t.kind()) {
    case Term::Kind::Free:
      out.insert(t.name());
      break;
    case Term::Kind::Abs:
      collect_free(t.body(), out);
      break;
    case Term::Kind::App:
      collect_free(t.fun(), out);
      collect_free(t.arg(), out);
      break;
    case Term::Kind::Bound:
      break;
  }
}

}  // namespace

Term lambda(const std::string& name, const Term& body) {
  return Term::abs(name, abstract_at(body, name, 0));
}

Term lambda(std::span<const std::string> names, const Term& body) {
  Term acc = body;
  for (auto it = names.rbegin(); it != names.rend(); ++it) acc = lambda(*it, acc);
  return acc;
}

Term lambda(std::initializer_list<std::string> names, const Term& body) {
  return lambda(std::span<const std::string>(names.begin(), names.size()), body);
}

Term apply(Term fun, std::span<const Term> args) {
  for (const auto& a : args) fun = Term::app(std::move(fun), a);
  return fun;
}

Term apply(Term fun, std::initializer_list<Term> args) {
  return apply(std::move(fun), std::span<const Term>(args.begin(), args.size()));
}

std::set<std::string> free_names(const Term& t) {
  std::set<std::string> out;
  collect_free(t, out);
  return out;
}

Term substitute(const Term& t, const std::string& x, const Term& s) {
  return substitute_at(t, x, s, 0);
}

Term instantiate(const Term& body, const Term& arg) { return open_at(body, 0, arg); }

Term shift(const Term& t, std::size_t by, std::size_t cutoff) {
  if (by == 0 || t.loose() <= cutoff) return t;
  switch (t.kind()) {
    case Term::Kind::Bound:
      return Term::bound(t.index() + by);
    case Term::Kind::Abs:
      return Term::abs(t.hint(), shift(t.body(), by, cutoff + 1));
    case Term::Kind::App:
      return Term::app(shift(t.fun(), by, cutoff), shift(t.arg(), by, cutoff));
    case Term::Kind::Free:
      break;
  }
  return t;
}

bool references(const Term& t, std::size_t depth) {
  if (t.loose() <= depth) return false;
  switch (t.kind()) {
    case Term::Kind::Bound:
      return t.index() == depth;
    case Term::Kind::Abs:
      return references(t.body(), depth + 1);
    case Term::Kind::App:
      return references(t.fun(), depth) || references(t.arg(), depth);
    case Term::Kind::Free:
      break;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Printing

namespace {

bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) || c == '_'; }
bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
}

std::string sanitize_hint(const std::string& hint) {
  std::string base;
  for (char c : hint) {
    if (base.empty() ? is_ident_start(c) : is_ident_char(c)) base += c;
  }
  while (!base.empty() && base.back() == '\'') base.pop_back();
  return base.empty() ? "x" : base;
}

class Printer {
 public:
  explicit Printer(const Term& root) : avoid_(free_names(root)) {}

  std::string run(const Term& t) {
    go(t, true);
    return std::move(out_);
  }

 private:
  // `tail`: nothing follows this term inside the current parenthesis group,
  // so a trailing abstraction needs no parentheses.
  void go(const Term& t, bool tail) {
    switch (t.kind()) {
      case Term::Kind::Free:
        out_ += t.name();
        return;
      case Term::Kind::Bound:
        if (t.index() < scope_.size()) {
          out_ += scope_[scope_.size() - 1 - t.index()];
        } else {
          out_ += "^" + std::to_string(t.index() - scope_.size());
        }
        return;
      case Term::Kind::Abs: {
        if (!tail) out_ += '(';
        out_ += '\\';
        const Term* cur = &t;
        std::size_t pushed = 0;
        while (cur->is_abs()) {
          if (pushed > 0) out_ += ' ';
          scope_.push_back(fresh(cur->hint()));
          out_ += scope_.back();
          ++pushed;
          cur = &cur->body();
        }
        out_ += ". ";
        go(*cur, true);
        scope_.resize(scope_.size() - pushed);
        if (!tail) out_ += ')';
        return;
      }
      case Term::Kind::App: {
        std::vector<const Term*> args;
        const Term* head = &t;
        while (head->is_app()) {
          args.push_back(&head->arg());
          head = &head->fun();
        }
        std::reverse(args.begin(), args.end());
        go(*head, false);
        for (std::size_t i = 0; i < args.size(); ++i) {
          out_ += ' ';
          const Term& a = *args[i];
          bool last = i + 1 == args.size();
          if (a.is_app()) {
            out_ += '(';
            go(a, true);
            out_ += ')';
          } else {
            go(a, last && tail);
          }
        }
        return;
      }
    }
  }

  std::string fresh(const std::string& hint) {
    std::string name = sanitize_hint(hint);
    while (avoid_.count(name) ||
           std::find(scope_.begin(), scope_.end(), name) != scope_.end()) {
      name += '\'';
    }
    return name;
  }

  std::set<std::string> avoid_;
  std::vector<std::string> scope_;
  std::string out_;
};

// ---------------------------------------------------------------------------
// Parsing

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Term parse() {
    Term t = parse_term();
    skip_space();
    if (pos_ != text_.size()) throw SyntaxError("unexpected character", pos_);
    return t;
  }

 private:
  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool at_lambda() {
    skip_space();
    if (pos_ < text_.size() && text_[pos_] == '\\') return true;
    return text_.substr(pos_, 2) == "\xCE\xBB";  // UTF-8 lambda
  }

  bool at_atom() {
    skip_space();
    return pos_ < text_.size() && (text_[pos_] == '(' || is_ident_start(text_[pos_]));
  }

  Term parse_term() {
    if (at_lambda()) return parse_abstraction();
    if (!at_atom()) {
      throw SyntaxError(pos_ >= text_.size() ? "unexpected end of input" : "expected a term", pos_);
    }
    Term acc = parse_atom();
    while (true) {
      if (at_atom()) {
        acc = Term::app(acc, parse_atom());
      } else if (at_lambda()) {
        return Term::app(acc, parse_abstraction());
      } else {
        return acc;
      }
    }
  }

  Term parse_abstraction() {
    pos_ += text_[pos_] == '\\' ? 1 : 2;
    std::vector<std::string> names;
    while (true) {
      skip_space();
      if (pos_ < text_.size() && text_[pos_] == '.') break;
      if (pos_ >= text_.size() || !is_ident_start(text_[pos_])) {
        throw SyntaxError("expected binder name or '.'", pos_);
      }
      names.push_back(identifier());
    }
    if (names.empty()) throw SyntaxError("abstraction without binder", pos_);
    ++pos_;  // '.'
    for (const auto& n : names) scope_.push_back(n);
    Term body = parse_term();
    scope_.resize(scope_.size() - names.size());
    for (auto it = names.rbegin(); it != names.rend(); ++it) body = Term::abs(*it, body);
    return body;
  }

  Term parse_atom() {
    skip_space();
    if (text_[pos_] == '(') {
      ++pos_;
      Term inner = parse_term();
      skip_space();
      if (pos_ >= text_.size() || text_[pos_] != ')') throw SyntaxError("expected ')'", pos_);
      ++pos_;
      return inner;
    }
    std::string name = identifier();
    for (std::size_t i = scope_.size(); i-- > 0;) {
      if (scope_[i] == name) return Term::bound(scope_.size() - 1 - i);
    }
    return Term::free(std::move(name));
  }

  std::string identifier() {
    std::size_t start = pos_;
    while (pos_ < text_.size() && is_ident_char(text_[pos_])) ++pos_;
    return std::string(text_.substr(start, pos_ - start));
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::vector<std::string> scope_;
};

}  // namespace

std::string to_string(const Term& t) { return Printer(t).run(t); }

Term parse_term(std::string_view text) { return Parser(text).parse(); }

std::string to_string(const Path& path) {
  std::string out;
  for (Dir d : path) out += d == Dir::L ? 'L' : d == Dir::R ? 'R' : 'B';
  return out;
}

// ---------------------------------------------------------------------------
// Reduction

namespace {

std::optional<Contraction> find_redex(const Term& t, Path& path) {
  if (t.is_normal()) return std::nullopt;
  if (t.is_abs()) {
    path.push_back(Dir::B);
    auto c = find_redex(t.body(), path);
    path.pop_back();
    if (c) c->result = Term::abs(t.hint(), std::move(c->result));
    return c;
  }
  // Not normal, so t is an application.
  if (t.fun().is_abs()) return Contraction{instantiate(t.fun().body(), t.arg()), path};
  path.push_back(Dir::L);
  if (auto c = find_redex(t.fun(), path)) {
    path.pop_back();
    c->result = Term::app(std::move(c->result), t.arg());
    return c;
  }
  path.back() = Dir::R;
  auto c = find_redex(t.arg(), path);
  path.pop_back();
  if (c) c->result = Term::app(t.fun(), std::move(c->result));
  return c;
}

void collect_reducts(const Term& t, Path& path, const std::function<Term(Term)>& wrap,
                     std::vector<Contraction>& out) {
  if (t.is_normal()) return;
  switch (t.kind()) {
    case Term::Kind::Abs: {
      path.push_back(Dir::B);
      collect_reducts(t.body(), path,
                      [&](Term r) { return wrap(Term::abs(t.hint(), std::move(r))); }, out);
      path.pop_back();
      return;
    }
    case Term::Kind::App: {
      if (t.fun().is_abs()) out.push_back({wrap(instantiate(t.fun().body(), t.arg())), path});
      path.push_back(Dir::L);
      collect_reducts(t.fun(), path,
                      [&](Term r) { return wrap(Term::app(std::move(r), t.arg())); }, out);
      path.back() = Dir::R;
      collect_reducts(t.arg(), path,
                      [&](Term r) { return wrap(Term::app(t.fun(), std::move(r))); }, out);
      path.pop_back();
      return;
    }
    default:
      return;
  }
}

class SpineNormalizer {
 public:
  explicit SpineNormalizer(std::size_t fuel) : fuel_(fuel) {}

  std::size_t steps() const { return steps_; }

  Term run(const Term& t) {
    if (t.is_normal() || steps_ >= fuel_) return t;
    if (t.is_abs()) return Term::abs(t.hint(), run(t.body()));

    std::vector<Term> args;  // innermost argument last
    Term head = t;
    while (true) {
      while (head.is_app()) {
        args.push_back(head.arg());
        head = head.fun();
      }
      if (!head.is_abs() || args.empty() || steps_ >= fuel_) break;
      head = instantiate(head.body(), args.back());
      args.pop_back();
      ++steps_;
    }
    if (head.is_abs() && !args.empty()) {
      // Out of fuel in the middle of the head reduction.
      for (auto it = args.rbegin(); it != args.rend(); ++it) head = Term::app(head, *it);
      return head;
    }
    if (args.empty()) return run(head);
    Term acc = head;
    for (auto it = args.rbegin(); it != args.rend(); ++it) acc = Term::app(acc, run(*it));
    return acc;
  }

 private:
  std::size_t fuel_;
  std::size_t steps_ = 0;
};

}  // namespace

std::optional<Contraction> beta_step(const Term& t) {
  Path path;
  return find_redex(t, path);
}

std::vector<Contraction> beta_reducts(const Term& t) {
  std::vector<Contraction> out;
  Path path;
  collect_reducts(t, path, [](Term r) { return r; }, out);
  return out;
}

nlohmann::json step_to_json(const TraceStep& s) {
  nlohmann::json path = nlohmann::json::array();
  for (Dir d : s.path) path.push_back(d == Dir::L ? "L" : d == Dir::R ? "R" : "B");
  return {{"before", to_string(s.before)}, {"path", path}, {"after", to_string(s.after)}};
}

BetaResult normalize_beta(const Term& t, std::size_t fuel, bool record_trace) {
  if (fuel == 0) throw std::invalid_argument("fuel must be at least 1");
  if (!record_trace) {
    SpineNormalizer normalizer(fuel);
    Term result = normalizer.run(t);
    bool normal = result.is_normal();
    return {std::move(result), normalizer.steps(), normal, {}};
  }
  BetaResult r{t, 0, false, {}};
  while (true) {
    if (r.term.is_normal()) {
      r.normal = true;
      return r;
    }
    if (r.steps == fuel) return r;
    auto c = beta_step(r.term);
    r.trace.push_back({r.term, c->path, c->result});
    r.term = std::move(c->result);
    ++r.steps;
  }
}

// ---------------------------------------------------------------------------

Term church_tuple(std::span<const Term> items) {
  if (items.empty()) throw IndexOutOfRange("church_tuple needs at least one component");
  Term body = Term::bound(0);
  for (const auto& item : items) body = Term::app(body, shift(item, 1));
  return Term::abs("x", body);
}

Term church_tuple(std::initializer_list<Term> items) {
  return church_tuple(std::span<const Term>(items.begin(), items.size()));
}

Term projection(std::size_t n, std::size_t k) {
  if (k < 1 || k > n) {
    throw IndexOutOfRange("projection(" + std::to_string(n) + ", " + std::to_string(k) + ")");
  }
  Term body = Term::bound(n - k);
  for (std::size_t i = n; i >= 1; --i) body = Term::abs("x" + std::to_string(i), body);
  return body;
}

}  // namespace sfenc::lam
