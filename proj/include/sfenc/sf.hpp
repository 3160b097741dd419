// SF-calculus: terms over the combinators S and F, factorable forms,
// leftmost-outermost reduction and the pattern-match semantics used to
// define symbolic functions.
#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include <json.hpp>

namespace sfenc::sf {

enum class Atom { S, F };

/// Immutable binary applicative tree. Copies share structure; equality is
/// structural.
class Term {
 public:
  static Term s();
  static Term f();
  static Term atom(Atom a);
  static Term app(Term fun, Term arg);

  bool is_atom() const noexcept;
  bool is_app() const noexcept { return !is_atom(); }
  Atom atom() const;          // precondition: is_atom()
  const Term& left() const;   // precondition: is_app()
  const Term& right() const;  // precondition: is_app()

  /// Number of atom occurrences.
  std::size_t size() const noexcept;
  std::size_t hash() const noexcept;

  /// `t(u)` builds the application `t u`.
  Term operator()(const Term& arg) const { return app(*this, arg); }

  friend bool operator==(const Term& a, const Term& b) noexcept;

 private:
  struct Node;
  explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

struct TermHash {
  std::size_t operator()(const Term& t) const noexcept { return t.hash(); }
};

/// Head atom and arguments of the application spine.
struct Spine {
  Atom head;
  std::vector<Term> args;
};
Spine unspine(const Term& t);

/// Minimal-parenthesis printing; application is left-associative.
std::string to_string(const Term& t);

/// term := atom | '(' term ')' | term term ; atom := 'S' | 'F'
Term parse_term(std::string_view text);

enum class Dir { L, R };
using Path = std::vector<Dir>;

std::string to_string(const Path& path);
const Term& subterm(const Term& t, const Path& path);
Term replace_at(const Term& t, const Path& path, const Term& replacement);

/// S, F, S M, F M, S M N, F M N.
bool is_factorable(const Term& t);
bool is_normal(const Term& t);

/// Contracts `t` itself if it is an S- or F-redex.
std::optional<Term> reduce_root(const Term& t);

enum class Strategy { LeftmostOutermost, LeftmostInnermost };

struct Contraction {
  Term result;
  Path path;
};

std::optional<Contraction> step(const Term& t,
                                Strategy strategy = Strategy::LeftmostOutermost);

/// Every one-step reduct, in leftmost-outermost order of the redexes.
std::vector<Contraction> reducts(const Term& t);

struct TraceStep {
  Term before;
  Path path;
  Term after;
};

struct Trace {
  std::vector<TraceStep> steps;
};

nlohmann::json step_to_json(const TraceStep& s);
/// {"steps":[{"before":str,"path":["L"|"R",...],"after":str},...]}
nlohmann::json to_json(const Trace& trace);
Trace trace_from_json(const nlohmann::json& j);

/// Re-applies every recorded contraction starting from the first term.
/// Returns the final term, or nullopt if a step does not reproduce `after`.
std::optional<Term> replay(const Trace& trace);

struct NormalizationResult {
  Term term;
  Trace trace;
  bool normal = false;  // false: fuel ran out, `term` is the last term reached
  std::size_t steps() const noexcept { return trace.steps.size(); }
};

NormalizationResult normalize(const Term& t, std::size_t fuel,
                              Strategy strategy = Strategy::LeftmostOutermost);

/// A reduction path t_0 -> ... -> t_k with t_k == t_0 (k >= 1).
struct Cycle {
  std::vector<TraceStep> steps;
};

/// Breadth-first search of the reduction graph of `t` for a reachable cycle.
/// Visits at most `node_budget` distinct terms.
std::optional<Cycle> find_cycle(const Term& t, std::size_t node_budget);

// ---------------------------------------------------------------------------
// Patterns and cases

/// SF term extended with variables. Parsing enforces linearity and that the
/// pattern is a normal form when variables are read as rigid unknowns.
class Pattern {
 public:
  static Pattern atom(Atom a);
  static Pattern var(std::string name);
  static Pattern app(Pattern fun, Pattern arg);
  static Pattern from_term(const Term& t);

  bool is_var() const noexcept;
  bool is_atom() const noexcept;
  bool is_app() const noexcept;
  Atom atom() const;
  const std::string& name() const;
  const Pattern& left() const;
  const Pattern& right() const;

  std::vector<std::string> variables() const;
  bool is_linear() const;

 private:
  struct Node;
  explicit Pattern(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

std::string to_string(const Pattern& p);

/// Lowercase identifiers are variables. Throws SyntaxError on non-linear or
/// non-normal patterns.
Pattern parse_pattern(std::string_view text);

/// Like parse_pattern but without the linearity/normality checks; used for
/// case bodies, which may be arbitrary terms.
Pattern parse_body(std::string_view text);

using Substitution = std::map<std::string, Term>;

struct MatchSuccess {
  Substitution subst;
};
struct MatchFail {};
/// The scrutinee is not matchable where a decision was required.
struct MatchUndefined {};

using MatchResult = std::variant<MatchSuccess, MatchFail, MatchUndefined>;

MatchResult match_pattern(const Pattern& p, const Term& u);

/// Replaces variables of `body` by their images. Throws std::out_of_range
/// on an unbound variable.
Term instantiate(const Pattern& body, const Substitution& subst);

/// The symbolic function of the case `p => body`: the instantiated body on
/// success, `u` unchanged on failure, UndefinedOnInput otherwise.
Term apply_case(const Pattern& p, const Pattern& body, const Term& u);

}  // namespace sfenc::sf
