// First-order term rewriting over signatures split into constructors and
// programs, canonical systems, and the curryfied applicative presentation of
// SF-calculus.
#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "sfenc/sf.hpp"

namespace sfenc::trs {

struct SymbolDecl {
  std::string name;
  std::size_t arity = 0;

  friend bool operator==(const SymbolDecl&, const SymbolDecl&) = default;
};

enum class Role { Constructor, Program };

struct SymbolInfo {
  Role role;
  std::size_t index;  // position within its list
  std::size_t arity;
};

/// Constructors and programs, in declaration order. The order is part of the
/// signature's identity: the lambda encoder numbers symbols by it.
class Signature {
 public:
  /// Throws std::invalid_argument on duplicate names or a nullary program.
  Signature(std::vector<SymbolDecl> constructors, std::vector<SymbolDecl> programs);

  const std::vector<SymbolDecl>& constructors() const noexcept { return constructors_; }
  const std::vector<SymbolDecl>& programs() const noexcept { return programs_; }
  std::optional<SymbolInfo> find(std::string_view name) const;

  friend bool operator==(const Signature& a, const Signature& b) {
    return a.constructors_ == b.constructors_ && a.programs_ == b.programs_;
  }

 private:
  std::vector<SymbolDecl> constructors_;
  std::vector<SymbolDecl> programs_;
};

/// Immutable first-order term: a variable or a symbol applied to arguments.
class Term {
 public:
  static Term var(std::string name);
  static Term apply(std::string symbol, std::vector<Term> args = {});

  bool is_var() const noexcept;
  /// Variable name or head symbol.
  const std::string& name() const noexcept;
  const std::vector<Term>& args() const noexcept;

  std::size_t size() const noexcept;
  std::size_t hash() const noexcept;

  friend bool operator==(const Term& a, const Term& b) noexcept;

 private:
  struct Node;
  explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

struct TermHash {
  std::size_t operator()(const Term& t) const noexcept { return t.hash(); }
};

/// Variables in left-to-right order of first occurrence.
std::vector<std::string> variables(const Term& t);
/// Occurrence count per variable.
std::map<std::string, std::size_t> variable_occurrences(const Term& t);

using Substitution = std::map<std::string, Term>;
Term substitute(const Term& t, const Substitution& subst);

/// Syntactic matching of `pattern` against `t` (non-linear patterns compare
/// repeated variables for equality).
std::optional<Substitution> match(const Term& pattern, const Term& t);

/// Most general unifier, with occurs check.
std::optional<Substitution> unify(const Term& a, const Term& b);

/// Argument indices from the root.
using Position = std::vector<std::size_t>;

const Term& subterm(const Term& t, const Position& pos);
Term replace_at(const Term& t, const Position& pos, const Term& replacement);

std::string to_string(const Term& t);
std::string to_string(const Position& pos);

/// `name` or `name(t1, ..., tn)`. Names declared in `sig` are symbols (arity
/// checked), anything else is a variable. Identifiers may contain '-'.
Term parse_term(const Signature& sig, std::string_view text);

struct Rule {
  Term lhs;
  Term rhs;
};

std::string to_string(const Rule& rule);

struct System {
  Signature signature;
  std::vector<Rule> rules;
};

// -- canonical systems ---------------------------------------------------------

struct CanonicalReport {
  bool canonical = false;
  bool complete = false;
  std::vector<std::string> violations;
  /// (program, constructor) pairs without a rule.
  std::vector<std::pair<std::string, std::string>> missing;
};

CanonicalReport check_canonical(const System& sys);

/// Adds f(c(x1..xm), y1..yn) -> c(x1..xm) for every missing (c, f) pair.
/// Throws NotCanonical if `sys` is not canonical.
System complete_system(const System& sys);

struct OrthogonalityReport {
  bool left_linear = false;
  bool non_overlapping = false;
  bool orthogonal() const noexcept { return left_linear && non_overlapping; }
  std::vector<std::string> violations;
};

OrthogonalityReport check_orthogonal(const System& sys);

// -- rewriting -------------------------------------------------------------------

enum class Strategy { LeftmostOutermost, LeftmostInnermost };

struct Contraction {
  Term result;
  Position position;
  std::size_t rule;
};

/// Contracts `t` itself if some rule's left-hand side matches it.
std::optional<Contraction> rewrite_root(const System& sys, const Term& t);
/// Contracts the redex at `pos`; nullopt if there is none there.
std::optional<Contraction> rewrite_at(const System& sys, const Term& t, const Position& pos);
std::optional<Contraction> rewrite_step(const System& sys, const Term& t,
                                        Strategy strategy = Strategy::LeftmostOutermost);
/// Every one-step reduct, redexes in preorder.
std::vector<Contraction> rewrite_reducts(const System& sys, const Term& t);

struct TraceStep {
  Term before;
  Position position;
  Term after;
};

struct Trace {
  std::vector<TraceStep> steps;
};

nlohmann::json step_to_json(const TraceStep& s);
/// {"steps":[{"before":str,"path":[argument index...],"after":str},...]}
nlohmann::json to_json(const Trace& trace);

struct NormalizationResult {
  Term term;
  Trace trace;
  bool normal = false;  // false: fuel ran out
  std::size_t steps() const noexcept { return trace.steps.size(); }
};

NormalizationResult normalize(const System& sys, const Term& t, std::size_t fuel,
                              Strategy strategy = Strategy::LeftmostOutermost);

struct TerminationReport {
  enum class Outcome { Terminating, Cycle, Unknown } outcome;
  std::size_t longest = 0;  // longest reduction, when Terminating
  std::size_t visited = 0;  // distinct terms explored
};

/// Exhaustive depth-first exploration of the reduction graph of `t`.
TerminationReport explore_termination(const System& sys, const Term& t, std::size_t budget);

// -- text format -----------------------------------------------------------------

/// Line-oriented format; '#' starts a comment.
///   constructors: zero/0 succ/1
///   programs: add/2
///   rule add(zero, x) = x
System parse_system(std::string_view text);
std::string to_string(const System& sys);

// -- curryfied applicative SF-calculus ---------------------------------------------

/// Twelve rules over constructors S0 S1 S2 F0 F1 F2 and programs app,
/// f-reduce, in that order.
const System& sf_applicative_system();

/// S -> S0, F -> F0, M N -> app(M, N).
Term translate_sf(const sf::Term& t);

/// Left inverse of translate_sf; partial applications Ck(a1..ak) read back as
/// C a1 .. ak. Terms mentioning f-reduce or variables have no preimage.
std::optional<sf::Term> readback_sf(const Term& t);

sf::Path to_sf_path(const Position& pos);
Position to_trs_position(const sf::Path& path);

/// The rewrite sequence that simulates contracting the SF redex at `path` in
/// `before`: the redex's own spine is rewritten bottom-up, its arguments are
/// left untouched. Ends in translate_sf of the SF contractum (3, 4, 5 or 7
/// steps). Throws MismatchError if a planned position is not a redex.
Trace simulate_sf_step(const sf::Term& before, const sf::Path& path);

/// Same plan on any term whose subterm at `redex` has the shape
/// app(app(app(H, a), b), c) with H in {S0, F0}; a, b, c may contain variables.
Trace simulate_redex(const Term& before, const Position& redex);

}  // namespace sfenc::trs
