// Untyped lambda terms. Bound variables are de Bruijn indices, free variables
// are names, so alpha-equivalence is structural equality and substitution
// cannot capture. Binder names survive only as printing hints.
#pragma once

#include <cstddef>
#include <initializer_list>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

namespace sfenc::lam {

class Term {
 public:
  enum class Kind { Free, Bound, Abs, App };

  static Term free(std::string name);
  static Term bound(std::size_t index);
  /// `body` is already in index form: index 0 refers to this binder.
  static Term abs(std::string hint, Term body);
  static Term app(Term fun, Term arg);

  Kind kind() const noexcept;
  bool is_free() const noexcept { return kind() == Kind::Free; }
  bool is_bound() const noexcept { return kind() == Kind::Bound; }
  bool is_abs() const noexcept { return kind() == Kind::Abs; }
  bool is_app() const noexcept { return kind() == Kind::App; }

  const std::string& name() const;  // Free
  std::size_t index() const;        // Bound
  const std::string& hint() const;  // Abs
  const Term& body() const;         // Abs
  const Term& fun() const;          // App
  const Term& arg() const;          // App

  std::size_t size() const noexcept;
  std::size_t hash() const noexcept;
  /// Contains no beta-redex.
  bool is_normal() const noexcept;
  /// Number of enclosing binders the term refers past (0 = locally closed).
  std::size_t loose() const noexcept;
  bool has_free_names() const noexcept;
  bool is_closed() const noexcept { return loose() == 0 && !has_free_names(); }

  Term operator()(const Term& a) const { return app(*this, a); }

  /// Alpha-equivalence.
  friend bool operator==(const Term& a, const Term& b) noexcept;

 private:
  struct Node;
  explicit Term(std::shared_ptr<const Node> node) : node_(std::move(node)) {}
  std::shared_ptr<const Node> node_;
};

struct TermHash {
  std::size_t operator()(const Term& t) const noexcept { return t.hash(); }
};

/// `\name. body`, binding the free occurrences of `name` in `body`.
Term lambda(const std::string& name, const Term& body);
Term lambda(std::initializer_list<std::string> names, const Term& body);
Term lambda(std::span<const std::string> names, const Term& body);

Term apply(Term fun, std::span<const Term> args);
Term apply(Term fun, std::initializer_list<Term> args);

std::set<std::string> free_names(const Term& t);

inline bool alpha_eq(const Term& a, const Term& b) { return a == b; }

/// Capture-avoiding [s/x]t for the free variable x.
Term substitute(const Term& t, const std::string& x, const Term& s);

/// Body of an abstraction with index 0 replaced by `arg`: the contractum of
/// the redex (\. body) arg.
Term instantiate(const Term& body, const Term& arg);

/// Adds `by` to every index >= `cutoff`.
Term shift(const Term& t, std::size_t by, std::size_t cutoff = 0);

/// Does `t` refer to the binder `depth` levels up (index 0 at depth 0)?
bool references(const Term& t, std::size_t depth = 0);

// -- printing and parsing ----------------------------------------------------

/// Named rendering with minimal parentheses. Binder names come from hints,
/// primed (x, x', x'', ...) where they would clash with a free name or an
/// enclosing binder. Output re-parses to an alpha-equal term.
std::string to_string(const Term& t);

/// `\x y. body` or `λx y. body`; application is left-associative.
Term parse_term(std::string_view text);

// -- reduction -----------------------------------------------------------------

/// Moves from a node to a child: `L` function, `R` argument, `B` abstraction body.
enum class Dir { L, R, B };
using Path = std::vector<Dir>;

std::string to_string(const Path& path);

struct Contraction {
  Term result;
  Path path;
};

/// Contracts the leftmost-outermost redex.
std::optional<Contraction> beta_step(const Term& t);

/// All one-step reducts in leftmost-outermost redex order.
std::vector<Contraction> beta_reducts(const Term& t);

struct TraceStep {
  Term before;
  Path path;
  Term after;
};

nlohmann::json step_to_json(const TraceStep& s);

struct BetaResult {
  Term term;
  std::size_t steps = 0;
  bool normal = false;  // false: fuel exhausted, `term` is the last term reached
  std::vector<TraceStep> trace;  // filled only when requested
};

/// Normal-order normalization. Without a trace this walks the spine instead
/// of re-searching from the root, but contracts the same redexes in the same
/// order as iterating beta_step.
BetaResult normalize_beta(const Term& t, std::size_t fuel, bool record_trace = false);

// -- Church tuples ---------------------------------------------------------------

/// <t1, ..., tn> = \x. x t1 ... tn
Term church_tuple(std::span<const Term> items);
Term church_tuple(std::initializer_list<Term> items);

/// The n-ary k-th projection \x1 ... xn. xk, 1 <= k <= n.
Term projection(std::size_t n, std::size_t k);

}  // namespace sfenc::lam
