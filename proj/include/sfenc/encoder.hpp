// Canonical lambda representations of canonical rewrite systems (Scott-style
// data, programs as Church tuples of case tables) and the composed encoding
// of SF-calculus.
#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "sfenc/lambda.hpp"
#include "sfenc/sf.hpp"
#include "sfenc/trs.hpp"

namespace sfenc::enc {

/// A closed lambda term for every symbol of a signature.
class Representation {
 public:
  explicit Representation(trs::Signature signature) : signature_(std::move(signature)) {}

  const trs::Signature& signature() const noexcept { return signature_; }
  /// Throws UnknownSymbol.
  const lam::Term& at(std::string_view symbol) const;
  bool contains(std::string_view symbol) const;
  void set(const std::string& symbol, lam::Term image);
  /// Constructors first, then programs, each in declaration order.
  std::vector<std::pair<std::string, lam::Term>> entries() const;

 private:
  trs::Signature signature_;
  std::vector<std::pair<std::string, lam::Term>> images_;
};

struct Artifacts {
  trs::System system;                          // after completion
  std::vector<std::string> fresh;              // v1..vk
  std::vector<lam::Term> pre;                  // psi(f_i)
  std::vector<std::vector<lam::Term>> cases;   // cases[i][j] = t_(i,j)
  std::vector<lam::Term> collations;           // t_i
};

struct CanonicalRepresentation {
  Representation rep;
  Artifacts artifacts;
};

/// \x1..xn f. f P x1..xn f, where P projects the i-th of r (1-based).
lam::Term constructor_rep(std::size_t i, std::size_t arity, std::size_t r);

/// Completes `sys` if needed. Throws NotCanonical.
CanonicalRepresentation build_canonical_representation(const trs::System& sys);

/// Homomorphic extension to terms; variables stay free. Throws UnknownSymbol.
lam::Term apply_representation(const Representation& rep, const trs::Term& t);

/// Built once from sf_applicative_system().
const CanonicalRepresentation& sf_representation();

lam::Term encode_sf(const sf::Term& m);

enum class Verdict { Pass, Fail, Inconclusive };
std::string to_string(Verdict v);

struct RuleCheck {
  std::size_t rule = 0;
  std::string text;
  Verdict verdict = Verdict::Inconclusive;
  std::size_t lhs_steps = 0;
  std::size_t rhs_steps = 0;
};

struct SolutionReport {
  std::vector<RuleCheck> rules;
  /// Fail if any rule fails, else Inconclusive if any ran out of fuel.
  Verdict overall() const;
};

/// Normalizes both sides of every rule under `rep` (rule variables free) and
/// compares the normal forms up to alpha. Rules are checked concurrently.
SolutionReport verify_solution(const trs::System& sys, const Representation& rep, std::size_t fuel);

/// {"symbol": "term", ...} in entries() order.
nlohmann::ordered_json to_json(const Representation& rep);
/// One `symbol = term` line per entry.
std::string to_listing(const Representation& rep);

}  // namespace sfenc::enc
