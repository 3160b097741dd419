// Strong-normalisation checking for lambda terms.
#pragma once

#include <cstddef>
#include <variant>
#include <vector>

#include "sfenc/lambda.hpp"

namespace sfenc::lam {

struct StronglyNormalising {
  /// Length of the longest reduction sequence to the normal form.
  std::size_t longest_reduction = 0;
  /// Exhaustive search: distinct proper reducts. Derivation: contractions
  /// performed while building the derivation.
  std::size_t reducts = 0;
};

/// `cycle` is a replayable reduction path whose last term equals its first.
struct NotSN {
  std::vector<TraceStep> cycle;
};

struct Unknown {
  std::size_t fuel_spent = 0;
};

using SNVerdict = std::variant<StronglyNormalising, NotSN, Unknown>;

enum class SnMethod {
  /// Derivation first; on budget exhaustion fall back to the exhaustive
  /// search to look for a cycle witness.
  Auto,
  /// Depth-first exploration of the complete one-step reduction graph, with
  /// visited terms deduplicated up to alpha. Budget = distinct terms visited.
  Exhaustive,
  /// Builds a derivation of the inductive characterisation of SN:
  ///   x M1..Mn      is SN  iff every Mi is SN
  ///   \x. M         is SN  iff M is SN
  ///   (\x. M) N K.. is SN  iff M[N/x] K.. is SN, and N is SN when x is unused.
  /// The derivation exists iff the term is SN; building it follows the
  /// maximal (longest-path) reduction strategy, which gives the longest
  /// reduction length. Budget = derivation nodes.
  Derivation,
};

SNVerdict is_strongly_normalising(const Term& t, std::size_t budget, SnMethod method = SnMethod::Auto);

}  // namespace sfenc::lam
