#include "sfenc/sn.hpp"

#include <optional>
#include <stdexcept>
#include <unordered_map>

namespace sfenc::lam {
namespace {

SNVerdict exhaustive(const Term& root, std::size_t budget) {
  struct Frame {
    Term term;
    Path via;  // contraction from the parent frame
    std::vector<Contraction> next;
    std::size_t cursor = 0;
    std::size_t longest = 0;
  };
  struct Info {
    bool done = false;
    std::size_t longest = 0;
    std::size_t depth = 0;  // stack position while in progress
  };

  std::unordered_map<Term, Info, TermHash> seen;
  std::vector<Frame> stack;
  stack.push_back({root, {}, beta_reducts(root)});
  seen.emplace(root, Info{false, 0, 0});
  std::size_t visited = 1;

  while (!stack.empty()) {
    Frame& top = stack.back();
    if (top.cursor < top.next.size()) {
      Contraction c = top.next[top.cursor++];
      auto it = seen.find(c.result);
      if (it != seen.end()) {
        if (it->second.done) {
          top.longest = std::max(top.longest, it->second.longest + 1);
          continue;
        }
        NotSN witness;
        for (std::size_t i = it->second.depth + 1; i < stack.size(); ++i) {
          witness.cycle.push_back({stack[i - 1].term, stack[i].via, stack[i].term});
        }
        witness.cycle.push_back({top.term, c.path, c.result});
        return witness;
      }
      if (visited >= budget) return Unknown{visited};
      ++visited;
      seen.emplace(c.result, Info{false, 0, stack.size()});
      auto successors = beta_reducts(c.result);
      stack.push_back({std::move(c.result), std::move(c.path), std::move(successors)});
      continue;
    }
    std::size_t longest = top.longest;
    auto& info = seen.at(top.term);
    info.done = true;
    info.longest = longest;
    stack.pop_back();
    if (!stack.empty()) stack.back().longest = std::max(stack.back().longest, longest + 1);
  }
  return StronglyNormalising{seen.at(root).longest, visited - 1};
}

class Derivation {
 public:
  explicit Derivation(std::size_t budget) : budget_(budget) {}

  std::size_t spent() const { return spent_; }
  std::size_t contractions() const { return contractions_; }

  /// Longest reduction length of `t`, or nullopt when the budget runs out.
  std::optional<std::size_t> longest(Term t) {
    std::size_t total = 0;
    while (true) {
      if (spent_ >= budget_) return std::nullopt;
      ++spent_;
      if (t.is_normal()) return total;
      if (t.is_abs()) {
        t = t.body();
        continue;
      }
      std::vector<Term> args;  // innermost argument last
      Term head = t;
      while (head.is_app()) {
        args.push_back(head.arg());
        head = head.fun();
      }
      if (!head.is_abs()) {
        for (const auto& a : args) {
          auto n = longest(a);
          if (!n) return std::nullopt;
          total += *n;
        }
        return total;
      }
      const Term& argument = args.back();
      if (!references(head.body())) {
        // The argument is erased, so its own reductions can all happen first.
        auto n = longest(argument);
        if (!n) return std::nullopt;
        total += *n;
      }
      Term next = instantiate(head.body(), argument);
      args.pop_back();
      for (auto it = args.rbegin(); it != args.rend(); ++it) next = Term::app(next, *it);
      t = std::move(next);
      ++total;
      ++contractions_;
    }
  }

 private:
  std::size_t budget_;
  std::size_t spent_ = 0;
  std::size_t contractions_ = 0;
};

}  // namespace

SNVerdict is_strongly_normalising(const Term& t, std::size_t budget, SnMethod method) {
  if (budget == 0) throw std::invalid_argument("SN budget must be at least 1");
  switch (method) {
    case SnMethod::Exhaustive:
      return exhaustive(t, budget);
    case SnMethod::Derivation: {
      Derivation d(budget);
      if (auto n = d.longest(t)) return StronglyNormalising{*n, d.contractions()};
      return Unknown{d.spent()};
    }
    case SnMethod::Auto: {
      Derivation d(budget);
      if (auto n = d.longest(t)) return StronglyNormalising{*n, d.contractions()};
      SNVerdict fallback = exhaustive(t, budget);
      if (auto* u = std::get_if<Unknown>(&fallback)) u->fuel_spent += d.spent();
      return fallback;
    }
  }
  return Unknown{0};
}

}  // namespace sfenc::lam
