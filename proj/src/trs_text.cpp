// Printing and parsing of first-order terms and rewrite systems.
#include <cctype>
#include <sstream>

#include "sfenc/error.hpp"
#include "sfenc/trs.hpp"

namespace sfenc::trs {

std::string to_string(const Term& t) {
  if (t.is_var() || t.args().empty()) return t.name();
  std::string out = t.name() + "(";
  for (std::size_t i = 0; i < t.args().size(); ++i) {
    if (i) out += ", ";
    out += to_string(t.args()[i]);
  }
  return out + ")";
}

std::string to_string(const Position& pos) {
  if (pos.empty()) return "e";
  std::string out;
  for (std::size_t i = 0; i < pos.size(); ++i) {
    if (i) out += ".";
    out += std::to_string(pos[i]);
  }
  return out;
}

std::string to_string(const Rule& rule) { return to_string(rule.lhs) + " -> " + to_string(rule.rhs); }

namespace {

bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '\'';
}

class TermParser {
 public:
  TermParser(const Signature& sig, std::string_view text, std::size_t base)
      : sig_(sig), text_(text), base_(base) {}

  Term parse_all() {
    Term t = term();
    skip();
    if (pos_ != text_.size()) fail("unexpected '" + std::string(1, text_[pos_]) + "'");
    return t;
  }

  Term term() {
    skip();
    std::size_t start = pos_;
    if (pos_ >= text_.size() || !ident_char(text_[pos_]) || text_[pos_] == '-') {
      fail("expected an identifier");
    }
    while (pos_ < text_.size() && ident_char(text_[pos_])) ++pos_;
    std::string name(text_.substr(start, pos_ - start));
    std::vector<Term> args;
    skip();
    bool parens = pos_ < text_.size() && text_[pos_] == '(';
    if (parens) {
      ++pos_;
      while (true) {
        args.push_back(term());
        skip();
        if (pos_ < text_.size() && text_[pos_] == ',') {
          ++pos_;
          continue;
        }
        if (pos_ < text_.size() && text_[pos_] == ')') {
          ++pos_;
          break;
        }
        fail("expected ',' or ')'");
      }
    }
    auto info = sig_.find(name);
    if (!info) {
      if (parens) fail("unknown symbol " + name, start);
      return Term::var(std::move(name));
    }
    if (info->arity != args.size()) {
      fail(name + " expects " + std::to_string(info->arity) + " argument(s), got " +
               std::to_string(args.size()),
           start);
    }
    return Term::apply(std::move(name), std::move(args));
  }

 private:
  void skip() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }
  [[noreturn]] void fail(const std::string& message) { fail(message, pos_); }
  [[noreturn]] void fail(const std::string& message, std::size_t at) {
    throw SyntaxError(message, base_ + at);
  }

  const Signature& sig_;
  std::string_view text_;
  std::size_t base_;
  std::size_t pos_ = 0;
};

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

}  // namespace

Term parse_term(const Signature& sig, std::string_view text) { return TermParser(sig, text, 0).parse_all(); }

System parse_system(std::string_view text) {
  std::vector<SymbolDecl> constructors, programs;
  bool have_constructors = false, have_programs = false;
  struct PendingRule {
    std::string_view lhs, rhs;
    std::size_t lhs_offset, rhs_offset, line;
  };
  std::vector<PendingRule> pending;

  std::size_t offset = 0, line_no = 0;
  auto error = [&](const std::string& message, std::size_t line, std::size_t at) -> SyntaxError {
    std::size_t line_start = text.rfind('\n', at == 0 ? 0 : at - 1);
    line_start = (line_start == std::string_view::npos || at == 0) ? 0 : line_start + 1;
    return SyntaxError("line " + std::to_string(line) + ":" + std::to_string(at - line_start + 1) +
                           ": " + message,
                       at);
  };

  while (offset <= text.size()) {
    std::size_t end = text.find('\n', offset);
    if (end == std::string_view::npos) end = text.size();
    ++line_no;
    std::string_view line = text.substr(offset, end - offset);
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    std::size_t lead = 0;
    while (lead < line.size() && std::isspace(static_cast<unsigned char>(line[lead]))) ++lead;
    std::string_view body = trim(line);
    std::size_t body_at = offset + lead;

    if (!body.empty()) {
      auto declarations = [&](std::string_view keyword, std::vector<SymbolDecl>& into, bool& seen) {
        if (seen) throw error("duplicate '" + std::string(keyword) + "' line", line_no, body_at);
        seen = true;
        std::string_view rest = body.substr(keyword.size() + 1);
        std::size_t rest_at = body_at + keyword.size() + 1;
        std::size_t i = 0;
        while (i < rest.size()) {
          while (i < rest.size() && std::isspace(static_cast<unsigned char>(rest[i]))) ++i;
          if (i >= rest.size()) break;
          std::size_t start = i;
          while (i < rest.size() && !std::isspace(static_cast<unsigned char>(rest[i]))) ++i;
          std::string_view decl = rest.substr(start, i - start);
          auto slash = decl.find('/');
          if (slash == std::string_view::npos || slash == 0 || slash + 1 == decl.size()) {
            throw error("expected name/arity", line_no, rest_at + start);
          }
          std::size_t arity = 0;
          for (char c : decl.substr(slash + 1)) {
            if (!std::isdigit(static_cast<unsigned char>(c))) {
              throw error("arity must be a number", line_no, rest_at + start + slash + 1);
            }
            arity = arity * 10 + static_cast<std::size_t>(c - '0');
          }
          into.push_back({std::string(decl.substr(0, slash)), arity});
        }
      };
      if (body.rfind("constructors:", 0) == 0) {
        declarations("constructors", constructors, have_constructors);
      } else if (body.rfind("programs:", 0) == 0) {
        declarations("programs", programs, have_programs);
      } else if (body.rfind("rule ", 0) == 0) {
        std::string_view rest = body.substr(5);
        auto eq = rest.find('=');
        if (eq == std::string_view::npos) throw error("rule needs '='", line_no, body_at);
        pending.push_back({rest.substr(0, eq), rest.substr(eq + 1), body_at + 5, body_at + 5 + eq + 1,
                           line_no});
      } else {
        throw error("expected 'constructors:', 'programs:' or 'rule'", line_no, body_at);
      }
    }
    offset = end + 1;
  }
  if (!have_constructors) throw error("missing 'constructors:' line", line_no, text.size());
  if (!have_programs) throw error("missing 'programs:' line", line_no, text.size());

  std::optional<Signature> sig;
  try {
    sig.emplace(std::move(constructors), std::move(programs));
  } catch (const std::invalid_argument& e) {
    throw SyntaxError(e.what(), 0);
  }
  System sys{*sig, {}};
  for (const auto& r : pending) {
    auto side = [&](std::string_view s, std::size_t at) {
      try {
        return TermParser(*sig, s, at).parse_all();
      } catch (const SyntaxError& e) {
        std::string what = e.what();
        throw error(what.substr(0, what.rfind(" at offset")), r.line, e.position());
      }
    };
    sys.rules.push_back({side(r.lhs, r.lhs_offset), side(r.rhs, r.rhs_offset)});
  }
  return sys;
}

std::string to_string(const System& sys) {
  std::ostringstream out;
  out << "constructors:";
  for (const auto& c : sys.signature.constructors()) out << ' ' << c.name << '/' << c.arity;
  out << "\nprograms:";
  for (const auto& p : sys.signature.programs()) out << ' ' << p.name << '/' << p.arity;
  out << '\n';
  for (const auto& r : sys.rules) out << "rule " << to_string(r.lhs) << " = " << to_string(r.rhs) << '\n';
  return out.str();
}

}  // namespace sfenc::trs
