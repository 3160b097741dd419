#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sfenc {

/// Raised by every surface-syntax parser. `position` is a 0-based byte offset
/// into the parsed text (line/column are filled in by the system parser).
class SyntaxError : public std::runtime_error {
 public:
  SyntaxError(const std::string& message, std::size_t position)
      : std::runtime_error(message + " at offset " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

class NotCanonical : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UnknownSymbol : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UndefinedOnInput : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class IndexOutOfRange : public std::out_of_range {
 public:
  using std::out_of_range::out_of_range;
};

/// Two layers of the SF -> TRS -> lambda pipeline disagree. Always a bug.
class MismatchError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

inline std::size_t hash_mix(std::size_t seed, std::size_t value) noexcept {
  return seed ^ (value + 0x9e3779b97f4a7c15ULL + (seed << 12) + (seed >> 4));
}

}  // namespace sfenc
