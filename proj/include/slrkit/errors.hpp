#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace slrkit {

// Numerical backend failure: an SVD or factorization that did not converge,
// or solver state that stopped being usable.
class NumericalError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed external input (image header, config file). Carries the byte
// offset of the first offending character so callers can point at it.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t byte_offset)
      : std::runtime_error(what + " (byte " + std::to_string(byte_offset) +
                           ")"),
        byte_offset_(byte_offset) {}

  std::size_t byte_offset() const noexcept { return byte_offset_; }

 private:
  std::size_t byte_offset_;
};

}  // namespace slrkit
