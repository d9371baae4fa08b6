#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace clarity {

// Base for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad user input: missing files, malformed requests, unusable data.
// The CLI maps this to exit code 2.
class InputError : public Error {
 public:
  using Error::Error;
};

// Document-level XML failure.
class ParseError : public InputError {
 public:
  ParseError(const std::string& what, std::uint64_t byte_offset)
      : InputError(what + " at byte " + std::to_string(byte_offset)),
        byte_offset_(byte_offset) {}

  std::uint64_t byte_offset() const noexcept { return byte_offset_; }

 private:
  std::uint64_t byte_offset_;
};

// Train/test overlap detected while evaluating.
class LeakageError : public Error {
 public:
  using Error::Error;
};

}  // namespace clarity
