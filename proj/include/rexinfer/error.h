#ifndef REXINFER_ERROR_H_
#define REXINFER_ERROR_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace rexinfer {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed user input: expression text, sample files, XML, JSON.
class InputError : public Error {
 public:
  using Error::Error;
};

class ParseError : public InputError {
 public:
  ParseError(const std::string& what, std::size_t position)
      : InputError(what + " at offset " + std::to_string(position)),
        position_(position) {}

  std::size_t position() const { return position_; }

 private:
  std::size_t position_;
};

// A documented precondition of an operation does not hold.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

// An internal invariant was violated; indicates a bug.
class InvariantError : public Error {
 public:
  using Error::Error;
};

}  // namespace rexinfer

#endif  // REXINFER_ERROR_H_
