#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace kgframe {

// Base of every error thrown by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed input text (N-Triples, program files, condition strings).
class ParseError : public Error {
 public:
  ParseError(std::size_t line, std::string token, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what +
              (token.empty() ? std::string() : " near '" + token + "'")),
        line_(line),
        token_(std::move(token)) {}

  std::size_t line() const noexcept { return line_; }
  const std::string& token() const noexcept { return token_; }

 private:
  std::size_t line_;
  std::string token_;
};

// An operator call that violates the frame contract (unknown column, terminal
// frame, ...).
class FrameError : public Error {
 public:
  using Error::Error;
};

// A query model that violates its structural invariants.
class ModelError : public Error {
 public:
  using Error::Error;
};

// Evaluation failures inside the reference evaluator.
class EvalError : public Error {
 public:
  using Error::Error;
};

// The endpoint refused a request, answered with an error status, or sent a
// body that is not a SPARQL results document.
class EndpointError : public Error {
 public:
  explicit EndpointError(const std::string& what, int status = 0) : Error(what), status_(status) {}
  int status() const noexcept { return status_; }

 private:
  int status_;
};

// The endpoint did not answer within the configured timeout.
class TimeoutError : public Error {
 public:
  using Error::Error;
};

}  // namespace kgframe
