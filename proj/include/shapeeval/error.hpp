#ifndef SHAPEEVAL_ERROR_HPP_
#define SHAPEEVAL_ERROR_HPP_

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace shapeeval {

// Base for every failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Bad or inconsistent user input (files, ids, arguments). The CLI maps it to
// exit status 1.
class InputError : public Error {
 public:
  using Error::Error;
};

// Malformed file content. `line` is 1-based; 0 means "whole file".
class ParseError : public InputError {
 public:
  ParseError(std::string path, std::size_t line, const std::string& what);

  const std::string& path() const { return path_; }
  std::size_t line() const { return line_; }

 private:
  std::string path_;
  std::size_t line_;
};

// Failure while scoring well-formed input. The CLI maps it to exit status 2.
class EvaluationError : public Error {
 public:
  using Error::Error;
};

// A measure was requested for a query with no relevant objects (R = 0).
class UndefinedMeasure : public EvaluationError {
 public:
  using EvaluationError::EvaluationError;
};

enum class Severity { kWarning, kError };

struct Diagnostic {
  Severity severity = Severity::kWarning;
  std::string message;

  bool operator==(const Diagnostic&) const = default;
};

using Diagnostics = std::vector<Diagnostic>;

inline void Warn(Diagnostics* sink, std::string message) {
  if (sink != nullptr) sink->push_back({Severity::kWarning, std::move(message)});
}

std::size_t CountErrors(const Diagnostics& diagnostics);
std::size_t CountWarnings(const Diagnostics& diagnostics);

}  // namespace shapeeval

#endif  // SHAPEEVAL_ERROR_HPP_
