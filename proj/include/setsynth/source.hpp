#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace setsynth {

struct SourcePos {
  int line = 0;
  int col = 0;
};

struct Diagnostic {
  SourcePos pos;
  std::string message;

  std::string to_string() const {
    if (line() == 0) return message;
    return std::to_string(line()) + ":" + std::to_string(col()) + ": " + message;
  }
  int line() const { return pos.line; }
  int col() const { return pos.col; }
};

// Thrown by the front end (parser, uniformizer) and by evaluation when a
// program is ill-formed at run time. `failed` in the object language is not
// an error; it is a value-less outcome handled by the evaluators.
class CompileError : public std::runtime_error {
 public:
  explicit CompileError(Diagnostic d)
      : std::runtime_error(d.to_string()), diag_(std::move(d)) {}
  CompileError(SourcePos pos, std::string message)
      : CompileError(Diagnostic{pos, std::move(message)}) {}
  const Diagnostic& diagnostic() const { return diag_; }

 private:
  Diagnostic diag_;
};

class EvalError : public std::runtime_error {
 public:
  explicit EvalError(const std::string& message) : std::runtime_error(message) {}
};

}  // namespace setsynth
