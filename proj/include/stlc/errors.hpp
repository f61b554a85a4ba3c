#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace stlc {

/// Half-open byte range [begin, end) into the source text.
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;
  bool operator==(const Span&) const = default;
};

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Errors that point at a location in source text.
class SourceError : public Error {
 public:
  SourceError(const std::string& what, Span span) : Error(what), span_(span) {}
  [[nodiscard]] Span span() const noexcept { return span_; }

 private:
  Span span_;
};

class SyntaxError : public SourceError {
 public:
  SyntaxError(const std::string& what, std::size_t position)
      : SourceError(what, Span{position, position + 1}), position_(position) {}
  [[nodiscard]] std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

class UnboundVariable : public SourceError {
 public:
  UnboundVariable(std::string name, Span span)
      : SourceError("unbound variable '" + name + "'", span), name_(std::move(name)) {}
  [[nodiscard]] const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

class TypeMismatch : public SourceError {
 public:
  TypeMismatch(std::string expected, std::string found, Span span)
      : SourceError("type mismatch: expected " + expected + ", found " + found, span),
        expected_(std::move(expected)),
        found_(std::move(found)) {}
  [[nodiscard]] const std::string& expected() const noexcept { return expected_; }
  [[nodiscard]] const std::string& found() const noexcept { return found_; }

 private:
  std::string expected_;
  std::string found_;
};

class NonArrowApplication : public SourceError {
 public:
  NonArrowApplication(std::string found, Span span)
      : SourceError("cannot apply a term of non-function type " + found, span),
        found_(std::move(found)) {}
  [[nodiscard]] const std::string& found() const noexcept { return found_; }

 private:
  std::string found_;
};

/// A de Bruijn index points past the end of its context.
class IllScoped : public Error {
 public:
  using Error::Error;
};

/// A cached type annotation disagrees with the term's structure.
class IllTyped : public Error {
 public:
  using Error::Error;
};

class NotAValue : public Error {
 public:
  using Error::Error;
};

class IndexOutOfRange : public Error {
 public:
  using Error::Error;
};

/// A Krivine machine state broke its no-Clapp invariant.
class InvalidEnvironment : public Error {
 public:
  using Error::Error;
};

/// A checked structural invariant did not hold during evaluation.
class InvariantViolation : public Error {
 public:
  using Error::Error;
};

class GenerationFailed : public Error {
 public:
  using Error::Error;
};

}  // namespace stlc
