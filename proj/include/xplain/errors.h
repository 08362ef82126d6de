#ifndef XPLAIN_ERRORS_H_
#define XPLAIN_ERRORS_H_

#include <cstddef>
#include <stdexcept>
#include <string>

namespace xplain {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A predicate or constant outside the problem's declared vocabulary.
class VocabularyError : public Error {
 public:
  using Error::Error;
};

/// Text could not be parsed. Positions are 1-based.
class ParseError : public Error {
 public:
  ParseError(const std::string& message, std::size_t line, std::size_t column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " +
              message),
        message_(message),
        line_(line),
        column_(column) {}

  const std::string& message() const { return message_; }
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::string message_;
  std::size_t line_;
  std::size_t column_;
};

/// A `:requirements` flag outside the supported STRIPS subset.
class UnsupportedRequirementError : public ParseError {
 public:
  UnsupportedRequirementError(const std::string& requirement, std::size_t line,
                              std::size_t column)
      : ParseError("unsupported requirement " + requirement, line, column),
        requirement_(requirement) {}

  const std::string& requirement() const { return requirement_; }

 private:
  std::string requirement_;
};

/// Raised when a scheme cannot be instantiated for the requested subject.
class ExplanationError : public Error {
 public:
  using Error::Error;
};

/// The requested scheme does not match the kind of plan step.
class WrongSchemeError : public ExplanationError {
 public:
  using ExplanationError::ExplanationError;
};

/// An operation was called outside its documented precondition.
class PreconditionError : public Error {
 public:
  using Error::Error;
};

/// An id that does not name anything in the session.
class NotFoundError : public Error {
 public:
  using Error::Error;
};

}  // namespace xplain

#endif  // XPLAIN_ERRORS_H_
