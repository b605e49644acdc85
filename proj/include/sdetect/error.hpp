#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace sdetect {

class Error : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Input text does not follow the declared format. line() is 1-based, 0 if unknown.
class ParseError : public Error
{
public:
  ParseError(const std::string& what, std::size_t line)
    : Error(line ? "line " + std::to_string(line) + ": " + what : what)
    , line_(line)
  {}
  std::size_t line() const { return line_; }

private:
  std::size_t line_;
};

/// Well-formed input that violates a data invariant (non-finite coordinate, bad batch index, ...).
class ValidationError : public Error
{
public:
  ValidationError(const std::string& what, std::size_t line = 0)
    : Error(line ? "line " + std::to_string(line) + ": " + what : what)
    , line_(line)
  {}
  std::size_t line() const { return line_; }

private:
  std::size_t line_;
};

/// Caller passed parameters outside an operation's precondition.
class ArgumentError : public Error
{
public:
  using Error::Error;
};

class IoError : public Error
{
public:
  using Error::Error;
};

/// Generator could not place the requested points within its attempt budget.
class GenerationError : public Error
{
public:
  using Error::Error;
};

} // namespace sdetect
