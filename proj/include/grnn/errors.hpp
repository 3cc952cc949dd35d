#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace grnn {

// Bad numeric argument or violated type invariant.
class InvalidArgument : public std::invalid_argument
{
public:
  using std::invalid_argument::invalid_argument;
};

// Operation called on a network that does not pass validation.
class PreconditionError : public std::logic_error
{
public:
  using std::logic_error::logic_error;
};

// Request outside what an operation supports (e.g. non-zero initial
// conditions for the closed-form Lyapunov derivative).
class UnsupportedConfiguration : public std::logic_error
{
public:
  using std::logic_error::logic_error;
};

class IntegrationFailure : public std::runtime_error
{
public:
  IntegrationFailure(const std::string& what, double last_good_time)
      : std::runtime_error(what), last_good_time_(last_good_time)
  {
  }

  double last_good_time() const noexcept { return last_good_time_; }

private:
  double last_good_time_;
};

class SpecSyntaxError : public std::runtime_error
{
public:
  SpecSyntaxError(const std::string& what, std::size_t line, std::size_t column)
      : std::runtime_error(what), line_(line), column_(column)
  {
  }

  std::size_t line() const noexcept { return line_; }
  std::size_t column() const noexcept { return column_; }

private:
  std::size_t line_;
  std::size_t column_;
};

class SpecSchemaError : public std::runtime_error
{
public:
  SpecSchemaError(const std::string& what, std::string field)
      : std::runtime_error(what), field_(std::move(field))
  {
  }

  const std::string& field() const noexcept { return field_; }

private:
  std::string field_;
};

} // namespace grnn
