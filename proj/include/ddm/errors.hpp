#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ddm {

/// Invalid physical or numerical parameter passed to a constructor or generator.
class ParameterError : public std::invalid_argument
{
 public:
  using std::invalid_argument::invalid_argument;
};

/// Malformed input file; carries the 1-based line number.
class ParseError : public std::runtime_error
{
 public:
  ParseError(const std::string& source, std::size_t line, const std::string& what)
      : std::runtime_error(source + ":" + std::to_string(line) + ": " + what), line_(line)
  {
  }
  std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Non-positive element Jacobian.
class JacobianError : public std::runtime_error
{
 public:
  JacobianError(std::size_t element, double detJ)
      : std::runtime_error("element " + std::to_string(element) + " has non-positive Jacobian " +
                           std::to_string(detJ)),
        element_(element)
  {
  }
  std::size_t element() const { return element_; }

 private:
  std::size_t element_;
};

/// Zero pivot in the condensed system; `dof()` is the global degree of freedom.
class SingularSystemError : public std::runtime_error
{
 public:
  explicit SingularSystemError(std::size_t dof)
      : std::runtime_error("singular system: zero pivot at dof " + std::to_string(dof)), dof_(dof)
  {
  }
  std::size_t dof() const { return dof_; }

 private:
  std::size_t dof_;
};

/// A subset or dataset view that must be nonempty is empty.
class EmptyDataError : public std::runtime_error
{
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace ddm
