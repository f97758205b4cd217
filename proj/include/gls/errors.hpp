#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gls {

/// Malformed expression text. `offset()` is the byte position of the failure.
class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& what, std::size_t offset)
      : std::runtime_error(what + " at offset " + std::to_string(offset)), offset_(offset) {}
  std::size_t offset() const noexcept { return offset_; }

 private:
  std::size_t offset_;
};

/// Evaluation requested a variable that has no binding.
class UnboundVariable : public std::runtime_error {
 public:
  explicit UnboundVariable(const std::string& name)
      : std::runtime_error("unbound variable '" + name + "'"), name_(name) {}
  const std::string& name() const noexcept { return name_; }

 private:
  std::string name_;
};

/// Argument outside a function's real domain, or a point outside an action's domain.
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// A check was invoked on input that violates its stated precondition.
class PreconditionError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// A branch-specific formula was evaluated where its branch predicate fails.
class BranchMismatch : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Root bracketing or continuation failed.
class RootNotFound : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Numeric integration aborted. `time()` is where the right-hand side failed.
class IntegrationError : public std::runtime_error {
 public:
  IntegrationError(const std::string& what, double time)
      : std::runtime_error(what + " at t=" + std::to_string(time)), time_(time) {}
  double time() const noexcept { return time_; }

 private:
  double time_;
};

}  // namespace gls
