#pragma once

#include <functional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace ptscat {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed potential description (bad syntax, invalid layers, unknown family).
class SpecError : public Error {
 public:
  using Error::Error;
};

/// Argument outside an operation's domain, e.g. k = 0.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// The requested backend cannot represent this potential (stack on a non-layer potential).
class UnsupportedBackend : public Error {
 public:
  using Error::Error;
};

class SingularMatrix : public Error {
 public:
  using Error::Error;
};

/// Adaptive integration could not meet its tolerance within the step budget.
class ConvergenceError : public Error {
 public:
  ConvergenceError(const std::string& what, double worst_local_error)
      : Error(what), worst_local_error_(worst_local_error) {}

  double worst_local_error() const noexcept { return worst_local_error_; }

 private:
  double worst_local_error_;
};

using WarningSink = std::function<void(std::string_view)>;

// Installs a new sink and returns the previous one. The default sink writes to std::clog.
WarningSink set_warning_sink(WarningSink sink);
void warn(std::string_view message);

}  // namespace ptscat
