#ifndef QSW_ERRORS_HPP
#define QSW_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qsw {

/// Invalid input to a pure function (non-finite arguments).
class DomainError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

/// Bad or inconsistent run configuration. Maps to CLI exit status 2.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Iteration failure, overflow or breakdown. Maps to CLI exit status 1.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace qsw

#endif  // QSW_ERRORS_HPP
