#pragma once

#include <stdexcept>
#include <string>

namespace pntap {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

// Argument outside the range covered by a table or grid.
class RangeError : public Error {
public:
  using Error::Error;
};

// Requested table does not fit the configured memory budget or index width.
class CapacityError : public Error {
public:
  using Error::Error;
};

// Precondition on a parameter violated (coprimality, u < 2, g(p) outside [0,1], ...).
class DomainError : public Error {
public:
  using Error::Error;
};

class OverflowError : public Error {
public:
  using Error::Error;
};

class ZeroDenominatorError : public Error {
public:
  using Error::Error;
};

class CacheError : public Error {
public:
  using Error::Error;
};

// A series could not be truncated within tolerance using the available table.
// Carries the smallest certificate that was reachable.
class NonconvergenceError : public Error {
public:
  NonconvergenceError(const std::string& what, double best_certificate)
      : Error(what), best_certificate_(best_certificate) {}

  double best_certificate() const noexcept { return best_certificate_; }

private:
  double best_certificate_;
};

} // namespace pntap
