#pragma once

#include <stdexcept>
#include <string>

namespace quatmatch {

/// Violated precondition on an argument (bad discriminant, non-prime, ...).
class PreconditionError : public std::invalid_argument {
public:
  using std::invalid_argument::invalid_argument;
};

/// An internal certificate failed. Signals an arithmetic bug, never bad input.
class CertificateError : public std::logic_error {
public:
  using std::logic_error::logic_error;
};

/// Input that is valid in principle but outside what the finite models resolve.
class UnsupportedInput : public std::domain_error {
public:
  using std::domain_error::domain_error;
};

inline void require(bool cond, const std::string &what) {
  if (!cond) throw PreconditionError(what);
}

} // namespace quatmatch
