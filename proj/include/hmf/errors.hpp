#pragma once

#include <stdexcept>
#include <string>

namespace hmf {

// Error categories map onto CLI exit codes: Validation-type errors exit 2,
// everything else exits 1.
enum class ErrorKind {
  Validation,        // bad input data, malformed files, header mismatches
  OutOfPrecision,    // requested coefficient/bound beyond the stored truncation
  Unsupported,       // ring/weight combination outside the supported set
  NotInvertible,     // constant-tuple slot is not a unit
  InsufficientData,  // character table lacks a needed prime value
  InvalidPrime,      // reduction at a prime in the inverted set
  RingMismatch,      // operands live over different rings
  Internal,          // broken invariant; always a bug
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& msg)
      : std::runtime_error(msg), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& msg) {
  throw Error(kind, msg);
}

}  // namespace hmf
