#pragma once

#include <stdexcept>
#include <string>

namespace subdelay {

// Every failure the library reports derives from Error so callers can catch
// one type at the orchestration boundary.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define SUBDELAY_DEFINE_ERROR(Name)                          \
  class Name : public Error {                                \
   public:                                                   \
    explicit Name(const std::string& what) : Error(what) {} \
  }

SUBDELAY_DEFINE_ERROR(CapacityExceeded);
SUBDELAY_DEFINE_ERROR(InvalidArity);
SUBDELAY_DEFINE_ERROR(DuplicateArm);
SUBDELAY_DEFINE_ERROR(InvalidArmSet);
SUBDELAY_DEFINE_ERROR(InvalidEnvironment);
SUBDELAY_DEFINE_ERROR(MissingContext);
SUBDELAY_DEFINE_ERROR(InvalidPmf);
SUBDELAY_DEFINE_ERROR(EmptyFamily);
SUBDELAY_DEFINE_ERROR(HorizonTooSmall);
SUBDELAY_DEFINE_ERROR(ProtocolViolation);
SUBDELAY_DEFINE_ERROR(OracleBudgetExceeded);
SUBDELAY_DEFINE_ERROR(NonPositiveRegret);
SUBDELAY_DEFINE_ERROR(InsufficientPoints);
SUBDELAY_DEFINE_ERROR(EmptyCell);

#undef SUBDELAY_DEFINE_ERROR

/// Configuration problem, optionally pinned to a 1-based line of the source file.
class ConfigError : public Error {
 public:
  ConfigError(const std::string& what, int line = 0)
      : Error(line > 0 ? "line " + std::to_string(line) + ": " + what : what), line_(line) {}

  int line() const noexcept { return line_; }

 private:
  int line_;
};

}  // namespace subdelay
