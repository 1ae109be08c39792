#ifndef FFVAR_ERRORS_HPP
#define FFVAR_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ffvar {

// Every library failure carries a stable machine-readable code and the
// subsystem it originated from; the CLI serializes these into error records.
class Error : public std::runtime_error {
  public:
    Error(std::string code, std::string subsystem, const std::string& msg)
        : std::runtime_error(msg), code_(std::move(code)), subsystem_(std::move(subsystem)) {}

    const std::string& code() const noexcept { return code_; }
    const std::string& subsystem() const noexcept { return subsystem_; }

  private:
    std::string code_;
    std::string subsystem_;
};

#define FFVAR_ERROR(NAME, CODE, SUBSYSTEM)                                     \
    class NAME : public Error {                                                \
      public:                                                                  \
        explicit NAME(const std::string& msg) : Error(CODE, SUBSYSTEM, msg) {} \
    };

FFVAR_ERROR(NonPrimeError, "NonPrime", "field")
FFVAR_ERROR(DegreeZeroError, "DegreeZero", "field")
FFVAR_ERROR(BoundExceededError, "BoundExceeded", "field")
FFVAR_ERROR(CtxMismatchError, "CtxMismatch", "field")
FFVAR_ERROR(DivisionByZeroError, "DivisionByZero", "field")
FFVAR_ERROR(IndexOutOfRangeError, "IndexOutOfRange", "field")

FFVAR_ERROR(NotSquarefreeError, "NotSquarefree", "poly")

FFVAR_ERROR(EvenCharacteristicError, "EvenCharacteristic", "lfunction")
FFVAR_ERROR(MissingLocalFactorError, "MissingLocalFactor", "lfunction")
FFVAR_ERROR(HypothesisViolatedError, "HypothesisViolated", "lfunction")

FFVAR_ERROR(BudgetExceededError, "BudgetExceeded", "variance")

FFVAR_ERROR(COutOfRangeError, "COutOfRange", "rmt")

FFVAR_ERROR(TruncationFailureError, "TruncationFailure", "characters")

FFVAR_ERROR(ConfigParseError, "ConfigParse", "cli")

#undef FFVAR_ERROR

} // namespace ffvar

#endif
