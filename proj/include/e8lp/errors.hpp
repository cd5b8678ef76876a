#pragma once

#include <stdexcept>
#include <string>

namespace e8lp {

/// Base of every error raised by the library. `kind()` is a stable tag used in
/// JSON reports and by the CLI.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& what) : std::runtime_error(what), kind_(std::move(kind)) {}
  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

#define E8LP_DEFINE_ERROR(Name)                                              \
  class Name : public Error {                                                \
   public:                                                                   \
    explicit Name(const std::string& what) : Error(#Name, what) {}           \
  };

// lattice-core
E8LP_DEFINE_ERROR(NotPositiveDefinite)
E8LP_DEFINE_ERROR(SingularBasis)
E8LP_DEFINE_ERROR(BudgetExceeded)
// modular-forms
E8LP_DEFINE_ERROR(InvalidWeight)
E8LP_DEFINE_ERROR(DivideByZeroSeries)
E8LP_DEFINE_ERROR(OrderUnderflow)
E8LP_DEFINE_ERROR(TailTooLarge)
E8LP_DEFINE_ERROR(IncompatibleSeries)
// magic-function
E8LP_DEFINE_ERROR(CancellationFailure)
E8LP_DEFINE_ERROR(PoleResidue)
E8LP_DEFINE_ERROR(OracleDiverged)
E8LP_DEFINE_ERROR(ChecksNotRun)
// lp-bounds
E8LP_DEFINE_ERROR(NumericalStall)
E8LP_DEFINE_ERROR(InvalidCertificate)
// cli-harness
E8LP_DEFINE_ERROR(ConfigError)

#undef E8LP_DEFINE_ERROR

}  // namespace e8lp
