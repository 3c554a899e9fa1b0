#ifndef DHECKE_ERRORS_HPP
#define DHECKE_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace dhecke {

struct Error : std::runtime_error {
  explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

#define DHECKE_ERROR(Name)                                        \
  struct Name : Error {                                           \
    explicit Name(const std::string& msg = #Name) : Error(msg) {} \
  }

// padic_core
DHECKE_ERROR(NonOrdinaryInput);
DHECKE_ERROR(PrecisionTooLow);
DHECKE_ERROR(NotAUnit);
DHECKE_ERROR(PrecisionExhausted);
DHECKE_ERROR(UnsupportedPrime);
DHECKE_ERROR(RamifiedPrime);

// qexp
DHECKE_ERROR(WeightMismatch);
DHECKE_ERROR(LevelMismatch);
DHECKE_ERROR(RingMismatch);
DHECKE_ERROR(TruncationTooShort);

// dihedral_forms
DHECKE_ERROR(NotFundamental);
DHECKE_ERROR(BadCharacter);

// padic_stabilization
DHECKE_ERROR(LevelTooLow);
DHECKE_ERROR(BadIndices);
DHECKE_ERROR(NonUnitAlpha);
DHECKE_ERROR(OrdinaryInput);

// ordinary_engine
DHECKE_ERROR(NoConvergence);
DHECKE_ERROR(SingularIterate);
DHECKE_ERROR(SingularA);

// galois_regulators
DHECKE_ERROR(NotInSpan);
DHECKE_ERROR(RelationViolation);
DHECKE_ERROR(NonPrimeFieldResidue);
DHECKE_ERROR(NoFrobeniusMatch);

// harness
DHECKE_ERROR(PrecisionMismatch);
DHECKE_ERROR(NonOrdinaryPlace);

#undef DHECKE_ERROR

// Carries the level index at which a pairing backend could not answer.
struct BackendFailure : Error {
  int level;
  explicit BackendFailure(int level_, const std::string& msg = "BackendFailure")
      : Error(msg + " at level " + std::to_string(level_)), level(level_) {}
};

}  // namespace dhecke

#endif
