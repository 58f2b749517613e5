#pragma once

#include <stdexcept>
#include <string>

namespace pmk {

// Error taxonomy, grouped by how the CLI maps each class to an exit code:
// parse/usage -> 1, precondition -> 2, resource -> 3, internal -> 4.
struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ParseError : Error { using Error::Error; };
struct InvalidLift : Error { using Error::Error; };

struct NotSurjective : Error { using Error::Error; };
struct LocallyInjective : Error { using Error::Error; };
struct NotMarkov : Error { using Error::Error; };
struct NotSimple : Error { using Error::Error; };
struct DegeneratePiece : Error { using Error::Error; };

struct ResourceLimit : Error { using Error::Error; };

// Assertion-class failures. These indicate a bug or a broken derived rule,
// never bad user input; the CLI surfaces them verbatim with exit code 4.
struct Inconsistency : Error { using Error::Error; };
struct NotInvariant : Inconsistency { using Inconsistency::Inconsistency; };
struct LabelOutsideIndex : Inconsistency { using Inconsistency::Inconsistency; };
struct StabilityViolation : Inconsistency { using Inconsistency::Inconsistency; };
struct UnitNotInKernel : Inconsistency { using Inconsistency::Inconsistency; };
struct NoValidSubinterval : Inconsistency { using Inconsistency::Inconsistency; };

}  // namespace pmk
