#pragma once

#include <stdexcept>
#include <string>

namespace arithvol {

// Three error families, matching the CLI exit codes:
//   ParseError -> 1, DomainError -> 2, BudgetError -> 3.
struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DomainError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct BudgetError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

#define ARITHVOL_DEFINE_ERROR(NAME, BASE)                       \
  struct NAME : BASE {                                          \
    NAME() : BASE(#NAME) {}                                     \
    explicit NAME(const std::string& m)                         \
        : BASE(std::string(#NAME) + ": " + m) {}                \
  }

ARITHVOL_DEFINE_ERROR(NegativeCoordinate, DomainError);
ARITHVOL_DEFINE_ERROR(OutsideSimplex, DomainError);
ARITHVOL_DEFINE_ERROR(BoundaryPoint, DomainError);
ARITHVOL_DEFINE_ERROR(WeightsNotNormalized, DomainError);
ARITHVOL_DEFINE_ERROR(BadComposition, DomainError);
ARITHVOL_DEFINE_ERROR(WrongDimension, DomainError);
ARITHVOL_DEFINE_ERROR(EmptyRegion, DomainError);
ARITHVOL_DEFINE_ERROR(NotBoundary, DomainError);
ARITHVOL_DEFINE_ERROR(TooManyZeros, DomainError);
ARITHVOL_DEFINE_ERROR(BadExponent, DomainError);
ARITHVOL_DEFINE_ERROR(UpperBoundInvalid, DomainError);
ARITHVOL_DEFINE_ERROR(NoSections, DomainError);
ARITHVOL_DEFINE_ERROR(NotBig, DomainError);
ARITHVOL_DEFINE_ERROR(NotPseudoEffective, DomainError);
ARITHVOL_DEFINE_ERROR(OutOfDomain, DomainError);
ARITHVOL_DEFINE_ERROR(OutsideHull, DomainError);
ARITHVOL_DEFINE_ERROR(DegenerateHull, DomainError);
ARITHVOL_DEFINE_ERROR(NoFeasibleDelta, DomainError);
ARITHVOL_DEFINE_ERROR(BadLevel, DomainError);
ARITHVOL_DEFINE_ERROR(SearchFailed, DomainError);

ARITHVOL_DEFINE_ERROR(QuadratureNotConverged, BudgetError);
ARITHVOL_DEFINE_ERROR(ModeBudget, BudgetError);
ARITHVOL_DEFINE_ERROR(BudgetExceeded, BudgetError);
ARITHVOL_DEFINE_ERROR(ResolutionExceeded, BudgetError);

#undef ARITHVOL_DEFINE_ERROR

}  // namespace arithvol
