#pragma once

#include <stdexcept>
#include <string>

namespace tsspec {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Matrix kernel failures.
struct NotSquare : Error { using Error::Error; };
struct NotHermitian : Error { using Error::Error; };
struct ConvergenceFailure : Error { using Error::Error; };
struct Singular : Error { using Error::Error; };

// Grid / window failures.
struct WindowTooSmall : Error { using Error::Error; };
struct WindowMismatch : Error { using Error::Error; };
struct InvalidParameter : Error { using Error::Error; };

// Problem definition and IO.
struct ParseError : Error { using Error::Error; };
struct SchemaVersionMismatch : Error { using Error::Error; };
struct RankDeficient : Error { using Error::Error; };
struct NotInBoundarySet : Error { using Error::Error; };

// Admissible-space and operator construction.
struct ToleranceFailure : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };
struct ClosureFailure : Error { using Error::Error; };
struct NotSelfAdjoint : Error { using Error::Error; };

// Spectral layer.
struct NotAdmissible : Error { using Error::Error; };
struct NotProper : Error { using Error::Error; };

// Sturm-Liouville conversion.
struct ZeroLeadingCoefficient : Error { using Error::Error; };

}  // namespace tsspec
