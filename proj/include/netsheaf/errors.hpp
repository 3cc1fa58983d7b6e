// Error types shared across the library. Everything derives from Error so
// callers can catch one base; the concrete types say what went wrong.
#pragma once

#include <stdexcept>
#include <string>

namespace netsheaf {

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// poset / graph
struct CycleError : Error { using Error::Error; };
struct UnknownElement : Error { using Error::Error; };
struct MissingSelfEdge : Error { using Error::Error; };

// space
struct DimensionMismatch : Error { using Error::Error; };
struct DegenerateDomain : Error { using Error::Error; };
struct IndexOutOfRange : Error { using Error::Error; };

// sheaf
struct NotGlobal : Error { using Error::Error; };
struct SupportMismatch : Error { using Error::Error; };
struct NotASection : Error { using Error::Error; };
struct DefectExceeded : Error { using Error::Error; };
struct FunctorialityError : Error { using Error::Error; };

// network model
struct UnknownVertex : Error { using Error::Error; };
struct SignatureMismatch : Error { using Error::Error; };
struct MissingValue : Error { using Error::Error; };

// optimize
struct InfeasibleProblem : Error { using Error::Error; };

// boolean relaxation
struct SchemeInvalid : Error { using Error::Error; };
struct InconsistentDynamics : Error { using Error::Error; };

// problem files
struct ParseError : Error { using Error::Error; };

}  // namespace netsheaf
