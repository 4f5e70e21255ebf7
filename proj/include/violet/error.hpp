#pragma once

#include <stdexcept>
#include <string>

namespace violet {

/// Base of every error the pipeline reports to callers.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define VIOLET_DECLARE_ERROR(Name)     \
  class Name : public ::violet::Error { \
   public:                             \
    using ::violet::Error::Error;      \
  }

VIOLET_DECLARE_ERROR(UnknownName);
VIOLET_DECLARE_ERROR(UnknownNode);
VIOLET_DECLARE_ERROR(UnknownStatement);
VIOLET_DECLARE_ERROR(UnknownConfig);
VIOLET_DECLARE_ERROR(UnsatInitialConfig);
VIOLET_DECLARE_ERROR(UnsatState);
VIOLET_DECLARE_ERROR(UnsatPredicate);
VIOLET_DECLARE_ERROR(SolverLimitExceeded);
VIOLET_DECLARE_ERROR(RuntimeFault);
VIOLET_DECLARE_ERROR(DegenerateTrace);
VIOLET_DECLARE_ERROR(TraceFormatError);
VIOLET_DECLARE_ERROR(ModelFormatError);
VIOLET_DECLARE_ERROR(ConfigFileError);
VIOLET_DECLARE_ERROR(NoMatchingRow);

}  // namespace violet
