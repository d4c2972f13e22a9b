#pragma once

#include <stdexcept>
#include <string>

namespace cshell {

// Every failure raised by the library derives from Error so that the CLI can
// map it to an exit code in one place.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define CSHELL_ERROR(Name)                  \
    class Name : public Error {             \
    public:                                 \
        using Error::Error;                 \
    }

CSHELL_ERROR(NotSkew);
CSHELL_ERROR(NotARotation);
CSHELL_ERROR(NonInvertible);
CSHELL_ERROR(DegenerateSurface);
CSHELL_ERROR(InvalidMaterial);
CSHELL_ERROR(GridTooCoarse);
CSHELL_ERROR(StructuralViolation);
CSHELL_ERROR(NotATangentDerivative);
CSHELL_ERROR(SingularSystem);
CSHELL_ERROR(LineSearchFailed);
CSHELL_ERROR(NotFlat);
CSHELL_ERROR(ConfigError);
CSHELL_ERROR(StateIOError);
CSHELL_ERROR(OutputError);

#undef CSHELL_ERROR

}  // namespace cshell
