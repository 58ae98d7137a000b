#pragma once

#include <stdexcept>
#include <string>

namespace porohom {

/// Base class of every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

#define POROHOM_DEFINE_ERROR(Name)         \
  class Name : public Error {              \
   public:                                 \
    using Error::Error;                    \
  }

// Input handling.
POROHOM_DEFINE_ERROR(ParseError);
POROHOM_DEFINE_ERROR(ValidationError);
POROHOM_DEFINE_ERROR(VersionMismatch);

// RVE generation.
POROHOM_DEFINE_ERROR(PackingFailed);
POROHOM_DEFINE_ERROR(DegenerateTessellation);

// Micro beam model.
POROHOM_DEFINE_ERROR(ZeroLengthElement);
POROHOM_DEFINE_ERROR(SingularSystem);
POROHOM_DEFINE_ERROR(SingularMatrix);

// Macro finite elements.
POROHOM_DEFINE_ERROR(DegenerateElement);
POROHOM_DEFINE_ERROR(MissingTangent);
POROHOM_DEFINE_ERROR(UnsupportedMesh);
POROHOM_DEFINE_ERROR(ConstitutiveError);  // callback failure, with element/point context

// Nonlinear solvers.
POROHOM_DEFINE_ERROR(LineSearchFailed);
POROHOM_DEFINE_ERROR(MaxIterations);
POROHOM_DEFINE_ERROR(SingularTangent);
POROHOM_DEFINE_ERROR(StepTooSmall);

// Surrogate and data.
POROHOM_DEFINE_ERROR(ShapeMismatch);
POROHOM_DEFINE_ERROR(DivergedLoss);
POROHOM_DEFINE_ERROR(EmptyDataset);
POROHOM_DEFINE_ERROR(MeshMismatch);

#undef POROHOM_DEFINE_ERROR

}  // namespace porohom
