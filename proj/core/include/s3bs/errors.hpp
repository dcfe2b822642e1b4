#pragma once

#include <stdexcept>
#include <string>

namespace s3bs {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

#define S3BS_DECLARE_ERROR(Name)                     \
    class Name : public Error {                      \
    public:                                          \
        using Error::Error;                          \
    }

S3BS_DECLARE_ERROR(DegeneratePair);
S3BS_DECLARE_ERROR(AntipodalPair);
S3BS_DECLARE_ERROR(DegenerateSpan);
S3BS_DECLARE_ERROR(DomainError);
S3BS_DECLARE_ERROR(InvalidSpec);
S3BS_DECLARE_ERROR(NonFiniteIntegrand);
S3BS_DECLARE_ERROR(NoBoundary);
S3BS_DECLARE_ERROR(UnknownClass);
S3BS_DECLARE_ERROR(WrongClass);
S3BS_DECLARE_ERROR(ProbeTooCloseToBoundary);
S3BS_DECLARE_ERROR(ConfigError);
S3BS_DECLARE_ERROR(OrientationError);

#undef S3BS_DECLARE_ERROR

}  // namespace s3bs
