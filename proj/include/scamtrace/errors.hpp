#pragma once

#include <stdexcept>
#include <string>

namespace scamtrace {

// Base for all library errors; catching this maps to CLI exit code 1.
struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct MalformedRecord : Error { using Error::Error; };
struct InvalidEmail : Error { using Error::Error; };
struct MalformedIp : Error { using Error::Error; };

struct EmptyCorpus : Error { using Error::Error; };
struct DimensionMismatch : Error { using Error::Error; };
struct LengthMismatch : Error { using Error::Error; };

struct TooFewPoints : Error { using Error::Error; };
struct DegenerateDistances : Error { using Error::Error; };

struct EmptyInput : Error { using Error::Error; };
struct MissingPrice : Error { using Error::Error; };

struct NoIncludedPayments : Error { using Error::Error; };
struct EmptyWindow : Error { using Error::Error; };

struct InvalidConfig : Error { using Error::Error; };

// Filesystem / stream failures; maps to CLI exit code 2.
struct IoError : Error { using Error::Error; };

}  // namespace scamtrace
