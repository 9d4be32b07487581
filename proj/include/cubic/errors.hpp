#pragma once

#include <stdexcept>
#include <string>

namespace cubic {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct OverflowError : Error {
    using Error::Error;
};

struct DomainError : Error {
    using Error::Error;
};

// Not enough enumeration range or coefficient data; `required` carries the
// minimal size that would have sufficed.
struct ShortfallError : Error {
    long long required;
    ShortfallError(const std::string& what, long long need) : Error(what), required(need) {}
};

struct ResourceError : Error {
    long long progress;
    ResourceError(const std::string& what, long long done) : Error(what), progress(done) {}
};

struct NetworkError : Error {
    using Error::Error;
};

// The remote database answered but has no record under the label.
struct UnknownLabelError : NetworkError {
    using NetworkError::NetworkError;
};

struct ParseError : Error {
    enum class Kind {
        MalformedHeader,
        UnknownKey,
        BadValue,
        NonMonotoneIndex,
        Normalization,
        HeckeViolation,
        BoundViolation,
    };
    Kind kind;
    ParseError(Kind k, const std::string& what) : Error(what), kind(k) {}
};

struct InternalError : Error {
    using Error::Error;
};

}  // namespace cubic
