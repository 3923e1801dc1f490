#pragma once

#include <stdexcept>
#include <string>

namespace primegap {

enum class ErrorKind {
    InvalidArgument,
    PrecisionExhausted,
    CapExceeded,
    RangeError,
    IoError,
    FloorUncertified,
    ValidationFailed,
    QuadratureFailure,
    InvalidCurvature,
    QTooLarge,
    InsufficientElements,
    NotMember,
    CapacityExceeded,
    NotCoprime,
};

const char* to_string(ErrorKind kind) noexcept;

// Base for every library failure. The CLI maps InvalidArgument to exit
// status 2 and everything else to 3.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

template <ErrorKind K>
class KindedError : public Error {
public:
    explicit KindedError(const std::string& what) : Error(K, what) {}
};

using InvalidArgument = KindedError<ErrorKind::InvalidArgument>;
using PrecisionExhausted = KindedError<ErrorKind::PrecisionExhausted>;
using CapExceeded = KindedError<ErrorKind::CapExceeded>;
using RangeError = KindedError<ErrorKind::RangeError>;
using IoError = KindedError<ErrorKind::IoError>;
using FloorUncertified = KindedError<ErrorKind::FloorUncertified>;
using ValidationFailed = KindedError<ErrorKind::ValidationFailed>;
using QuadratureFailure = KindedError<ErrorKind::QuadratureFailure>;
using InvalidCurvature = KindedError<ErrorKind::InvalidCurvature>;
using QTooLarge = KindedError<ErrorKind::QTooLarge>;
using InsufficientElements = KindedError<ErrorKind::InsufficientElements>;
using NotMember = KindedError<ErrorKind::NotMember>;
using CapacityExceeded = KindedError<ErrorKind::CapacityExceeded>;
using NotCoprime = KindedError<ErrorKind::NotCoprime>;

inline const char* to_string(ErrorKind kind) noexcept {
    switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::PrecisionExhausted: return "PrecisionExhausted";
    case ErrorKind::CapExceeded: return "CapExceeded";
    case ErrorKind::RangeError: return "RangeError";
    case ErrorKind::IoError: return "IoError";
    case ErrorKind::FloorUncertified: return "FloorUncertified";
    case ErrorKind::ValidationFailed: return "ValidationFailed";
    case ErrorKind::QuadratureFailure: return "QuadratureFailure";
    case ErrorKind::InvalidCurvature: return "InvalidCurvature";
    case ErrorKind::QTooLarge: return "QTooLarge";
    case ErrorKind::InsufficientElements: return "InsufficientElements";
    case ErrorKind::NotMember: return "NotMember";
    case ErrorKind::CapacityExceeded: return "CapacityExceeded";
    case ErrorKind::NotCoprime: return "NotCoprime";
    }
    return "Error";
}

}  // namespace primegap
