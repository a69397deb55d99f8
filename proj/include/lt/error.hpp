#pragma once

#include <stdexcept>
#include <string>

namespace lt {

enum class Err {
    Syntax,
    UnknownConstant,
    TypeMismatch,
    AffineViolation,
    BoxCapturesAffine,
    UnboundVariable,
    NotAnEncoding,
    MissingRule,
    InvalidPosition,
    FuelExhausted,
    ClassificationTooHigh,
    AlphabetMismatch,
    NoNullaryLetter,
    NotAlmostAffine,
    NotReversible,
    Unreachable,
    Invariant,
    Unsupported,
    Io,
};

const char* err_name(Err e);

struct Error : std::runtime_error {
    Err code;
    Error(Err c, const std::string& msg) : std::runtime_error(msg), code(c) {}
};

[[noreturn]] inline void fail(Err c, const std::string& msg) { throw Error(c, msg); }

}  // namespace lt
