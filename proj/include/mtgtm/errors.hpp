#pragma once

#include <stdexcept>
#include <string>

namespace mtgtm {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed or inconsistent program manifest / tape file.
class ParseError : public Error {
public:
    using Error::Error;
};

/// A documented precondition of an operation was not met.
class PreconditionError : public Error {
public:
    using Error::Error;
};

/// The board reached a position the construction never produces.
class EngineError : public Error {
public:
    using Error::Error;
};

/// A decision point had zero or several legal options.
class ForcedMoveViolation : public EngineError {
public:
    using EngineError::EngineError;
};

/// The battlefield does not encode a machine configuration.
class ExtractionError : public Error {
public:
    using Error::Error;
};

}  // namespace mtgtm
