#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ruledrel {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed input: bad expression text, invalid surface or spec file.
class SpecError : public Error {
public:
    using Error::Error;
};

class ParseError : public SpecError {
public:
    ParseError(const std::string& message, std::size_t offset)
        : SpecError(message + " at offset " + std::to_string(offset)), offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

/// Evaluation left the domain of a formula (division by zero, sqrt of a
/// negative number, query outside the u-interval, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// A formula needs more derivative orders than the surface was built with.
class JetOrderError : public DomainError {
public:
    using DomainError::DomainError;
};

class QuadratureError : public DomainError {
public:
    QuadratureError(const std::string& message, double achieved_error)
        : DomainError(message), achieved_error_(achieved_error) {}

    double achieved_error() const noexcept { return achieved_error_; }

private:
    double achieved_error_;
};

/// The requested construction does not exist for this input, e.g. the
/// asymptotic image of a conoidal surface is not a skew ruled surface.
class DegenerationError : public Error {
public:
    using Error::Error;
};

}  // namespace ruledrel
