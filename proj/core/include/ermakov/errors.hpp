#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace ermakov {

/// Root of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed expression text. `offset()` is the byte offset of the problem.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t offset)
        : Error(what + " (at offset " + std::to_string(offset) + ")"), offset_(offset) {}

    std::size_t offset() const noexcept { return offset_; }

private:
    std::size_t offset_;
};

/// Expression evaluated outside its domain (1/0, ln of a non-positive number, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// A state came within the singularity guard of q = 0, f = 0, x = 0, rho = 0 or Q = 0.
class SingularityError : public Error {
public:
    using Error::Error;
};

/// m(t) <= 0.
class InvalidMassError : public Error {
public:
    using Error::Error;
};

/// Invalid scenario document, override or integration plan.
class ConfigError : public Error {
public:
    using Error::Error;
};

class QuadratureError : public Error {
public:
    using Error::Error;
};

/// Operation needs information the scenario does not carry (e.g. potentials).
class UnsupportedError : public Error {
public:
    using Error::Error;
};

} // namespace ermakov
