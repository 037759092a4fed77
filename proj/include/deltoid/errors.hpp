#ifndef DELTOID_ERRORS_HPP
#define DELTOID_ERRORS_HPP

#include <cstddef>
#include <stdexcept>
#include <string>

namespace deltoid {

// Base class for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// An argument lies outside the domain of the operation.
class DomainError : public Error {
public:
    using Error::Error;
};

// Vector or matrix sizes are inconsistent.
class DimensionError : public Error {
public:
    using Error::Error;
};

// An unscaled polynomial value is not representable as a double.
class OverflowError : public Error {
public:
    using Error::Error;
};

// A normalization norm vanished during an iteration.
class BreakdownError : public Error {
public:
    BreakdownError(const std::string& what, std::size_t iteration)
        : Error(what + " (iteration " + std::to_string(iteration) + ")"), iteration_(iteration)
    {
    }

    std::size_t iteration() const noexcept { return iteration_; }

private:
    std::size_t iteration_;
};

// Malformed input files or command-line configuration.
class ParseError : public Error {
public:
    using Error::Error;
};

// An experiment configuration field is missing or inconsistent.
class ConfigError : public Error {
public:
    ConfigError(const std::string& field, const std::string& what) : Error(field + ": " + what), field_(field) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

// A file could not be read or written.
class IoError : public Error {
public:
    using Error::Error;
};

} // namespace deltoid

#endif
