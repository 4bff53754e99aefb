#pragma once

#include <stdexcept>
#include <string>

namespace herodraft {

/// Base of every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid schedule, truth model or other configuration.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// Asked for the acting team of a finished draft.
class NoTurnError : public Error {
public:
    using Error::Error;
};

/// Hero not available, or draft already complete.
class IllegalActionError : public Error {
public:
    using Error::Error;
};

/// Malformed input data or dimension mismatch.
class DataError : public Error {
public:
    using Error::Error;
};

class ModelFormatError : public Error {
public:
    using Error::Error;
};

/// Query that is undefined for the given state (e.g. search from a terminal draft).
class QueryError : public Error {
public:
    using Error::Error;
};

/// Exhaustive search refused because the remaining tree is too large.
class SizeGuardError : public Error {
public:
    using Error::Error;
};

/// A strategy broke the drafting protocol during a simulation.
class ProtocolError : public Error {
public:
    ProtocolError(std::string strategy, std::size_t step, const std::string& what)
        : Error(what), strategy_(std::move(strategy)), step_(step) {}

    const std::string& strategy() const { return strategy_; }
    std::size_t step() const { return step_; }

private:
    std::string strategy_;
    std::size_t step_;
};

}  // namespace herodraft
