#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dynnull {

/// Base for every error raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Wrong vector length, too few samples, malformed call.
class ArgumentError : public Error {
public:
    using Error::Error;
};

/// Time lookup outside a trajectory's span.
class OutOfRangeError : public Error {
public:
    using Error::Error;
};

/// A volume went below the clamp threshold during integration. This
/// signals an invalid scenario (too large a step, bad parameters), not a
/// solver bug.
class IntegrationDomainError : public Error {
public:
    using Error::Error;
};

/// Scenario-level invariant violated (intervention timing, horizon).
class ScenarioError : public Error {
public:
    using Error::Error;
};

/// An intervention action that cannot be applied.
class ActionError : public Error {
public:
    using Error::Error;
};

/// Problem too large for support enumeration.
class SizeError : public Error {
public:
    using Error::Error;
};

/// Classification requested for a scenario shape it does not handle.
class UnsupportedScenarioError : public Error {
public:
    using Error::Error;
};

/// Invalid field value in a scenario file or spec. `field` names the
/// offending JSON path.
class ValidationError : public Error {
public:
    ValidationError(std::string field, const std::string& message)
        : Error(field + ": " + message), field_(std::move(field)) {}

    const std::string& field() const noexcept { return field_; }

private:
    std::string field_;
};

/// Malformed JSON text.
class ParseError : public Error {
public:
    ParseError(std::size_t line, std::size_t column, const std::string& message)
        : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
                message),
          line_(line), column_(column) {}

    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

}  // namespace dynnull
