#pragma once
/**
 * @file errors.hpp
 * @brief Exception types shared by every module.
 *
 * The CLI maps these onto exit codes: ValidationError and ParseError -> 2,
 * RegimeError and ConfigError -> 3.
 */

#include <stdexcept>
#include <string>

namespace conic_defense {

/// Base of everything thrown by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// A geometric query was made outside its domain (point outside the sector,
/// guard radius requested for theta >= pi/4, ...).
class DomainError : public Error {
public:
    using Error::Error;
};

/// An instance or parameter tuple violates its invariants.
class ValidationError : public Error {
public:
    using Error::Error;
};

/// Malformed instance document. Carries the 1-based line and column.
class ParseError : public Error {
public:
    ParseError(const std::string& what, std::size_t line, std::size_t column)
        : Error(what + " (line " + std::to_string(line) + ", column " + std::to_string(column) + ")"),
          line_(line), column_(column) {}

    [[nodiscard]] std::size_t line() const noexcept { return line_; }
    [[nodiscard]] std::size_t column() const noexcept { return column_; }

private:
    std::size_t line_;
    std::size_t column_;
};

/// A parameter point lies outside the regime an algorithm or construction
/// needs. `bound` is the violated threshold when one exists.
class RegimeError : public Error {
public:
    RegimeError(const std::string& what, double bound = 0.0) : Error(what), bound_(bound) {}
    [[nodiscard]] double bound() const noexcept { return bound_; }

private:
    double bound_;
};

/// A policy configuration value (x_S, x_C, ...) is outside its admissible interval.
class ConfigError : public Error {
public:
    using Error::Error;
};

/// A policy returned a directive that breaks the motion contract.
class PolicyFault : public Error {
public:
    PolicyFault(const std::string& what, double time)
        : Error(what + " at t=" + std::to_string(time)), time_(time) {}
    [[nodiscard]] double time() const noexcept { return time_; }

private:
    double time_;
};

/// The exhaustive oracle was asked to solve an instance above its size limit.
class OracleLimitError : public Error {
public:
    using Error::Error;
};

}  // namespace conic_defense
