#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace gmfit {

/// Invalid argument or violated precondition (non-positive std, empty sample, ...).
class DomainError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A responsibility column vanished during the M-step.
class ComponentCollapse : public std::runtime_error {
public:
    explicit ComponentCollapse(std::size_t component)
        : std::runtime_error("component " + std::to_string(component) +
                             " collapsed: responsibility column sum below 1e-300"),
          component_(component) {}

    std::size_t component() const noexcept { return component_; }

private:
    std::size_t component_;
};

/// Every restart of a fit collapsed.
class FitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Malformed price CSV. line() is 1-based; 0 when the error is not tied to a row.
class ParseError : public std::runtime_error {
public:
    ParseError(std::size_t line, const std::string& what)
        : std::runtime_error(line == 0 ? what : "line " + std::to_string(line) + ": " + what),
          line_(line) {}

    std::size_t line() const noexcept { return line_; }

private:
    std::size_t line_;
};

/// A price window or series too short to yield a return.
class InsufficientData : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace gmfit
