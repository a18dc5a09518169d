#pragma once

#include <stdexcept>
#include <string>

namespace spinamp {

/// Invalid physical or numerical input (bad (N, j) pair, negative rate, ...).
class DomainError : public std::invalid_argument {
public:
    explicit DomainError(const std::string& what) : std::invalid_argument(what) {}
};

/// Problem size exceeds a configured solver limit.
class ResourceError : public std::runtime_error {
public:
    explicit ResourceError(const std::string& what) : std::runtime_error(what) {}
};

/// Adaptive integration failed to meet the requested tolerance.
class IntegrationError : public std::runtime_error {
public:
    IntegrationError(const std::string& what, double residual)
        : std::runtime_error(what + " (achieved residual " + std::to_string(residual) + ")"),
          achieved_residual(residual) {}
    double achieved_residual;
};

/// Population reached the truncated top of a Fock ladder.
class CutoffError : public std::runtime_error {
public:
    explicit CutoffError(const std::string& what) : std::runtime_error(what) {}
};

/// Config file failed validation; `field` is the offending key path.
class ValidationError : public std::runtime_error {
public:
    ValidationError(const std::string& field_path, const std::string& what)
        : std::runtime_error(field_path + ": " + what), field(field_path) {}
    std::string field;
};

} // namespace spinamp
