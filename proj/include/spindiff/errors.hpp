#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace spindiff {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A numerical solver (root bracketing, quadrature) could not produce a result.
class SolverError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Invalid or incomplete configuration.
class ConfigError : public std::runtime_error {
public:
    explicit ConfigError(const std::string& what, std::vector<std::string> keys = {})
        : std::runtime_error(what), keys_(std::move(keys)) {}

    /// Offending keys, when the error is about specific entries.
    [[nodiscard]] const std::vector<std::string>& keys() const noexcept { return keys_; }

private:
    std::vector<std::string> keys_;
};

/// Adaptive time integration failed (step size underflow).
class IntegrationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace spindiff
