#pragma once

#include <stdexcept>
#include <string>

namespace wf {

/// Violation of an operation precondition (size mismatch, bad parameter).
struct ContractError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

/// Evaluation requested outside the feasible set Q (non-increasing positions).
struct OutsideDomainError : std::domain_error {
    using std::domain_error::domain_error;
};

/// A tridiagonal factorization hit a non-positive pivot.
struct SingularHessianError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Invalid run configuration; `field` names the offending entry.
struct ConfigError : std::runtime_error {
    std::string field;
    ConfigError(std::string field_, const std::string& what_)
        : std::runtime_error(what_), field(std::move(field_)) {}
};

}  // namespace wf
