#pragma once

#include <stdexcept>
#include <string>

namespace infocontract {

/// Argument outside the mathematical domain of an operation (e.g. a non-positive precision).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A tabulated object was queried outside the range it was built from.
class ExtrapolationError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

/// The principal cannot induce any participation or effort.
class InfeasibleContract : public std::runtime_error {
public:
    explicit InfeasibleContract(const std::string& what)
        : std::runtime_error("no feasible contract: " + what) {}
};

/// A precondition of a construction failed (e.g. elasticity ordering for a counterexample).
class PreconditionError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Malformed or inconsistent configuration.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

}  // namespace infocontract
