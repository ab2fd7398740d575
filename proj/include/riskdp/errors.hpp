#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace riskdp {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Model or document fails its structural invariants.
class ValidationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Requested combination of inputs is valid but not supported by this implementation.
class UnsupportedError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// A solver exhausted a configured resource budget.
class ResourceError : public std::runtime_error {
public:
    ResourceError(const std::string& what, std::size_t reached)
        : std::runtime_error(what), reached_(reached) {}

    std::size_t reached() const noexcept { return reached_; }

private:
    std::size_t reached_;
};

} // namespace riskdp
