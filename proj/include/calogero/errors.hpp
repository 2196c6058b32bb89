#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace calogero {

/// Argument outside the mathematical domain of an operation.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Flux too close to an integer: Hardy constant vanishes and every flux constant diverges.
class FluxDegenerateError : public DomainError {
public:
    using DomainError::DomainError;
};

/// A potential violates the monotonicity hypothesis of the theorem it was submitted to.
class HypothesisError : public std::runtime_error {
public:
    HypothesisError(const std::string& what, std::size_t first, std::size_t second)
        : std::runtime_error(what), first_(first), second_(second) {}

    std::size_t first() const { return first_; }
    std::size_t second() const { return second_; }

private:
    std::size_t first_;
    std::size_t second_;
};

/// Potential support extends past the truncated computational domain.
class TruncationError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Symmetric elimination hit a zero pivot even after shift jitter.
class IndeterminateCountError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Requested discretization exceeds the memory or size budget.
class ResourceLimitError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Interval partition of the circle cannot be constructed for the given potential.
class PartitionDegenerateError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace calogero
