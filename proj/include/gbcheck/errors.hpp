#pragma once

#include <stdexcept>
#include <string>

namespace gbcheck {

/// Thrown when an evaluation point lies outside a function's domain guard
/// (e.g. an iterated-log chain value would be undefined at the requested radius).
class DomainError : public std::domain_error {
public:
    explicit DomainError(const std::string& what) : std::domain_error(what) {}
};

/// Thrown when input data violates a structural invariant (bad profile,
/// overlapping charts, malformed config).
class ValidationError : public std::invalid_argument {
public:
    explicit ValidationError(const std::string& what) : std::invalid_argument(what) {}
};

/// Thrown when an adaptive rule exhausts its budget before reaching tolerance.
class NonConvergenceError : public std::runtime_error {
public:
    explicit NonConvergenceError(const std::string& what) : std::runtime_error(what) {}
};

/// Thrown when a pointwise evaluation would exceed the floating-point range
/// (callers should switch to density form).
class OverflowError : public std::runtime_error {
public:
    explicit OverflowError(const std::string& what) : std::runtime_error(what) {}
};

} // namespace gbcheck
