#pragma once

#include <stdexcept>
#include <string>

namespace hodgeflow {

// Invalid topology passed to a builder (duplicates, broken closure, bad tuples).
struct ComplexError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct DuplicateError : ComplexError {
    using ComplexError::ComplexError;
};

// Non-positive or wrongly sized weight vector.
struct WeightError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Simplex index out of range for the requested order.
struct IndexError : std::out_of_range {
    using std::out_of_range::out_of_range;
};

// Requested order has no simplices, or lies outside [0, max_order].
struct OrderError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Cochain / operator size mismatch.
struct DimensionError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Subspace ranks inconsistent with the ambient dimension.
struct DecompositionError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Non-finite state encountered while integrating; carries the failure time.
struct IntegrationError : std::runtime_error {
    explicit IntegrationError(double t)
        : std::runtime_error("non-finite state at t=" + std::to_string(t)), time(t) {}
    double time;
};

// Vector passed as harmonic is not in the kernel of the Hodge Laplacian.
struct HarmonicError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Analysis input too short or otherwise unusable.
struct AnalysisError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

// Malformed file or scan configuration.
struct ConfigError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

}  // namespace hodgeflow
