#pragma once

#include <stdexcept>
#include <string>

namespace npqc {

// Qubit count beyond the dense-simulator limit.
struct CapacityError : std::runtime_error {
    explicit CapacityError(const std::string& msg) : std::runtime_error(msg) {}
};

// Mismatched dimensions between states, parameter vectors or matrices.
struct ShapeError : std::invalid_argument {
    explicit ShapeError(const std::string& msg) : std::invalid_argument(msg) {}
};

// Bad qubit index in a gate.
struct IndexError : std::out_of_range {
    explicit IndexError(const std::string& msg) : std::out_of_range(msg) {}
};

// Invalid scalar argument (shots = 0, rate <= 0, ...).
struct ArgumentError : std::invalid_argument {
    explicit ArgumentError(const std::string& msg) : std::invalid_argument(msg) {}
};

// Circuit depth exceeds p_max = 2^{N/2}.
struct DepthError : std::invalid_argument {
    explicit DepthError(const std::string& msg) : std::invalid_argument(msg) {}
};

// Operation requires the other circuit variant.
struct VariantError : std::invalid_argument {
    explicit VariantError(const std::string& msg) : std::invalid_argument(msg) {}
};

// Linear system is singular and no ridge was given.
struct SingularError : std::runtime_error {
    explicit SingularError(const std::string& msg) : std::runtime_error(msg) {}
};

// Gradient vanishes where a step direction is required.
struct StationaryPointError : std::runtime_error {
    explicit StationaryPointError(const std::string& msg) : std::runtime_error(msg) {}
};

// Value outside the formula's domain of validity.
struct DomainError : std::domain_error {
    explicit DomainError(const std::string& msg) : std::domain_error(msg) {}
};

// Requested state or fidelity cannot be realized.
struct InfeasibleError : std::runtime_error {
    explicit InfeasibleError(const std::string& msg) : std::runtime_error(msg) {}
};

// Sensing protocol assumption violated (basis-index collision, weak
// concentration of a gradient state, ...).
struct ProtocolError : std::runtime_error {
    explicit ProtocolError(const std::string& msg) : std::runtime_error(msg) {}
};

}  // namespace npqc
