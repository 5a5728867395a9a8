#pragma once

#include <optional>
#include <string>
#include <vector>

#include "npqc/statevec.hpp"

namespace npqc {

enum class Variant { FULL, Y_ONLY };

// Flat real parameter vector theta. Layout is layer-major; within a layer
// ascending qubit; per qubit y before z (Y_ONLY has no z entries). Layer 1
// covers all N qubits, layers l > 1 cover odd qubits 1, 3, ..., N-1 only.
using ParamVector = std::vector<double>;

constexpr int kLayoutVersion = 1;

struct ParamSite {
    int layer;       // 1-based
    int qubit;       // 1-based
    PauliAxis axis;  // Y or Z rotation
};

// Shift factors a_2 ... a_p driving entangling layers 2..p. Elements are
// picked from {0, ..., N/2-1} in ascending order; pass a seed to pick in a
// random order instead (for robustness tests).
std::vector<int> shift_sequence(int n_qubits, int n_layers,
                                std::optional<std::uint64_t> pick_seed = std::nullopt);

// Immutable description of one NPQC instance.
class NpqcSpec {
public:
    NpqcSpec(int n_qubits, int n_layers, Variant variant,
             std::optional<std::uint64_t> shift_pick_seed = std::nullopt);

    int n_qubits() const { return n_qubits_; }
    int n_layers() const { return n_layers_; }
    Variant variant() const { return variant_; }
    const std::vector<int>& shifts() const { return shifts_; }

    // M = N(p+1) for FULL, (N/2)(p+1) for Y_ONLY.
    int num_params() const;

    // Canonical index -> (layer, qubit, axis).
    const std::vector<ParamSite>& layout() const { return layout_; }

    std::string to_json() const;
    static NpqcSpec from_json(const std::string& text);

private:
    int n_qubits_;
    int n_layers_;
    Variant variant_;
    std::vector<int> shifts_;
    std::vector<ParamSite> layout_;
};

// Every y entry pi/2, every z entry 0.
ParamVector reference_params(const NpqcSpec& spec);

// Gate list plus the gate position of each parameterized rotation.
struct CircuitGates {
    std::vector<GateOp> gates;
    std::vector<std::size_t> param_positions;  // index i -> position of rotation i
};

// U(theta) in action order (leftmost gate acts first on |0>).
CircuitGates circuit_gates(const NpqcSpec& spec, const ParamVector& theta);

std::vector<GateOp> inverse_gates(const std::vector<GateOp>& gates);

// V_ref * U(theta_r)^dagger * U(theta) |0>; at theta = theta_r this is
// exactly V_ref |0>.
StateVector prepare_state(const NpqcSpec& spec, const ParamVector& theta,
                          const std::vector<GateOp>* v_ref = nullptr);

// U_y^dagger(theta_r) U_y(theta) |0> for the z-free metrology variant.
StateVector prepare_y_state(const NpqcSpec& spec, const ParamVector& theta);

// Full dressed gate list U(theta_r)^dagger U(theta) (plus v_ref), with the
// parameter positions referring to the U(theta) part. Shared by state
// preparation and gradient computation.
CircuitGates dressed_gates(const NpqcSpec& spec, const ParamVector& theta,
                           const std::vector<GateOp>* v_ref = nullptr);

void check_params(const NpqcSpec& spec, const ParamVector& theta);

}  // namespace npqc
