#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <span>
#include <vector>

namespace npqc {

using cplx = std::complex<double>;

enum class GateKind { RY, RZ, CPHASE };
enum class PauliAxis { Y, Z };

// Single gate from the simulator's gate set. Qubit indices are one-based;
// qubit 1 is the least significant bit of the basis index.
struct GateOp {
    GateKind kind;
    int q1 = 0;
    int q2 = 0;      // second qubit, CPHASE only
    double angle = 0.0;

    static GateOp ry(int qubit, double angle) { return {GateKind::RY, qubit, 0, angle}; }
    static GateOp rz(int qubit, double angle) { return {GateKind::RZ, qubit, 0, angle}; }
    static GateOp cphase(int control, int target) { return {GateKind::CPHASE, control, target, 0.0}; }

    // Negated-angle (or self-) inverse.
    GateOp inverse() const { return {kind, q1, q2, -angle}; }
};

// Dense complex amplitude array over n_qubits qubits. Practical limit is
// kMaxQubits = 24 (dense 2^N storage); the test suite exercises N <= 12.
class StateVector {
public:
    static constexpr int kMaxQubits = 24;

    explicit StateVector(int n_qubits);  // initialized to |0...0>

    int n_qubits() const { return n_qubits_; }
    std::size_t dim() const { return amps_.size(); }
    std::span<const cplx> amplitudes() const { return amps_; }
    cplx amplitude(std::size_t basis_index) const { return amps_[basis_index]; }
    void set_amplitude(std::size_t basis_index, cplx value) { amps_[basis_index] = value; }

    // In-place stride kernel over amplitude pairs; norm-preserving.
    void apply(const GateOp& gate);
    void apply(std::span<const GateOp> gates);

    // Multiplies the state by sigma^y or sigma^z on one qubit (not unitary
    // composition bookkeeping, just the Pauli action).
    void apply_pauli(PauliAxis axis, int qubit);

    // Multiplies by -i/2 * P, the insertion that turns a prefix state into
    // a derivative state.
    void apply_derivative_insertion(PauliAxis axis, int qubit);

    double norm_sq() const;

private:
    void check_qubit(int qubit) const;

    int n_qubits_;
    std::vector<cplx> amps_;
};

StateVector zero_state(int n_qubits);

// <a|b> with a conjugated.
cplx inner_product(const StateVector& a, const StateVector& b);

// |<a|b>|^2.
double fidelity(const StateVector& a, const StateVector& b);

// Multinomial draw from |amplitude|^2; deterministic for a fixed seed.
std::map<std::uint64_t, std::uint64_t> sample_basis(const StateVector& state,
                                                    std::uint64_t shots,
                                                    std::uint64_t seed);

// Normalized vector of independent standard complex Gaussians.
StateVector random_haar_state(int n_qubits, std::uint64_t seed);

}  // namespace npqc
