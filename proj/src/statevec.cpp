#include "npqc/statevec.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "npqc/errors.hpp"
#include "npqc/rng.hpp"

namespace npqc {

StateVector::StateVector(int n_qubits) : n_qubits_(n_qubits) {
    if (n_qubits < 1 || n_qubits > kMaxQubits) {
        throw CapacityError("n_qubits must be in [1, " + std::to_string(kMaxQubits) +
                            "], got " + std::to_string(n_qubits));
    }
    amps_.assign(std::size_t{1} << n_qubits, cplx(0.0, 0.0));
    amps_[0] = 1.0;
}

void StateVector::check_qubit(int qubit) const {
    if (qubit < 1 || qubit > n_qubits_) {
        throw IndexError("qubit index " + std::to_string(qubit) + " out of range [1, " +
                         std::to_string(n_qubits_) + "]");
    }
}

void StateVector::apply(const GateOp& gate) {
    check_qubit(gate.q1);
    const std::size_t dim = amps_.size();
    switch (gate.kind) {
    case GateKind::RY: {
        const double c = std::cos(gate.angle / 2);
        const double s = std::sin(gate.angle / 2);
        const std::size_t bit = std::size_t{1} << (gate.q1 - 1);
        for (std::size_t i = 0; i < dim; ++i) {
            if (i & bit) continue;
            const cplx a0 = amps_[i];
            const cplx a1 = amps_[i | bit];
            amps_[i] = c * a0 - s * a1;
            amps_[i | bit] = s * a0 + c * a1;
        }
        break;
    }
    case GateKind::RZ: {
        const cplx phase0 = std::polar(1.0, -gate.angle / 2);
        const cplx phase1 = std::polar(1.0, gate.angle / 2);
        const std::size_t bit = std::size_t{1} << (gate.q1 - 1);
        for (std::size_t i = 0; i < dim; ++i) {
            amps_[i] *= (i & bit) ? phase1 : phase0;
        }
        break;
    }
    case GateKind::CPHASE: {
        check_qubit(gate.q2);
        if (gate.q1 == gate.q2) {
            throw IndexError("CPHASE qubits must be distinct");
        }
        const std::size_t mask =
            (std::size_t{1} << (gate.q1 - 1)) | (std::size_t{1} << (gate.q2 - 1));
        for (std::size_t i = 0; i < dim; ++i) {
            if ((i & mask) == mask) amps_[i] = -amps_[i];
        }
        break;
    }
    }
}

void StateVector::apply(std::span<const GateOp> gates) {
    for (const GateOp& g : gates) apply(g);
}

void StateVector::apply_pauli(PauliAxis axis, int qubit) {
    check_qubit(qubit);
    const std::size_t bit = std::size_t{1} << (qubit - 1);
    const std::size_t dim = amps_.size();
    if (axis == PauliAxis::Y) {
        // sigma^y: |0> -> i|1>, |1> -> -i|0>
        const cplx im(0.0, 1.0);
        for (std::size_t i = 0; i < dim; ++i) {
            if (i & bit) continue;
            const cplx a0 = amps_[i];
            const cplx a1 = amps_[i | bit];
            amps_[i] = -im * a1;
            amps_[i | bit] = im * a0;
        }
    } else {
        for (std::size_t i = 0; i < dim; ++i) {
            if (i & bit) amps_[i] = -amps_[i];
        }
    }
}

void StateVector::apply_derivative_insertion(PauliAxis axis, int qubit) {
    apply_pauli(axis, qubit);
    const cplx factor(0.0, -0.5);
    for (cplx& a : amps_) a *= factor;
}

double StateVector::norm_sq() const {
    double s = 0.0;
    for (const cplx& a : amps_) s += std::norm(a);
    return s;
}

StateVector zero_state(int n_qubits) { return StateVector(n_qubits); }

cplx inner_product(const StateVector& a, const StateVector& b) {
    if (a.n_qubits() != b.n_qubits()) {
        throw ShapeError("inner_product: qubit counts differ (" + std::to_string(a.n_qubits()) +
                         " vs " + std::to_string(b.n_qubits()) + ")");
    }
    cplx acc(0.0, 0.0);
    auto pa = a.amplitudes();
    auto pb = b.amplitudes();
    for (std::size_t i = 0; i < pa.size(); ++i) acc += std::conj(pa[i]) * pb[i];
    return acc;
}

double fidelity(const StateVector& a, const StateVector& b) {
    return std::norm(inner_product(a, b));
}

std::map<std::uint64_t, std::uint64_t> sample_basis(const StateVector& state,
                                                    std::uint64_t shots,
                                                    std::uint64_t seed) {
    if (shots == 0) throw ArgumentError("sample_basis: shots must be >= 1");
    auto amps = state.amplitudes();
    std::vector<double> cdf(amps.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < amps.size(); ++i) {
        acc += std::norm(amps[i]);
        cdf[i] = acc;
    }
    // acc == 1 up to rounding; draw in [0, acc) so the last bin absorbs it.
    auto rng = make_stream(seed);
    std::uniform_real_distribution<double> unif(0.0, acc);
    std::map<std::uint64_t, std::uint64_t> counts;
    for (std::uint64_t s = 0; s < shots; ++s) {
        const double u = unif(rng);
        const auto it = std::upper_bound(cdf.begin(), cdf.end(), u);
        std::size_t idx = static_cast<std::size_t>(it - cdf.begin());
        if (idx >= cdf.size()) idx = cdf.size() - 1;
        ++counts[idx];
    }
    return counts;
}

StateVector random_haar_state(int n_qubits, std::uint64_t seed) {
    StateVector state(n_qubits);
    auto rng = make_stream(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    double norm = 0.0;
    for (std::size_t i = 0; i < state.dim(); ++i) {
        const cplx a(gauss(rng), gauss(rng));
        state.set_amplitude(i, a);
        norm += std::norm(a);
    }
    const double inv = 1.0 / std::sqrt(norm);
    for (std::size_t i = 0; i < state.dim(); ++i) {
        state.set_amplitude(i, state.amplitude(i) * inv);
    }
    return state;
}

}  // namespace npqc
