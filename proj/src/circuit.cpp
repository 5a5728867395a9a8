#include "npqc/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "json.hpp"
#include "npqc/errors.hpp"
#include "npqc/rng.hpp"

namespace npqc {

namespace {

// ((m-1) mod N) + 1 on one-based indices.
int wrap_qubit(int m, int n_qubits) { return (m - 1) % n_qubits + 1; }

long long max_layers(int n_qubits) { return 1LL << (n_qubits / 2); }

}  // namespace

std::vector<int> shift_sequence(int n_qubits, int n_layers,
                                std::optional<std::uint64_t> pick_seed) {
    if (n_qubits < 2 || n_qubits % 2 != 0) {
        throw ArgumentError("shift_sequence: n_qubits must be even and >= 2");
    }
    if (n_layers < 1) throw ArgumentError("shift_sequence: n_layers must be >= 1");
    if (n_layers > max_layers(n_qubits)) {
        throw DepthError("shift_sequence: n_layers exceeds p_max = 2^(N/2) = " +
                         std::to_string(max_layers(n_qubits)));
    }

    std::vector<int> pool(n_qubits / 2);
    for (int i = 0; i < n_qubits / 2; ++i) pool[i] = i;
    std::optional<std::mt19937_64> rng;
    if (pick_seed) rng = make_stream(*pick_seed);

    const std::size_t wanted = static_cast<std::size_t>(n_layers - 1);
    std::vector<int> seq;
    seq.reserve(wanted);
    // a_s = r, then a_{s+q} = a_q for q = 1..s-1, s <- 2s.
    std::size_t s = 1;
    while (!pool.empty() && seq.size() < wanted) {
        std::size_t pick = 0;
        if (rng) {
            pick = std::uniform_int_distribution<std::size_t>(0, pool.size() - 1)(*rng);
        }
        const int r = pool[pick];
        pool.erase(pool.begin() + static_cast<std::ptrdiff_t>(pick));
        seq.push_back(r);                       // position s
        for (std::size_t q = 1; q < s; ++q) {   // positions s+1 .. 2s-1
            seq.push_back(seq[q - 1]);
        }
        s *= 2;
    }
    seq.resize(std::min(seq.size(), wanted));
    return seq;
}

NpqcSpec::NpqcSpec(int n_qubits, int n_layers, Variant variant,
                   std::optional<std::uint64_t> shift_pick_seed)
    : n_qubits_(n_qubits), n_layers_(n_layers), variant_(variant) {
    if (n_qubits < 2 || n_qubits % 2 != 0) {
        throw ArgumentError("NpqcSpec: n_qubits must be even and >= 2");
    }
    if (n_qubits > StateVector::kMaxQubits) {
        throw CapacityError("NpqcSpec: n_qubits exceeds dense limit " +
                            std::to_string(StateVector::kMaxQubits));
    }
    if (n_layers < 1) throw ArgumentError("NpqcSpec: n_layers must be >= 1");
    if (n_layers > max_layers(n_qubits)) {
        throw DepthError("NpqcSpec: n_layers exceeds p_max = 2^(N/2)");
    }
    shifts_ = shift_sequence(n_qubits, n_layers, shift_pick_seed);

    layout_.reserve(static_cast<std::size_t>(num_params()));
    for (int n = 1; n <= n_qubits_; ++n) {
        layout_.push_back({1, n, PauliAxis::Y});
        if (variant_ == Variant::FULL) layout_.push_back({1, n, PauliAxis::Z});
    }
    for (int l = 2; l <= n_layers_; ++l) {
        for (int q = 1; q <= n_qubits_; q += 2) {
            layout_.push_back({l, q, PauliAxis::Y});
            if (variant_ == Variant::FULL) layout_.push_back({l, q, PauliAxis::Z});
        }
    }
}

int NpqcSpec::num_params() const {
    return variant_ == Variant::FULL ? n_qubits_ * (n_layers_ + 1)
                                     : n_qubits_ / 2 * (n_layers_ + 1);
}

std::string NpqcSpec::to_json() const {
    nlohmann::json j;
    j["n_qubits"] = n_qubits_;
    j["n_layers"] = n_layers_;
    j["variant"] = variant_ == Variant::FULL ? "full" : "y_only";
    j["layout_version"] = kLayoutVersion;
    return j.dump();
}

NpqcSpec NpqcSpec::from_json(const std::string& text) {
    const auto j = nlohmann::json::parse(text);
    if (j.value("layout_version", -1) != kLayoutVersion) {
        throw ArgumentError("NpqcSpec: unsupported layout_version");
    }
    const std::string v = j.at("variant").get<std::string>();
    if (v != "full" && v != "y_only") {
        throw ArgumentError("NpqcSpec: unknown variant '" + v + "'");
    }
    return NpqcSpec(j.at("n_qubits").get<int>(), j.at("n_layers").get<int>(),
                    v == "full" ? Variant::FULL : Variant::Y_ONLY);
}

ParamVector reference_params(const NpqcSpec& spec) {
    ParamVector theta(static_cast<std::size_t>(spec.num_params()));
    const auto& layout = spec.layout();
    for (std::size_t i = 0; i < theta.size(); ++i) {
        theta[i] = layout[i].axis == PauliAxis::Y ? std::numbers::pi / 2 : 0.0;
    }
    return theta;
}

void check_params(const NpqcSpec& spec, const ParamVector& theta) {
    if (theta.size() != static_cast<std::size_t>(spec.num_params())) {
        throw ShapeError("parameter vector has " + std::to_string(theta.size()) +
                         " entries, spec expects " + std::to_string(spec.num_params()));
    }
}

CircuitGates circuit_gates(const NpqcSpec& spec, const ParamVector& theta) {
    check_params(spec, theta);
    const int n = spec.n_qubits();
    const bool full = spec.variant() == Variant::FULL;
    CircuitGates out;
    out.param_positions.resize(theta.size());

    std::size_t param = 0;
    auto push_param_rotation = [&](GateKind kind, int qubit) {
        out.param_positions[param] = out.gates.size();
        out.gates.push_back({kind, qubit, 0, theta[param]});
        ++param;
    };

    for (int q = 1; q <= n; ++q) {
        push_param_rotation(GateKind::RY, q);
        if (full) push_param_rotation(GateKind::RZ, q);
    }
    for (int l = 2; l <= spec.n_layers(); ++l) {
        const int a = spec.shifts()[static_cast<std::size_t>(l - 2)];
        for (int k = 1; k <= n / 2; ++k) {
            const int q = 2 * k - 1;
            out.gates.push_back(GateOp::ry(q, std::numbers::pi / 2));
            out.gates.push_back(GateOp::cphase(q, wrap_qubit(2 * k + 2 * a, n)));
            push_param_rotation(GateKind::RY, q);
            if (full) push_param_rotation(GateKind::RZ, q);
        }
    }
    return out;
}

std::vector<GateOp> inverse_gates(const std::vector<GateOp>& gates) {
    std::vector<GateOp> inv;
    inv.reserve(gates.size());
    for (auto it = gates.rbegin(); it != gates.rend(); ++it) inv.push_back(it->inverse());
    return inv;
}

CircuitGates dressed_gates(const NpqcSpec& spec, const ParamVector& theta,
                           const std::vector<GateOp>* v_ref) {
    CircuitGates out = circuit_gates(spec, theta);
    const auto fix = inverse_gates(circuit_gates(spec, reference_params(spec)).gates);
    out.gates.insert(out.gates.end(), fix.begin(), fix.end());
    if (v_ref) out.gates.insert(out.gates.end(), v_ref->begin(), v_ref->end());
    return out;
}

StateVector prepare_state(const NpqcSpec& spec, const ParamVector& theta,
                          const std::vector<GateOp>* v_ref) {
    const CircuitGates cg = dressed_gates(spec, theta, v_ref);
    StateVector state(spec.n_qubits());
    state.apply(cg.gates);
    return state;
}

StateVector prepare_y_state(const NpqcSpec& spec, const ParamVector& theta) {
    if (spec.variant() != Variant::Y_ONLY) {
        throw VariantError("prepare_y_state requires a Y_ONLY spec");
    }
    return prepare_state(spec, theta);
}

}  // namespace npqc
