#include "npqc/geometry.hpp"

#include <cmath>

#include "npqc/errors.hpp"

namespace npqc {

namespace {

PauliAxis axis_of(const GateOp& gate) {
    return gate.kind == GateKind::RY ? PauliAxis::Y : PauliAxis::Z;
}

}  // namespace

GradientSet gradient_states(const NpqcSpec& spec, const ParamVector& theta,
                            const std::vector<GateOp>* v_ref) {
    const CircuitGates cg = dressed_gates(spec, theta, v_ref);
    const std::size_t m = cg.param_positions.size();

    GradientSet out;
    out.states.reserve(m);

    // Shared running prefix; parameter positions are ascending by layout.
    StateVector prefix(spec.n_qubits());
    std::size_t next_gate = 0;
    for (std::size_t i = 0; i < m; ++i) {
        const std::size_t pos = cg.param_positions[i];
        while (next_gate <= pos) prefix.apply(cg.gates[next_gate++]);

        StateVector grad = prefix;
        const GateOp& rot = cg.gates[pos];
        grad.apply_derivative_insertion(axis_of(rot), rot.q1);
        for (std::size_t t = pos + 1; t < cg.gates.size(); ++t) grad.apply(cg.gates[t]);
        out.states.push_back(std::move(grad));
    }
    return out;
}

QfimMatrix qfim(const NpqcSpec& spec, const ParamVector& theta,
                const std::vector<GateOp>* v_ref) {
    const StateVector psi = prepare_state(spec, theta, v_ref);
    const GradientSet grads = gradient_states(spec, theta, v_ref);
    const int m = static_cast<int>(grads.states.size());

    Eigen::VectorXcd overlap(m);  // <d_i psi | psi>
    for (int i = 0; i < m; ++i) overlap(i) = inner_product(grads.states[static_cast<std::size_t>(i)], psi);

    QfimMatrix fisher(m, m);
    for (int i = 0; i < m; ++i) {
        for (int j = i; j < m; ++j) {
            const cplx gij = inner_product(grads.states[static_cast<std::size_t>(i)],
                                           grads.states[static_cast<std::size_t>(j)]);
            const double value = 4.0 * std::real(gij - overlap(i) * std::conj(overlap(j)));
            fisher(i, j) = value;
            fisher(j, i) = value;
        }
    }
    return fisher;
}

Eigen::VectorXd qng(const Eigen::VectorXd& gradient, const QfimMatrix& fisher, double ridge) {
    if (fisher.rows() != fisher.cols() || fisher.rows() != gradient.size()) {
        throw ShapeError("qng: dimension mismatch");
    }
    if (ridge < 0) throw ArgumentError("qng: ridge must be >= 0");

    Eigen::SelfAdjointEigenSolver<QfimMatrix> eig(fisher);
    const Eigen::VectorXd& lam = eig.eigenvalues();
    if (ridge == 0.0 && lam.minCoeff() < 1e-12) {
        throw SingularError("qng: QFIM is singular and no ridge was given");
    }
    const Eigen::VectorXd rotated = eig.eigenvectors().transpose() * gradient;
    Eigen::VectorXd scaled = rotated.array() / (lam.array() + ridge);
    return eig.eigenvectors() * scaled;
}

InverseTraceResult trace_inverse(const QfimMatrix& fisher, double floor) {
    Eigen::SelfAdjointEigenSolver<QfimMatrix> eig(fisher, Eigen::EigenvaluesOnly);
    InverseTraceResult res{0.0, 0};
    for (int i = 0; i < eig.eigenvalues().size(); ++i) {
        const double lam = eig.eigenvalues()(i);
        if (lam > floor) {
            res.trace_inverse += 1.0 / lam;
            ++res.rank;
        }
    }
    return res;
}

FidelityGradient fidelity_and_gradient(const NpqcSpec& spec, const ParamVector& theta,
                                       const StateVector& target,
                                       const std::vector<GateOp>* v_ref) {
    if (target.n_qubits() != spec.n_qubits()) {
        throw ShapeError("fidelity_and_gradient: target dimension mismatch");
    }
    const CircuitGates cg = dressed_gates(spec, theta, v_ref);
    const std::size_t m = cg.param_positions.size();

    // Reverse sweep: bra = (G_{t+1} ... G_T)^dagger |target> advanced in
    // lockstep with the prefix state, one pass over the gate list.
    StateVector bra = target;
    for (auto it = cg.gates.rbegin(); it != cg.gates.rend(); ++it) bra.apply(it->inverse());

    StateVector prefix(spec.n_qubits());
    Eigen::VectorXcd grad_overlap(static_cast<Eigen::Index>(m));  // <d_i psi | target>
    std::size_t param = 0;
    for (std::size_t t = 0; t < cg.gates.size(); ++t) {
        prefix.apply(cg.gates[t]);
        bra.apply(cg.gates[t]);
        if (param < m && cg.param_positions[param] == t) {
            StateVector deriv = prefix;
            const GateOp& rot = cg.gates[t];
            deriv.apply_derivative_insertion(axis_of(rot), rot.q1);
            grad_overlap(static_cast<Eigen::Index>(param)) = inner_product(deriv, bra);
            ++param;
        }
    }

    const cplx target_psi = inner_product(target, prefix);  // prefix is now |psi>
    FidelityGradient out;
    out.value = std::norm(target_psi);
    out.gradient.resize(static_cast<Eigen::Index>(m));
    for (Eigen::Index i = 0; i < out.gradient.size(); ++i) {
        out.gradient(i) = 2.0 * std::real(grad_overlap(i) * target_psi);
    }
    return out;
}

double gaussian_fidelity(const Eigen::VectorXd& dtheta, const QfimMatrix& fisher) {
    if (fisher.rows() != dtheta.size() || fisher.cols() != dtheta.size()) {
        throw ShapeError("gaussian_fidelity: dimension mismatch");
    }
    return std::exp(-0.25 * dtheta.dot(fisher * dtheta));
}

double gaussian_fidelity(double dtheta_norm) {
    return std::exp(-0.25 * dtheta_norm * dtheta_norm);
}

double predicted_gradient_variance(double k_t, double k0, const QfimMatrix& fisher, int m) {
    if (k_t <= 0.0 || k0 > 1.0 || k_t > k0) {
        throw DomainError("predicted_gradient_variance requires 0 < K_t <= K0 <= 1");
    }
    const double trace = fisher.trace();
    const double trace_sq = (fisher * fisher).trace();
    return trace_sq / trace * k_t * k_t * std::log(k0 / k_t) / m;
}

}  // namespace npqc
