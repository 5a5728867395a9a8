#pragma once

#include <Eigen/Dense>
#include <vector>

#include "npqc/circuit.hpp"
#include "npqc/statevec.hpp"

namespace npqc {

// M x M real symmetric positive-semidefinite quantum Fisher information
// matrix F_ij = 4 [ <d_i psi|d_j psi> - <d_i psi|psi><psi|d_j psi> ].
using QfimMatrix = Eigen::MatrixXd;

// Exact derivative states d_i |psi(theta)>, unnormalized (norm 1/2 each for
// Pauli-rotation parameters).
struct GradientSet {
    std::vector<StateVector> states;
};

// Derivative states via Pauli insertion at each rotation, including the
// U(theta_r)^dagger / v_ref dressing.
GradientSet gradient_states(const NpqcSpec& spec, const ParamVector& theta,
                            const std::vector<GateOp>* v_ref = nullptr);

QfimMatrix qfim(const NpqcSpec& spec, const ParamVector& theta,
                const std::vector<GateOp>* v_ref = nullptr);

// Solves (F + ridge I) x = gradient. With ridge = 0 a singular F raises.
Eigen::VectorXd qng(const Eigen::VectorXd& gradient, const QfimMatrix& fisher, double ridge);

// Tr(F^-1) via eigendecomposition with eigenvalues clipped below at
// `floor`; also reports the number of eigenvalues above the floor.
struct InverseTraceResult {
    double trace_inverse;
    int rank;
};
InverseTraceResult trace_inverse(const QfimMatrix& fisher, double floor = 1e-10);

// Fidelity K_t(theta) = |<psi_t|psi(theta)>|^2 and its exact gradient
// dK/d theta_i = 2 Re[ <d_i psi|psi_t><psi_t|psi> ], computed in a single
// forward/backward sweep (no per-parameter circuit re-runs).
struct FidelityGradient {
    double value;
    Eigen::VectorXd gradient;
};
FidelityGradient fidelity_and_gradient(const NpqcSpec& spec, const ParamVector& theta,
                                       const StateVector& target,
                                       const std::vector<GateOp>* v_ref = nullptr);

// exp(-1/4 dtheta^T F dtheta), the Gaussian fidelity model.
double gaussian_fidelity(const Eigen::VectorXd& dtheta, const QfimMatrix& fisher);

// Convenience for the euclidean case F = I.
double gaussian_fidelity(double dtheta_norm);

// (1/M) (Tr F^2 / Tr F) K_t^2 log(K0 / K_t), the gradient-variance model.
double predicted_gradient_variance(double k_t, double k0, const QfimMatrix& fisher, int m);

}  // namespace npqc
