#pragma once

#include <cstdint>
#include <optional>
#include <utility>

#include "npqc/circuit.hpp"

namespace npqc {

struct SuperposeRequest {
    ParamVector theta_r;
    ParamVector theta_t;
    double k_rs;  // desired fidelity with the reference state, in (0, 1]
    double k_ts;  // desired fidelity with the target state, in (0, 1]
};

struct SuperposeResult {
    bool feasible = false;
    double cos_angle = 0.0;
    ParamVector theta_s;       // empty when infeasible
    double realized_k_rs = 0.0;
    double realized_k_ts = 0.0;
    double delta_c = 0.0;      // |K_rs - K'_rs| + |K_ts - K'_ts|
};

// (K_ts_min, K_ts_max): K_rs * exp(+-dist_rt * sqrt(-log K_rs) - dist_rt^2/4),
// max clipped to 1.
std::pair<double, double> feasibility_bounds(double k_rs, double dist_rt);

// Places theta_s at distance 2 sqrt(-log K_rs) from theta_r, at the angle
// to theta_t - theta_r determined by the Gaussian fidelity model. The
// out-of-plane direction is deterministic unless perp_seed is given.
SuperposeResult solve_superposition(const SuperposeRequest& req,
                                    std::optional<std::uint64_t> perp_seed = std::nullopt);

// Prepares psi(theta_s), measures the realized fidelities against
// psi(theta_r) and psi(theta_t), and fills in delta_c on a copy of result.
SuperposeResult superposition_error(const NpqcSpec& spec, SuperposeResult result,
                                    const SuperposeRequest& req);

}  // namespace npqc
