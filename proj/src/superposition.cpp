#include "npqc/superposition.hpp"

#include <algorithm>
#include <cmath>

#include "npqc/errors.hpp"
#include "npqc/rng.hpp"

#include <Eigen/Dense>

namespace npqc {

namespace {

void validate_fidelity(double k, const char* name) {
    if (!(k > 0.0) || k > 1.0) {
        throw ArgumentError(std::string(name) + " must be in (0, 1]");
    }
}

Eigen::VectorXd to_eigen(const ParamVector& v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

ParamVector from_eigen(const Eigen::VectorXd& v) {
    return ParamVector(v.data(), v.data() + v.size());
}

// Standard basis vector least aligned with `par`, one projection step,
// normalized. A seeded random choice covers the independence test.
Eigen::VectorXd perpendicular_direction(const Eigen::VectorXd& par,
                                        std::optional<std::uint64_t> seed) {
    Eigen::VectorXd cand;
    if (seed) {
        auto rng = make_stream(*seed);
        std::normal_distribution<double> gauss(0.0, 1.0);
        cand.resize(par.size());
        for (Eigen::Index i = 0; i < cand.size(); ++i) cand(i) = gauss(rng);
    } else {
        Eigen::Index least = 0;
        par.cwiseAbs().minCoeff(&least);
        cand = Eigen::VectorXd::Unit(par.size(), least);
    }
    Eigen::VectorXd perp = cand - par.dot(cand) * par;
    const double norm = perp.norm();
    if (norm < 1e-12) throw ArgumentError("cannot build a perpendicular direction");
    return perp / norm;
}

}  // namespace

std::pair<double, double> feasibility_bounds(double k_rs, double dist_rt) {
    validate_fidelity(k_rs, "K_rs");
    if (dist_rt < 0.0) throw ArgumentError("dist_rt must be >= 0");
    const double root = std::sqrt(-std::log(k_rs));
    const double lo = k_rs * std::exp(-dist_rt * root - dist_rt * dist_rt / 4.0);
    const double hi = k_rs * std::exp(dist_rt * root - dist_rt * dist_rt / 4.0);
    return {lo, std::min(1.0, hi)};
}

SuperposeResult solve_superposition(const SuperposeRequest& req,
                                    std::optional<std::uint64_t> perp_seed) {
    validate_fidelity(req.k_rs, "K_rs");
    validate_fidelity(req.k_ts, "K_ts");
    if (req.theta_r.size() != req.theta_t.size()) {
        throw ShapeError("solve_superposition: theta_r / theta_t layout mismatch");
    }

    const Eigen::VectorXd delta_rt = to_eigen(req.theta_t) - to_eigen(req.theta_r);
    const double dist_rt = delta_rt.norm();
    const double norm_rs = 2.0 * std::sqrt(-std::log(req.k_rs));

    SuperposeResult result;
    if (norm_rs == 0.0) {  // K_rs = 1 forces theta_s = theta_r
        result.feasible = true;
        result.cos_angle = 0.0;
        result.theta_s = req.theta_r;
        return result;
    }
    if (dist_rt < 1e-12) {
        if (std::abs(req.k_ts - req.k_rs) > 1e-9) {
            throw DomainError("degenerate target: theta_t = theta_r but K_ts != K_rs");
        }
        result.feasible = true;
        result.cos_angle = 1.0;
        const Eigen::VectorXd dir = Eigen::VectorXd::Unit(delta_rt.size(), 0);
        result.theta_s = from_eigen(to_eigen(req.theta_r) + norm_rs * dir);
        return result;
    }

    const double cos_angle = (4.0 * std::log(req.k_ts / req.k_rs) + dist_rt * dist_rt) /
                             (4.0 * dist_rt * std::sqrt(-std::log(req.k_rs)));
    result.cos_angle = cos_angle;
    if (std::abs(cos_angle) > 1.0 + 1e-12) {
        result.feasible = false;
        return result;
    }
    const double c = std::clamp(cos_angle, -1.0, 1.0);
    const double s = std::sqrt(std::max(0.0, 1.0 - c * c));

    const Eigen::VectorXd par = delta_rt / dist_rt;
    const Eigen::VectorXd perp = perpendicular_direction(par, perp_seed);
    result.feasible = true;
    result.theta_s = from_eigen(to_eigen(req.theta_r) + norm_rs * (c * par + s * perp));
    return result;
}

SuperposeResult superposition_error(const NpqcSpec& spec, SuperposeResult result,
                                    const SuperposeRequest& req) {
    if (!result.feasible) return result;
    const StateVector psi_r = prepare_state(spec, req.theta_r);
    const StateVector psi_t = prepare_state(spec, req.theta_t);
    const StateVector psi_s = prepare_state(spec, result.theta_s);
    result.realized_k_rs = fidelity(psi_r, psi_s);
    result.realized_k_ts = fidelity(psi_t, psi_s);
    result.delta_c =
        std::abs(req.k_rs - result.realized_k_rs) + std::abs(req.k_ts - result.realized_k_ts);
    return result;
}

}  // namespace npqc
