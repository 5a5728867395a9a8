#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <utility>
#include <vector>

#include "npqc/geometry.hpp"

namespace npqc {

enum class Method { ADAPTIVE_GA, STANDARD_GA, ADAM };

struct OptimizerConfig {
    Method method = Method::ADAPTIVE_GA;
    int adaptive_iters = 3;          // adaptive-rate iterations before the switch
    double post_adaptive_rate = 0.5; // heuristic rate afterwards
    double fixed_rate = 1.0;         // STANDARD_GA rate
    double adam_rate = 0.05;
    double adam_beta1 = 0.9;
    double adam_beta2 = 0.999;
    double adam_eps = 1e-8;
    int max_iters = 100;
    double target_infidelity = 1e-4;

    void validate() const;
};

struct TrainRecord {
    int iteration;
    double fidelity;
    double grad_norm;
    double rate;          // learning rate used for the step into this record
    double wall_time_s;   // cumulative
};

struct TrainTrace {
    std::vector<TrainRecord> records;
    ParamVector final_theta;
    bool stationary_start = false;
    int fidelity_evaluations = 0;  // probe evaluations counted in
};

// Two-stage adaptive rate: alpha1 drives a probe step, alpha_t the
// corrected step. k1 is the fidelity measured at theta + alpha1 * grad.
// With no QFIM, F = I is assumed; otherwise the general form with
// grad^T F grad denominators is used.
double adaptive_rate_initial(double k, const Eigen::VectorXd& grad,
                             const QfimMatrix* fisher = nullptr);
std::pair<double, double> adaptive_rates(double k, double k1, const Eigen::VectorXd& grad,
                                         const QfimMatrix* fisher = nullptr);

TrainTrace train(const NpqcSpec& spec, const ParamVector& theta0, const StateVector& target,
                 const OptimizerConfig& config, std::uint64_t seed);

// Random target parameters at a given parameter distance from theta_r;
// when k_target is given the distance is refined by bisection so the true
// fidelity to psi(theta_r) matches k_target within 1e-4.
std::pair<ParamVector, StateVector> target_from_distance(const NpqcSpec& spec, double distance,
                                                         std::optional<double> k_target,
                                                         std::uint64_t seed);

enum class InitMode { REFERENCE, RANDOM };

struct ScanPoint {
    double infidelity_before;
    double mean_infidelity_after;
};

struct ScanResult {
    std::vector<ScanPoint> points;
    double fit_c = 0.0;   // dK_after = c * (-log(1 - dK_before))^nu
    double fit_nu = 0.0;
};

// One adaptive step from each start over a grid of initial infidelities,
// averaged over seeds, with a log-log least-squares fit of (c, nu).
ScanResult single_step_scan(const NpqcSpec& spec, const std::vector<double>& infidelities,
                            InitMode init, const std::vector<std::uint64_t>& seeds);

// Internals shared with the scan: target parameters at a requested
// fidelity along a random direction from an arbitrary start point.
ParamVector target_params_from(const NpqcSpec& spec, const ParamVector& origin, double k_target,
                               std::mt19937_64& rng);

}  // namespace npqc
