#include "npqc/train.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>

#include "npqc/errors.hpp"
#include "npqc/rng.hpp"

namespace npqc {

namespace {

constexpr double kGradFloor = 1e-12;
constexpr double kLogFloor = 1e-12;

Eigen::VectorXd to_eigen(const ParamVector& v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

void axpy(ParamVector& theta, double alpha, const Eigen::VectorXd& direction) {
    for (std::size_t i = 0; i < theta.size(); ++i) {
        theta[i] += alpha * direction(static_cast<Eigen::Index>(i));
    }
}

Eigen::VectorXd random_unit_direction(std::size_t m, std::mt19937_64& rng) {
    std::normal_distribution<double> gauss(0.0, 1.0);
    Eigen::VectorXd u(static_cast<Eigen::Index>(m));
    for (Eigen::Index i = 0; i < u.size(); ++i) u(i) = gauss(rng);
    return u / u.norm();
}

}  // namespace

void OptimizerConfig::validate() const {
    if (post_adaptive_rate <= 0 || fixed_rate <= 0 || adam_rate <= 0) {
        throw ArgumentError("OptimizerConfig: learning rates must be > 0");
    }
    if (adaptive_iters < 0) throw ArgumentError("OptimizerConfig: adaptive_iters must be >= 0");
    if (max_iters < 0) throw ArgumentError("OptimizerConfig: max_iters must be >= 0");
}

double adaptive_rate_initial(double k, const Eigen::VectorXd& grad, const QfimMatrix* fisher) {
    if (k >= 1.0 || -std::log(k) < kLogFloor) {
        throw DomainError("adaptive rate undefined at K >= 1 (already converged)");
    }
    if (k <= 0.0) throw DomainError("adaptive rate requires K > 0");
    const double denom = fisher ? grad.dot(*fisher * grad) : grad.squaredNorm();
    if (denom < kGradFloor * kGradFloor) {
        throw StationaryPointError("adaptive rate: gradient vanishes");
    }
    return 2.0 * std::sqrt(-std::log(k)) / std::sqrt(denom);
}

std::pair<double, double> adaptive_rates(double k, double k1, const Eigen::VectorXd& grad,
                                         const QfimMatrix* fisher) {
    const double alpha1 = adaptive_rate_initial(k, grad, fisher);
    const double denom = fisher ? grad.dot(*fisher * grad) : grad.squaredNorm();
    const double alpha_t = 2.0 / (alpha1 * denom) * std::log(k1 / k) + alpha1 / 2.0;
    return {alpha1, alpha_t};
}

TrainTrace train(const NpqcSpec& spec, const ParamVector& theta0, const StateVector& target,
                 const OptimizerConfig& config, std::uint64_t /*seed*/) {
    check_params(spec, theta0);
    config.validate();
    if (target.n_qubits() != spec.n_qubits()) throw ShapeError("train: target dimension mismatch");

    const auto t_start = std::chrono::steady_clock::now();
    auto elapsed = [&] {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
    };

    TrainTrace trace;
    ParamVector theta = theta0;
    FidelityGradient fg = fidelity_and_gradient(spec, theta, target);
    ++trace.fidelity_evaluations;
    trace.records.push_back({0, fg.value, fg.gradient.norm(), 0.0, elapsed()});

    Eigen::VectorXd adam_m, adam_v;
    if (config.method == Method::ADAM) {
        adam_m = Eigen::VectorXd::Zero(fg.gradient.size());
        adam_v = Eigen::VectorXd::Zero(fg.gradient.size());
    }

    for (int iter = 1; iter <= config.max_iters; ++iter) {
        if (1.0 - fg.value <= config.target_infidelity) break;
        const double grad_norm = fg.gradient.norm();
        if (grad_norm < kGradFloor) {
            if (iter == 1) trace.stationary_start = true;
            break;
        }

        double rate = 0.0;
        switch (config.method) {
        case Method::ADAPTIVE_GA:
            if (iter <= config.adaptive_iters) {
                if (-std::log(fg.value) < kLogFloor) break;  // 0/0 at the optimum
                const double alpha1 = adaptive_rate_initial(fg.value, fg.gradient);
                ParamVector probe = theta;
                axpy(probe, alpha1, fg.gradient);
                const double k1 = fidelity(prepare_state(spec, probe), target);
                ++trace.fidelity_evaluations;
                rate = adaptive_rates(fg.value, k1, fg.gradient).second;
            } else {
                rate = config.post_adaptive_rate;
            }
            axpy(theta, rate, fg.gradient);
            break;
        case Method::STANDARD_GA:
            rate = config.fixed_rate;
            axpy(theta, rate, fg.gradient);
            break;
        case Method::ADAM: {
            rate = config.adam_rate;
            adam_m = config.adam_beta1 * adam_m + (1.0 - config.adam_beta1) * fg.gradient;
            adam_v = config.adam_beta2 * adam_v +
                     (1.0 - config.adam_beta2) * fg.gradient.cwiseProduct(fg.gradient).eval();
            const double bc1 = 1.0 - std::pow(config.adam_beta1, iter);
            const double bc2 = 1.0 - std::pow(config.adam_beta2, iter);
            const Eigen::VectorXd step =
                (adam_m / bc1).array() / ((adam_v / bc2).array().sqrt() + config.adam_eps);
            axpy(theta, rate, step);
            break;
        }
        }

        fg = fidelity_and_gradient(spec, theta, target);
        ++trace.fidelity_evaluations;
        trace.records.push_back({iter, fg.value, fg.gradient.norm(), rate, elapsed()});
    }

    trace.final_theta = std::move(theta);
    return trace;
}

ParamVector target_params_from(const NpqcSpec& spec, const ParamVector& origin, double k_target,
                               std::mt19937_64& rng) {
    check_params(spec, origin);
    if (k_target >= 1.0) return origin;
    const double haar_floor = std::pow(2.0, -spec.n_qubits());
    if (k_target <= haar_floor) {
        throw InfeasibleError("requested fidelity is at or below the Haar floor 2^-N");
    }

    const StateVector psi0 = prepare_state(spec, origin);
    auto fid_at = [&](const Eigen::VectorXd& u, double d) {
        ParamVector theta = origin;
        axpy(theta, d, u);
        return fidelity(psi0, prepare_state(spec, theta));
    };

    // Gaussian-model guess, then bisection on the true fidelity.
    const double d0 = 2.0 * std::sqrt(-std::log(k_target));
    for (int attempt = 0; attempt < 10; ++attempt) {
        const Eigen::VectorXd u = random_unit_direction(origin.size(), rng);
        double lo = 0.0, hi = d0;
        bool bracketed = fid_at(u, hi) < k_target;
        for (int e = 0; !bracketed && e < 40; ++e) {
            hi *= 1.5;
            bracketed = fid_at(u, hi) < k_target;
        }
        if (!bracketed) continue;  // bad direction, retry
        for (int it = 0; it < 200; ++it) {
            const double mid = 0.5 * (lo + hi);
            const double f = fid_at(u, mid);
            if (std::abs(f - k_target) <= 1e-5) {
                lo = hi = mid;
                break;
            }
            (f > k_target ? lo : hi) = mid;
        }
        ParamVector theta = origin;
        axpy(theta, 0.5 * (lo + hi), u);
        return theta;
    }
    throw InfeasibleError("could not bracket the requested fidelity along any sampled direction");
}

std::pair<ParamVector, StateVector> target_from_distance(const NpqcSpec& spec, double distance,
                                                         std::optional<double> k_target,
                                                         std::uint64_t seed) {
    auto rng = make_stream(seed);
    ParamVector theta_t;
    if (k_target) {
        theta_t = target_params_from(spec, reference_params(spec), *k_target, rng);
    } else {
        theta_t = reference_params(spec);
        const Eigen::VectorXd u = random_unit_direction(theta_t.size(), rng);
        axpy(theta_t, distance, u);
    }
    StateVector target = prepare_state(spec, theta_t);
    return {std::move(theta_t), std::move(target)};
}

ScanResult single_step_scan(const NpqcSpec& spec, const std::vector<double>& infidelities,
                            InitMode init, const std::vector<std::uint64_t>& seeds) {
    ScanResult result;
    for (double dk_before : infidelities) {
        double sum_after = 0.0;
        for (std::uint64_t seed : seeds) {
            auto rng = make_stream(seed);
            ParamVector theta0;
            if (init == InitMode::REFERENCE) {
                theta0 = reference_params(spec);
            } else {
                theta0.resize(static_cast<std::size_t>(spec.num_params()));
                std::uniform_real_distribution<double> unif(0.0, 2.0 * std::numbers::pi);
                for (double& v : theta0) v = unif(rng);
            }
            if (dk_before <= 0.0) continue;  // already converged, after = 0

            const ParamVector theta_t = target_params_from(spec, theta0, 1.0 - dk_before, rng);
            const StateVector target = prepare_state(spec, theta_t);
            const FidelityGradient fg = fidelity_and_gradient(spec, theta0, target);
            if (fg.gradient.norm() < 1e-12) {
                sum_after += dk_before;  // stationary, no step possible
                continue;
            }
            const double alpha1 = adaptive_rate_initial(fg.value, fg.gradient);
            ParamVector probe = theta0;
            axpy(probe, alpha1, fg.gradient);
            const double k1 = fidelity(prepare_state(spec, probe), target);
            const double alpha_t = adaptive_rates(fg.value, k1, fg.gradient).second;
            ParamVector stepped = theta0;
            axpy(stepped, alpha_t, fg.gradient);
            const double k_after = fidelity(prepare_state(spec, stepped), target);
            sum_after += std::max(0.0, 1.0 - k_after);
        }
        result.points.push_back({dk_before, sum_after / static_cast<double>(seeds.size())});
    }

    // Log-log least squares of dK_after = c * (-log(1 - dK_before))^nu.
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    int count = 0;
    for (const ScanPoint& pt : result.points) {
        if (pt.mean_infidelity_after <= 10 * std::numeric_limits<double>::epsilon()) continue;
        if (pt.infidelity_before <= 0.0 || pt.infidelity_before >= 1.0) continue;
        const double x = std::log(-std::log(1.0 - pt.infidelity_before));
        const double y = std::log(pt.mean_infidelity_after);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
        ++count;
    }
    if (count >= 2) {
        const double denom = count * sxx - sx * sx;
        result.fit_nu = (count * sxy - sx * sy) / denom;
        result.fit_c = std::exp((sy - result.fit_nu * sx) / count);
    }
    return result;
}

}  // namespace npqc
