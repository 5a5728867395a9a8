#include "npqc/metrology.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <thread>

#include "npqc/errors.hpp"
#include "npqc/rng.hpp"

namespace npqc {

BasisIndexMap basis_index_map(const NpqcSpec& spec) {
    if (spec.variant() != Variant::Y_ONLY) {
        throw VariantError("basis_index_map requires a Y_ONLY spec");
    }
    const ParamVector theta_r = reference_params(spec);
    const GradientSet grads = gradient_states(spec, theta_r);

    BasisIndexMap map;
    map.v.reserve(grads.states.size());
    for (std::size_t i = 0; i < grads.states.size(); ++i) {
        const StateVector& g = grads.states[i];
        std::uint64_t best = 0;
        double best_p = -1.0;
        double total = 0.0;
        for (std::size_t b = 0; b < g.dim(); ++b) {
            const double p = std::norm(g.amplitude(b));
            total += p;
            if (p > best_p) {
                best_p = p;
                best = b;
            }
        }
        if (best_p < 0.999 * total) {
            throw ProtocolError("gradient state for parameter " + std::to_string(i) +
                                " is not concentrated on a single basis state");
        }
        if (std::abs(std::abs(g.amplitude(best)) - 0.5) > 1e-6) {
            throw ProtocolError("gradient amplitude for parameter " + std::to_string(i) +
                                " deviates from 1/2");
        }
        if (best == 0) {
            throw ProtocolError("parameter " + std::to_string(i) +
                                " maps to basis index 0 (collides with the reference state)");
        }
        map.v.push_back(best);
    }
    std::vector<std::uint64_t> sorted = map.v;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw ProtocolError("basis index collision between parameters");
    }
    return map;
}

StateVector encode(const NpqcSpec& spec, const std::vector<double>& dtheta) {
    ParamVector theta = reference_params(spec);
    if (dtheta.size() != theta.size()) throw ShapeError("encode: dtheta dimension mismatch");
    for (std::size_t i = 0; i < theta.size(); ++i) theta[i] += dtheta[i];
    return prepare_y_state(spec, theta);
}

std::vector<double> estimate(const std::map<std::uint64_t, std::uint64_t>& counts,
                             const BasisIndexMap& map, std::uint64_t shots) {
    if (shots == 0) throw ArgumentError("estimate: shots must be >= 1");
    std::vector<double> out(map.v.size(), 0.0);
    for (std::size_t i = 0; i < map.v.size(); ++i) {
        const auto it = counts.find(map.v[i]);
        if (it != counts.end()) {
            out[i] = 2.0 * std::sqrt(static_cast<double>(it->second) / static_cast<double>(shots));
        }
    }
    return out;
}

std::vector<double> estimate_exact(const StateVector& state, const BasisIndexMap& map) {
    std::vector<double> out(map.v.size(), 0.0);
    for (std::size_t i = 0; i < map.v.size(); ++i) {
        out[i] = 2.0 * std::sqrt(std::norm(state.amplitude(map.v[i])));
    }
    return out;
}

namespace {

double rel_rmse(const std::vector<double>& est, const std::vector<double>& truth) {
    double se = 0.0, mean_abs = 0.0;
    for (std::size_t i = 0; i < est.size(); ++i) {
        const double diff = est[i] - truth[i];
        se += diff * diff;
        mean_abs += truth[i];
    }
    se /= static_cast<double>(est.size());
    mean_abs /= static_cast<double>(est.size());
    return mean_abs > 0.0 ? std::sqrt(se) / mean_abs : std::sqrt(se);
}

}  // namespace

std::vector<SenseRow> sense_experiment(const NpqcSpec& spec, double norm_dtheta,
                                       const std::vector<long long>& shot_list, int instances,
                                       std::uint64_t seed, int threads) {
    if (norm_dtheta < 0.0) throw ArgumentError("sense_experiment: |dtheta| must be >= 0");
    if (instances < 1) throw ArgumentError("sense_experiment: instances must be >= 1");
    const BasisIndexMap map = basis_index_map(spec);
    const int m = spec.num_params();

    std::vector<std::vector<SenseRow>> per_instance(static_cast<std::size_t>(instances));
    auto run_instance = [&](int inst) {
        auto rng = make_stream(seed, static_cast<std::uint64_t>(inst));
        std::normal_distribution<double> gauss(0.0, 1.0);
        std::vector<double> dtheta(static_cast<std::size_t>(m));
        double norm = 0.0;
        for (double& v : dtheta) {
            v = gauss(rng);
            norm += v * v;
        }
        norm = std::sqrt(norm);
        for (double& v : dtheta) v *= norm_dtheta / (norm > 0 ? norm : 1.0);

        const StateVector state = encode(spec, dtheta);
        std::vector<double> truth(dtheta.size());
        for (std::size_t i = 0; i < dtheta.size(); ++i) truth[i] = std::abs(dtheta[i]);

        double signal = std::norm(state.amplitude(0));
        for (std::uint64_t v : map.v) signal += std::norm(state.amplitude(v));
        const double exact_leakage = std::max(0.0, 1.0 - signal);

        auto& rows = per_instance[static_cast<std::size_t>(inst)];
        std::uint64_t draw = 0;
        for (long long shots : shot_list) {
            SenseRow row{spec.n_qubits(), spec.n_layers(), m, norm_dtheta, shots, inst,
                         0.0,             0.0,             seed};
            if (shots < 0) {
                row.rel_rmse = rel_rmse(estimate_exact(state, map), truth);
                row.leakage_fraction = exact_leakage;
            } else {
                if (shots == 0) throw ArgumentError("sense_experiment: shots must be >= 1");
                std::uint64_t s = seed;
                const std::uint64_t sub =
                    splitmix64(s) ^ (static_cast<std::uint64_t>(inst) << 32 | ++draw);
                const auto counts =
                    sample_basis(state, static_cast<std::uint64_t>(shots), sub);
                row.rel_rmse = rel_rmse(estimate(counts, map, static_cast<std::uint64_t>(shots)),
                                        truth);
                std::uint64_t outside = 0;
                for (const auto& [basis, count] : counts) {
                    if (basis == 0) continue;
                    if (std::find(map.v.begin(), map.v.end(), basis) == map.v.end()) {
                        outside += count;
                    }
                }
                row.leakage_fraction =
                    static_cast<double>(outside) / static_cast<double>(shots);
            }
            rows.push_back(row);
        }
    };

    if (threads <= 1) {
        for (int inst = 0; inst < instances; ++inst) run_instance(inst);
    } else {
        std::vector<std::thread> pool;
        std::atomic<int> next{0};
        for (int t = 0; t < threads; ++t) {
            pool.emplace_back([&] {
                for (int inst = next.fetch_add(1); inst < instances; inst = next.fetch_add(1)) {
                    run_instance(inst);
                }
            });
        }
        for (auto& th : pool) th.join();
    }

    std::vector<SenseRow> rows;
    for (const auto& chunk : per_instance) rows.insert(rows.end(), chunk.begin(), chunk.end());
    return rows;
}

CraoReport crao_check(const NpqcSpec& spec, const ParamVector& theta) {
    constexpr double kEps = 1e-6;
    const QfimMatrix fisher = qfim(spec, theta);
    const int m = static_cast<int>(fisher.rows());

    CraoReport report{};
    report.m = m;
    report.trace_f = fisher.trace();
    const InverseTraceResult inv = trace_inverse(fisher);
    report.trace_f_inv = inv.trace_inverse;
    report.rank = inv.rank;
    report.full_rank = inv.rank == m;
    report.trace_bound_ok = report.trace_f <= m + kEps;
    report.inverse_bound_ok =
        report.full_rank &&
        report.trace_f_inv >= m * static_cast<double>(m) / report.trace_f - kEps &&
        report.trace_f_inv >= m - kEps;
    return report;
}

}  // namespace npqc
