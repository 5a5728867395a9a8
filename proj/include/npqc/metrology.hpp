#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "npqc/geometry.hpp"

namespace npqc {

// Injective assignment parameter index -> computational basis index: the
// basis state each parameter excites at first order around theta_r.
struct BasisIndexMap {
    std::vector<std::uint64_t> v;
};

// Determined from the gradient states of psi_y at theta_r; validates that
// each gradient state has amplitude 1/2 concentrated (>= 99.9%) on a
// single nonzero basis index and that all indices are distinct.
BasisIndexMap basis_index_map(const NpqcSpec& spec);

// psi_y(theta_r + dtheta), the sensing state.
StateVector encode(const NpqcSpec& spec, const std::vector<double>& dtheta);

// |dtheta_i|' = 2 sqrt(count(v_i) / n); absent indices give 0.
std::vector<double> estimate(const std::map<std::uint64_t, std::uint64_t>& counts,
                             const BasisIndexMap& map, std::uint64_t shots);

// Exact-probability variant (the n -> infinity row).
std::vector<double> estimate_exact(const StateVector& state, const BasisIndexMap& map);

struct SenseRow {
    int n_qubits;
    int n_layers;
    int m;
    double norm_dtheta;
    long long shots;  // -1 encodes the exact-probability row
    int instance;
    double rel_rmse;
    double leakage_fraction;  // probability outside {0} and {v_i}
    std::uint64_t seed;
};

// Monte Carlo study: random dtheta of fixed norm per instance, estimates
// at each shot budget plus the exact row. Relative RMSE is normalized by
// the mean of |dtheta_i| over entries.
std::vector<SenseRow> sense_experiment(const NpqcSpec& spec, double norm_dtheta,
                                       const std::vector<long long>& shot_list, int instances,
                                       std::uint64_t seed, int threads = 1);

struct CraoReport {
    double trace_f;
    double trace_f_inv;  // pseudo-inverse trace when rank-deficient
    int m;
    int rank;
    bool full_rank;
    bool trace_bound_ok;      // Tr F <= M + eps
    bool inverse_bound_ok;    // Tr F^-1 >= M^2 / Tr F - eps (full rank only)
};

// Cramer-Rao structure report for any Pauli-rotation circuit.
CraoReport crao_check(const NpqcSpec& spec, const ParamVector& theta);

}  // namespace npqc
