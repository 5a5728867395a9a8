#include "doctest.h"

#include <cmath>

#include "npqc/errors.hpp"
#include "npqc/metrology.hpp"
#include "npqc/rng.hpp"

using namespace npqc;

TEST_CASE("basis index map") {
    const NpqcSpec spec(8, 4, Variant::Y_ONLY);
    const BasisIndexMap map = basis_index_map(spec);
    REQUIRE(map.v.size() == 20);

    std::vector<std::uint64_t> sorted = map.v;
    std::sort(sorted.begin(), sorted.end());
    CHECK(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end());
    for (std::uint64_t v : map.v) {
        CHECK(v != 0);
        CHECK(v < (std::uint64_t{1} << 8));
    }

    // deterministic across reruns
    CHECK(basis_index_map(spec).v == map.v);

    CHECK_THROWS_AS(basis_index_map(NpqcSpec(8, 4, Variant::FULL)), VariantError);
}

TEST_CASE("basis index map vs brute-force enumeration at N=2") {
    const NpqcSpec spec(2, 1, Variant::Y_ONLY);
    REQUIRE(spec.num_params() == 2);
    const BasisIndexMap map = basis_index_map(spec);

    // finite-difference oracle: perturb one parameter, find the excited index
    const ParamVector theta_r = reference_params(spec);
    const double eps = 1e-6;
    for (std::size_t i = 0; i < 2; ++i) {
        ParamVector plus = theta_r;
        plus[i] += eps;
        const StateVector s = prepare_y_state(spec, plus);
        std::uint64_t best = 0;
        double best_p = -1.0;
        for (std::uint64_t b = 1; b < 4; ++b) {  // skip the reference index 0
            if (std::norm(s.amplitude(b)) > best_p) {
                best_p = std::norm(s.amplitude(b));
                best = b;
            }
        }
        CHECK(best == map.v[i]);
    }
}

TEST_CASE("encode") {
    const NpqcSpec spec(6, 2, Variant::Y_ONLY);
    const int m = spec.num_params();
    const BasisIndexMap map = basis_index_map(spec);

    const StateVector at_ref = encode(spec, std::vector<double>(static_cast<std::size_t>(m), 0.0));
    CHECK(std::abs(at_ref.amplitude(0) - cplx(1.0, 0.0)) < 1e-12);

    // single-parameter displacement: P(v_i) = eps^2 / 4 up to O(eps^4)
    const double eps = 0.02;
    for (std::size_t i = 0; i < static_cast<std::size_t>(m); ++i) {
        std::vector<double> dtheta(static_cast<std::size_t>(m), 0.0);
        dtheta[i] = eps;
        const StateVector s = encode(spec, dtheta);
        const double p = std::norm(s.amplitude(map.v[i]));
        CHECK(std::abs(p - eps * eps / 4.0) < std::pow(eps, 4));
    }

    // norm 0.1 displacement: P(0) = 1 - |dtheta|^2 / 4 up to O(|dtheta|^4)
    auto rng = make_stream(8);
    std::normal_distribution<double> gauss(0.0, 1.0);
    std::vector<double> dtheta(static_cast<std::size_t>(m));
    double norm = 0.0;
    for (double& v : dtheta) {
        v = gauss(rng);
        norm += v * v;
    }
    for (double& v : dtheta) v *= 0.1 / std::sqrt(norm);
    const StateVector s = encode(spec, dtheta);
    CHECK(std::abs(std::norm(s.amplitude(0)) - (1.0 - 0.01 / 4.0)) < 1e-4);

    CHECK_THROWS_AS(encode(spec, std::vector<double>(3, 0.0)), ShapeError);
}

TEST_CASE("estimate") {
    BasisIndexMap map;
    map.v = {1, 2, 4, 8};

    std::map<std::uint64_t, std::uint64_t> counts{{0, 1000}};
    CHECK(estimate(counts, map, 1000) == std::vector<double>{0, 0, 0, 0});

    counts = {{0, 750}, {4, 250}};
    const auto est = estimate(counts, map, 1000);
    CHECK(est[0] == 0.0);
    CHECK(est[1] == 0.0);
    CHECK(est[2] == doctest::Approx(1.0));
    CHECK(est[3] == 0.0);

    CHECK_THROWS_AS(estimate(counts, map, 0), ArgumentError);
}

TEST_CASE("estimator consistency: cubic bias decay") {
    const NpqcSpec spec(8, 4, Variant::Y_ONLY);
    const BasisIndexMap map = basis_index_map(spec);
    const int m = spec.num_params();

    // error of the estimated vector norm: the per-component bias is only
    // quadratic, but the norm estimate has a super-quadratic bias decay
    auto norm_error_at = [&](double norm_dtheta) {
        auto rng = make_stream(99);
        std::normal_distribution<double> gauss(0.0, 1.0);
        std::vector<double> dtheta(static_cast<std::size_t>(m));
        double norm = 0.0;
        for (double& v : dtheta) {
            v = gauss(rng);
            norm += v * v;
        }
        for (double& v : dtheta) v *= norm_dtheta / std::sqrt(norm);
        const auto est = estimate_exact(encode(spec, dtheta), map);
        double est_n2 = 0.0;
        for (double e : est) est_n2 += e * e;
        return std::abs(std::sqrt(est_n2) - norm_dtheta);
    };

    const double e1 = norm_error_at(0.2);
    const double e2 = norm_error_at(0.1);
    CHECK(e1 >= 4.0 * e2);  // halving |dtheta| cuts the bias at least 4x
}

TEST_CASE("sense_experiment") {
    const NpqcSpec spec(6, 2, Variant::Y_ONLY);
    const std::vector<long long> shots{100, 10000, -1};
    const auto rows = sense_experiment(spec, 0.1, shots, 4, 42);
    REQUIRE(rows.size() == 12);

    // exact row has less error than the 100-shot row on average
    double coarse = 0.0, exact = 0.0;
    for (const SenseRow& r : rows) {
        if (r.shots == 100) coarse += r.rel_rmse;
        if (r.shots == -1) exact += r.rel_rmse;
        CHECK(r.rel_rmse >= 0.0);
        CHECK(r.leakage_fraction >= 0.0);
        CHECK(r.m == spec.num_params());
    }
    CHECK(exact < coarse);

    // thread count does not change results
    const auto rows2 = sense_experiment(spec, 0.1, shots, 4, 42, 3);
    REQUIRE(rows2.size() == rows.size());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        CHECK(rows[i].rel_rmse == rows2[i].rel_rmse);
        CHECK(rows[i].instance == rows2[i].instance);
    }

    // zero displacement with exact probabilities: zero error
    const auto zero_rows = sense_experiment(spec, 0.0, {-1}, 2, 7);
    for (const SenseRow& r : zero_rows) CHECK(r.rel_rmse <= 1e-12);
}

TEST_CASE("crao_check") {
    const NpqcSpec spec(6, 3, Variant::FULL);
    const CraoReport at_ref = crao_check(spec, reference_params(spec));
    CHECK(at_ref.m == 24);
    CHECK(at_ref.full_rank);
    CHECK(std::abs(at_ref.trace_f_inv - 24.0) <= 1e-6);
    CHECK(at_ref.trace_bound_ok);
    CHECK(at_ref.inverse_bound_ok);

    auto rng = make_stream(13);
    std::uniform_real_distribution<double> unif(0.0, 6.28);
    for (int trial = 0; trial < 3; ++trial) {
        ParamVector theta(static_cast<std::size_t>(spec.num_params()));
        for (double& v : theta) v = unif(rng);
        const CraoReport rep = crao_check(spec, theta);
        CHECK(rep.trace_bound_ok);
        if (rep.full_rank) CHECK(rep.inverse_bound_ok);
    }

    // Lemma equality case: diag(1/2, 1/2) has Tr A^-1 = 4 = M^2 / Tr A
    QfimMatrix toy = 0.5 * QfimMatrix::Identity(2, 2);
    const InverseTraceResult inv = trace_inverse(toy);
    CHECK(inv.trace_inverse == doctest::Approx(4.0));
    CHECK(inv.trace_inverse >= 4.0 / toy.trace() - 1e-12);
}
