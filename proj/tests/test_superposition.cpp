#include "doctest.h"

#include <cmath>

#include "npqc/errors.hpp"
#include "npqc/geometry.hpp"
#include "npqc/rng.hpp"
#include "npqc/superposition.hpp"
#include "npqc/train.hpp"

using namespace npqc;

namespace {

double distance(const ParamVector& a, const ParamVector& b) {
    double d2 = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) d2 += (a[i] - b[i]) * (a[i] - b[i]);
    return std::sqrt(d2);
}

}  // namespace

TEST_CASE("feasibility bounds") {
    const auto [lo1, hi1] = feasibility_bounds(1.0, 1.3);
    CHECK(lo1 == doctest::Approx(std::exp(-1.3 * 1.3 / 4.0)));
    CHECK(hi1 == doctest::Approx(std::exp(-1.3 * 1.3 / 4.0)));

    const auto [lo2, hi2] = feasibility_bounds(0.7, 0.0);
    CHECK(lo2 == doctest::Approx(0.7));
    CHECK(hi2 == doctest::Approx(0.7));

    const double e = std::exp(1.0);
    const auto [lo3, hi3] = feasibility_bounds(1.0 / e, 2.0);
    CHECK(lo3 == doctest::Approx(std::exp(-4.0)));
    CHECK(hi3 == doctest::Approx(1.0));  // e^0 clipped at 1

    CHECK_THROWS_AS(feasibility_bounds(0.0, 1.0), ArgumentError);
    CHECK_THROWS_AS(feasibility_bounds(0.5, -1.0), ArgumentError);
}

TEST_CASE("solve_superposition closed-form cases") {
    const NpqcSpec spec(6, 3, Variant::FULL);
    const ParamVector theta_r = reference_params(spec);
    auto [theta_t, target_state] = target_from_distance(spec, 0.0, 0.5, 21);

    // K_rs = 1 pins theta_s to theta_r
    SuperposeRequest pinned{theta_r, theta_t, 1.0, 0.5};
    const SuperposeResult at_ref = solve_superposition(pinned);
    CHECK(at_ref.feasible);
    CHECK(at_ref.theta_s == theta_r);

    const SuperposeResult checked = superposition_error(spec, at_ref, pinned);
    // realized r-s fidelity is exactly 1; delta_c only reflects the t-s request
    CHECK(checked.realized_k_rs == doctest::Approx(1.0));
    CHECK(std::abs(checked.delta_c - std::abs(0.5 - checked.realized_k_ts)) < 1e-12);

    // on the upper boundary cos = +1 and theta_s is collinear with theta_t - theta_r
    const double dist_rt = distance(theta_r, theta_t);
    const double k_rs = 0.3;
    const auto [lo, hi] = feasibility_bounds(k_rs, dist_rt);
    REQUIRE(hi < 1.0);
    SuperposeRequest boundary{theta_r, theta_t, k_rs, hi};
    const SuperposeResult collinear = solve_superposition(boundary);
    CHECK(collinear.feasible);
    CHECK(std::abs(collinear.cos_angle - 1.0) <= 1e-9);
    // direction check (the sin term amplifies the boundary rounding, hence 1e-4)
    const double norm_rs = 2.0 * std::sqrt(-std::log(k_rs));
    for (std::size_t i = 0; i < theta_r.size(); ++i) {
        const double expect = theta_r[i] + norm_rs * (theta_t[i] - theta_r[i]) / dist_rt;
        CHECK(std::abs(collinear.theta_s[i] - expect) < 1e-4);
    }
    // lower boundary: cos = -1
    const SuperposeResult anti = solve_superposition({theta_r, theta_t, k_rs, lo});
    CHECK(anti.feasible);
    CHECK(std::abs(anti.cos_angle + 1.0) <= 1e-9);

    // outside the wedge: structured infeasible result
    const SuperposeResult out =
        solve_superposition({theta_r, theta_t, k_rs, hi + 0.9 * (1.0 - hi)});
    CHECK_FALSE(out.feasible);
    CHECK(out.theta_s.empty());

    // degenerate target
    CHECK_THROWS_AS(solve_superposition({theta_r, theta_r, 0.5, 0.9}), DomainError);
    CHECK_THROWS_AS(solve_superposition({theta_r, theta_t, 1.5, 0.5}), ArgumentError);
}

TEST_CASE("solver self-consistency under the Gaussian model") {
    const NpqcSpec spec(8, 4, Variant::FULL);
    const ParamVector theta_r = reference_params(spec);
    auto rng = make_stream(17);
    std::uniform_real_distribution<double> unif(0.0, 1.0);

    for (int trial = 0; trial < 20; ++trial) {
        auto [theta_t, state] =
            target_from_distance(spec, 0.0, 0.3 + 0.5 * unif(rng), 100 + trial);
        const double dist_rt = distance(theta_r, theta_t);
        const double k_rs = 0.2 + 0.7 * unif(rng);
        const auto [lo, hi] = feasibility_bounds(k_rs, dist_rt);
        const double k_ts = lo + (hi - lo) * unif(rng);

        const SuperposeRequest req{theta_r, theta_t, k_rs, k_ts};
        const SuperposeResult res = solve_superposition(req);
        REQUIRE(res.feasible);

        // the model fidelities at theta_s reproduce the request exactly
        CHECK(gaussian_fidelity(distance(res.theta_s, theta_r)) ==
              doctest::Approx(k_rs).epsilon(1e-10));
        CHECK(gaussian_fidelity(distance(res.theta_s, theta_t)) ==
              doctest::Approx(k_ts).epsilon(1e-10));
    }
}

TEST_CASE("realized error and perpendicular-direction independence") {
    const NpqcSpec spec(6, 4, Variant::FULL);
    const ParamVector theta_r = reference_params(spec);

    double sum_det = 0.0, sum_rand = 0.0;
    int count = 0;
    for (int trial = 0; trial < 20; ++trial) {
        auto [theta_t, state] = target_from_distance(spec, 0.0, 0.5, 300 + trial);
        const double dist_rt = distance(theta_r, theta_t);
        const double k_rs = 0.7;
        const auto [lo, hi] = feasibility_bounds(k_rs, dist_rt);
        const double k_ts = lo + 0.5 * (hi - lo);
        const SuperposeRequest req{theta_r, theta_t, k_rs, k_ts};

        const SuperposeResult det =
            superposition_error(spec, solve_superposition(req), req);
        const SuperposeResult rnd = superposition_error(
            spec, solve_superposition(req, 1234 + static_cast<std::uint64_t>(trial)), req);
        REQUIRE(det.feasible);
        REQUIRE(rnd.feasible);
        CHECK(det.delta_c >= 0.0);
        sum_det += det.delta_c;
        sum_rand += rnd.delta_c;
        ++count;
    }
    // both perpendicular choices land in the same error regime
    CHECK(sum_det / count < 0.2);
    CHECK(sum_rand / count < 0.2);
    CHECK(std::abs(sum_det - sum_rand) / count < 0.1);
}
