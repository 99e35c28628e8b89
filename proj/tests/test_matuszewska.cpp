#include "doctest.h"

#include "orlicz/matuszewska.hpp"
#include "orlicz/suite.hpp"

#include <cmath>

using namespace orlicz;

TEST_CASE("envelope of a pure power is the power itself") {
    const YoungFunction A = YoungFunction::power(2.5);
    for (double t : {0.01, 0.5, 1.0, 3.0, 1e3})
        CHECK(mo_function(A, t) == doctest::Approx(std::pow(t, 2.5)).epsilon(1e-9));
}

TEST_CASE("sup form dominates the window form") {
    const YoungFunction A = YoungFunction::power_log(2.0);
    for (double t : {0.05, 0.7, 2.0, 40.0})
        CHECK(mo_function_sup(A, t) >= mo_function(A, t) * (1.0 - 1e-12));
}

TEST_CASE("envelope index recovers the power exponent") {
    for (double p : {1.5, 2.0, 4.0}) {
        const MatuszewskaProfile prof = build_mo_profile(YoungFunction::power(p));
        CHECK(prof.p_infinity == doctest::Approx(p).epsilon(1e-6));
        CHECK(mo_index(prof) == doctest::Approx(prof.p_infinity).epsilon(1e-12));
    }
}

TEST_CASE("log perturbation collapses onto the pure power at infinity") {
    const MatuszewskaProfile prof = build_mo_profile(YoungFunction::power_log(2.0));
    CHECK(prof.p_infinity == doctest::Approx(2.0).epsilon(0.025));
    CHECK(prof.p_infinity_uncertainty >= 0.0);
}

TEST_CASE("sandwich bound holds on every built-in family member") {
    for (const auto& [Y, label] : builtin_family()) {
        CAPTURE(label);
        const MatuszewskaProfile prof = build_mo_profile(Y);
        const auto [ok, t0] = check_sandwich(prof, 0.2);
        CHECK(ok);
        CHECK(t0 >= 1.0);
    }
}

TEST_CASE("index ordering p- <= p_inf <= p+ across the family") {
    // The global lower index of the log-perturbed members is only approached
    // as t grows, so the estimation window must reach deep into the tail.
    for (const auto& [Y, label] : builtin_family()) {
        CAPTURE(label);
        const IndexEstimate est = estimate_indices(Y, {1e-6, 1e300});
        REQUIRE(est.indices.has_value());
        const MatuszewskaProfile prof = build_mo_profile(Y);
        CHECK(prof.p_infinity >= est.indices->p_minus - 1e-3);
        CHECK(prof.p_infinity <= est.indices->p_plus + 1e-3);
    }
}

TEST_CASE("envelope passes its Young-function credentials") {
    const YoungFunction A = YoungFunction::power_log(1.5);
    const IndexEstimate est = estimate_indices(A, {1e-6, 1e300});
    REQUIRE(est.indices.has_value());
    const MatuszewskaProfile prof = build_mo_profile(A);
    const MYoungReport rep = check_M_young(prof, est.indices->p_minus);
    CHECK(rep.midpoint_convex);
    CHECK(rep.small_t_dominated);
    CHECK(rep.ratio_increasing);
    CHECK(rep.dominates_base);
    CHECK(rep.ok());
}

TEST_CASE("tabulated envelope evaluates back to the profile values") {
    const MatuszewskaProfile prof = build_mo_profile(YoungFunction::power(2.0));
    const YoungFunction M = prof.as_young_function();
    for (size_t i = 0; i < prof.t_grid.size(); i += 7)
        CHECK(M.value(prof.t_grid[i]) == doctest::Approx(prof.M_values[i]).epsilon(1e-6));
}

TEST_CASE("table-backed bases clamp the s window and record it") {
    std::vector<double> t, a;
    for (int i = 0; i <= 200; ++i) {
        t.push_back(std::pow(10.0, -4.0 + 8.0 * i / 200.0));
        a.push_back(2.0 * t.back());
    }
    const YoungFunction T = YoungFunction::from_density_samples(t, a);
    const MatuszewskaProfile prof = build_mo_profile(T, 1e-2, 1e2, 8);
    CHECK(prof.s_grid_clamped);
    CHECK(prof.p_infinity == doctest::Approx(2.0).epsilon(0.05));
}
