#include "doctest.h"

#include "orlicz/errors.hpp"
#include "orlicz/young.hpp"

#include <cmath>
#include <random>
#include <vector>

using namespace orlicz;

namespace {

std::vector<double> log_points(double lo, double hi, int n) {
    std::vector<double> t(n);
    const double l = std::log(lo), d = (std::log(hi) - l) / (n - 1);
    for (int i = 0; i < n; ++i) t[i] = std::exp(l + i * d);
    return t;
}

} // namespace

TEST_CASE("power family closed forms") {
    const YoungFunction A = YoungFunction::power(2.0);
    for (double t : log_points(1e-8, 1e8, 65)) {
        CHECK(A.value(t) == doctest::Approx(t * t).epsilon(1e-13));
        CHECK(A.density(t) == doctest::Approx(2.0 * t).epsilon(1e-13));
        CHECK(A.growth_ratio(t) == doctest::Approx(2.0).epsilon(1e-13));
        CHECK(A.inverse(A.value(t)) == doctest::Approx(t).epsilon(1e-12));
    }
    CHECK(A.value(0.0) == 0.0);
    CHECK(A.density(0.0) == 0.0);
    CHECK(A.closed_form());

    const YoungFunction B = YoungFunction::power(1.5, 3.0);
    CHECK(B.value(4.0) == doctest::Approx(3.0 * 8.0).epsilon(1e-13));
    CHECK(B.density(4.0) == doctest::Approx(3.0 * 1.5 * 2.0).epsilon(1e-13));
}

TEST_CASE("power_log family closed forms") {
    const YoungFunction A = YoungFunction::power_log(2.0, 1.0);
    for (double t : log_points(1e-4, 1e4, 33))
        CHECK(A.value(t) == doctest::Approx(t * t * std::log1p(t)).epsilon(1e-12));
    // t a(t)/A(t) = p + q t / ((1+t) log(1+t)) for this family.
    for (double t : {1e-6, 1.0, 1e6}) {
        const double expected = 2.0 + t / ((1.0 + t) * std::log1p(t));
        CHECK(A.growth_ratio(t) == doctest::Approx(expected).epsilon(1e-9));
    }
    CHECK(A.growth_ratio(1e-9) == doctest::Approx(3.0).epsilon(1e-6));
    CHECK(A.inverse(A.value(7.5)) == doctest::Approx(7.5).epsilon(1e-10));
}

TEST_CASE("piecewise power keeps the value continuous at the breakpoint") {
    const YoungFunction A = YoungFunction::piecewise_power(1.5, 3.0);
    CHECK(A.value(1.0 - 1e-12) == doctest::Approx(A.value(1.0 + 1e-12)).epsilon(1e-9));
    CHECK(A.value(0.25) == doctest::Approx(std::pow(0.25, 1.5)).epsilon(1e-13));
    CHECK(A.value(4.0) == doctest::Approx(64.0).epsilon(1e-13));
    CHECK(A.density(1.0) >= A.density(1.0 - 1e-9)); // jump resolved right-continuously
}

TEST_CASE("density table reproduces the quadratic it was sampled from") {
    std::vector<double> t = log_points(1e-4, 1e2, 200);
    std::vector<double> a(t.size());
    for (size_t i = 0; i < t.size(); ++i) a[i] = 2.0 * t[i];
    const YoungFunction A = YoungFunction::from_density_samples(t, a);
    // The trapezoid cumulative is exact for a linear density.
    for (double x : {1e-3, 0.1, 1.0, 10.0, 90.0})
        CHECK(A.value(x) == doctest::Approx(x * x).epsilon(1e-10));
    CHECK(A.quadrature_error() >= 0.0);
    CHECK_FALSE(A.closed_form());
}

TEST_CASE("density table rejects non-monotone input") {
    CHECK_THROWS_AS(YoungFunction::from_density_samples({1.0, 2.0, 2.0}, {1.0, 2.0, 3.0}),
                    DegenerateInputError);
    CHECK_THROWS_AS(YoungFunction::from_density_samples({1.0, 2.0, 3.0}, {1.0, 0.5, 3.0}),
                    DegenerateInputError);
}

TEST_CASE("conjugate of a pure power is the dual power") {
    for (double p : {1.5, 2.0, 4.0}) {
        const double q = p / (p - 1.0);
        const YoungFunction A = YoungFunction::power(p, 1.0 / p);
        const YoungFunction C = A.conjugate();
        for (double s : log_points(1e-2, 1e2, 129))
            CHECK(C.value(s) == doctest::Approx(std::pow(s, q) / q).epsilon(1e-9));
    }
}

TEST_CASE("Young inequality holds with equality at the density") {
    const YoungFunction A = YoungFunction::power(1.5, 1.0 / 1.5);
    const YoungFunction C = A.conjugate();
    std::mt19937_64 rng(99);
    for (int i = 0; i < 2000; ++i) {
        const double lt = -4.0 + 8.0 * ((rng() >> 11) * 0x1.0p-53);
        const double ls = -4.0 + 8.0 * ((rng() >> 11) * 0x1.0p-53);
        const double t = std::pow(10.0, lt), s = std::pow(10.0, ls);
        CHECK(s * t <= (A.value(t) + C.value(s)) * (1.0 + 1e-12));
    }
    for (double t : {0.1, 1.0, 5.0}) {
        const double s = A.density(t);
        CHECK(s * t == doctest::Approx(A.value(t) + C.value(s)).epsilon(1e-9));
    }
}

TEST_CASE("index estimation on powers is exact") {
    for (double p : {1.5, 2.0, 3.5}) {
        const IndexEstimate est = estimate_indices(YoungFunction::power(p), {1e-6, 1e6});
        REQUIRE(est.indices.has_value());
        CHECK(est.indices->p_minus == doctest::Approx(p).epsilon(1e-9));
        CHECK(est.indices->p_plus == doctest::Approx(p).epsilon(1e-9));
        CHECK(est.indices->delta2_constant == doctest::Approx(std::pow(2.0, p)).epsilon(1e-9));
        CHECK_FALSE(est.non_doubling);
    }
}

TEST_CASE("index estimation brackets the log perturbation") {
    const IndexEstimate est = estimate_indices(YoungFunction::power_log(2.0), {1e-6, 1e6});
    REQUIRE(est.indices.has_value());
    CHECK(est.indices->p_minus > 2.0);
    CHECK(est.indices->p_minus < 2.1);
    CHECK(est.indices->p_plus > 2.9);
    CHECK(est.indices->p_plus <= 3.0 + 1e-9);
}

TEST_CASE("exponential-type growth is reported as non-doubling") {
    // A(t) = e^t - t - 1 through the callback interface.
    const auto log_value = [](double lt) {
        const double t = std::exp(lt);
        if (t < 1e-3) return 2.0 * lt - std::log(2.0);
        if (t > 30.0) return t;
        return std::log(std::exp(t) - t - 1.0);
    };
    const auto density = [](double t) { return std::expm1(t); };
    const auto growth = [](double t) {
        if (t > 40.0) return t;
        if (t < 1e-4) return 2.0;
        return t * std::expm1(t) / (std::exp(t) - t - 1.0);
    };
    const YoungFunction E = YoungFunction::from_callbacks(log_value, density, growth, "exp");
    const IndexEstimate est = estimate_indices(E, {1e-2, 1e2});
    CHECK(est.non_doubling);
    CHECK_FALSE(est.indices.has_value());
    CHECK_FALSE(est.diagnosis.empty());
}

TEST_CASE("refined doubling constant matches the power scaling") {
    const YoungFunction A = YoungFunction::power(2.5);
    const auto [ok, c] = check_delta2_refined(A, 0.5, {1e-4, 1e4});
    CHECK(ok);
    CHECK(c == doctest::Approx(std::pow(1.5, 2.5)).epsilon(1e-6));
}

TEST_CASE("splitting and scaling inequalities hold on sampled pairs") {
    const YoungFunction A = YoungFunction::power_log(1.5);
    const IndexEstimate est = estimate_indices(A, {1e-6, 1e6});
    REQUIRE(est.indices.has_value());
    std::mt19937_64 rng(7);
    std::vector<std::pair<double, double>> pairs;
    for (int i = 0; i < 400; ++i) {
        const double s = std::pow(10.0, -2.0 + 4.0 * ((rng() >> 11) * 0x1.0p-53));
        const double t = std::pow(10.0, -2.0 + 4.0 * ((rng() >> 11) * 0x1.0p-53));
        pairs.emplace_back(s, t);
    }
    const auto [ok, c_eta] = verify_sum_inequality(A, 1.0, est.indices->p_plus, pairs);
    CHECK(ok);
    CHECK(c_eta >= 1.0);
    CHECK(verify_scaling_inequality(A, *est.indices, pairs));
}

TEST_CASE("tail comparison orders powers and detects equivalence") {
    const YoungFunction A2 = YoungFunction::power(2.0);
    const YoungFunction A3 = YoungFunction::power(3.0);
    CHECK(compare(A2, A3).relation == Relation::ESSENTIALLY_SMALLER);
    CHECK(compare(A2, YoungFunction::power(2.0, 2.0)).relation == Relation::EQUIV);
    CHECK(compare(A2, YoungFunction::power_log(2.0)).relation == Relation::ESSENTIALLY_SMALLER);
    const ComparisonVerdict back = compare(A3, A2);
    CHECK(back.relation != Relation::ESSENTIALLY_SMALLER);
    CHECK(back.relation != Relation::EQUIV);
}

TEST_CASE("doubling envelope and its inverse round-trip") {
    GrowthIndices idx;
    idx.p_minus = 1.5;
    idx.p_plus = 2.5;
    const YoungFunction E = a_infinity(idx);
    CHECK(E.value(0.5) == doctest::Approx(std::pow(0.5, 1.5)).epsilon(1e-12));
    CHECK(E.value(4.0) == doctest::Approx(std::pow(4.0, 2.5)).epsilon(1e-12));
    for (double y : {1e-3, 0.7, 1.0, 42.0})
        CHECK(E.value(a_infinity_inverse(idx, y)) == doctest::Approx(y).epsilon(1e-10));
}

TEST_CASE("sobolev_star computes np/(n-p) and rejects p >= n") {
    CHECK(sobolev_star(2.0, 4) == doctest::Approx(4.0));
    CHECK(sobolev_star(1.5, 2) == doctest::Approx(6.0));
    CHECK_THROWS_AS(sobolev_star(4.0, 4), UnsupportedRegimeError);
    CHECK_THROWS_AS(sobolev_star(5.0, 4), UnsupportedRegimeError);
}
