#include "doctest.h"

#include "orlicz/errors.hpp"
#include "orlicz/sobolev.hpp"
#include "orlicz/young.hpp"

#include <cmath>

using namespace orlicz;

namespace {

double log_point(double lo, double hi, int i, int n) {
    return lo * std::pow(hi / lo, double(i) / double(n));
}

} // namespace

TEST_CASE("conjugate of t^2 in dimension 4 is (8/27) t^4") {
    const auto sc = build_sobolev_conjugate(YoungFunction::power(2.0), 4);
    for (int i = 0; i <= 300; ++i) {
        const double t = log_point(0.1, 100.0, i, 300);
        const double ref = 8.0 / 27.0 * std::pow(t, 4);
        CHECK(sc.An.value(t) == doctest::Approx(ref).epsilon(1e-10));
    }
    CHECK(sc.An_indices.p_minus == doctest::Approx(4.0).epsilon(1e-8));
    CHECK(sc.An_indices.p_plus == doctest::Approx(4.0).epsilon(1e-8));
    CHECK(sc.base_indices.p_minus == doctest::Approx(2.0).epsilon(1e-8));
    CHECK(sc.base_indices.p_plus == doctest::Approx(2.0).epsilon(1e-8));
}

TEST_CASE("H table matches the power-law closed form and inverts exactly") {
    const auto sc = build_sobolev_conjugate(YoungFunction::power(2.0), 4);
    // H(t) = ((3/2) t^(2/3))^(3/4) for A = t^2, n = 4
    for (int i = 0; i <= 300; ++i) {
        const double t = log_point(1e-6, 1e6, i, 300);
        const double ref = std::pow(1.5 * std::pow(t, 2.0 / 3.0), 0.75);
        const double h = sc.H.value(t);
        CHECK(h == doctest::Approx(ref).epsilon(1e-12));
        CHECK(sc.H.inverse(h) == doctest::Approx(t).epsilon(1e-12));
    }
    CHECK(sc.H.t_lo() == doctest::Approx(1e-10));
    CHECK(sc.H.t_hi() == doctest::Approx(1e8));
}

TEST_CASE("conjugate of t^1.5 in dimension 2 is t^6/8") {
    const auto sc = build_sobolev_conjugate(YoungFunction::power(1.5), 2);
    for (int i = 0; i <= 300; ++i) {
        const double t = log_point(0.1, 100.0, i, 300);
        CHECK(sc.An.value(t) == doctest::Approx(std::pow(t, 6) / 8.0).epsilon(1e-10));
    }
    // H(t) = sqrt(2) t^(1/4)
    for (int i = 0; i <= 100; ++i) {
        const double t = log_point(1e-6, 1e6, i, 100);
        const double ref = std::sqrt(2.0) * std::pow(t, 0.25);
        CHECK(sc.H.value(t) == doctest::Approx(ref).epsilon(1e-12));
    }
    CHECK(sc.An_indices.p_minus == doctest::Approx(6.0).epsilon(1e-8));
    CHECK(sc.An_indices.p_plus == doctest::Approx(6.0).epsilon(1e-8));
}

TEST_CASE("integrability flags across the embedding threshold") {
    const auto ok = check_integrability(YoungFunction::power(2.0), 4);
    CHECK(ok.at_zero);
    CHECK(ok.at_infinity);
    CHECK(!ok.decade_integrals_zero.empty());
    CHECK(!ok.decade_integrals_infinity.empty());

    // At p = n the zero-side integrand is 1/t: no longer integrable.
    const auto crit = check_integrability(YoungFunction::power(4.0), 4);
    CHECK(!crit.at_zero);
    CHECK(crit.at_infinity);

    // Above p = n both conditions fail.
    const auto super = check_integrability(YoungFunction::power(6.0), 4);
    CHECK(!super.at_zero);
    CHECK(!super.at_infinity);
}

TEST_CASE("anchored power bounds hold for the pure-power conjugate") {
    const auto sc = build_sobolev_conjugate(YoungFunction::power(1.5), 2);

    const auto hb = check_H_bounds(sc, {1.0, 1e4});
    CHECK(hb.holds);
    CHECK(hb.C1 > 0.0);
    CHECK(hb.C2 >= hb.C1);
    // Pure power: both anchored constants coincide with H(1)^... = 1/4 scale.
    CHECK(hb.C1 == doctest::Approx(hb.C2).epsilon(1e-9));
    CHECK(hb.worst_margin > -1e-7);

    const auto ab = check_An_power_bounds(sc, {1.0, 1e4});
    CHECK(ab.holds);
    CHECK(ab.C1 == doctest::Approx(0.125).epsilon(1e-9));
    CHECK(ab.C2 == doctest::Approx(0.125).epsilon(1e-9));
    CHECK(ab.worst_margin > -1e-7);
}

TEST_CASE("doubling is inherited with the predicted delta0") {
    const auto sc = build_sobolev_conjugate(YoungFunction::power(1.5), 2);
    const auto d2 = check_An_delta2(sc);
    CHECK(d2.holds);
    // delta0 = 2^(1 - p+/n) - 1 with p+ = 1.5, n = 2
    CHECK(d2.delta0 == doctest::Approx(std::pow(2.0, 0.25) - 1.0).epsilon(1e-8));
    // An is a pure sixth power, so An((1+delta0)t)/An(t) = 2^(6/4)
    CHECK(d2.C0 == doctest::Approx(std::pow(2.0, 1.5)).epsilon(1e-6));
    CHECK(d2.worst_H_margin > -1e-10);
}

TEST_CASE("log-perturbed base widens the conjugate index bracket") {
    const auto sc = build_sobolev_conjugate(YoungFunction::power_log(2.0), 4);
    // Base grows between t^2 and t^3, so An sits between the two pure-power
    // conjugates: exponents n p/(n-p) at p = 2 and p = 3.
    CHECK(sc.base_indices.p_minus > 2.0 - 1e-9);
    CHECK(sc.base_indices.p_plus < 3.0 + 1e-9);
    CHECK(sc.An_indices.p_minus > 4.0 - 1e-6);
    CHECK(sc.An_indices.p_plus < 12.0 + 1e-6);
    CHECK(sc.An_indices.p_minus <= sc.An_indices.p_plus);
}

TEST_CASE("degenerate regimes are rejected") {
    CHECK_THROWS_AS((void)build_H(YoungFunction::power(4.0), 4), UnsupportedRegimeError);
    CHECK_THROWS_AS((void)build_H(YoungFunction::power(6.0), 4), UnsupportedRegimeError);
    CHECK_THROWS_AS((void)build_sobolev_conjugate(YoungFunction::power(4.5), 4),
                    UnsupportedRegimeError);
}
