#include "orlicz/suite.hpp"

#include "orlicz/errors.hpp"
#include "orlicz/grid.hpp"
#include "orlicz/matuszewska.hpp"
#include "orlicz/sobolev.hpp"

#include <cmath>
#include <cstdio>
#include <random>

namespace orlicz {

namespace {

std::string fmt(const char* pattern, double a, double b = 0.0) {
    char buf[160];
    std::snprintf(buf, sizeof(buf), pattern, a, b);
    return buf;
}

std::vector<std::pair<double, double>> log_pairs(std::mt19937_64& rng, int count, double lo,
                                                 double hi) {
    std::uniform_real_distribution<double> U(std::log(lo), std::log(hi));
    std::vector<std::pair<double, double>> out;
    out.reserve(count);
    for (int i = 0; i < count; ++i) out.emplace_back(std::exp(U(rng)), std::exp(U(rng)));
    return out;
}

} // namespace

bool SuiteReport::all_passed() const {
    for (const auto& c : checks)
        if (!c.passed) return false;
    return !checks.empty();
}

SuiteReport run_inequality_suite(const YoungFunction& Y, const std::string& label, int n) {
    SuiteReport rep;
    rep.function_label = label;
    auto push = [&](std::string name, bool ok, std::string detail) {
        rep.checks.push_back({std::move(name), ok, std::move(detail)});
    };

    const Interval range{1e-6, 1e6};
    IndexEstimate est = estimate_indices(Y, range);
    if (!est.indices) {
        push("growth-indices", false, est.diagnosis);
        return rep;
    }
    const GrowthIndices idx = *est.indices;
    push("growth-indices", true, fmt("p- = %.6g, p+ = %.6g", idx.p_minus, idx.p_plus));

    std::mt19937_64 rng(20240817u);

    {
        auto samples = log_pairs(rng, 512, 1e-2, 1e2);
        auto [ok, c_eta] = verify_sum_inequality(Y, 1.0, idx.p_plus, samples);
        push("splitting-bound", ok, fmt("C_eta = %.6g at eta = 1", c_eta));
    }

    {
        auto samples = log_pairs(rng, 1000, 1e-2, 1e2);
        bool ok = verify_scaling_inequality(Y, idx, samples);
        push("scaling-sandwich", ok, fmt("%g sampled (s, t) pairs", samples.size()));
    }

    {
        Domain dom = Domain::box(1.0, 1.0, 32, 32);
        bool ok = true;
        int tried = 0;
        for (double width : {0.4, 0.22})
            for (double amp : {0.1, 1.0, 7.0}) {
                GridFunction u = make_bump(dom, {0.5, 0.5}, width, 2.0);
                for (double& v : u.values()) v *= amp;
                ok = ok && check_norm_modular_bounds(Y, idx, u);
                ++tried;
            }
        push("norm-modular-bounds", ok, fmt("%g bump configurations", double(tried)));
    }

    try {
        SobolevConjugate S = build_sobolev_conjugate(Y, n);

        AnchoredBounds hb = check_H_bounds(S, {1.0, 1e4});
        push("H-power-bounds", hb.holds, fmt("C1 = %.6g, C2 = %.6g", hb.C1, hb.C2));

        AnchoredBounds ab = check_An_power_bounds(S, {1.0, 1e4});
        push("An-power-bounds", ab.holds, fmt("C1 = %.6g, C2 = %.6g", ab.C1, ab.C2));

        DoublingInheritance dh = check_An_delta2(S);
        bool delta0_ok =
            std::fabs(dh.delta0 - (std::pow(2.0, 1.0 - S.base_indices.p_plus / n) - 1.0)) <=
            1e-9 * (1.0 + dh.delta0);
        push("doubling-inheritance", dh.holds && delta0_ok,
             fmt("delta0 = %.6g, C0 = %.6g", dh.delta0, dh.C0));
    } catch (const std::runtime_error& e) {
        push("sobolev-conjugate", false, e.what());
    }

    {
        MatuszewskaProfile prof = build_mo_profile(Y);
        auto [ok, t0] = check_sandwich(prof, 0.2);
        push("envelope-sandwich", ok, fmt("p_inf = %.6g, t0 = %.6g", prof.p_infinity, t0));
    }

    return rep;
}

std::vector<std::pair<YoungFunction, std::string>> builtin_family() {
    std::vector<std::pair<YoungFunction, std::string>> fam;
    for (double p : {1.5, 2.0, 2.5}) {
        fam.emplace_back(YoungFunction::power(p), fmt("t^%.1f", p));
        fam.emplace_back(YoungFunction::power_log(p), fmt("t^%.1f log(1+t)", p));
    }
    return fam;
}

} // namespace orlicz
