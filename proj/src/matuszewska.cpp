#include "orlicz/matuszewska.hpp"

#include "orlicz/errors.hpp"
#include "orlicz/numerics.hpp"

#include <algorithm>
#include <cmath>

namespace orlicz {

namespace {

SGridSpec clamp_to_range(const YoungFunction& Y, double t, const SGridSpec& grid, bool* clamped) {
    SGridSpec g = grid;
    if (clamped) *clamped = false;
    if (!Y.closed_form()) {
        // both s and s*t must stay inside the validated range
        const double cap = Y.t_max() / std::max(t, 1.0);
        if (g.s_hi > cap) {
            g.s_hi = cap;
            if (clamped) *clamped = true;
        }
    }
    if (!(g.s_hi > g.s_lo * 10.0)) throw RangeError("mo grid: range too small for this base");
    return g;
}

double window_max_ratio(const YoungFunction& Y, double t, const SGridSpec& g, bool whole_grid) {
    if (!(t > 0.0)) throw DomainError("mo_function: need t > 0");
    const double lt = std::log(t);
    const double ls_hi = std::log(g.s_hi);
    const double ls_lo =
        whole_grid ? std::log(g.s_lo)
                   : std::max(std::log(g.s_lo), ls_hi - g.window_decades * std::log(10.0));
    const int n = std::max(2, static_cast<int>(std::ceil((ls_hi - ls_lo) / std::log(10.0))) *
                                  g.per_decade);
    double m = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double ls = ls_lo + (ls_hi - ls_lo) * i / n;
        m = std::max(m, std::exp(Y.log_value(ls + lt) - Y.log_value(ls)));
    }
    return m;
}

} // namespace

double mo_function(const YoungFunction& Y, double t, const SGridSpec& grid) {
    const SGridSpec g = clamp_to_range(Y, t, grid, nullptr);
    return window_max_ratio(Y, t, g, false);
}

double mo_function_sup(const YoungFunction& Y, double t, const SGridSpec& grid) {
    const SGridSpec g = clamp_to_range(Y, t, grid, nullptr);
    return window_max_ratio(Y, t, g, true);
}

MatuszewskaProfile build_mo_profile(const YoungFunction& Y, double t_lo, double t_hi,
                                    int per_decade, const SGridSpec& grid) {
    if (!(t_lo > 0.0) || !(t_hi > t_lo)) throw DomainError("build_mo_profile: bad t range");
    bool clamped = false;
    const SGridSpec g = clamp_to_range(Y, t_hi, grid, &clamped);

    const int decades = static_cast<int>(std::ceil(std::log10(t_hi / t_lo)));
    const int n = std::max(decades * per_decade, 16) + 1;
    MatuszewskaProfile prof{Y, g, clamped, {}, {}, {}, 0.0, 0.0};
    prof.t_grid.reserve(static_cast<size_t>(n));
    prof.M_values.reserve(static_cast<size_t>(n));
    prof.ln_ratio.reserve(static_cast<size_t>(n));

    const double l_lo = std::log(t_lo), l_hi = std::log(t_hi);
    double p_inf = std::numeric_limits<double>::infinity();
    double top_value = 0.0;
    for (int i = 0; i < n; ++i) {
        const double lt = l_lo + (l_hi - l_lo) * i / (n - 1);
        const double t = std::exp(lt);
        const double M = window_max_ratio(Y, t, g, false);
        prof.t_grid.push_back(t);
        prof.M_values.push_back(M);
        if (std::fabs(lt) < 1e-12) {
            prof.ln_ratio.push_back(std::numeric_limits<double>::quiet_NaN());
            continue;
        }
        const double lr = std::log(M) / lt;
        prof.ln_ratio.push_back(lr);
        if (t > 1.0) {
            p_inf = std::min(p_inf, lr);
            top_value = lr;
        }
    }
    if (!std::isfinite(p_inf)) throw DomainError("build_mo_profile: no samples above t = 1");
    prof.p_infinity = p_inf;
    prof.p_infinity_uncertainty = std::fabs(top_value - p_inf);
    return prof;
}

double mo_index(const MatuszewskaProfile& profile) {
    double p_inf = std::numeric_limits<double>::infinity();
    for (size_t i = 0; i < profile.t_grid.size(); ++i)
        if (profile.t_grid[i] > 1.0 && std::isfinite(profile.ln_ratio[i]))
            p_inf = std::min(p_inf, profile.ln_ratio[i]);
    return p_inf;
}

std::pair<bool, double> check_sandwich(const MatuszewskaProfile& profile, double eps) {
    if (!(eps > 0.0)) throw DomainError("check_sandwich: need eps > 0");
    const double p = profile.p_infinity;
    // find the first sampled t > 1 from which both bounds hold through the top
    size_t first_ok = profile.t_grid.size();
    for (size_t i = profile.t_grid.size(); i-- > 0;) {
        if (!(profile.t_grid[i] > 1.0) || !std::isfinite(profile.ln_ratio[i])) break;
        const double lr = profile.ln_ratio[i];
        if (lr >= p - 1e-12 && lr <= p + eps + 1e-12)
            first_ok = i;
        else
            break;
    }
    if (first_ok == profile.t_grid.size()) return {false, 0.0};
    return {true, profile.t_grid[first_ok]};
}

YoungFunction MatuszewskaProfile::as_young_function() const {
    const double lt_lo = std::log(t_grid.front());
    const double lt_hi = std::log(t_grid.back());
    const size_t n = t_grid.size();
    const double dlt = (lt_hi - lt_lo) / static_cast<double>(n - 1);
    std::vector<double> logM(n);
    for (size_t i = 0; i < n; ++i) logM[i] = std::log(M_values[i]);
    return YoungFunction::from_log_value_table(lt_lo, dlt, std::move(logM));
}

MYoungReport check_M_young(const MatuszewskaProfile& profile, double p_minus, double rel_slack) {
    MYoungReport rep;
    const auto& t = profile.t_grid;
    const auto& M = profile.M_values;
    const size_t n = t.size();

    rep.midpoint_convex = true;
    for (size_t i = 1; i + 1 < n; ++i) {
        const double dl = (M[i] - M[i - 1]) / (t[i] - t[i - 1]);
        const double dr = (M[i + 1] - M[i]) / (t[i + 1] - t[i]);
        if (dr < dl * (1.0 - 1e-9) - 1e-12) {
            rep.midpoint_convex = false;
            break;
        }
    }

    rep.small_t_dominated = true;
    for (size_t i = 0; i < n; ++i) {
        if (t[i] >= 1.0) break;
        if (M[i] > std::pow(t[i], p_minus) * (1.0 + rel_slack)) {
            rep.small_t_dominated = false;
            break;
        }
    }

    // M(t)/t nondecreasing over the top decade of the grid
    rep.ratio_increasing = true;
    const double t_top = t.back() / 10.0;
    for (size_t i = 1; i < n; ++i) {
        if (t[i - 1] < t_top) continue;
        if (M[i] / t[i] < M[i - 1] / t[i - 1] * (1.0 - 1e-9)) {
            rep.ratio_increasing = false;
            break;
        }
    }

    // sup-form envelope dominates the base normalized at 1 (the s = 1 grid
    // point makes this structural; a failure flags grid trouble)
    const double probe = 10.0;
    const double sup_M = mo_function_sup(profile.base, probe, profile.s_grid);
    const double A1 = profile.base.value(1.0);
    rep.dominates_base =
        A1 > 0.0 && sup_M >= profile.base.value(probe) / A1 * (1.0 - 1e-9);
    return rep;
}

} // namespace orlicz
