#pragma once

#include "orlicz/young.hpp"

#include <utility>
#include <vector>

namespace orlicz {

// Window for the upper-limit proxy M(t) ~ max_{s in top window} A(st)/A(s).
// Closed-form bases evaluate the ratio in log coordinates, so the window can
// sit far beyond double range; table-backed bases get clamped to their
// validated range and the clamp is recorded on the profile.
struct SGridSpec {
    double s_lo = 1.0;
    double s_hi = 1e305;
    int per_decade = 24;
    int window_decades = 3;
};

// Growth envelope M(t, A) = limsup_{s->inf} A(st)/A(s), proxied by the max
// over the top window of the s-grid.
double mo_function(const YoungFunction& Y, double t, const SGridSpec& grid = {});

// Variant taking the max over the whole s-grid (the sup form used midway
// through the Young-function proof of the envelope lemma).
double mo_function_sup(const YoungFunction& Y, double t, const SGridSpec& grid = {});

struct MatuszewskaProfile {
    YoungFunction base;
    SGridSpec s_grid;          // window actually used (after clamping)
    bool s_grid_clamped = false;
    std::vector<double> t_grid;
    std::vector<double> M_values;
    std::vector<double> ln_ratio; // ln M / ln t, NaN at t = 1
    double p_infinity = 0.0;      // inf of ln M / ln t over sampled t > 1
    double p_infinity_uncertainty = 0.0; // spread between the inf and the top-t value

    // Log-uniform table of M usable as a Young function (weighted norms with
    // the envelope need point evaluation below and above the profile grid;
    // power tails fitted at the ends cover that).
    YoungFunction as_young_function() const;
};

MatuszewskaProfile build_mo_profile(const YoungFunction& Y, double t_lo = 1e-6,
                                    double t_hi = 1e6, int per_decade = 16,
                                    const SGridSpec& grid = {});

// inf over sampled t > 1 of ln M / ln t (recomputed from the profile data).
double mo_index(const MatuszewskaProfile& profile);

// t^p_infinity <= M(t) <= t^(p_infinity+eps) for sampled t >= t0; returns
// (holds, t0).  The lower bound is definitional for the profile's own inf;
// the check guards the tabulated values against interpolation drift.
std::pair<bool, double> check_sandwich(const MatuszewskaProfile& profile, double eps);

struct MYoungReport {
    bool midpoint_convex = false;
    bool small_t_dominated = false;  // M(t) <= t^p_minus * (1 + slack) for t < 1
    bool ratio_increasing = false;   // M(t)/t nondecreasing on the top decades
    bool dominates_base = false;     // sup-form M(t) >= A(t)/A(1) spot check
    bool ok() const { return midpoint_convex && small_t_dominated && ratio_increasing && dominates_base; }
};

// Young-function credentials of the envelope, checked on the profile grid.
MYoungReport check_M_young(const MatuszewskaProfile& profile, double p_minus,
                           double rel_slack = 1e-3);

} // namespace orlicz
