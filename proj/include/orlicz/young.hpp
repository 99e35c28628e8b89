#pragma once

#include <functional>
#include <memory>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace orlicz {

struct Interval {
    double lo = 0.0;
    double hi = 0.0;
};

// N-function A(t) = int_0^t a(s) ds with a(0) = 0, a > 0 on (0, inf),
// a nondecreasing and right-continuous.  Closed-form families evaluate
// analytically (including in log coordinates so ratios like A(st)/A(s)
// stay finite far beyond double range); table-backed instances interpolate.
class YoungFunction {
  public:
    // A(t) = c * t^p, p > 1.
    static YoungFunction power(double p, double scale = 1.0);
    // A(t) = c * t^p * log(1+t)^q, p > 1, q > 0.
    static YoungFunction power_log(double p, double q = 1.0, double scale = 1.0);
    // A(t) = c * max(t^p_low, t^p_high) with breakpoint t = 1; density jumps
    // there and is kept right-continuous.
    static YoungFunction piecewise_power(double p_low, double p_high, double scale = 1.0);
    // Density samples (t_i, a_i) with strictly increasing t_i > 0 and
    // nondecreasing a_i >= 0.  An implicit (0, 0) node closes the ramp.
    // step = false integrates the linear interpolant (trapezoid cumulative),
    // step = true treats a as right-continuous piecewise constant.
    static YoungFunction from_density_samples(std::vector<double> t, std::vector<double> a,
                                              bool step = false);
    // Log-uniform value table: A(exp(lt_lo + i*dlt)) = exp(log_values[i]).
    // Beyond the table the function continues as the power law fitted to the
    // nearest end; density comes from the tabulated log-slope unless explicit
    // density samples are attached.
    static YoungFunction from_log_value_table(double lt_lo, double dlt,
                                              std::vector<double> log_values,
                                              std::vector<double> density = {});
    // Closure-backed instance for derived functions that have an exact
    // evaluation model of their own (compositions, transforms).  log_value is
    // lt -> ln A(e^lt) and must be increasing; density is t -> a(t); growth is
    // t -> t a(t)/A(t) and falls back to a central difference of log_value
    // when omitted.
    static YoungFunction from_callbacks(std::function<double(double)> log_value,
                                        std::function<double(double)> density,
                                        std::function<double(double)> growth = {},
                                        std::string label = "derived");

    double value(double t) const;     // A(t)
    double density(double t) const;   // a(t)
    double log_value(double lt) const; // ln A(e^lt), overflow-free
    double inverse(double y) const;   // A^{-1}(y)
    // t a(t) / A(t), the local growth exponent; evaluated analytically for
    // closed forms so it stays usable across the full double range.
    double growth_ratio(double t) const;
    double t_max() const;             // upper end of the validated range
    bool closed_form() const;
    // One-sided cumulative quadrature bound for table-backed instances.
    double quadrature_error() const;
    std::string describe() const;

    // Complementary function; density is the generalized right-continuous
    // inverse of a with flat segments resolved to their left endpoint.
    // Exact for pure powers, table-backed otherwise.
    YoungFunction conjugate() const;

  private:
    struct Power {
        double p, c;
    };
    struct PowerLog {
        double p, q, c;
    };
    struct PiecewisePower {
        double p_lo, p_hi, c;
    };
    struct DensityTable {
        std::vector<double> t, a, A; // A = running integral, A[i] = A(t[i])
        bool step = false;
        double quad_error = 0.0; // one-sided trapezoid bound (monotone a)
    };
    struct LogValueTable {
        double lt_lo = 0.0, dlt = 0.0;
        std::vector<double> logA;
        std::vector<double> a; // optional density samples at the nodes
        double slope_lo = 1.0, slope_hi = 1.0;
    };
    struct Callback {
        std::function<double(double)> log_value_fn;
        std::function<double(double)> density_fn;
        std::function<double(double)> growth_fn; // optional
        std::string label;
    };
    using Impl = std::variant<Power, PowerLog, PiecewisePower, DensityTable, LogValueTable, Callback>;

    explicit YoungFunction(Impl impl) : impl_(std::move(impl)) {}
    const LogValueTable* as_log_table() const { return std::get_if<LogValueTable>(&impl_); }

    Impl impl_;
};

struct GrowthIndices {
    double p_minus = 0.0;        // grid min of t a(t) / A(t)
    double p_plus = 0.0;         // grid max of t a(t) / A(t)
    double delta2_constant = 0.0; // grid max of A(2t) / A(t)
    Interval sample_range;
};

struct IndexEstimate {
    std::optional<GrowthIndices> indices; // empty when growth looks non-doubling
    bool non_doubling = false;
    std::string diagnosis;
};

// Scans t a(t)/A(t) and A(2t)/A(t) on a log grid.  When the ratio keeps
// climbing at the top of the range (exponential-type growth) no indices are
// returned and the diagnosis says why.
IndexEstimate estimate_indices(const YoungFunction& Y, Interval range, int n_samples = 4096);

// Smallest sampled constant C_delta with A((1+delta)t) <= C_delta A(t) on the
// range.  .first is false when the constant exceeds the search cap 1e12.
std::pair<bool, double> check_delta2_refined(const YoungFunction& Y, double delta,
                                             Interval range, int n_samples = 4096);

// Splitting bound A(s+t) <= C_eta A(s) + (1+eta)^{p_plus} A(t) over the given
// (s, t) samples; returns the smallest admissible C_eta found and whether it
// stayed below the 1e12 cap.
std::pair<bool, double> verify_sum_inequality(const YoungFunction& Y, double eta, double p_plus,
                                              std::span<const std::pair<double, double>> samples);

// min(s^p-, s^p+) A(t) <= A(st) <= max(s^p-, s^p+) A(t) on the samples,
// within rel_tol.  Samples must keep s*t inside the index sample range for
// the bound to be meaningful.
bool verify_scaling_inequality(const YoungFunction& Y, const GrowthIndices& idx,
                               std::span<const std::pair<double, double>> samples,
                               double rel_tol = 1e-9);

enum class Relation { LE, EQUIV, ESSENTIALLY_SMALLER, UNDECIDED };

struct ComparisonVerdict {
    Relation relation = Relation::UNDECIDED;
    double witness_constant = 0.0; // c in A(t) <= B(c t)
    double witness_threshold = 0.0; // t0 from which the witness holds
    // (t, A(ct)/B(t)) at the verdict's constant, kept for reporting.
    std::vector<std::pair<double, double>> limit_samples;
};

struct ProbeGrid {
    double t_lo = 1.0;
    double t_hi = 1e12;
    int per_decade = 32;
};

// Orders A against B by tail growth.  ESSENTIALLY_SMALLER needs the ratio
// A(ct)/B(t) to fall steadily across the top probe decades for every
// candidate c in {2^-4 .. 2^8} (or to already sit below 1e-6); LE needs a
// single (c, t0) witness; both directions of LE give EQUIV.
ComparisonVerdict compare(const YoungFunction& A, const YoungFunction& B,
                          const ProbeGrid& probe = {});

// max(t^p_plus, t^p_minus): the doubling envelope attached to estimated
// indices.  Satisfies the doubling condition with constant 2^p_plus.
YoungFunction a_infinity(const GrowthIndices& idx);

// Exact inverse of a_infinity(idx): y^(1/p_minus) below 1, y^(1/p_plus) above.
double a_infinity_inverse(const GrowthIndices& idx, double y);

// n p / (n - p); requires p < n.
double sobolev_star(double p, int n);

} // namespace orlicz
