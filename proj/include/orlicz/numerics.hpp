#pragma once

#include <functional>
#include <span>
#include <vector>

namespace orlicz {

// Deterministic pairwise (tree-order) accumulation.  Used for every modular
// and measure sum so that repeated runs produce bit-identical totals.
double pairwise_sum(std::span<const double> xs);

// ln(1 + e^x) without overflow for large |x|.
double softplus(double x);

// n log-spaced points covering [lo, hi], endpoints included.
std::vector<double> log_spaced(double lo, double hi, int n);

// Smallest t in [lo, hi] with F(t) = y for a nondecreasing continuous F.
// Bisection down to rel_tol * (hi - lo); throws RangeError when y is not
// bracketed by F(lo), F(hi).
double invert_increasing(const std::function<double(double)>& F, double y,
                         double lo, double hi, double rel_tol = 1e-12);

// Cumulative integral of f over [exp(lt_lo), exp(lt_hi)] sampled at
// n_cells+1 log-uniform nodes.  Each cell uses Simpson in the log variable,
// which keeps the rule exact through cubics of ln(t) and well conditioned on
// power-law integrands.  result[0] = 0.
std::vector<double> cumulative_log_simpson(const std::function<double(double)>& f,
                                           double lt_lo, double lt_hi, int n_cells);

// 16-point Gauss-Legendre on [a, b].
double gauss16(const std::function<double(double)>& f, double a, double b);

} // namespace orlicz
