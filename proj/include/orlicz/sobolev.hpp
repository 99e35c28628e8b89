#pragma once

#include "orlicz/young.hpp"

#include <vector>

namespace orlicz {

struct IntegrabilityReport {
    bool at_zero = false;     // int_0 (t/A(t))^(1/(n-1)) dt converges
    bool at_infinity = false; // int^inf (t/A(t))^(1/(n-1)) dt diverges
    std::vector<double> decade_integrals_zero; // successive decades toward 0
    std::vector<double> decade_integrals_infinity; // successive decades upward
};

// Numeric evidence for the two integral conditions behind the optimal
// embedding: Cauchy decay of the lower decades and non-geometric decay of the
// upper ones.
IntegrabilityReport check_integrability(const YoungFunction& Y, int n);

// Cumulative table of H(t) = (int_0^t (s/A(s))^(1/(n-1)) ds)^((n-1)/n) on a
// log-uniform grid.  The integrable singularity at 0 is flattened by the
// power substitution s = sigma^k before quadrature.
class HTable {
  public:
    double value(double t) const;      // H(t)
    double inverse(double s) const;    // H^{-1}(s), exact on the table model
    double t_lo() const { return t_lo_; }
    double t_hi() const { return t_hi_; }
    double h_lo() const { return H_.front(); }
    double h_hi() const { return H_.back(); }
    const std::vector<double>& nodes() const { return t_; }
    const std::vector<double>& values() const { return H_; }

  private:
    friend HTable build_H(const YoungFunction&, int, double, double, int);
    std::vector<double> t_, G_, H_; // G = H^(n/(n-1)) = the raw integral
    double t_lo_ = 0.0, t_hi_ = 0.0;
    double lt_lo_ = 0.0, dlt_ = 0.0;
    double n_ = 0.0;
    double head_ = 0.0; // int_0^{t_lo}
};

// Requires p_plus < n on the build range (otherwise the conjugate degenerates
// and an UnsupportedRegimeError is thrown).
HTable build_H(const YoungFunction& Y, int n, double t_lo = 1e-10, double t_hi = 1e8,
               int per_decade = 256);

struct SobolevConjugate {
    YoungFunction base;
    int n = 0;
    GrowthIndices base_indices; // estimated on the build range
    HTable H;
    YoungFunction An;          // A(H^{-1}(.)) as a log-value table with power tails
    GrowthIndices An_indices;  // estimated on the An table range
};

struct SobolevBuildOptions {
    double t_lo = 1e-10;
    double t_hi = 1e8;
    int per_decade = 256;
    int index_samples = 4096;
};

SobolevConjugate build_sobolev_conjugate(const YoungFunction& Y, int n,
                                         const SobolevBuildOptions& opt = {});

struct AnchoredBounds {
    bool holds = false;
    double C1 = 0.0, C2 = 0.0; // constants fitted at the low anchor of the range
    double worst_margin = 0.0; // most negative slack seen (>= -rel_tol when holds)
};

// C1 t^(n/(n-p-)) <= H^{-1}(t) <= C2 t^(n/(n-p+)) over t_range, constants
// anchored at the range's lower end.
AnchoredBounds check_H_bounds(const SobolevConjugate& sc, Interval t_range, int n_samples = 512,
                              double rel_tol = 1e-7);

// C1 t^(p-)* <= An(t) <= C2 t^(p+)* over t_range, with p* = np/(n-p).
AnchoredBounds check_An_power_bounds(const SobolevConjugate& sc, Interval t_range,
                                     int n_samples = 512, double rel_tol = 1e-7);

struct DoublingInheritance {
    bool holds = false;
    double delta0 = 0.0;   // 2^(1 - p_plus/n) - 1
    double C0 = 0.0;       // sampled constant for An((1+delta0) t) <= C0 An(t)
    double worst_H_margin = 0.0; // min of H(2t)/H(t) - (1+delta0)
};

// H(2t) >= 2^(1-p+/n) H(t) on the table, then the doubling constant of An at
// the induced delta0.
DoublingInheritance check_An_delta2(const SobolevConjugate& sc);

} // namespace orlicz
