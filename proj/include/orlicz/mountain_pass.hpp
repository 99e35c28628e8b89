#pragma once

#include "orlicz/grid.hpp"
#include "orlicz/sobolev.hpp"
#include "orlicz/young.hpp"

#include <optional>
#include <span>
#include <vector>

namespace orlicz {

// E_lambda(u) = int A(|grad u|) - An(|u|) - lambda F(u) dx with
// F(t) = |t|^r / r (so dF = |t|^(r-2) t) on a zero-boundary grid.
// The critical An term can be switched off for subcritical studies.
struct ProblemSpec {
    YoungFunction A = YoungFunction::power(2.0);
    GrowthIndices idx;
    std::optional<SobolevConjugate> S; // required when critical_term
    bool critical_term = true;
    double r = 3.0;      // superlinearity exponent of the perturbation
    double gamma = 3.0;  // Ambrosetti-Rabinowitz constant, p+ < gamma
    double lambda = 1.0;
    Domain dom;
    double eps_reg = 0.0; // 0 = pick 1e-8 * domain extent automatically

    double regularization() const;
    YoungFunction perturbation_bound() const { return YoungFunction::power(r, 1.0 / r); }
};

double functional_eval(const ProblemSpec& P, const GridFunction& u);

// Node field R with R[ij] = dE/du[ij] / h^d on interior nodes, 0 on the
// boundary layer; the |.|_eps regularization tames the a(t)/t quotient where
// the gradient vanishes.  <R, v> h^d matches directional finite differences
// of functional_eval to O(eps_reg + h^2).
GridFunction functional_gradient(const ProblemSpec& P, const GridFunction& u);

// ||functional_gradient||_A, the solver's convergence certificate.
double residual_norm(const ProblemSpec& P, const GridFunction& u);

// t f(t) <= gamma F(t) on the samples (equality for pure powers with
// gamma = r).
bool check_AR(const ProblemSpec& P, std::span<const double> samples);

struct GeometryReport {
    bool holds = false;
    double rho = 0.0;   // sphere radius in ||grad . ||_A
    double alpha = 0.0; // min energy over the sampled sphere directions
    GridFunction u0;    // beyond-the-ridge anchor with E(u0) < 0
    double u0_energy = 0.0;
    std::vector<std::pair<double, double>> rho_trace; // (rho, sphere min)
};

// Samples sphere directions (normalized bumps and the low product mode),
// scans the rho grid for a positive floor, then ray-marches the best
// direction until the energy drops below zero.
GeometryReport verify_geometry(const ProblemSpec& P, std::span<const double> rho_grid);

struct MountainPassResult {
    GridFunction u_star;
    double c_level = 0.0;
    double residual = 0.0;
    bool converged = false;
    bool nontrivial = false;
    double rho = 0.0, alpha = 0.0;
    int string_iterations = 0; // trace prefix with the descent monotonicity guarantee
    std::vector<std::pair<double, double>> trace; // (max path energy, residual at max node)
};

struct MountainPassOptions {
    int path_nodes = 17;
    int max_iterations = 20000;
    double tolerance = 1e-6;
    int descent_steps_per_iteration = 2;
    std::optional<GeometryReport> geometry; // reuse a certified geometry
};

// Min-max over discrete paths 0 -> u0: every interior node takes capped
// backtracking descent steps (the highest-energy node gets the configured
// extra steps), the path is re-equidistributed by arc length, and once the
// path maximum settles the top node is polished transverse to the path
// tangent until the residual certificate is met.  Each accepted line-search
// step strictly decreases that node's energy; the recorded path maximum can
// wobble at interpolation scale because the sampled maximum approaches the
// pass level from below.
MountainPassResult run_mountain_pass(const ProblemSpec& P, const MountainPassOptions& opt = {});

struct SweepEntry {
    double lambda = 0.0;
    double c_level = 0.0;
    bool nontrivial = false;
    bool converged = false;
};

std::vector<SweepEntry> lambda_sweep(ProblemSpec P, std::span<const double> lambdas,
                                     const MountainPassOptions& opt = {});

} // namespace orlicz
