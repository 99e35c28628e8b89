#pragma once

#include "orlicz/sobolev.hpp"
#include "orlicz/young.hpp"

#include <array>
#include <span>
#include <string>
#include <vector>

namespace orlicz {

// Axis-aligned box with a uniform square grid.  Values live on nodes;
// integrals run over cells with the node average as the cell value.
// Functions are extended by zero outside the box.
struct Domain {
    int dim = 1;                      // 1 or 2
    std::array<double, 2> extent{1.0, 1.0};
    std::array<int, 2> cells{8, 1};   // cells[1] = 1 in 1D
    double h = 0.125;

    static Domain interval(double length, int n_cells);
    static Domain box(double lx, double ly, int nx, int ny);

    int nodes_x() const { return cells[0] + 1; }
    int nodes_y() const { return dim == 2 ? cells[1] + 1 : 1; }
    int node_count() const { return nodes_x() * nodes_y(); }
    int cell_count() const { return cells[0] * (dim == 2 ? cells[1] : 1); }
    double cell_volume() const { return dim == 2 ? h * h : h; }
    double volume() const { return cell_volume() * cell_count(); }
    std::array<double, 2> node_pos(int i, int j) const { return {i * h, j * h}; }
    bool same_layout(const Domain& o) const;
};

class GridFunction {
  public:
    GridFunction() = default;
    explicit GridFunction(const Domain& dom, double fill = 0.0);

    const Domain& domain() const { return dom_; }
    double& at(int i, int j = 0) { return v_[idx(i, j)]; }
    double at(int i, int j = 0) const { return v_[idx(i, j)]; }
    std::span<const double> values() const { return v_; }
    std::span<double> values() { return v_; }
    int size() const { return static_cast<int>(v_.size()); }

    double max_abs() const;
    bool is_zero() const;
    void zero_boundary(); // clamps the outermost node layer to 0

  private:
    int idx(int i, int j) const { return j * dom_.nodes_x() + i; }
    Domain dom_;
    std::vector<double> v_;
};

struct GridMeasure {
    Domain dom;
    std::vector<double> mass; // one entry per cell, >= 0
    double total() const;
};

// Cell values of u (node average per cell), ordering j-major like the cells.
std::vector<double> cell_values(const GridFunction& u);

// Cell values of |grad u| under the forward-difference convention: the cell
// owns the differences taken from its low corner.  For A(t) = t^2 the induced
// energy gradient is the standard 5-point Laplacian.
std::vector<double> gradient_cell_values(const GridFunction& u);

// Componentwise forward differences as node fields (zero extension past the
// top node layer).  Component k differentiates along axis k.
std::vector<GridFunction> discrete_gradient(const GridFunction& u);

// sum_cells A(|value_c|) * weight_c, pairwise-accumulated.
double modular_cells(const YoungFunction& A, std::span<const double> cell_vals,
                     std::span<const double> weights);
double modular_cells(const YoungFunction& A, std::span<const double> cell_vals,
                     double uniform_weight);

// Phi_{A,Omega}(u) with Lebesgue cell weights.
double modular(const YoungFunction& A, const GridFunction& u);
double modular(const YoungFunction& A, const GridFunction& u, const GridMeasure& weight);

// Luxemburg norm inf{lambda : Phi(u/lambda) <= 1} by bisection; the bracket
// is seeded from the constant-function identity and expanded geometrically
// until it straddles 1.  Returns 0 for u = 0 (or zero total weight).
double luxemburg_norm_cells(const YoungFunction& A, std::span<const double> cell_vals,
                            std::span<const double> weights, double rel_tol = 1e-12);
double luxemburg_norm(const YoungFunction& A, const GridFunction& u, double rel_tol = 1e-12);
double luxemburg_norm(const YoungFunction& A, const GridFunction& u, const GridMeasure& weight,
                      double rel_tol = 1e-12);

// ||grad u||_A via the cell-based gradient magnitude.
double gradient_norm(const YoungFunction& A, const GridFunction& u, double rel_tol = 1e-12);

// min(||u||^p-, ||u||^p+) <= Phi(u) <= max(||u||^p-, ||u||^p+).
bool check_norm_modular_bounds(const YoungFunction& A, const GrowthIndices& idx,
                               const GridFunction& u, double rel_tol = 1e-8);

// ((1 - |x-c|^2/w^2)_+)^q scaled so the grid sees a smooth compact bump.
GridFunction make_bump(const Domain& dom, std::array<double, 2> center, double width,
                       double power);

struct BumpFamilySpec {
    std::vector<std::array<double, 2>> centers; // empty = domain center
    std::vector<double> widths;                 // empty = {1/2 .. 1/64} of min extent
    std::vector<double> powers{1.5, 2.0, 3.0};
    bool local_descent = true;
};

struct SobolevConstantEstimate {
    double value = 0.0;  // min of ||grad phi||_A / ||phi||_An over the family
    bool is_upper_bound = true; // always: a feasible family only shrinks the inf
    std::array<double, 2> best_center{0.0, 0.0};
    double best_width = 0.0;
    double best_power = 0.0;
    std::vector<std::pair<double, double>> width_trace; // (width, ratio) at best center/power
};

SobolevConstantEstimate estimate_sobolev_constant(const YoungFunction& A,
                                                  const YoungFunction& An, const Domain& dom,
                                                  const BumpFamilySpec& family = {});

inline SobolevConstantEstimate estimate_sobolev_constant(const SobolevConjugate& sc,
                                                         const Domain& dom,
                                                         const BumpFamilySpec& family = {}) {
    return estimate_sobolev_constant(sc.base, sc.An, dom, family);
}

} // namespace orlicz
