#include "orlicz/grid.hpp"

#include "orlicz/errors.hpp"
#include "orlicz/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace orlicz {

Domain Domain::interval(double length, int n_cells) {
    if (!(length > 0.0)) throw DomainError("domain: need positive length");
    if (n_cells < 8) throw DomainError("domain: need at least 8 cells per axis");
    Domain d;
    d.dim = 1;
    d.extent = {length, 0.0};
    d.cells = {n_cells, 1};
    d.h = length / n_cells;
    return d;
}

Domain Domain::box(double lx, double ly, int nx, int ny) {
    if (!(lx > 0.0) || !(ly > 0.0)) throw DomainError("domain: need positive extents");
    if (nx < 8 || ny < 8) throw DomainError("domain: need at least 8 cells per axis");
    const double hx = lx / nx, hy = ly / ny;
    if (std::fabs(hx - hy) > 1e-12 * hx)
        throw DomainError("domain: grid must be square (lx/nx == ly/ny)");
    Domain d;
    d.dim = 2;
    d.extent = {lx, ly};
    d.cells = {nx, ny};
    d.h = hx;
    return d;
}

bool Domain::same_layout(const Domain& o) const {
    return dim == o.dim && cells == o.cells && std::fabs(h - o.h) <= 1e-12 * h;
}

GridFunction::GridFunction(const Domain& dom, double fill)
    : dom_(dom), v_(static_cast<size_t>(dom.node_count()), fill) {}

double GridFunction::max_abs() const {
    double m = 0.0;
    for (double x : v_) m = std::max(m, std::fabs(x));
    return m;
}

bool GridFunction::is_zero() const { return max_abs() == 0.0; }

void GridFunction::zero_boundary() {
    const int nx = dom_.nodes_x(), ny = dom_.nodes_y();
    if (dom_.dim == 1) {
        at(0) = 0.0;
        at(nx - 1) = 0.0;
        return;
    }
    for (int i = 0; i < nx; ++i) {
        at(i, 0) = 0.0;
        at(i, ny - 1) = 0.0;
    }
    for (int j = 0; j < ny; ++j) {
        at(0, j) = 0.0;
        at(nx - 1, j) = 0.0;
    }
}

double GridMeasure::total() const { return pairwise_sum(mass); }

std::vector<double> cell_values(const GridFunction& u) {
    const Domain& d = u.domain();
    std::vector<double> out(static_cast<size_t>(d.cell_count()));
    if (d.dim == 1) {
        for (int c = 0; c < d.cells[0]; ++c) out[static_cast<size_t>(c)] = 0.5 * (u.at(c) + u.at(c + 1));
        return out;
    }
    for (int cy = 0; cy < d.cells[1]; ++cy)
        for (int cx = 0; cx < d.cells[0]; ++cx)
            out[static_cast<size_t>(cy) * d.cells[0] + cx] =
                0.25 * (u.at(cx, cy) + u.at(cx + 1, cy) + u.at(cx, cy + 1) + u.at(cx + 1, cy + 1));
    return out;
}

std::vector<double> gradient_cell_values(const GridFunction& u) {
    const Domain& d = u.domain();
    std::vector<double> out(static_cast<size_t>(d.cell_count()));
    const double inv_h = 1.0 / d.h;
    if (d.dim == 1) {
        for (int c = 0; c < d.cells[0]; ++c)
            out[static_cast<size_t>(c)] = std::fabs(u.at(c + 1) - u.at(c)) * inv_h;
        return out;
    }
    for (int cy = 0; cy < d.cells[1]; ++cy)
        for (int cx = 0; cx < d.cells[0]; ++cx) {
            const double gx = (u.at(cx + 1, cy) - u.at(cx, cy)) * inv_h;
            const double gy = (u.at(cx, cy + 1) - u.at(cx, cy)) * inv_h;
            out[static_cast<size_t>(cy) * d.cells[0] + cx] = std::hypot(gx, gy);
        }
    return out;
}

std::vector<GridFunction> discrete_gradient(const GridFunction& u) {
    const Domain& d = u.domain();
    const int nx = d.nodes_x(), ny = d.nodes_y();
    const double inv_h = 1.0 / d.h;
    std::vector<GridFunction> g(static_cast<size_t>(d.dim), GridFunction(d));
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            if (i + 1 < nx) g[0].at(i, j) = (u.at(i + 1, j) - u.at(i, j)) * inv_h;
            if (d.dim == 2 && j + 1 < ny) g[1].at(i, j) = (u.at(i, j + 1) - u.at(i, j)) * inv_h;
        }
    return g;
}

double modular_cells(const YoungFunction& A, std::span<const double> cell_vals,
                     std::span<const double> weights) {
    if (cell_vals.size() != weights.size())
        throw DomainError("modular_cells: cell/weight count mismatch");
    std::vector<double> terms(cell_vals.size());
    for (size_t i = 0; i < cell_vals.size(); ++i) {
        const double z = std::fabs(cell_vals[i]);
        if (!std::isfinite(z)) throw DomainError("modular_cells: non-finite cell value");
        terms[i] = weights[i] == 0.0 ? 0.0 : A.value(z) * weights[i];
        if (!std::isfinite(terms[i])) throw RangeError("modular_cells: overflow");
    }
    return pairwise_sum(terms);
}

double modular_cells(const YoungFunction& A, std::span<const double> cell_vals,
                     double uniform_weight) {
    std::vector<double> w(cell_vals.size(), uniform_weight);
    return modular_cells(A, cell_vals, w);
}

double modular(const YoungFunction& A, const GridFunction& u) {
    return modular_cells(A, cell_values(u), u.domain().cell_volume());
}

double modular(const YoungFunction& A, const GridFunction& u, const GridMeasure& weight) {
    if (!weight.dom.same_layout(u.domain()))
        throw DomainError("modular: measure lives on a different grid");
    return modular_cells(A, cell_values(u), weight.mass);
}

namespace {

// Probe used inside the norm bisection: out-of-range or overflowing cells
// count as an infinite modular instead of an error.
double probe_modular(const YoungFunction& A, std::span<const double> vals,
                     std::span<const double> weights, double lambda) {
    std::vector<double> terms(vals.size());
    const double cap = A.t_max();
    for (size_t i = 0; i < vals.size(); ++i) {
        if (weights[i] == 0.0) {
            terms[i] = 0.0;
            continue;
        }
        const double z = std::fabs(vals[i]) / lambda;
        if (z > cap) return std::numeric_limits<double>::infinity();
        terms[i] = A.value(z) * weights[i];
        if (!std::isfinite(terms[i])) return std::numeric_limits<double>::infinity();
    }
    return pairwise_sum(terms);
}

} // namespace

double luxemburg_norm_cells(const YoungFunction& A, std::span<const double> cell_vals,
                            std::span<const double> weights, double rel_tol) {
    if (cell_vals.size() != weights.size())
        throw DomainError("luxemburg_norm_cells: cell/weight count mismatch");
    double vmax = 0.0, W = 0.0;
    for (size_t i = 0; i < cell_vals.size(); ++i) {
        if (!std::isfinite(cell_vals[i]) || !std::isfinite(weights[i]) || weights[i] < 0.0)
            throw DomainError("luxemburg_norm_cells: non-finite data or negative weight");
        if (weights[i] > 0.0) vmax = std::max(vmax, std::fabs(cell_vals[i]));
        W += weights[i];
    }
    if (vmax == 0.0 || W == 0.0) return 0.0;

    // Constant-function identity: A(vmax/lambda0) * W = 1 puts the modular at
    // or below 1, so lambda0 brackets from above.
    double hi = vmax / A.inverse(1.0 / W);
    for (int guard = 0; guard < 64 && probe_modular(A, cell_vals, weights, hi) > 1.0; ++guard)
        hi *= 2.0;
    double lo = hi * 1e-3;
    while (probe_modular(A, cell_vals, weights, lo) <= 1.0 && lo > hi * 1e-300) {
        hi = lo;
        lo *= 1e-3;
    }
    for (int it = 0; it < 200 && (hi - lo) > rel_tol * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (probe_modular(A, cell_vals, weights, mid) > 1.0 ? lo : hi) = mid;
    }
    return hi;
}

double luxemburg_norm(const YoungFunction& A, const GridFunction& u, double rel_tol) {
    std::vector<double> w(static_cast<size_t>(u.domain().cell_count()),
                          u.domain().cell_volume());
    return luxemburg_norm_cells(A, cell_values(u), w, rel_tol);
}

double luxemburg_norm(const YoungFunction& A, const GridFunction& u, const GridMeasure& weight,
                      double rel_tol) {
    if (!weight.dom.same_layout(u.domain()))
        throw DomainError("luxemburg_norm: measure lives on a different grid");
    return luxemburg_norm_cells(A, cell_values(u), weight.mass, rel_tol);
}

double gradient_norm(const YoungFunction& A, const GridFunction& u, double rel_tol) {
    std::vector<double> w(static_cast<size_t>(u.domain().cell_count()),
                          u.domain().cell_volume());
    return luxemburg_norm_cells(A, gradient_cell_values(u), w, rel_tol);
}

bool check_norm_modular_bounds(const YoungFunction& A, const GrowthIndices& idx,
                               const GridFunction& u, double rel_tol) {
    const double norm = luxemburg_norm(A, u);
    const double phi = modular(A, u);
    if (norm == 0.0) return phi == 0.0;
    const double lo = std::min(std::pow(norm, idx.p_minus), std::pow(norm, idx.p_plus));
    const double hi = std::max(std::pow(norm, idx.p_minus), std::pow(norm, idx.p_plus));
    return phi >= lo * (1.0 - rel_tol) - 1e-300 && phi <= hi * (1.0 + rel_tol) + 1e-300;
}

GridFunction make_bump(const Domain& dom, std::array<double, 2> center, double width,
                       double power) {
    if (!(width > 0.0) || !(power >= 1.0)) throw DomainError("make_bump: need width > 0, power >= 1");
    GridFunction u(dom);
    for (int j = 0; j < dom.nodes_y(); ++j)
        for (int i = 0; i < dom.nodes_x(); ++i) {
            const auto p = dom.node_pos(i, j);
            double r2 = (p[0] - center[0]) * (p[0] - center[0]);
            if (dom.dim == 2) r2 += (p[1] - center[1]) * (p[1] - center[1]);
            const double s = 1.0 - r2 / (width * width);
            u.at(i, j) = s > 0.0 ? std::pow(s, power) : 0.0;
        }
    return u;
}

namespace {

double bump_ratio(const YoungFunction& A, const YoungFunction& An, const Domain& dom,
                  std::array<double, 2> c, double w, double q) {
    GridFunction phi = make_bump(dom, c, w, q);
    phi.zero_boundary();
    if (phi.is_zero()) return std::numeric_limits<double>::infinity();
    const double num = gradient_norm(A, phi);
    const double den = luxemburg_norm(An, phi);
    if (!(den > 0.0)) return std::numeric_limits<double>::infinity();
    return num / den;
}

} // namespace

SobolevConstantEstimate estimate_sobolev_constant(const YoungFunction& A,
                                                  const YoungFunction& An, const Domain& dom,
                                                  const BumpFamilySpec& family) {
    std::vector<std::array<double, 2>> centers = family.centers;
    if (centers.empty())
        centers.push_back({0.5 * dom.extent[0], dom.dim == 2 ? 0.5 * dom.extent[1] : 0.0});
    const double min_ext = dom.dim == 2 ? std::min(dom.extent[0], dom.extent[1]) : dom.extent[0];
    std::vector<double> widths = family.widths;
    if (widths.empty())
        for (int k = 1; k <= 6; ++k) widths.push_back(min_ext / (1 << k));
    std::erase_if(widths, [&](double w) { return w < 3.0 * dom.h; });
    if (widths.empty() || centers.empty() || family.powers.empty())
        throw ConfigError("estimate_sobolev_constant: empty test family");

    SobolevConstantEstimate best;
    best.value = std::numeric_limits<double>::infinity();
    for (const auto& c : centers)
        for (double q : family.powers)
            for (double w : widths) {
                const double r = bump_ratio(A, An, dom, c, w, q);
                if (r < best.value) {
                    best.value = r;
                    best.best_center = c;
                    best.best_width = w;
                    best.best_power = q;
                }
            }
    if (!std::isfinite(best.value))
        throw ConfigError("estimate_sobolev_constant: family produced no usable bump");

    if (family.local_descent) {
        for (double step : {1.3, 1.12, 1.05}) {
            for (int it = 0; it < 8; ++it) {
                bool moved = false;
                for (double w : {best.best_width * step, best.best_width / step}) {
                    if (w < 3.0 * dom.h) continue;
                    const double r = bump_ratio(A, An, dom, best.best_center, w, best.best_power);
                    if (r < best.value) {
                        best.value = r;
                        best.best_width = w;
                        moved = true;
                    }
                }
                for (double q : {best.best_power + 0.25, best.best_power - 0.25}) {
                    if (q < 1.1) continue;
                    const double r = bump_ratio(A, An, dom, best.best_center, best.best_width, q);
                    if (r < best.value) {
                        best.value = r;
                        best.best_power = q;
                        moved = true;
                    }
                }
                if (!moved) break;
            }
        }
    }

    for (double w : widths)
        best.width_trace.emplace_back(
            w, bump_ratio(A, An, dom, best.best_center, w, best.best_power));
    return best;
}

} // namespace orlicz
