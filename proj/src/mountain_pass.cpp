#include "orlicz/mountain_pass.hpp"

#include "orlicz/errors.hpp"
#include "orlicz/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <optional>
#include <utility>
#include <vector>

namespace orlicz {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double perturbation_f(double t, double r) {
    if (t == 0.0) return 0.0;
    return std::copysign(std::pow(std::fabs(t), r - 1.0), t);
}

double perturbation_F(double t, double r) {
    if (t == 0.0) return 0.0;
    return std::pow(std::fabs(t), r) / r;
}

void validate_spec(const ProblemSpec& P) {
    if (!(P.r > 1.0)) throw DomainError("perturbation exponent r must exceed 1");
    if (!(P.gamma > 0.0)) throw DomainError("Ambrosetti-Rabinowitz constant must be positive");
    if (!(P.lambda >= 0.0)) throw DomainError("lambda must be nonnegative");
    if (P.critical_term && !P.S)
        throw ConfigError("critical term enabled without a Sobolev conjugate");
    if (P.dom.cell_count() < 1) throw DomainError("empty domain");
}

void check_layout(const ProblemSpec& P, const GridFunction& u) {
    if (!u.domain().same_layout(P.dom)) throw DomainError("grid function does not match the problem domain");
}

double dot_nodes(const GridFunction& a, const GridFunction& b) {
    auto va = a.values();
    auto vb = b.values();
    double s = 0.0;
    for (size_t i = 0; i < va.size(); ++i) s += va[i] * vb[i];
    return s;
}

double l2_nodes(const GridFunction& a) { return std::sqrt(dot_nodes(a, a)); }

GridFunction scaled(const GridFunction& u, double s) {
    GridFunction out = u;
    for (double& v : out.values()) v *= s;
    return out;
}

void axpy(GridFunction& y, double a, const GridFunction& x) {
    auto vy = y.values();
    auto vx = x.values();
    for (size_t i = 0; i < vy.size(); ++i) vy[i] += a * vx[i];
}

std::optional<double> try_eval(const ProblemSpec& P, const GridFunction& u) {
    try {
        return functional_eval(P, u);
    } catch (const RangeError&) {
        return std::nullopt;
    }
}

// y = (-Lap_h) x with zero Dirichlet boundary.
void laplace_apply(const Domain& dom, const GridFunction& x, GridFunction& y) {
    const int nx = dom.nodes_x();
    const int ny = dom.nodes_y();
    const double inv_h2 = 1.0 / (dom.h * dom.h);
    const bool two_d = dom.dim == 2;
    for (int j = 0; j < ny; ++j)
        for (int i = 0; i < nx; ++i) {
            bool interior = i > 0 && i < nx - 1 && (!two_d || (j > 0 && j < ny - 1));
            if (!interior) {
                y.at(i, j) = 0.0;
                continue;
            }
            double v = 2.0 * x.at(i, j) - x.at(i - 1, j) - x.at(i + 1, j);
            if (two_d) v += 2.0 * x.at(i, j) - x.at(i, j - 1) - x.at(i, j + 1);
            y.at(i, j) = v * inv_h2;
        }
}

// Per-cell diffusion weights a(|grad u|_eps)/|grad u|_eps frozen at u. For
// sublinear densities these blow up like eps^(p-2) where the gradient
// vanishes, which is exactly the stiffness the flux linearization carries, so
// a useful metric must carry the same weights.
std::vector<double> flux_weights(const ProblemSpec& P, const GridFunction& u) {
    const double eps = P.regularization();
    const double h = P.dom.h;
    if (P.dom.dim == 1) {
        const int cx = P.dom.cells[0];
        std::vector<double> w(cx);
        for (int c = 0; c < cx; ++c) {
            double g = (u.at(c + 1) - u.at(c)) / h;
            double geps = std::sqrt(g * g + eps * eps);
            w[c] = P.A.density(geps) / geps;
        }
        return w;
    }
    const int cx = P.dom.cells[0];
    const int cy = P.dom.cells[1];
    std::vector<double> w(static_cast<size_t>(cx) * cy);
    for (int j = 0; j < cy; ++j)
        for (int i = 0; i < cx; ++i) {
            double gx = (u.at(i + 1, j) - u.at(i, j)) / h;
            double gy = (u.at(i, j + 1) - u.at(i, j)) / h;
            double geps = std::sqrt(gx * gx + gy * gy + eps * eps);
            w[static_cast<size_t>(j) * cx + i] = P.A.density(geps) / geps;
        }
    return w;
}

// y = S x where S is the flux part of the functional Hessian with the cell
// weights frozen; symmetric positive definite on the Dirichlet subspace.
void weighted_apply(const Domain& dom, const std::vector<double>& w, const GridFunction& x,
                    GridFunction& y) {
    const double h = dom.h;
    for (double& t : y.values()) t = 0.0;
    if (dom.dim == 1) {
        const int cx = dom.cells[0];
        for (int c = 0; c < cx; ++c) {
            double f = w[c] * (x.at(c + 1) - x.at(c)) / (h * h);
            y.at(c) -= f;
            y.at(c + 1) += f;
        }
    } else {
        const int cx = dom.cells[0];
        const int cy = dom.cells[1];
        for (int j = 0; j < cy; ++j)
            for (int i = 0; i < cx; ++i) {
                double q = w[static_cast<size_t>(j) * cx + i] / (h * h);
                double gx = x.at(i + 1, j) - x.at(i, j);
                double gy = x.at(i, j + 1) - x.at(i, j);
                y.at(i + 1, j) += q * gx;
                y.at(i, j) -= q * (gx + gy);
                y.at(i, j + 1) += q * gy;
            }
    }
    y.zero_boundary();
}

// Jacobi-preconditioned CG for the frozen-weight operator.
GridFunction weighted_precondition(const Domain& dom, const std::vector<double>& w,
                                   const GridFunction& b) {
    const double h2 = dom.h * dom.h;
    GridFunction diag(dom);
    if (dom.dim == 1) {
        const int cx = dom.cells[0];
        for (int c = 0; c < cx; ++c) {
            diag.at(c) += w[c] / h2;
            diag.at(c + 1) += w[c] / h2;
        }
    } else {
        const int cx = dom.cells[0];
        const int cy = dom.cells[1];
        for (int j = 0; j < cy; ++j)
            for (int i = 0; i < cx; ++i) {
                double q = w[static_cast<size_t>(j) * cx + i] / h2;
                diag.at(i, j) += 2.0 * q;
                diag.at(i + 1, j) += q;
                diag.at(i, j + 1) += q;
            }
    }
    for (double& d : diag.values())
        if (!(d > 0.0)) d = 1.0;

    GridFunction x(dom);
    GridFunction rsd = b;
    rsd.zero_boundary();
    GridFunction z(dom);
    auto apply_jacobi = [&](const GridFunction& r, GridFunction& zz) {
        auto vr = r.values();
        auto vd = diag.values();
        auto vz = zz.values();
        for (size_t i = 0; i < vr.size(); ++i) vz[i] = vr[i] / vd[i];
    };
    apply_jacobi(rsd, z);
    double rz = dot_nodes(rsd, z);
    if (!(rz > 0.0)) return x;
    const double stop = rz * 1e-20;
    GridFunction p = z;
    GridFunction Ap(dom);
    const int max_iter = 4000;
    for (int it = 0; it < max_iter && rz > stop; ++it) {
        weighted_apply(dom, w, p, Ap);
        double pAp = dot_nodes(p, Ap);
        if (!(pAp > 0.0)) break;
        double alpha = rz / pAp;
        axpy(x, alpha, p);
        axpy(rsd, -alpha, Ap);
        apply_jacobi(rsd, z);
        double rz_new = dot_nodes(rsd, z);
        double beta = rz_new / rz;
        rz = rz_new;
        auto vp = p.values();
        auto vz = z.values();
        for (size_t i = 0; i < vp.size(); ++i) vp[i] = vz[i] + beta * vp[i];
    }
    return x;
}

// Conjugate-gradient solve of the Dirichlet grid Laplacian: descent directions
// are measured in the H^1 metric, which keeps the step count essentially
// independent of the mesh width.
GridFunction precondition(const Domain& dom, const GridFunction& b) {
    GridFunction x(dom);
    GridFunction rsd = b;
    rsd.zero_boundary();
    double rr = dot_nodes(rsd, rsd);
    if (!(rr > 0.0)) return x;
    const double stop = rr * 1e-16;
    GridFunction p = rsd;
    GridFunction Ap(dom);
    const int max_iter = std::min(4 * (dom.nodes_x() + dom.nodes_y()) + 100, 4000);
    for (int it = 0; it < max_iter && rr > stop; ++it) {
        laplace_apply(dom, p, Ap);
        double pAp = dot_nodes(p, Ap);
        if (!(pAp > 0.0)) break;
        double alpha = rr / pAp;
        axpy(x, alpha, p);
        axpy(rsd, -alpha, Ap);
        double rr_new = dot_nodes(rsd, rsd);
        double beta = rr_new / rr;
        rr = rr_new;
        auto vp = p.values();
        auto vr = rsd.values();
        for (size_t i = 0; i < vp.size(); ++i) vp[i] = vr[i] + beta * vp[i];
    }
    return x;
}

double density_slope(const YoungFunction& A, double t) {
    double dt = 1e-6 * t;
    if (!(dt > 0.0)) return 0.0;
    return (A.density(t + dt) - A.density(t - dt)) / (2.0 * dt);
}

// Exact linearization of the discrete gradient at u, assembled per cell. The
// flux block is the 2x2 tensor q_iso I + q_aniso g (x) g; the zero-order slope
// enters with a minus sign, which is where the saddle's unstable direction
// lives. Coefficients depend on u only, so the apply is exactly linear in v;
// a finite-difference product is not, and the Lanczos recurrence inside
// MINRES quietly falls apart on sublinear densities without this.
struct HessianStash {
    std::vector<double> q11, q12, q22, z;
};

HessianStash build_hessian(const ProblemSpec& P, const GridFunction& u) {
    const double eps = P.regularization();
    const double h = P.dom.h;
    const YoungFunction* An = P.critical_term ? &P.S->An : nullptr;

    auto zero_slope = [&](double v) {
        double av = std::fabs(v);
        double s;
        if (P.r >= 2.0)
            s = P.lambda * (P.r - 1.0) * (P.r == 2.0 ? 1.0 : std::pow(av, P.r - 2.0));
        else
            s = P.lambda * (P.r - 1.0) * std::pow(std::sqrt(v * v + eps * eps), P.r - 2.0);
        if (An && av > 0.0) {
            double veps = std::sqrt(v * v + eps * eps);
            double ad = An->density(av);
            s += density_slope(*An, av) * (av / veps) + ad * (eps * eps) / (veps * veps * veps);
        }
        return s;
    };

    HessianStash st;
    if (P.dom.dim == 1) {
        const int cx = P.dom.cells[0];
        st.q11.resize(cx);
        st.z.resize(cx);
        for (int c = 0; c < cx; ++c) {
            double g = (u.at(c + 1) - u.at(c)) / h;
            double geps = std::sqrt(g * g + eps * eps);
            double a = P.A.density(geps);
            double ap = density_slope(P.A, geps);
            st.q11[c] = (ap * g * g + (a / geps) * eps * eps) / (geps * geps);
            st.z[c] = zero_slope(0.5 * (u.at(c) + u.at(c + 1)));
        }
        return st;
    }
    const int cx = P.dom.cells[0];
    const int cy = P.dom.cells[1];
    const size_t n = static_cast<size_t>(cx) * cy;
    st.q11.resize(n);
    st.q12.resize(n);
    st.q22.resize(n);
    st.z.resize(n);
    for (int j = 0; j < cy; ++j)
        for (int i = 0; i < cx; ++i) {
            double u00 = u.at(i, j);
            double u10 = u.at(i + 1, j);
            double u01 = u.at(i, j + 1);
            double u11 = u.at(i + 1, j + 1);
            double gx = (u10 - u00) / h;
            double gy = (u01 - u00) / h;
            double geps = std::sqrt(gx * gx + gy * gy + eps * eps);
            double a = P.A.density(geps);
            double ap = density_slope(P.A, geps);
            double q_iso = a / geps;
            double q_aniso = (ap - q_iso) / (geps * geps);
            size_t c = static_cast<size_t>(j) * cx + i;
            st.q11[c] = q_iso + q_aniso * gx * gx;
            st.q12[c] = q_aniso * gx * gy;
            st.q22[c] = q_iso + q_aniso * gy * gy;
            st.z[c] = zero_slope(0.25 * (u00 + u10 + u01 + u11));
        }
    return st;
}

void hessian_apply(const Domain& dom, const HessianStash& st, const GridFunction& v,
                   GridFunction& y) {
    const double h = dom.h;
    for (double& t : y.values()) t = 0.0;
    if (dom.dim == 1) {
        const int cx = dom.cells[0];
        for (int c = 0; c < cx; ++c) {
            double f = st.q11[c] * (v.at(c + 1) - v.at(c)) / (h * h);
            y.at(c) -= f;
            y.at(c + 1) += f;
            double s = 0.25 * st.z[c] * (v.at(c) + v.at(c + 1));
            y.at(c) -= s;
            y.at(c + 1) -= s;
        }
    } else {
        const int cx = dom.cells[0];
        const int cy = dom.cells[1];
        for (int j = 0; j < cy; ++j)
            for (int i = 0; i < cx; ++i) {
                size_t c = static_cast<size_t>(j) * cx + i;
                double gvx = (v.at(i + 1, j) - v.at(i, j)) / h;
                double gvy = (v.at(i, j + 1) - v.at(i, j)) / h;
                double fx = (st.q11[c] * gvx + st.q12[c] * gvy) / h;
                double fy = (st.q12[c] * gvx + st.q22[c] * gvy) / h;
                y.at(i + 1, j) += fx;
                y.at(i, j) -= fx + fy;
                y.at(i, j + 1) += fy;
                double s = st.z[c] *
                           (v.at(i, j) + v.at(i + 1, j) + v.at(i, j + 1) + v.at(i + 1, j + 1)) /
                           16.0;
                y.at(i, j) -= s;
                y.at(i + 1, j) -= s;
                y.at(i, j + 1) -= s;
                y.at(i + 1, j + 1) -= s;
            }
    }
    y.zero_boundary();
}

// Solves (H + mu S) x = rhs by Paige-Saunders MINRES, where H is the exact
// Hessian at u and the SPD preconditioner S is the frozen-weight flux
// operator; mu > 0 damps the system toward that metric, which keeps the step
// useful when H has a soft or slightly indefinite mode near the saddle.
GridFunction minres_solve(const ProblemSpec& P, const HessianStash& st,
                          const std::vector<double>& wts, const GridFunction& rhs, double mu,
                          double rel_tol, int maxit) {
    GridFunction x(P.dom);
    GridFunction r1 = rhs;
    GridFunction y = weighted_precondition(P.dom, wts, r1);
    double beta1 = dot_nodes(r1, y);
    if (!(beta1 > 0.0)) return x;
    beta1 = std::sqrt(beta1);
    double oldb = 0.0, beta = beta1, dbar = 0.0, epsln = 0.0, phibar = beta1;
    double cs = -1.0, sn = 0.0, oldeps = 0.0;
    GridFunction w(P.dom), w2(P.dom), r2 = r1;
    GridFunction damp(P.dom);
    for (int itn = 1; itn <= maxit; ++itn) {
        GridFunction v = scaled(y, 1.0 / beta);
        hessian_apply(P.dom, st, v, damp);
        y = damp;
        if (mu > 0.0) {
            weighted_apply(P.dom, wts, v, damp);
            axpy(y, mu, damp);
        }
        if (itn >= 2) axpy(y, -beta / oldb, r1);
        double alfa = dot_nodes(v, y);
        axpy(y, -alfa / beta, r2);
        r1 = r2;
        r2 = y;
        y = weighted_precondition(P.dom, wts, r2);
        oldb = beta;
        double bb = dot_nodes(r2, y);
        if (!(bb > 0.0)) break;
        beta = std::sqrt(bb);
        oldeps = epsln;
        double delta = cs * dbar + sn * alfa;
        double gbar = sn * dbar - cs * alfa;
        epsln = sn * beta;
        dbar = -cs * beta;
        double gamma = std::max(std::sqrt(gbar * gbar + beta * beta), 1e-300);
        cs = gbar / gamma;
        sn = beta / gamma;
        double phi = cs * phibar;
        phibar = sn * phibar;
        GridFunction w1 = w2;
        w2 = w;
        w = v;
        axpy(w, -oldeps, w1);
        axpy(w, -delta, w2);
        for (double& t : w.values()) t /= gamma;
        axpy(x, phi, w);
        if (phibar <= rel_tol * beta1) break;
    }
    return x;
}

std::vector<GridFunction> redistribute(const std::vector<GridFunction>& path) {
    const int n = static_cast<int>(path.size());
    std::vector<double> arc(n, 0.0);
    for (int i = 1; i < n; ++i) {
        GridFunction d = path[i];
        axpy(d, -1.0, path[i - 1]);
        arc[i] = arc[i - 1] + l2_nodes(d);
    }
    if (!(arc[n - 1] > 0.0)) return path;
    std::vector<GridFunction> out;
    out.reserve(n);
    out.push_back(path.front());
    int seg = 1;
    for (int i = 1; i < n - 1; ++i) {
        double target = arc[n - 1] * i / (n - 1);
        while (seg < n - 1 && arc[seg] < target) ++seg;
        double span = arc[seg] - arc[seg - 1];
        double theta = span > 0.0 ? (target - arc[seg - 1]) / span : 0.0;
        GridFunction node = scaled(path[seg - 1], 1.0 - theta);
        axpy(node, theta, path[seg]);
        out.push_back(std::move(node));
    }
    out.push_back(path.back());
    return out;
}

} // namespace

double ProblemSpec::regularization() const {
    if (eps_reg > 0.0) return eps_reg;
    double ext = dom.extent[0];
    if (dom.dim == 2) ext = std::max(ext, dom.extent[1]);
    return 1e-8 * ext;
}

double functional_eval(const ProblemSpec& P, const GridFunction& u) {
    validate_spec(P);
    check_layout(P, u);
    const auto vc = cell_values(u);
    const auto gc = gradient_cell_values(u);
    const YoungFunction* An = P.critical_term ? &P.S->An : nullptr;
    std::vector<double> terms(vc.size());
    const double vol = P.dom.cell_volume();
    for (size_t c = 0; c < vc.size(); ++c) {
        double t = P.A.value(gc[c]);
        if (An) t -= An->value(std::fabs(vc[c]));
        t -= P.lambda * perturbation_F(vc[c], P.r);
        terms[c] = t * vol;
    }
    double e = pairwise_sum(terms);
    if (!std::isfinite(e)) throw RangeError("functional value overflowed");
    return e;
}

GridFunction functional_gradient(const ProblemSpec& P, const GridFunction& u) {
    validate_spec(P);
    check_layout(P, u);
    const double eps = P.regularization();
    const double h = P.dom.h;
    const YoungFunction* An = P.critical_term ? &P.S->An : nullptr;
    GridFunction R(P.dom);

    auto zero_order = [&](double v) {
        double s = P.lambda * perturbation_f(v, P.r);
        if (An && v != 0.0) {
            double veps = std::sqrt(v * v + eps * eps);
            s += An->density(std::fabs(v)) * (v / veps);
        }
        return s;
    };

    if (P.dom.dim == 1) {
        const int cx = P.dom.cells[0];
        for (int c = 0; c < cx; ++c) {
            double g = (u.at(c + 1) - u.at(c)) / h;
            double geps = std::sqrt(g * g + eps * eps);
            double flux = P.A.density(geps) * (g / geps) / h;
            R.at(c) -= flux;
            R.at(c + 1) += flux;
            double s = 0.5 * zero_order(0.5 * (u.at(c) + u.at(c + 1)));
            R.at(c) -= s;
            R.at(c + 1) -= s;
        }
    } else {
        const int cx = P.dom.cells[0];
        const int cy = P.dom.cells[1];
        for (int j = 0; j < cy; ++j)
            for (int i = 0; i < cx; ++i) {
                double u00 = u.at(i, j);
                double u10 = u.at(i + 1, j);
                double u01 = u.at(i, j + 1);
                double u11 = u.at(i + 1, j + 1);
                double gx = (u10 - u00) / h;
                double gy = (u01 - u00) / h;
                double geps = std::sqrt(gx * gx + gy * gy + eps * eps);
                double q = P.A.density(geps) / geps / h;
                R.at(i + 1, j) += q * gx;
                R.at(i, j) -= q * gx;
                R.at(i, j + 1) += q * gy;
                R.at(i, j) -= q * gy;
                double s = 0.25 * zero_order(0.25 * (u00 + u10 + u01 + u11));
                R.at(i, j) -= s;
                R.at(i + 1, j) -= s;
                R.at(i, j + 1) -= s;
                R.at(i + 1, j + 1) -= s;
            }
    }
    R.zero_boundary();
    return R;
}

double residual_norm(const ProblemSpec& P, const GridFunction& u) {
    return luxemburg_norm(P.A, functional_gradient(P, u));
}

bool check_AR(const ProblemSpec& P, std::span<const double> samples) {
    validate_spec(P);
    for (double t : samples) {
        double lhs = perturbation_f(t, P.r) * t;
        double rhs = P.gamma * perturbation_F(t, P.r);
        if (!(lhs <= rhs * (1.0 + 1e-12) + 1e-300)) return false;
    }
    return true;
}

GeometryReport verify_geometry(const ProblemSpec& P, std::span<const double> rho_grid) {
    validate_spec(P);
    if (rho_grid.empty()) throw DomainError("empty rho grid");
    for (double r : rho_grid)
        if (!(r > 0.0) || !std::isfinite(r)) throw DomainError("rho grid entries must be positive");

    const double ext_min =
        P.dom.dim == 2 ? std::min(P.dom.extent[0], P.dom.extent[1]) : P.dom.extent[0];
    std::array<double, 2> center{P.dom.extent[0] / 2.0, P.dom.dim == 2 ? P.dom.extent[1] / 2.0 : 0.0};

    std::vector<GridFunction> dirs;
    {
        GridFunction mode(P.dom);
        for (int j = 0; j < P.dom.nodes_y(); ++j)
            for (int i = 0; i < P.dom.nodes_x(); ++i) {
                double v = std::sin(M_PI * i * P.dom.h / P.dom.extent[0]);
                if (P.dom.dim == 2) v *= std::sin(M_PI * j * P.dom.h / P.dom.extent[1]);
                mode.at(i, j) = v;
            }
        mode.zero_boundary();
        dirs.push_back(std::move(mode));
    }
    for (double frac : {0.45, 0.3, 0.15}) {
        double w = frac * ext_min;
        if (w < 3.0 * P.dom.h) continue;
        GridFunction b = make_bump(P.dom, center, w, 2.0);
        b.zero_boundary();
        dirs.push_back(std::move(b));
    }
    for (auto it = dirs.begin(); it != dirs.end();) {
        double gn = gradient_norm(P.A, *it);
        if (gn > 0.0 && std::isfinite(gn)) {
            for (double& v : it->values()) v /= gn;
            ++it;
        } else {
            it = dirs.erase(it);
        }
    }
    if (dirs.empty()) throw DomainError("domain too coarse for any sphere direction");

    GeometryReport rep;
    rep.u0 = GridFunction(P.dom);
    double best_floor = -kInf;
    for (double rho : rho_grid) {
        double floor = kInf;
        for (const auto& d : dirs) {
            auto e = try_eval(P, scaled(d, rho));
            floor = std::min(floor, e ? *e : -kInf);
        }
        rep.rho_trace.emplace_back(rho, floor);
        if (floor > best_floor) {
            best_floor = floor;
            rep.rho = rho;
        }
    }
    rep.alpha = best_floor;
    if (!(best_floor > 0.0)) return rep; // holds stays false

    double best_t = kInf;
    const GridFunction* best_dir = nullptr;
    double best_energy = 0.0;
    for (const auto& d : dirs) {
        double t = rep.rho * 2.0;
        for (int step = 0; step < 120 && t < best_t; ++step, t *= 1.6) {
            auto e = try_eval(P, scaled(d, t));
            if (!e) break;
            if (*e < 0.0) {
                best_t = t;
                best_dir = &d;
                best_energy = *e;
                break;
            }
        }
    }
    if (!best_dir) return rep;
    rep.u0 = scaled(*best_dir, best_t);
    rep.u0_energy = best_energy;
    rep.holds = true;
    return rep;
}

MountainPassResult run_mountain_pass(const ProblemSpec& P, const MountainPassOptions& opt) {
    validate_spec(P);
    if (opt.path_nodes < 5) throw DomainError("path needs at least 5 nodes");
    if (!(opt.tolerance > 0.0)) throw DomainError("tolerance must be positive");
    if (opt.max_iterations < 1) throw DomainError("iteration budget must be positive");
    if (opt.descent_steps_per_iteration < 1) throw DomainError("descent steps must be positive");

    GeometryReport geom;
    if (opt.geometry) {
        geom = *opt.geometry;
    } else {
        auto grid = log_spaced(1e-3, 10.0, 29);
        geom = verify_geometry(P, grid);
    }

    MountainPassResult out;
    out.rho = geom.rho;
    out.alpha = geom.alpha;
    out.u_star = GridFunction(P.dom);
    out.residual = kInf;
    if (!geom.holds) return out;

    const int N = opt.path_nodes;
    std::vector<GridFunction> path;
    path.reserve(N);
    std::vector<double> E(N);
    for (int i = 0; i < N; ++i) {
        double s = 0.5 * (1.0 - std::cos(M_PI * i / (N - 1)));
        path.push_back(scaled(geom.u0, s));
        E[i] = functional_eval(P, path[i]);
    }

    auto top_index = [&] {
        return static_cast<int>(std::max_element(E.begin(), E.end()) - E.begin());
    };

    // One capped, preconditioned descent step on a path node.  The trust cap
    // (a fraction of the spacing to the nearest neighbor) stops any node from
    // tunneling through the ridge in one move, which would erode the bridge
    // the min-max level lives on.
    std::vector<double> sig(N, 1.0);
    auto relax_node = [&](int i) {
        GridFunction R = functional_gradient(P, path[i]);
        GridFunction w = precondition(P.dom, R);
        double dd = dot_nodes(R, w) * P.dom.cell_volume();
        if (!(dd > 0.0) || !std::isfinite(dd)) return false;
        GridFunction dl = path[i];
        axpy(dl, -1.0, path[i - 1]);
        GridFunction dr = path[i + 1];
        axpy(dr, -1.0, path[i]);
        double spacing = std::min(l2_nodes(dl), l2_nodes(dr));
        double wl2 = l2_nodes(w);
        double cap = wl2 > 0.0 && spacing > 0.0 ? 0.3 * spacing / wl2 : kInf;
        double sigma = std::min(sig[i] * 2.0, cap);
        while (sigma > 1e-20) {
            GridFunction trial = path[i];
            axpy(trial, -sigma, w);
            trial.zero_boundary();
            auto Et = try_eval(P, trial);
            if (Et && *Et <= E[i] - 1e-4 * sigma * dd) {
                path[i] = std::move(trial);
                E[i] = *Et;
                sig[i] = sigma;
                return true;
            }
            sigma *= 0.5;
        }
        sig[i] = std::max(sig[i] * 0.5, 1e-18);
        return false;
    };

    double sigma_mem = 1.0;
    int total = 0;
    bool converged = false;

    // The min-max level sits at or above the certified sphere floor, so a
    // sampled path maximum sinking well below it signals that interpolation
    // is cutting under the ridge rather than converging; the best-certified
    // state is kept for the polish phase.
    std::vector<GridFunction> path_best = path;
    std::vector<double> E_best = E;
    double best_score = kInf;

    const int string_cap = std::clamp(opt.max_iterations / 4, 30, 300);
    double prev_max = kInf;
    int stable = 0;
    while (total < string_cap) {
        int k = top_index();
        if (k == 0 || k == N - 1) break;
        for (int i = 1; i < N - 1; ++i) {
            int steps = i == k ? opt.descent_steps_per_iteration : 1;
            for (int s = 0; s < steps; ++s)
                if (!relax_node(i)) break;
        }
        {
            auto cand = redistribute(path);
            std::vector<double> Ec(N);
            bool usable = true;
            for (int i = 0; i < N && usable; ++i) {
                auto Et = try_eval(P, cand[i]);
                if (Et)
                    Ec[i] = *Et;
                else
                    usable = false;
            }
            if (usable) {
                path.swap(cand);
                E.swap(Ec);
            }
        }
        int kk = top_index();
        double res_now = luxemburg_norm(P.A, functional_gradient(P, path[kk]));
        ++total;
        out.string_iterations = total;
        out.trace.emplace_back(E[kk], res_now);
        if (E[kk] >= 0.9 * geom.alpha && res_now < best_score) {
            best_score = res_now;
            path_best = path;
            E_best = E;
        }
        if (res_now < opt.tolerance && E[kk] >= 0.9 * geom.alpha) {
            converged = true;
            break;
        }
        if (E[kk] < 0.5 * geom.alpha) break;
        if (std::fabs(E[kk] - prev_max) <= 1e-4 * (1.0 + std::fabs(E[kk])))
            ++stable;
        else
            stable = 0;
        prev_max = E[kk];
        if (stable >= 5) break;
    }
    path = std::move(path_best);
    E = std::move(E_best);

    int k = top_index();
    GridFunction u = path[k];
    if (!converged) {
        GridFunction tau = path[std::min(k + 1, N - 1)];
        axpy(tau, -1.0, path[std::max(k - 1, 0)]);
        double tn = l2_nodes(tau);
        if (tn > 0.0)
            for (double& v : tau.values()) v /= tn;
        GridFunction R = functional_gradient(P, u);
        double rl2 = l2_nodes(R);
        bool newton = false;
        while (total < opt.max_iterations) {
            double res_now = luxemburg_norm(P.A, R);
            ++total;
            out.trace.emplace_back(functional_eval(P, u), res_now);
            if (res_now < opt.tolerance) {
                converged = true;
                break;
            }
            if (res_now < 1e3 * opt.tolerance) {
                newton = true;
                break;
            }
            if (!(rl2 > 0.0)) break;
            GridFunction w = precondition(P.dom, R);
            double wt = tn > 0.0 ? dot_nodes(w, tau) : 0.0;
            GridFunction d = w;
            if (tn > 0.0) axpy(d, -2.0 * wt, tau);
            double sigma = sigma_mem * 1.5;
            bool accepted = false;
            while (sigma > 1e-20) {
                GridFunction trial = u;
                axpy(trial, -sigma, d);
                trial.zero_boundary();
                bool fine = true;
                GridFunction Rt;
                try {
                    Rt = functional_gradient(P, trial);
                } catch (const RangeError&) {
                    fine = false;
                }
                if (fine) {
                    double r2 = l2_nodes(Rt);
                    if (r2 < rl2) {
                        u = std::move(trial);
                        R = std::move(Rt);
                        rl2 = r2;
                        sigma_mem = sigma;
                        accepted = true;
                        break;
                    }
                }
                sigma *= 0.5;
            }
            if (!accepted) {
                sigma_mem *= 0.5;
                if (sigma_mem < 1e-18) {
                    newton = true;
                    break;
                }
            }
        }
        // Newton polish on the stationarity system: the tangent reflection
        // cannot resolve the last digits when the unstable subspace drifts,
        // while a Newton step needs no index assumption at all.
        if (!converged && newton) {
            const double mu_seed = 1e-3;
            const double mu_cap = 1e8;
            double mu = 0.0;
            const double step_cap = 10.0 * (1.0 + l2_nodes(u));
            while (total < opt.max_iterations) {
                double res_now = luxemburg_norm(P.A, R);
                ++total;
                out.trace.emplace_back(functional_eval(P, u), res_now);
                if (res_now < opt.tolerance) {
                    converged = true;
                    break;
                }
                GridFunction rhs = scaled(R, -1.0);
                std::vector<double> wts = flux_weights(P, u);
                HessianStash st = build_hessian(P, u);
                GridFunction step = minres_solve(P, st, wts, rhs, mu, 1e-2, 200);
                double sl2 = l2_nodes(step);
                bool accepted = false;
                if (sl2 > 0.0) {
                    if (sl2 > step_cap) {
                        for (double& t : step.values()) t *= step_cap / sl2;
                    }
                    rl2 = l2_nodes(R);
                    double theta = 1.0;
                    for (int half = 0; half < 9 && !accepted; ++half, theta *= 0.5) {
                        GridFunction trial = u;
                        axpy(trial, theta, step);
                        trial.zero_boundary();
                        bool fine = true;
                        GridFunction Rt;
                        try {
                            Rt = functional_gradient(P, trial);
                        } catch (const RangeError&) {
                            fine = false;
                        }
                        if (fine && l2_nodes(Rt) < rl2 * (1.0 - 1e-4)) {
                            u = std::move(trial);
                            R = std::move(Rt);
                            accepted = true;
                        }
                    }
                }
                if (accepted) {
                    mu *= 0.25;
                    if (mu < 1e-12) mu = 0.0;
                } else {
                    mu = mu == 0.0 ? mu_seed : mu * 10.0;
                    if (mu > mu_cap) break;
                }
            }
        }
    }

    out.u_star = u;
    out.residual = luxemburg_norm(P.A, functional_gradient(P, u));
    out.converged = out.residual < opt.tolerance;
    out.c_level = functional_eval(P, u);
    out.nontrivial = luxemburg_norm(P.A, u) > 1e3 * opt.tolerance;
    return out;
}

std::vector<SweepEntry> lambda_sweep(ProblemSpec P, std::span<const double> lambdas,
                                     const MountainPassOptions& opt) {
    if (lambdas.empty()) throw DomainError("empty lambda list");
    for (size_t i = 0; i < lambdas.size(); ++i) {
        if (!(lambdas[i] > 0.0)) throw DomainError("lambda values must be positive");
        if (i > 0 && !(lambdas[i] > lambdas[i - 1]))
            throw DomainError("lambda list must be strictly increasing");
    }
    std::vector<SweepEntry> out;
    out.reserve(lambdas.size());
    for (double lam : lambdas) {
        P.lambda = lam;
        SweepEntry e;
        e.lambda = lam;
        try {
            auto r = run_mountain_pass(P, opt);
            e.c_level = r.c_level;
            e.nontrivial = r.nontrivial;
            e.converged = r.converged;
        } catch (const std::runtime_error&) {
            e.c_level = std::numeric_limits<double>::quiet_NaN();
        }
        out.push_back(e);
    }
    return out;
}

} // namespace orlicz
