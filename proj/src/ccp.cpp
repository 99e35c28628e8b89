#include "orlicz/ccp.hpp"

#include "orlicz/errors.hpp"
#include "orlicz/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace orlicz {

namespace {

// Nonzero cell values with a uniform weight, enough to evaluate modulars of
// scaled copies without touching the empty part of the grid.
struct Support {
    std::vector<double> vals;
    double weight = 0.0;

    double modular_scaled(const YoungFunction& A, double s) const {
        std::vector<double> terms(vals.size());
        for (size_t i = 0; i < vals.size(); ++i) terms[i] = A.value(s * vals[i]) * weight;
        return pairwise_sum(terms);
    }
};

Support gather_support(const GridFunction& u) {
    Support sup;
    sup.weight = u.domain().cell_volume();
    for (double v : cell_values(u))
        if (v != 0.0) sup.vals.push_back(std::fabs(v));
    return sup;
}

double solve_mass_scale(const YoungFunction& An, const Support& sup, double bound) {
    double lo = 1.0, hi = 1.0;
    while (sup.modular_scaled(An, hi) < bound) {
        hi *= 2.0;
        if (hi > 1e290) throw RangeError("bubble normalization: scale diverged");
    }
    while (sup.modular_scaled(An, lo) > bound) {
        lo *= 0.5;
        if (lo < 1e-290) throw RangeError("bubble normalization: scale vanished");
    }
    for (int it = 0; it < 200 && (hi - lo) > 1e-13 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        (sup.modular_scaled(An, mid) < bound ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

} // namespace

std::vector<GridFunction> make_bubbles(const Domain& dom, const YoungFunction& A,
                                       const YoungFunction& An, const BubbleSpec& spec) {
    if (spec.scales.empty()) throw DomainError("make_bubbles: no scales given");
    if (!(spec.bound > 0.0)) throw DomainError("make_bubbles: need positive bound");
    std::vector<GridFunction> out;
    out.reserve(spec.scales.size());
    for (double eps : spec.scales) {
        if (!(eps >= 4.0 * dom.h - 1e-12))
            throw DomainError("make_bubbles: scale under-resolved (need eps >= 4h)");
        GridFunction P = make_bump(dom, spec.center, eps, spec.profile_power);
        P.zero_boundary();
        if (P.is_zero()) throw DomainError("make_bubbles: bubble misses the grid");

        double s;
        if (spec.normalization == BubbleSpec::Normalization::GradientABounded) {
            const double gn = gradient_norm(A, P);
            if (!(gn > 0.0)) throw DomainError("make_bubbles: flat bubble");
            s = spec.bound / gn;
        } else {
            s = solve_mass_scale(An, gather_support(P), spec.bound);
        }
        for (double& v : P.values()) v *= s;
        out.push_back(std::move(P));
    }
    return out;
}

std::pair<GridMeasure, GridMeasure> measure_pair(const YoungFunction& A, const YoungFunction& An,
                                                 const GridFunction& u) {
    const Domain& dom = u.domain();
    const double w = dom.cell_volume();
    GridMeasure nu{dom, {}};
    GridMeasure mu{dom, {}};
    nu.mass.reserve(static_cast<size_t>(dom.cell_count()));
    mu.mass.reserve(static_cast<size_t>(dom.cell_count()));
    for (double v : cell_values(u)) nu.mass.push_back(An.value(std::fabs(v)) * w);
    for (double g : gradient_cell_values(u)) mu.mass.push_back(A.value(g) * w);
    return {std::move(nu), std::move(mu)};
}

AtomReport detect_atoms(const GridMeasure& nu, const GridMeasure& mu, double delta) {
    if (!(delta > 0.0)) throw DomainError("detect_atoms: need delta > 0");
    if (!nu.dom.same_layout(mu.dom)) throw DomainError("detect_atoms: measures on different grids");
    const Domain& dom = nu.dom;
    const int ncx = dom.cells[0];
    const int ncy = dom.dim == 2 ? dom.cells[1] : 1;
    const auto cell_id = [&](int cx, int cy) { return cy * ncx + cx; };

    AtomReport rep;
    rep.delta_threshold = delta;
    rep.total_nu = nu.total();
    rep.neighborhood_cells = 3;

    std::vector<int> peaks;
    for (int cy = 0; cy < ncy; ++cy)
        for (int cx = 0; cx < ncx; ++cx) {
            const double m = nu.mass[static_cast<size_t>(cell_id(cx, cy))];
            if (m <= 0.0) continue;
            bool is_max = true;
            for (int dy = -1; dy <= 1 && is_max; ++dy)
                for (int dx = -1; dx <= 1; ++dx) {
                    if (dx == 0 && dy == 0) continue;
                    const int x = cx + dx, y = cy + dy;
                    if (x < 0 || x >= ncx || y < 0 || y >= ncy) continue;
                    if (nu.mass[static_cast<size_t>(cell_id(x, y))] > m) {
                        is_max = false;
                        break;
                    }
                }
            if (is_max) peaks.push_back(cell_id(cx, cy));
        }
    std::sort(peaks.begin(), peaks.end(), [&](int a, int b) {
        const double ma = nu.mass[static_cast<size_t>(a)], mb = nu.mass[static_cast<size_t>(b)];
        return ma != mb ? ma > mb : a < b;
    });

    std::vector<char> claimed(nu.mass.size(), 0);
    double atom_sum = 0.0;
    for (int p : peaks) {
        const int px = p % ncx, py = p / ncx;
        if (claimed[static_cast<size_t>(p)]) continue;
        bool near_accepted = false;
        for (const Atom& a : rep.atoms)
            if (std::max(std::abs(px - a.cell[0]), std::abs(py - a.cell[1])) < 2)
                near_accepted = true;
        if (near_accepted) continue;

        std::vector<int> grabbed;
        double nu_i = 0.0, mu_i = 0.0;
        for (int dy = -3; dy <= 3; ++dy)
            for (int dx = -3; dx <= 3; ++dx) {
                const int x = px + dx, y = py + dy;
                if (x < 0 || x >= ncx || y < 0 || (dom.dim == 2 ? y >= ncy : y != 0)) continue;
                const int c = cell_id(x, y);
                if (claimed[static_cast<size_t>(c)]) continue;
                grabbed.push_back(c);
                nu_i += nu.mass[static_cast<size_t>(c)];
                mu_i += mu.mass[static_cast<size_t>(c)];
            }
        if (nu_i < delta) continue; // leave the cells for later peaks
        for (int c : grabbed) claimed[static_cast<size_t>(c)] = 1;
        Atom a;
        a.cell = {px, py};
        a.x = {(px + 0.5) * dom.h, dom.dim == 2 ? (py + 0.5) * dom.h : 0.0};
        a.nu_mass = nu_i;
        a.mu_mass = mu_i;
        rep.atoms.push_back(a);
        atom_sum += nu_i;
    }
    rep.residual_mass = rep.total_nu - atom_sum;
    return rep;
}

ReverseHolderResult verify_reverse_holder(double S_est, const MatuszewskaProfile& Mn,
                                          const GrowthIndices& base_idx, const GridFunction& phi,
                                          const GridMeasure& nu, const GridMeasure& mu,
                                          double safety) {
    if (!(safety > 0.0) || safety > 1.0)
        throw DomainError("verify_reverse_holder: safety must lie in (0, 1]");
    ReverseHolderResult res;
    const YoungFunction MnY = Mn.as_young_function();
    const YoungFunction Ainf = a_infinity(base_idx);
    const double nu_norm = luxemburg_norm(MnY, phi, nu);
    res.lhs = safety * S_est * nu_norm;
    res.rhs = luxemburg_norm(Ainf, phi, mu);
    if (nu_norm == 0.0) {
        res.vacuous = true;
        res.holds = true;
        return res;
    }
    res.holds = res.lhs <= res.rhs * (1.0 + 1e-12);
    return res;
}

std::vector<AtomRelationResult> verify_atom_relation(double S_est, const MatuszewskaProfile& Mn,
                                                     const GrowthIndices& base_idx,
                                                     const AtomReport& atoms, double safety) {
    if (atoms.atoms.empty()) throw DomainError("verify_atom_relation: no atoms in report");
    const YoungFunction MnY = Mn.as_young_function();
    std::vector<AtomRelationResult> out;
    out.reserve(atoms.atoms.size());
    for (const Atom& a : atoms.atoms) {
        AtomRelationResult r;
        if (!(a.nu_mass > 0.0) || !(a.mu_mass > 0.0)) {
            r.skipped = true;
            r.holds = true;
            out.push_back(r);
            continue;
        }
        r.lhs = safety * S_est / MnY.inverse(1.0 / a.nu_mass);
        r.rhs = 1.0 / a_infinity_inverse(base_idx, 1.0 / a.mu_mass);
        r.holds = r.lhs <= r.rhs * (1.0 + 1e-12);
        out.push_back(r);
    }
    return out;
}

std::vector<double> brezis_lieb_residual(const YoungFunction& B,
                                         std::span<const GridFunction> f_k, const GridFunction& f,
                                         const GridFunction& phi) {
    const Domain& dom = f.domain();
    if (!phi.domain().same_layout(dom))
        throw DomainError("brezis_lieb_residual: phi lives on a different grid");
    const auto fc = cell_values(f);
    const auto pc = cell_values(phi);
    const double w = dom.cell_volume();

    std::vector<double> out;
    out.reserve(f_k.size());
    for (const GridFunction& fk : f_k) {
        if (!fk.domain().same_layout(dom))
            throw DomainError("brezis_lieb_residual: member lives on a different grid");
        const auto kc = cell_values(fk);
        std::vector<double> terms(kc.size());
        for (size_t c = 0; c < kc.size(); ++c)
            terms[c] = (B.value(std::fabs(kc[c])) - B.value(std::fabs(kc[c] - fc[c])) -
                        B.value(std::fabs(fc[c]))) *
                       pc[c] * w;
        out.push_back(std::fabs(pairwise_sum(terms)));
    }
    return out;
}

} // namespace orlicz
