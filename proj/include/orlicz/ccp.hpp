#pragma once

#include "orlicz/grid.hpp"
#include "orlicz/matuszewska.hpp"
#include "orlicz/sobolev.hpp"
#include "orlicz/young.hpp"

#include <array>
#include <span>
#include <vector>

namespace orlicz {

// Concentrating family u_k(x) = s_k P((x - x0)/eps_k) with the smooth bump
// profile P(y) = ((1 - |y|^2)_+)^profile_power.  The scaling s_k is solved per
// member so that either ||grad u_k||_A = bound or Phi_An(u_k) = bound.
struct BubbleSpec {
    std::array<double, 2> center{0.5, 0.5};
    std::vector<double> scales; // eps_k, each >= 4h for resolvability
    double profile_power = 3.0;
    enum class Normalization { GradientABounded, AnMassOne } normalization =
        Normalization::AnMassOne;
    double bound = 1.0;
};

std::vector<GridFunction> make_bubbles(const Domain& dom, const YoungFunction& A,
                                       const YoungFunction& An, const BubbleSpec& spec);

// nu = An(|u|) dx and mu = A(|grad u|) dx as cell measures.
std::pair<GridMeasure, GridMeasure> measure_pair(const YoungFunction& A,
                                                 const YoungFunction& An,
                                                 const GridFunction& u);

struct Atom {
    std::array<int, 2> cell{0, 0};     // peak cell
    std::array<double, 2> x{0.0, 0.0}; // peak cell center
    double nu_mass = 0.0;              // aggregated over the neighborhood
    double mu_mass = 0.0;
};

struct AtomReport {
    std::vector<Atom> atoms;
    double delta_threshold = 0.0;
    double total_nu = 0.0;
    double residual_mass = 0.0; // total_nu - sum of atom nu masses, same-sum arithmetic
    int neighborhood_cells = 3;
};

// Greedy peak extraction: repeatedly take the largest unclaimed local nu
// maximum, absorb its +-3 cell neighborhood (cells claimed at most once), keep
// it when the aggregated nu mass reaches delta.  Peaks closer than 2 cells to
// an accepted atom are skipped.
AtomReport detect_atoms(const GridMeasure& nu, const GridMeasure& mu, double delta);

struct ReverseHolderResult {
    bool holds = false;
    bool vacuous = false; // zero nu mass against phi
    double lhs = 0.0;     // safety * S_est * ||phi||_{Mn, nu}
    double rhs = 0.0;     // ||phi||_{Ainf, mu}
};

// safety * S_est * ||phi||_{Mn(A_n), nu} <= ||phi||_{A_inf, mu}; the safety
// factor absorbs S_est being only an upper bound of the norm infimum.
ReverseHolderResult verify_reverse_holder(double S_est, const MatuszewskaProfile& Mn,
                                          const GrowthIndices& base_idx, const GridFunction& phi,
                                          const GridMeasure& nu, const GridMeasure& mu,
                                          double safety = 0.9);

struct AtomRelationResult {
    bool holds = false;
    bool skipped = false; // atom had zero nu or mu mass
    double lhs = 0.0;     // safety * S_est / Mn^{-1}(1/nu_i)
    double rhs = 0.0;     // 1 / Ainf^{-1}(1/mu_i)
};

std::vector<AtomRelationResult> verify_atom_relation(double S_est, const MatuszewskaProfile& Mn,
                                                     const GrowthIndices& base_idx,
                                                     const AtomReport& atoms,
                                                     double safety = 0.9);

// r_k = | int (B(|f_k|) - B(|f_k - f|)) phi - int B(|f|) phi | per member.
std::vector<double> brezis_lieb_residual(const YoungFunction& B,
                                         std::span<const GridFunction> f_k,
                                         const GridFunction& f, const GridFunction& phi);

} // namespace orlicz
