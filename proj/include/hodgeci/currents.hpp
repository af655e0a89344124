#pragma once

#include <hodgeci/chartforms.hpp>

#include <string>

namespace hodgeci {

/// Residual current of homogeneity zero: one smooth (0,q)-form per chart,
/// compatible modulo the ideal (F_1^(a),..,F_m^(a)) on overlaps.
struct ResidualCurrent {
    unsigned q = 0;
    std::vector<ChartForm> charts;
    std::string name;
    std::string kind; // "exact" | "antiholomorphic" | "ideal" | "custom"

    ResidualCurrent scaled(const ComplexRational& c) const;
    ResidualCurrent operator+(const ResidualCurrent& o) const;
};

/// Section of the dualizing bundle: gamma_alpha = h^(alpha)(w) dw_1^..^dw_n
/// with h homogeneous of degree d-n-1; transitions are exactly l_ab.
struct DualizingSection {
    HomogeneousPolynomial h;
    std::vector<ChartPolynomial> chart_h;
    std::vector<CompiledPoly> fast;
    std::string name;
};

DualizingSection make_dualizing_section(const Variety& V, const HomogeneousPolynomial& h);
/// Monomial basis h = z^a, |a| = d-n-1; empty when d < n+1.
std::vector<DualizingSection> dualizing_basis(const Variety& V);
/// dim of the section space = #monomials of degree d-n-1 (adjunction genus
/// for plane curves).
size_t dualizing_dimension(const Variety& V);

/// phi = dbar(psi) for the global homogeneity-zero function
/// psi = psi_num(z, zbar)/|z|^{2s}; every term must have bidegree (s, s).
ResidualCurrent make_exact_current(const Variety& V, const PolyMap& psi_num, unsigned s);

/// Nontrivial dbar-closed residual current on a plane curve, built from the
/// rational Cech cocycle c_ab = f_c * mult /(z_a z_b)^k (with
/// sum_c f_c z_c^k = mult^{-1}.. P splitting) spread by the partition
/// |z_g|^{2k}/sum|z_b|^{2k}: Phi_a = (3/2) sum_g dbar(rho_g) c_ag.
/// Exactly dbar-closed, exactly compatible modulo (F). `multiplier` has
/// degree 3k-d with k = ceil(d/3); pass nullptr for the canonical choice.
ResidualCurrent make_antiholomorphic(const Variety& V,
                                     const HomogeneousPolynomial* multiplier = nullptr);

/// All antiholomorphic classes of the multiplier family (spans H^{0,1} for
/// the shipped curves; used by the genus rank test).
std::vector<ResidualCurrent> antiholomorphic_family(const Variety& V);

/// Phi_a = F_k^(a) * Omega_a with Omega = dbar(psi): an exact ideal member
/// (the solver annihilation scenarios).
ResidualCurrent make_ideal_current(const Variety& V, size_t k, const PolyMap& psi_num, unsigned s);

struct ClosednessReport {
    double residual = 0;      // max |dbar Phi| at on-V samples, relative
    double scale = 0;         // ||dbar Phi|| over ambient samples
    bool exactly_zero = false;
    double lsq_residual = 0;  // ideal-fit diagnostic on near-V samples
    bool closed = false;
};

ClosednessReport check_closed(const Variety& V, const ResidualCurrent& phi,
                              const BaseGrid& grid, double tol = 1e-8);

struct CompatibilityReport {
    double max_residual = 0; // relative, over charted pairs and overlap samples
    bool compatible = false;
};

CompatibilityReport check_compatibility(const Variety& V, const ResidualCurrent& phi,
                                        const BaseGrid& grid, double tol = 1e-6);

/// <phi, gamma> = sum_a residue over V of theta_a gamma_a ^ Phi_a / prod F.
ResidueReport pair_current(const Variety& V, const ResidualCurrent& phi,
                           const DualizingSection& gamma, const FiberedConfig& cfg);

/// Same pairing computed by an independent route (used as an oracle): fixes
/// the chart, parametrizes the curve by the OTHER coordinate as base, and
/// sums Leray residues on a fresh grid.
Complex pair_current_oracle(const Variety& V, const ResidualCurrent& phi,
                            const DualizingSection& gamma, const BaseGrid& grid);

} // namespace hodgeci
