#pragma once

#include <hodgeci/exterior.hpp>
#include <hodgeci/hefer.hpp>

#include <vector>

namespace hodgeci {

/// B*(zeta,z) = sum zbar_j (zeta_j - z_j);  B(zeta,z) = sum zetabar_j (zeta_j - z_j).
Complex eval_Bstar(std::span<const Complex> zeta, std::span<const Complex> z);
Complex eval_B(std::span<const Complex> zeta, std::span<const Complex> z);

/// One column of a determinant bracket. Scalar columns hold plain entries;
/// differential columns contribute entry_j * dfam_j. Entries already include
/// any scalar denominator (powers of B or B*).
struct KernelColumn {
    enum class Kind { Scalar, DZbar, DZetabar } kind = Kind::Scalar;
    std::vector<Complex> entries;

    static KernelColumn scalar(std::vector<Complex> v) { return {Kind::Scalar, std::move(v)}; }
    static KernelColumn dzbar(std::vector<Complex> v) { return {Kind::DZbar, std::move(v)}; }
    static KernelColumn dzetabar(std::vector<Complex> v) { return {Kind::DZetabar, std::move(v)}; }
};

/// det[c_0 ... c_n] = sum_sigma sgn(sigma) prod_i c_i(sigma(i)), the product
/// taken as an ordered wedge. Alternating in scalar columns, symmetric in
/// repeated differential columns.
ExteriorForm bracket_det(std::span<const KernelColumn> cols);

/// Thrown when a kernel denominator vanishes at the evaluation point.
struct SingularKernelError : std::runtime_error {
    std::string factor;
    explicit SingularKernelError(std::string f)
        : std::runtime_error("singular kernel factor: " + f), factor(std::move(f)) {}
};

/// Cauchy-Fantappie section eta of the Weil-Leray kernels and its structured
/// evaluation: eta_j = (1-lambda-sum mu) zbar_j/B* + lambda zetabar_j/B
///                    + sum_k mu_k Q_k^j / (P_k(zeta)-P_k(z)).
struct CfSection {
    std::span<const Complex> zeta, z;
    double lambda = 0;
    std::span<const double> mu;
    const std::vector<HeferDecomposition>* hefer = nullptr; // one per P_k
    const std::vector<HomogeneousPolynomial>* polys = nullptr;

    /// eta_j values and d eta_j (as forms over DZETABAR/DZBAR/PARAM; the
    /// dzeta-components are dropped, they die against omega(zeta)).
    std::vector<Complex> values() const;
    std::vector<ExteriorForm> differentials() const;
};

/// omega'(eta) = sum_k (-1)^{k-1} eta_k wedge_{j!=k} d eta_j, split by the
/// number of DZBAR generators: out[q] is the (0,q)-in-z component.
std::vector<ExteriorForm> omega_prime_components(const CfSection& s);

// ---- chart reduction (sphere <-> nonhomogeneous coordinates) ----

/// rho_0(w) = 1/sqrt(1+|w|^2) on the unit sphere.
double rho0(std::span<const Complex> w);

/// zeta = rho_0(w) e^{i phi} (..,1-at-alpha,.., w) on the unit sphere.
std::vector<Complex> sphere_lift(int alpha, std::span<const Complex> w, double phi);

/// <zbar . w-aug> = zbar_alpha + sum_j zbar_j w_j (the chart-augmented pairing).
Complex zbar_dot_aug(int alpha, std::span<const Complex> z, std::span<const Complex> w);

/// Matrix R with dzbar_j -> sum_l R[j][l] dwbar_l for the section
/// z = rho_0(w)(...,1,...,w) (z_alpha real positive), modulo dw-components.
std::vector<std::vector<Complex>> sphere_conj_to_chart(int alpha, std::span<const Complex> w);

/// Same conversion for sphere dzetabar_j on the reduced tube slice: the dphi
/// and dw legs are dropped (they die against the dphi and wedge dw_j factors
/// of the reduced integrand).
std::vector<std::vector<Complex>> tube_conj_to_chart(int alpha, std::span<const Complex> w,
                                                     double phi);

/// omega'(zeta) = sum_i (-1)^i zeta_i dzeta_0 ^..^ (i omitted) ^..^ dzeta_n,
/// evaluated on n tangent vectors; equals zeta_0^{n+1} when the tangents are
/// the chart coordinate directions (the OmegaRepresentation reduction).
Complex omega_prime_euler(std::span<const Complex> zeta,
                          const std::vector<std::vector<Complex>>& tangents);

} // namespace hodgeci
