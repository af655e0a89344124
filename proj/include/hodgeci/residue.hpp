#pragma once

#include <hodgeci/variety.hpp>

#include <functional>
#include <optional>

namespace hodgeci {

/// Path epsilon(t) -> 0 with eps_j / eps_{j+1}^l -> 0 for every l (the
/// Coleff-Herrera admissibility condition). Default family:
/// eps_j(t) = exp(-t^{-(m-j+1)}) for m >= 2, eps(t) = t for m = 1.
struct AdmissiblePath {
    unsigned m = 1;
    bool admissible = true; // false only for the Passare-Tsikh caveat demos

    std::vector<double> at(double t) const;

    /// Numeric check of the ratio condition on a decreasing t ladder.
    bool check_ratios(unsigned l_max, std::span<const double> ts) const;
};

AdmissiblePath admissible_path(unsigned m);
/// eps_1 = ... = eps_m = t; requires explicit opt-in.
AdmissiblePath non_admissible_path(unsigned m, bool override_flag);

struct LadderEntry {
    double t;
    Complex value;
};

struct ResidueReport {
    Complex value{0, 0};        // extrapolated
    std::vector<LadderEntry> ladder;
    Complex extrapolated{0, 0};
    double error_estimate = 0;  // |last - extrapolated|
    double eta_used = 0;
    double excluded_measure = 0;
    bool converged = true;
};

/// Neville extrapolation of ladder values to t = 0.
Complex richardson(std::span<const LadderEntry> ladder);
ResidueReport make_report(std::vector<LadderEntry> ladder, double eta, double excluded);

/// Enumerates the dwbar multi-indices of length q over chart variables 1..n;
/// integrand coefficients are reported in this fixed order.
struct WbarBasis {
    size_t n = 0;
    unsigned q = 0;
    std::vector<std::vector<uint8_t>> combos; // ascending variable lists (0-based)

    WbarBasis() = default;
    WbarBasis(size_t n_, unsigned q_);
    size_t size() const { return combos.size(); }
    int index(std::span<const uint8_t> combo) const;
};

/// Numerator of a tube/residue integral: the (n, q)-form
///   sum_J h_J(w) dw_1 ^..^ dw_n ^ dwbar_J
/// h_J reported in WbarBasis order. Charts matter: w are the coordinates of
/// the chart being integrated.
using FiberedIntegrand =
    std::function<void(int chart, std::span<const Complex> w, std::vector<Complex>& h)>;

struct TubeConfig {
    int phase_nodes = 48;      // trapezoid nodes per |F_k| = eps_k phase
    BaseGrid base;
    int workers = 0;
};

/// Real multiplier weights chi_k(w) >= c > 0 for the deformed tubes
/// {|F_k| chi_k = eps_k}. value and Wirtinger derivatives.
struct TubeWeight {
    std::function<double(std::span<const Complex> w)> value;
    std::function<std::vector<Complex>(std::span<const Complex> w)> d_dw; // dchi/dw_j
};

TubeWeight unit_weight();
/// chi(w) = (1+|w|^2)^{-deg/2}; the sphere reduction weight of |P_k| on S^{2n+1}.
TubeWeight fs_weight(uint32_t degree);

/// Integral over the tube {|F_k(w)| chi_k(w) = eps_k} of
/// integrand / prod_k F_k, oriented by (theta_1,..,theta_m, base).
Complex tube_integrate(const Variety& V, int chart, const FiberedIntegrand& integrand,
                       std::span<const double> eps, const TubeConfig& cfg,
                       const std::vector<TubeWeight>* weights = nullptr);

/// Tube limit along the path: ladder over ts with Richardson extrapolation.
ResidueReport tube_limit(const Variety& V, int chart, const FiberedIntegrand& integrand,
                         const AdmissiblePath& path, std::span<const double> ts,
                         const TubeConfig& cfg, const std::vector<TubeWeight>* weights = nullptr);

struct FiberedConfig {
    BaseGrid base;
    double eta = 0;            // skip roots with |g_alpha(root)| <= eta
    double discriminant_tol = 1e-8;
    int workers = 0;
    /// optional exclusion (e.g. geodesic delta-ball around the evaluation point)
    std::function<bool(std::span<const Complex> w)> exclude;
};

/// Precomputed V-sample geometry for repeated residue evaluations against
/// different integrands (the operator quadratures evaluate one grid per chart
/// against many (z, phase) integrand closures).
struct ResidueGrid {
    int chart = 0;
    size_t n = 0, m = 0;
    WbarBasis basis; // q = n-m
    struct Root {
        std::vector<Complex> w;
        Complex inv_jac;
        std::vector<Complex> restrict_coeff; // per basis combo
        double g_abs;
        double weight;
    };
    std::vector<Root> roots;
    Complex measure_factor{1, 0};
    double excluded_measure = 0;
    double total_measure = 0;
};

ResidueGrid make_residue_grid(const Variety& V, int chart, const BaseGrid& base,
                              double discriminant_tol = 1e-8);

Complex residue_eval(const ResidueGrid& grid, const FiberedIntegrand& integrand, double eta,
                     const std::function<bool(std::span<const Complex>)>& exclude, int workers);

/// res_{F,pi} over V in chart `chart`: at every fiber root,
/// (2 pi i)^m * (restriction of the numerator to V) / det[dF/dw_fiber],
/// integrated over the base coordinates.
ResidueReport fibered_residue(const Variety& V, int chart, const FiberedIntegrand& integrand,
                              const FiberedConfig& cfg);

/// Same limit computed along weighted and unweighted tubes; the difference is
/// the Lemma LimitsExistence check.
struct WeightedTubeComparison {
    ResidueReport weighted;
    ResidueReport unweighted;
    double difference;
};
WeightedTubeComparison weighted_tube_equivalence(const Variety& V, int chart,
                                                 const FiberedIntegrand& integrand,
                                                 const std::vector<TubeWeight>& weights,
                                                 const AdmissiblePath& path,
                                                 std::span<const double> ts,
                                                 const TubeConfig& cfg);

} // namespace hodgeci
