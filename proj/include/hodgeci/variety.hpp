#pragma once

#include <hodgeci/polynomial.hpp>

#include <functional>
#include <vector>

namespace hodgeci {

/// Product quadrature grid over the base coordinates (w_{m+1},...,w_n).
/// Each complex coordinate is covered by the substitution w = tan(u) e^{iv},
/// u in (0,pi/2), v in [0,2pi): midpoint rule in u, trapezoid in v. The
/// tan-substitution compactifies the chart so that Fubini-Study-decaying
/// integrands are integrated over the whole plane.
struct BaseGrid {
    int radial = 32;
    int angular = 32;
    double u_max = 1.5207963267948966; // just below pi/2; tail is FS-negligible

    struct Node {
        std::vector<Complex> point; // base coordinates
        double weight;              // product of dx dy area weights
    };
    std::vector<Node> nodes(size_t base_dim) const;
};

struct VarietySample {
    int chart = 0;
    std::vector<Complex> base_point;            // w_{m+1}..w_n
    std::vector<std::vector<Complex>> fiber_roots; // each: w_1..w_m
    std::vector<Complex> jacobian_dets;         // det[dF_k/dw_l], fiber block, per root
    double base_weight = 0;                     // quadrature weight of the base node
    std::vector<int> excluded_roots;            // near-discriminant roots, not used
};

struct SampleStats {
    size_t accepted_roots = 0;
    size_t excluded_roots = 0;
    double excluded_measure = 0; // sum of base weights with at least one excluded root
    double total_measure = 0;
    double max_residual = 0; // max |F(root)| over accepted roots
};

/// Complete intersection V = {P_1 = ... = P_m = 0} in CP^n with chart data.
class Variety {
  public:
    Variety(size_t n, std::vector<HomogeneousPolynomial> polys);

    size_t n() const { return n_; }
    size_t m() const { return polys_.size(); }
    size_t dim() const { return n_ - m(); }
    uint32_t total_degree() const { return total_degree_; }
    const std::vector<uint32_t>& degrees() const { return degrees_; }
    const std::vector<HomogeneousPolynomial>& polys() const { return polys_; }

    const ChartPolynomial& chart_poly(int alpha, size_t k) const { return charts_[alpha][k]; }
    const CompiledPoly& chart_poly_fast(int alpha, size_t k) const { return charts_fast_[alpha][k]; }
    /// dF_k/dw_l in chart alpha, compiled.
    const CompiledPoly& chart_grad_fast(int alpha, size_t k, size_t l) const {
        return grads_fast_[alpha][k * n_ + l];
    }

    const ChartPolynomial& cutoff(int alpha) const { return cutoffs_[alpha]; }
    void set_cutoff(int alpha, ChartPolynomial g);
    Complex cutoff_at(int alpha, std::span<const Complex> w) const;

    /// Fiber Jacobian det[dF_k/dw_l]_{l=1..m} at w in chart alpha.
    Complex fiber_jacobian_det(int alpha, std::span<const Complex> w) const;
    /// Graph matrix T with dw_fiber = T dw_base on T_w V: T = -A^{-1} B.
    std::vector<std::vector<Complex>> graph_matrix(int alpha, std::span<const Complex> w) const;

    /// Roots w_fiber of {F_k(w_fiber, base) = targets_k}. Seeds are optional
    /// warm starts (e.g. previous tube node); all sheets are returned.
    std::vector<std::vector<Complex>> solve_fiber(int alpha, std::span<const Complex> base,
                                                  std::span<const Complex> targets,
                                                  const std::vector<std::vector<Complex>>* seeds = nullptr) const;

    std::vector<VarietySample> sample(int alpha, const BaseGrid& grid, SampleStats* stats = nullptr,
                                      double discriminant_tol = 1e-8) const;

    /// Numerical rank of the full Jacobian [dF_k/dw_l] (m x n) at sample roots;
    /// the reduced-complete-intersection witness requires rank == m everywhere.
    bool reducedness_witness(int alpha, const std::vector<VarietySample>& samples,
                             double tol = 1e-6) const;

    /// Numerical check of the cutoff conditions: at V-samples with small |g|,
    /// the joint Jacobian of (F, g) has rank m+1.
    bool cutoff_witness(int alpha, const std::vector<VarietySample>& samples,
                        double small = 1e-3, double tol = 1e-8) const;

    /// Lift chart point to the unit sphere representative (phase convention:
    /// the chart coordinate z_alpha is real positive).
    std::vector<Complex> lift_to_sphere(int alpha, std::span<const Complex> w) const;

  private:
    size_t n_;
    std::vector<HomogeneousPolynomial> polys_;
    std::vector<uint32_t> degrees_;
    uint32_t total_degree_ = 0;
    std::vector<std::vector<ChartPolynomial>> charts_;      // [alpha][k]
    std::vector<std::vector<CompiledPoly>> charts_fast_;    // [alpha][k]
    std::vector<std::vector<CompiledPoly>> grads_fast_;     // [alpha][k*n+l]
    std::vector<ChartPolynomial> cutoffs_;
    std::vector<CompiledPoly> cutoffs_fast_;

    bool newton_polish(int alpha, std::span<const Complex> base, std::span<const Complex> targets,
                       std::vector<Complex>& fiber, double tol, int iters) const;
};

/// theta_alpha(z) = |z_alpha|^2 / |z|^2; smooth, homogeneity zero, sums to 1.
std::vector<double> partition_of_unity(std::span<const Complex> z);

/// theta_beta expressed in the coordinates of chart alpha (w_alpha == 1).
double partition_weight_in_chart(int beta, int alpha, std::span<const Complex> w);

} // namespace hodgeci
