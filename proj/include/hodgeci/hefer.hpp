#pragma once

#include <hodgeci/polynomial.hpp>

#include <optional>
#include <string>

namespace hodgeci {

/// Polynomial in (zeta, z), zeta = first n+1 exponents, z = last n+1.
/// Every term has deg_zeta + deg_z == joint_degree.
struct BihomogeneousPolynomial {
    size_t num_vars = 0; // n+1, per block
    uint32_t joint_degree = 0;
    PolyMap poly; // 2*(n+1) variables

    BihomogeneousPolynomial() = default;
    BihomogeneousPolynomial(size_t nv, uint32_t jd)
        : num_vars(nv), joint_degree(jd), poly(2 * nv) {}

    void add_term(const MultiIndex& zeta_exp, const MultiIndex& z_exp, const ComplexRational& c);

    bool is_zero() const { return poly.is_zero(); }

    Complex eval(std::span<const Complex> zeta, std::span<const Complex> z) const;
    ComplexRational eval_exact(std::span<const ComplexRational> zeta,
                               std::span<const ComplexRational> z) const;

    BihomogeneousPolynomial& operator+=(const BihomogeneousPolynomial& o);
    BihomogeneousPolynomial scaled(const ComplexRational& c) const;

    /// Decompose into zeta-degree slices: Q = sum_a slice[a] where slice[a]
    /// collects the terms of zeta-degree a. Used for the exact phase integral
    /// in the projector (zeta = rho e^{i phi} (1,w) contributes e^{i a phi}).
    std::vector<PolyMap> zeta_degree_slices() const;
};

/// P(zeta) - P(z) = sum_i Q^i(zeta,z) (zeta_i - z_i), Q^i jointly homogeneous
/// of degree d-1. The construction follows the monomial induction, peeling
/// variables in ascending index order (decompositions are non-unique; this
/// pins one for reproducibility).
struct HeferDecomposition {
    HomogeneousPolynomial source;
    std::vector<BihomogeneousPolynomial> coefficients; // Q^0..Q^n
};

HeferDecomposition hefer_monomial(size_t num_vars, const MultiIndex& monomial,
                                  const ComplexRational& coefficient);
HeferDecomposition hefer_decompose(const HomogeneousPolynomial& P);

/// P(zeta)-P(z) - sum Q^i (zeta_i - z_i) as an exact polynomial in (zeta, z);
/// identically zero for a valid decomposition.
PolyMap hefer_residual(const HeferDecomposition& dec);

/// True if every stored term of every Q^i satisfies deg_zeta + deg_z = d-1.
bool hefer_bihomogeneous(const HeferDecomposition& dec);

Complex eval_hefer(const BihomogeneousPolynomial& Q, std::span<const Complex> zeta,
                   std::span<const Complex> z);

/// Content hash of a homogeneous polynomial (cache key).
uint64_t poly_content_hash(const HomogeneousPolynomial& P);

/// File cache: one record file per polynomial hash, versioned header.
class HeferCache {
  public:
    explicit HeferCache(std::string dir) : dir_(std::move(dir)) {}

    std::optional<HeferDecomposition> load(const HomogeneousPolynomial& P) const;
    void store(const HeferDecomposition& dec) const;

    HeferDecomposition decompose_cached(const HomogeneousPolynomial& P) const;

    std::vector<std::string> list() const;
    size_t clear() const;

    static std::string default_dir();

  private:
    std::string dir_;
};

std::string serialize_hefer(const HeferDecomposition& dec);
HeferDecomposition deserialize_hefer(const std::string& text);

} // namespace hodgeci
