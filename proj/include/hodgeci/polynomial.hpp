#pragma once

#include <hodgeci/multiindex.hpp>
#include <hodgeci/rational.hpp>

#include <map>
#include <span>
#include <vector>

namespace hodgeci {

/// Sparse exact polynomial: monomial -> coefficient, zero coefficients absent.
struct PolyMap {
    size_t num_vars = 0;
    std::map<MultiIndex, ComplexRational> terms;

    PolyMap() = default;
    explicit PolyMap(size_t nv) : num_vars(nv) {}

    bool is_zero() const { return terms.empty(); }

    void add_term(const MultiIndex& m, const ComplexRational& c);

    PolyMap& operator+=(const PolyMap& o);
    PolyMap& operator-=(const PolyMap& o);
    friend PolyMap operator+(PolyMap a, const PolyMap& b) { return a += b; }
    friend PolyMap operator-(PolyMap a, const PolyMap& b) { return a -= b; }
    friend PolyMap operator*(const PolyMap& a, const PolyMap& b);
    PolyMap scaled(const ComplexRational& c) const;

    friend bool operator==(const PolyMap& a, const PolyMap& b) {
        return a.num_vars == b.num_vars && a.terms == b.terms;
    }

    uint32_t total_degree() const;

    ComplexRational eval_exact(std::span<const ComplexRational> pt) const;
    Complex eval(std::span<const Complex> pt) const;

    /// d/dx_i, exact.
    PolyMap derivative(size_t var) const;
};

/// Flattened terms for fast repeated numeric evaluation.
struct CompiledPoly {
    size_t num_vars = 0;
    std::vector<std::pair<std::vector<uint32_t>, Complex>> terms;

    CompiledPoly() = default;
    explicit CompiledPoly(const PolyMap& p);
    Complex eval(std::span<const Complex> pt) const;
    Complex eval3(Complex a, Complex b, Complex c) const;
};

/// Homogeneous polynomial in n+1 variables z_0..z_n of fixed degree.
struct HomogeneousPolynomial {
    PolyMap poly;
    uint32_t degree = 0;

    HomogeneousPolynomial() = default;
    HomogeneousPolynomial(size_t num_vars, uint32_t d) : poly(num_vars), degree(d) {}

    size_t num_vars() const { return poly.num_vars; }
    void add_term(const MultiIndex& m, const ComplexRational& c);

    ComplexRational eval_exact(std::span<const ComplexRational> pt) const;
    Complex eval(std::span<const Complex> pt) const { return poly.eval(pt); }

    HomogeneousPolynomial derivative(size_t var) const;

    friend bool operator==(const HomogeneousPolynomial& a, const HomogeneousPolynomial& b) {
        return a.degree == b.degree && a.poly == b.poly;
    }
};

/// Polynomial in the affine coordinates w_1..w_n of chart alpha,
/// F^(alpha) = P / z_alpha^deg P with w_i = z_i / z_alpha.
struct ChartPolynomial {
    int chart = 0;
    PolyMap poly; // num_vars = n (w_1..w_n)

    size_t num_vars() const { return poly.num_vars; }
    Complex eval(std::span<const Complex> w) const { return poly.eval(w); }
    ComplexRational eval_exact(std::span<const ComplexRational> w) const { return poly.eval_exact(w); }
    ChartPolynomial derivative(size_t var) const;
};

HomogeneousPolynomial parse_homogeneous(size_t num_vars,
                                        const std::vector<std::pair<MultiIndex, ComplexRational>>& terms);

/// F^(alpha)(w) with w_i = z_i/z_alpha; exact.
ChartPolynomial dehomogenize(const HomogeneousPolynomial& P, int alpha);

/// Inverse of dehomogenize for polynomials of known degree d: z_alpha^d * F(z/z_alpha).
HomogeneousPolynomial homogenize(const ChartPolynomial& F, uint32_t d);

struct TransitionFactor {
    int alpha = 0, beta = 0;
    std::vector<uint32_t> degrees; // diag entries (z_beta/z_alpha)^deg
    uint32_t det_degree = 0;       // l_ab = (z_beta/z_alpha)^det_degree

    Complex det_at(std::span<const Complex> z) const;
    std::vector<Complex> diag_at(std::span<const Complex> z) const;
    std::string str() const;
};

/// Line-bundle transition data l_ab = det A_ab = (z_beta/z_alpha)^{sum deg P_k}.
TransitionFactor transition_factor(int alpha, int beta, const std::vector<uint32_t>& degrees);

} // namespace hodgeci
