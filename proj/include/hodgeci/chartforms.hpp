#pragma once

#include <hodgeci/polynomial.hpp>
#include <hodgeci/residue.hpp>

#include <map>

namespace hodgeci {

/// 1 + sum_j w_j wbar_j as an exact polynomial in the 2n chart variables
/// (w_1..w_n, wbar_1..wbar_n).
PolyMap one_plus_norm_poly(size_t n);
PolyMap poly_pow(const PolyMap& p, unsigned e);

/// Rational coefficient num/den in (w, wbar). The common case is
/// den = (1+|w|^2)^s; the Cech partition currents of higher-degree curves
/// also use sum_b |w_b|^{2k} denominators. Exact under dbar by the quotient
/// rule; conversion to floating point happens at evaluation.
struct ChartCoeff {
    PolyMap num; // 2n vars
    PolyMap den; // 2n vars, nonvanishing on the chart

    ChartCoeff() = default;
    static ChartCoeff zero(size_t n);
    static ChartCoeff from_poly(PolyMap num, unsigned s); // den = (1+|w|^2)^s
    static ChartCoeff rational(PolyMap num, PolyMap den);

    size_t n() const { return num.num_vars / 2; }
    bool is_zero() const { return num.is_zero(); }

    Complex eval(std::span<const Complex> w) const;

    /// d/dwbar_j (0-based chart variable).
    ChartCoeff dbar(size_t j) const;

    ChartCoeff operator+(const ChartCoeff& o) const;
    ChartCoeff scaled(const ComplexRational& c) const;
    ChartCoeff mul_poly(const PolyMap& p) const; // p in (w, wbar)
};

/// (0,q)-form on a chart: sorted dwbar multi-index -> coefficient.
struct ChartForm {
    size_t n = 0;
    unsigned q = 0;
    std::map<std::vector<uint8_t>, ChartCoeff> comps;

    ChartForm() = default;
    ChartForm(size_t n_, unsigned q_) : n(n_), q(q_) {}

    void add(std::vector<uint8_t> idx, ChartCoeff c);
    bool is_zero() const;

    ChartForm dbar() const;
    ChartForm operator+(const ChartForm& o) const;
    ChartForm scaled(const ComplexRational& c) const;

    /// Component values in WbarBasis order.
    void eval_components(std::span<const Complex> w, const WbarBasis& basis,
                         std::vector<Complex>& out) const;
    Complex eval_component(std::span<const Complex> w, std::span<const uint8_t> idx) const;
};

/// Numeric change of chart for (0,q)-forms: the value of `form` (living on
/// chart `beta`) at the point with chart-`alpha` coordinates w, expressed in
/// the chart-`alpha` dwbar basis.
void pushforward_components(const ChartForm& form, int beta, int alpha,
                            std::span<const Complex> w, const WbarBasis& basis,
                            std::vector<Complex>& out);

/// Chart-beta coordinates of the point with chart-alpha coordinates w.
std::vector<Complex> chart_coords(int beta, int alpha, std::span<const Complex> w);

} // namespace hodgeci
