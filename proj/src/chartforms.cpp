#include <hodgeci/chartforms.hpp>

#include <Eigen/Dense>

#include <stdexcept>

namespace hodgeci {

PolyMap one_plus_norm_poly(size_t n) {
    PolyMap p(2 * n);
    p.add_term(MultiIndex(2 * n), ComplexRational(1));
    for (size_t j = 0; j < n; ++j) {
        MultiIndex m(2 * n);
        m[j] = 1;
        m[n + j] = 1;
        p.add_term(m, ComplexRational(1));
    }
    return p;
}

PolyMap poly_pow(const PolyMap& p, unsigned e) {
    PolyMap r(p.num_vars);
    r.add_term(MultiIndex(p.num_vars), ComplexRational(1));
    for (unsigned i = 0; i < e; ++i) r = r * p;
    return r;
}

ChartCoeff ChartCoeff::zero(size_t n) {
    ChartCoeff c;
    c.num = PolyMap(2 * n);
    c.den = PolyMap(2 * n);
    c.den.add_term(MultiIndex(2 * n), ComplexRational(1));
    return c;
}

ChartCoeff ChartCoeff::from_poly(PolyMap num, unsigned s) {
    size_t n = num.num_vars / 2;
    ChartCoeff c;
    c.den = poly_pow(one_plus_norm_poly(n), s);
    c.num = std::move(num);
    return c;
}

ChartCoeff ChartCoeff::rational(PolyMap num, PolyMap den) {
    ChartCoeff c;
    c.num = std::move(num);
    c.den = std::move(den);
    return c;
}

Complex ChartCoeff::eval(std::span<const Complex> w) const {
    std::vector<Complex> pt(2 * n());
    for (size_t j = 0; j < n(); ++j) {
        pt[j] = w[j];
        pt[n() + j] = std::conj(w[j]);
    }
    Complex d = den.eval(pt);
    if (d == Complex(0)) throw std::domain_error("ChartCoeff: denominator vanished");
    return num.eval(pt) / d;
}

ChartCoeff ChartCoeff::dbar(size_t j) const {
    size_t var = n() + j; // wbar_j slot
    ChartCoeff r;
    r.num = num.derivative(var) * den - num * den.derivative(var);
    r.den = den * den;
    return r;
}

ChartCoeff ChartCoeff::operator+(const ChartCoeff& o) const {
    if (is_zero()) return o;
    if (o.is_zero()) return *this;
    if (den == o.den) {
        ChartCoeff r;
        r.num = num + o.num;
        r.den = den;
        return r;
    }
    ChartCoeff r;
    r.num = num * o.den + o.num * den;
    r.den = den * o.den;
    return r;
}

ChartCoeff ChartCoeff::scaled(const ComplexRational& c) const {
    ChartCoeff r = *this;
    r.num = num.scaled(c);
    return r;
}

ChartCoeff ChartCoeff::mul_poly(const PolyMap& p) const {
    ChartCoeff r = *this;
    r.num = num * p;
    return r;
}

void ChartForm::add(std::vector<uint8_t> idx, ChartCoeff c) {
    if (idx.size() != q) throw std::invalid_argument("ChartForm: index length != q");
    if (c.is_zero()) return;
    auto it = comps.find(idx);
    if (it == comps.end())
        comps.emplace(std::move(idx), std::move(c));
    else
        it->second = it->second + c;
}

bool ChartForm::is_zero() const {
    for (const auto& [k, c] : comps)
        if (!c.is_zero()) return false;
    return true;
}

ChartForm ChartForm::dbar() const {
    ChartForm out(n, q + 1);
    for (const auto& [idx, c] : comps) {
        for (size_t j = 0; j < n; ++j) {
            if (std::find(idx.begin(), idx.end(), static_cast<uint8_t>(j)) != idx.end()) continue;
            ChartCoeff dc = c.dbar(j);
            if (dc.is_zero()) continue;
            // dwbar_j ^ dwbar_idx : sort j into idx
            std::vector<uint8_t> key = idx;
            size_t pos = 0;
            while (pos < key.size() && key[pos] < j) ++pos;
            key.insert(key.begin() + pos, static_cast<uint8_t>(j));
            if (pos % 2 == 1) dc = dc.scaled(ComplexRational(-1));
            out.add(std::move(key), std::move(dc));
        }
    }
    return out;
}

ChartForm ChartForm::operator+(const ChartForm& o) const {
    if (n != o.n || q != o.q) throw std::invalid_argument("ChartForm: shape mismatch");
    ChartForm r = *this;
    for (const auto& [idx, c] : o.comps) r.add(idx, c);
    return r;
}

ChartForm ChartForm::scaled(const ComplexRational& c) const {
    ChartForm r(n, q);
    for (const auto& [idx, cf] : comps) r.add(idx, cf.scaled(c));
    return r;
}

void ChartForm::eval_components(std::span<const Complex> w, const WbarBasis& basis,
                                std::vector<Complex>& out) const {
    out.assign(basis.size(), Complex(0));
    for (const auto& [idx, c] : comps) {
        int pos = basis.index(idx);
        if (pos < 0) throw std::logic_error("ChartForm: component outside basis");
        out[pos] = c.eval(w);
    }
}

Complex ChartForm::eval_component(std::span<const Complex> w,
                                  std::span<const uint8_t> idx) const {
    auto it = comps.find(std::vector<uint8_t>(idx.begin(), idx.end()));
    return it == comps.end() ? Complex(0) : it->second.eval(w);
}

std::vector<Complex> chart_coords(int beta, int alpha, std::span<const Complex> w) {
    const size_t n = w.size();
    // homogeneous representative with z_alpha = 1
    std::vector<Complex> z(n + 1);
    size_t j = 0;
    for (size_t i = 0; i <= n; ++i)
        z[i] = (static_cast<int>(i) == alpha) ? Complex(1) : w[j++];
    if (z[beta] == Complex(0)) throw std::domain_error("chart_coords: point not in target chart");
    std::vector<Complex> u(n);
    j = 0;
    for (size_t i = 0; i <= n; ++i) {
        if (static_cast<int>(i) == beta) continue;
        u[j++] = z[i] / z[beta];
    }
    return u;
}

void pushforward_components(const ChartForm& form, int beta, int alpha,
                            std::span<const Complex> w, const WbarBasis& basis,
                            std::vector<Complex>& out) {
    const size_t n = w.size();
    if (beta == alpha) {
        form.eval_components(w, basis, out);
        return;
    }
    // u_i = z_i / z_beta as holomorphic functions of w; J[i][l] = du_i/dw_l
    std::vector<Complex> z(n + 1);
    size_t j = 0;
    for (size_t i = 0; i <= n; ++i)
        z[i] = (static_cast<int>(i) == alpha) ? Complex(1) : w[j++];
    Complex zb = z[beta];
    if (zb == Complex(0)) throw std::domain_error("pushforward: point not in target chart");
    // dz_i = dw_{pos(i)} for i != alpha, dz_alpha = 0
    auto pos_of = [&](size_t i) -> int {
        if (static_cast<int>(i) == alpha) return -1;
        return static_cast<int>(i < static_cast<size_t>(alpha) ? i : i - 1);
    };
    int pb = pos_of(beta);
    std::vector<std::vector<Complex>> J(n, std::vector<Complex>(n, Complex(0)));
    size_t row = 0;
    for (size_t i = 0; i <= n; ++i) {
        if (static_cast<int>(i) == beta) continue;
        // u_row = z_i / z_beta
        int pi = pos_of(i);
        for (size_t l = 0; l < n; ++l) {
            Complex d = 0;
            if (pi >= 0 && static_cast<size_t>(pi) == l) d += Complex(1) / zb;
            if (pb >= 0 && static_cast<size_t>(pb) == l) d -= z[i] / (zb * zb);
            J[row][l] = d;
        }
        ++row;
    }
    auto u = chart_coords(beta, alpha, w);
    std::vector<Complex> comps_u;
    form.eval_components(u, basis, comps_u);
    // dubar_i = sum_l conj(J[i][l]) dwbar_l ; expand each basis combo
    out.assign(basis.size(), Complex(0));
    for (size_t ci = 0; ci < basis.size(); ++ci) {
        if (comps_u[ci] == Complex(0)) continue;
        const auto& combo = basis.combos[ci];
        // expand wedge of rows of conj(J) indexed by combo over target combos
        std::vector<std::pair<uint32_t, Complex>> cur = {{0u, comps_u[ci]}};
        for (uint8_t i : combo) {
            std::vector<std::pair<uint32_t, Complex>> next;
            for (const auto& [mask, coef] : cur)
                for (size_t l = 0; l < n; ++l) {
                    Complex c = std::conj(J[i][l]);
                    if (c == Complex(0)) continue;
                    if (mask & (1u << l)) continue;
                    int crossings = 0;
                    for (size_t s = l + 1; s < n; ++s)
                        if (mask & (1u << s)) ++crossings;
                    next.emplace_back(mask | (1u << l),
                                      coef * ((crossings % 2) ? -c : c));
                }
            cur = std::move(next);
        }
        for (const auto& [mask, coef] : cur) {
            std::vector<uint8_t> tgt;
            for (size_t l = 0; l < n; ++l)
                if (mask & (1u << l)) tgt.push_back(static_cast<uint8_t>(l));
            int pos = basis.index(tgt);
            if (pos >= 0) out[pos] += coef;
        }
    }
}

} // namespace hodgeci
