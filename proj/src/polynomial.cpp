#include <hodgeci/polynomial.hpp>

#include <sstream>
#include <stdexcept>

namespace hodgeci {

void PolyMap::add_term(const MultiIndex& m, const ComplexRational& c) {
    if (m.size() != num_vars) throw std::invalid_argument("PolyMap: exponent length mismatch");
    if (c.is_zero()) return;
    auto it = terms.find(m);
    if (it == terms.end()) {
        terms.emplace(m, c);
    } else {
        it->second += c;
        if (it->second.is_zero()) terms.erase(it);
    }
}

PolyMap& PolyMap::operator+=(const PolyMap& o) {
    for (const auto& [m, c] : o.terms) add_term(m, c);
    return *this;
}

PolyMap& PolyMap::operator-=(const PolyMap& o) {
    for (const auto& [m, c] : o.terms) add_term(m, -c);
    return *this;
}

PolyMap operator*(const PolyMap& a, const PolyMap& b) {
    if (a.num_vars != b.num_vars) throw std::invalid_argument("PolyMap: variable count mismatch");
    PolyMap r(a.num_vars);
    for (const auto& [ma, ca] : a.terms)
        for (const auto& [mb, cb] : b.terms) {
            MultiIndex m(a.num_vars);
            for (size_t i = 0; i < a.num_vars; ++i) m[i] = ma[i] + mb[i];
            r.add_term(m, ca * cb);
        }
    return r;
}

PolyMap PolyMap::scaled(const ComplexRational& c) const {
    PolyMap r(num_vars);
    if (c.is_zero()) return r;
    for (const auto& [m, a] : terms) r.terms.emplace(m, a * c);
    return r;
}

uint32_t PolyMap::total_degree() const {
    uint32_t d = 0;
    for (const auto& [m, c] : terms) d = std::max(d, m.degree());
    return d;
}

ComplexRational PolyMap::eval_exact(std::span<const ComplexRational> pt) const {
    if (pt.size() != num_vars) throw std::invalid_argument("PolyMap: point length mismatch");
    ComplexRational acc;
    for (const auto& [m, c] : terms) {
        ComplexRational t = c;
        for (size_t i = 0; i < num_vars; ++i)
            if (m[i]) t *= pow(pt[i], m[i]);
        acc += t;
    }
    return acc;
}

Complex PolyMap::eval(std::span<const Complex> pt) const {
    if (pt.size() != num_vars) throw std::invalid_argument("PolyMap: point length mismatch");
    Complex acc = 0;
    for (const auto& [m, c] : terms) {
        Complex t = c.to_complex();
        for (size_t i = 0; i < num_vars; ++i)
            for (uint32_t e = 0; e < m[i]; ++e) t *= pt[i];
        acc += t;
    }
    return acc;
}

PolyMap PolyMap::derivative(size_t var) const {
    PolyMap r(num_vars);
    for (const auto& [m, c] : terms) {
        if (m[var] == 0) continue;
        MultiIndex d = m;
        d[var] -= 1;
        r.add_term(d, c * ComplexRational(static_cast<long>(m[var])));
    }
    return r;
}

CompiledPoly::CompiledPoly(const PolyMap& p) : num_vars(p.num_vars) {
    terms.reserve(p.terms.size());
    for (const auto& [m, c] : p.terms) terms.emplace_back(m.exp, c.to_complex());
}

Complex CompiledPoly::eval(std::span<const Complex> pt) const {
    Complex acc = 0;
    for (const auto& [e, c] : terms) {
        Complex t = c;
        for (size_t i = 0; i < num_vars; ++i) {
            Complex p = pt[i];
            for (uint32_t k = 0; k < e[i]; ++k) t *= p;
        }
        acc += t;
    }
    return acc;
}

Complex CompiledPoly::eval3(Complex a, Complex b, Complex c) const {
    const Complex pt[3] = {a, b, c};
    return eval(std::span<const Complex>(pt, num_vars));
}

void HomogeneousPolynomial::add_term(const MultiIndex& m, const ComplexRational& c) {
    if (m.degree() != degree)
        throw std::invalid_argument("HomogeneousPolynomial: term degree mismatch");
    poly.add_term(m, c);
}

ComplexRational HomogeneousPolynomial::eval_exact(std::span<const ComplexRational> pt) const {
    return poly.eval_exact(pt);
}

HomogeneousPolynomial HomogeneousPolynomial::derivative(size_t var) const {
    HomogeneousPolynomial r(num_vars(), degree ? degree - 1 : 0);
    r.poly = poly.derivative(var);
    return r;
}

ChartPolynomial ChartPolynomial::derivative(size_t var) const {
    ChartPolynomial r;
    r.chart = chart;
    r.poly = poly.derivative(var);
    return r;
}

HomogeneousPolynomial parse_homogeneous(
    size_t num_vars, const std::vector<std::pair<MultiIndex, ComplexRational>>& terms) {
    if (terms.empty()) throw std::invalid_argument("empty polynomial");
    HomogeneousPolynomial P(num_vars, terms.front().first.degree());
    for (const auto& [m, c] : terms) P.add_term(m, c);
    return P;
}

ChartPolynomial dehomogenize(const HomogeneousPolynomial& P, int alpha) {
    const size_t nv = P.num_vars();
    if (alpha < 0 || static_cast<size_t>(alpha) >= nv)
        throw std::invalid_argument("dehomogenize: chart out of range");
    ChartPolynomial F;
    F.chart = alpha;
    F.poly = PolyMap(nv - 1);
    for (const auto& [m, c] : P.poly.terms) {
        MultiIndex w(nv - 1);
        size_t j = 0;
        for (size_t i = 0; i < nv; ++i) {
            if (static_cast<int>(i) == alpha) continue;
            w[j++] = m[i];
        }
        F.poly.add_term(w, c);
    }
    return F;
}

HomogeneousPolynomial homogenize(const ChartPolynomial& F, uint32_t d) {
    const size_t nv = F.num_vars() + 1;
    HomogeneousPolynomial P(nv, d);
    for (const auto& [m, c] : F.poly.terms) {
        uint32_t td = m.degree();
        if (td > d) throw std::invalid_argument("homogenize: degree too small");
        MultiIndex z(nv);
        size_t j = 0;
        for (size_t i = 0; i < nv; ++i) {
            if (static_cast<int>(i) == F.chart) {
                z[i] = d - td;
            } else {
                z[i] = m[j++];
            }
        }
        P.add_term(z, c);
    }
    return P;
}

Complex TransitionFactor::det_at(std::span<const Complex> z) const {
    Complex r = z[beta] / z[alpha];
    Complex acc = 1;
    for (uint32_t k = 0; k < det_degree; ++k) acc *= r;
    return acc;
}

std::vector<Complex> TransitionFactor::diag_at(std::span<const Complex> z) const {
    Complex r = z[beta] / z[alpha];
    std::vector<Complex> d;
    d.reserve(degrees.size());
    for (uint32_t dk : degrees) {
        Complex acc = 1;
        for (uint32_t k = 0; k < dk; ++k) acc *= r;
        d.push_back(acc);
    }
    return d;
}

std::string TransitionFactor::str() const {
    std::ostringstream os;
    os << "(z" << beta << "/z" << alpha << ")^" << det_degree;
    return os.str();
}

TransitionFactor transition_factor(int alpha, int beta, const std::vector<uint32_t>& degrees) {
    if (alpha == beta) throw std::invalid_argument("transition_factor: alpha == beta");
    TransitionFactor t;
    t.alpha = alpha;
    t.beta = beta;
    t.degrees = degrees;
    for (uint32_t d : degrees) t.det_degree += d;
    return t;
}

} // namespace hodgeci
