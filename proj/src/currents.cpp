#include <hodgeci/currents.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace hodgeci {

namespace {

// lift an n-variable polynomial in w into the 2n (w, wbar) variable space
PolyMap lift_holomorphic(const PolyMap& p) {
    PolyMap out(2 * p.num_vars);
    for (const auto& [m, c] : p.terms) {
        MultiIndex e(2 * p.num_vars);
        for (size_t i = 0; i < p.num_vars; ++i) e[i] = m[i];
        out.add_term(e, c);
    }
    return out;
}

} // namespace

ResidualCurrent ResidualCurrent::scaled(const ComplexRational& c) const {
    ResidualCurrent r = *this;
    for (auto& f : r.charts) f = f.scaled(c);
    r.kind = "custom";
    return r;
}

ResidualCurrent ResidualCurrent::operator+(const ResidualCurrent& o) const {
    if (q != o.q || charts.size() != o.charts.size())
        throw std::invalid_argument("ResidualCurrent: shape mismatch");
    ResidualCurrent r = *this;
    for (size_t a = 0; a < charts.size(); ++a) r.charts[a] = r.charts[a] + o.charts[a];
    r.name = name + "+" + o.name;
    r.kind = "custom";
    return r;
}

DualizingSection make_dualizing_section(const Variety& V, const HomogeneousPolynomial& h) {
    const uint32_t d = V.total_degree();
    if (d < V.n() + 1)
        throw std::invalid_argument("make_dualizing_section: no sections, deg P - n - 1 < 0");
    if (h.degree != d - V.n() - 1)
        throw std::invalid_argument("make_dualizing_section: h must have degree d-n-1");
    DualizingSection s;
    s.h = h;
    for (size_t a = 0; a <= V.n(); ++a) {
        auto ch = dehomogenize(h, static_cast<int>(a));
        s.fast.emplace_back(ch.poly);
        s.chart_h.push_back(std::move(ch));
    }
    return s;
}

size_t dualizing_dimension(const Variety& V) {
    const uint32_t d = V.total_degree();
    if (d < V.n() + 1) return 0;
    return monomials_of_degree(V.n() + 1, d - V.n() - 1).size();
}

std::vector<DualizingSection> dualizing_basis(const Variety& V) {
    std::vector<DualizingSection> basis;
    const uint32_t d = V.total_degree();
    if (d < V.n() + 1) return basis;
    for (const auto& mono : monomials_of_degree(V.n() + 1, d - V.n() - 1)) {
        HomogeneousPolynomial h(V.n() + 1, d - V.n() - 1);
        h.add_term(mono, ComplexRational(1));
        auto s = make_dualizing_section(V, h);
        std::string nm = "h=";
        for (size_t i = 0; i < mono.size(); ++i)
            for (uint32_t e = 0; e < mono[i]; ++e) nm += "z" + std::to_string(i);
        if (h.degree == 0) nm = "h=1";
        s.name = nm;
        basis.push_back(std::move(s));
    }
    return basis;
}

ResidualCurrent make_exact_current(const Variety& V, const PolyMap& psi_num, unsigned s) {
    const size_t np1 = V.n() + 1;
    if (psi_num.num_vars != 2 * np1)
        throw std::invalid_argument("make_exact_current: psi must be a polynomial in (z, zbar)");
    for (const auto& [m, c] : psi_num.terms) {
        uint32_t dz = 0, dzb = 0;
        for (size_t i = 0; i < np1; ++i) {
            dz += m[i];
            dzb += m[np1 + i];
        }
        if (dz != s || dzb != s)
            throw std::invalid_argument(
                "make_exact_current: psi terms must have bidegree (s,s) against |z|^{2s}");
    }
    ResidualCurrent out;
    out.q = 1;
    out.kind = "exact";
    out.name = "dbar(psi)";
    for (size_t a = 0; a <= V.n(); ++a) {
        // substitute z_a = zbar_a = 1, relabel the rest as chart variables
        PolyMap chart_num(2 * V.n());
        for (const auto& [m, c] : psi_num.terms) {
            MultiIndex e(2 * V.n());
            size_t j = 0;
            for (size_t i = 0; i < np1; ++i) {
                if (i == a) continue;
                e[j] = m[i];
                e[V.n() + j] = m[np1 + i];
                ++j;
            }
            chart_num.add_term(e, c);
        }
        ChartForm psi(V.n(), 0);
        psi.add({}, ChartCoeff::from_poly(std::move(chart_num), s));
        out.charts.push_back(psi.dbar());
    }
    // the shipped currents are (0,1); general q would be psi-form dbar
    if (V.dim() != out.q)
        out.q = 1; // bidegree (0,1); pairing will enforce q == n-m where required
    return out;
}

namespace {

// Split P = sum_c f_c z_c^k monomialwise, k = ceil(d/3) (n = 2 only).
std::vector<PolyMap> cocycle_split(const HomogeneousPolynomial& P, unsigned k) {
    std::vector<PolyMap> f(3, PolyMap(3));
    for (const auto& [m, c] : P.poly.terms) {
        size_t best = 0;
        for (size_t i = 1; i < 3; ++i)
            if (m[i] > m[best]) best = i;
        if (m[best] < k)
            throw std::logic_error("cocycle_split: monomial exponent below k");
        MultiIndex e = m;
        e[best] -= k;
        f[best].add_term(e, c);
    }
    return f;
}

} // namespace

ResidualCurrent make_antiholomorphic(const Variety& V, const HomogeneousPolynomial* multiplier) {
    if (V.n() != 2 || V.m() != 1)
        throw std::invalid_argument("make_antiholomorphic: plane curves only (n=2, m=1)");
    const uint32_t d = V.total_degree();
    const unsigned k = (d + 2) / 3; // ceil(d/3)
    const unsigned mult_deg = 3 * k - d;

    HomogeneousPolynomial mult(3, mult_deg);
    if (multiplier) {
        if (multiplier->degree != mult_deg)
            throw std::invalid_argument("make_antiholomorphic: multiplier degree must be 3k-d");
        mult = *multiplier;
    } else {
        MultiIndex e(3);
        e[0] = mult_deg;
        mult.add_term(e, ComplexRational(1));
    }

    auto f = cocycle_split(V.polys()[0], k);
    // cocycle table: c_01 = +f_2 m/(z0 z1)^k, c_12 = +f_0 m/(z1 z2)^k, c_20 = +f_1 m/(z2 z0)^k
    auto cocycle_sign = [](int a, int b, int& c_index) -> int {
        static const int table[3][3] = {{9, 2, 1}, {2, 9, 0}, {1, 0, 9}};
        c_index = table[a][b];
        if ((a == 0 && b == 1) || (a == 1 && b == 2) || (a == 2 && b == 0)) return 1;
        return -1;
    };

    ResidualCurrent out;
    out.q = 1;
    out.kind = "antiholomorphic";
    out.name = multiplier ? "cech[m]" : "cech";
    const size_t n = 2;
    for (int a = 0; a < 3; ++a) {
        // S = sum_b |z_b|^{2k} in chart-a coordinates (z_a = 1)
        PolyMap S(2 * n);
        S.add_term(MultiIndex(2 * n), ComplexRational(1));
        for (size_t pos = 0; pos < n; ++pos) {
            MultiIndex e(2 * n);
            e[pos] = k;
            e[n + pos] = k;
            S.add_term(e, ComplexRational(1));
        }
        PolyMap S2 = S * S;

        ChartForm phi(n, 1);
        for (int g = 0; g < 3; ++g) {
            if (g == a) continue;
            int ci;
            int sgn = cocycle_sign(a, g, ci);
            // (f_ci * mult)(z)|_{z_a=1} as a chart polynomial in w
            PolyMap fm_h = f[ci] * mult.poly;
            PolyMap fm(n);
            for (const auto& [m, c] : fm_h.terms) {
                MultiIndex e(n);
                size_t j = 0;
                for (size_t i = 0; i < 3; ++i) {
                    if (static_cast<int>(i) == a) continue;
                    e[j++] = m[i];
                }
                fm.add_term(e, c);
            }
            PolyMap fm_lift = lift_holomorphic(fm);
            size_t gpos = static_cast<size_t>(g < a ? g : g - 1);
            for (size_t l = 0; l < n; ++l) {
                // k * [delta_{g,l} wbar_g^{k-1} S - wbar_g^k w_l^k wbar_l^{k-1}] * f m / S^2
                PolyMap numl(2 * n);
                if (gpos == l) {
                    MultiIndex e(2 * n);
                    e[n + gpos] = k - 1;
                    PolyMap t(2 * n);
                    t.add_term(e, ComplexRational(static_cast<long>(k)));
                    numl += t * S;
                }
                {
                    MultiIndex e(2 * n);
                    e[n + gpos] += k;
                    e[l] += k;
                    e[n + l] += k - 1;
                    PolyMap t(2 * n);
                    t.add_term(e, ComplexRational(-static_cast<long>(k)));
                    numl += t;
                }
                numl = numl * fm_lift;
                if (numl.is_zero()) continue;
                numl = numl.scaled(ComplexRational(BigRational(3 * sgn, 2)));
                phi.add({static_cast<uint8_t>(l)}, ChartCoeff::rational(std::move(numl), S2));
            }
        }
        out.charts.push_back(std::move(phi));
    }
    return out;
}

std::vector<ResidualCurrent> antiholomorphic_family(const Variety& V) {
    const uint32_t d = V.total_degree();
    const unsigned k = (d + 2) / 3;
    const unsigned mult_deg = 3 * k - d;
    std::vector<ResidualCurrent> fam;
    for (const auto& mono : monomials_of_degree(3, mult_deg)) {
        HomogeneousPolynomial m(3, mult_deg);
        m.add_term(mono, ComplexRational(1));
        auto cur = make_antiholomorphic(V, &m);
        cur.name = "cech[";
        for (size_t i = 0; i < 3; ++i)
            for (uint32_t e = 0; e < mono[i]; ++e) cur.name += "z" + std::to_string(i);
        cur.name += "]";
        fam.push_back(std::move(cur));
    }
    return fam;
}

ResidualCurrent make_ideal_current(const Variety& V, size_t k, const PolyMap& psi_num,
                                   unsigned s) {
    auto base = make_exact_current(V, psi_num, s);
    ResidualCurrent out;
    out.q = base.q;
    out.kind = "ideal";
    out.name = "F*dbar(psi)";
    for (size_t a = 0; a <= V.n(); ++a) {
        PolyMap F = lift_holomorphic(V.chart_poly(static_cast<int>(a), k).poly);
        ChartForm f(V.n(), base.q);
        for (const auto& [idx, c] : base.charts[a].comps) f.add(idx, c.mul_poly(F));
        out.charts.push_back(std::move(f));
    }
    return out;
}

ClosednessReport check_closed(const Variety& V, const ResidualCurrent& phi, const BaseGrid& grid,
                              double tol) {
    ClosednessReport rep;
    std::vector<ChartForm> dphi;
    bool all_zero = true;
    for (const auto& f : phi.charts) {
        dphi.push_back(f.dbar());
        if (!dphi.back().is_zero()) all_zero = false;
    }
    rep.exactly_zero = all_zero;
    if (all_zero) {
        rep.residual = 0;
        rep.closed = true;
        return rep;
    }

    const WbarBasis basis(V.n(), phi.q + 1);
    std::vector<Complex> comps;
    double on_v = 0, ambient = 0;
    // least-squares ideal fit data over near-V samples
    std::vector<std::vector<Complex>> lsq_rows;
    std::vector<std::vector<Complex>> lsq_rhs(basis.size());
    auto monos = monomials_up_to_degree(2 * V.n(), 4);

    for (size_t a = 0; a <= V.n(); ++a) {
        auto samples = V.sample(static_cast<int>(a), grid);
        size_t count = 0;
        for (const auto& smp : samples) {
            for (size_t ri = 0; ri < smp.fiber_roots.size(); ++ri) {
                if (++count % 7 != 0) continue; // thin the grid, checks only need coverage
                std::vector<Complex> w(V.n());
                for (size_t i = 0; i < V.m(); ++i) w[i] = smp.fiber_roots[ri][i];
                for (size_t i = V.m(); i < V.n(); ++i) w[i] = smp.base_point[i - V.m()];
                if (rho0(w) < 0.2) continue;
                dphi[a].eval_components(w, basis, comps);
                for (Complex c : comps) on_v = std::max(on_v, std::abs(c));
                // ambient point near V
                std::vector<Complex> wa = w;
                wa[0] += Complex(0.13, 0.07);
                dphi[a].eval_components(wa, basis, comps);
                for (Complex c : comps) ambient = std::max(ambient, std::abs(c));
                if (a == 0 && lsq_rows.size() < 400) {
                    std::vector<Complex> row;
                    std::vector<Complex> pt(2 * V.n());
                    for (size_t j = 0; j < V.n(); ++j) {
                        pt[j] = wa[j];
                        pt[V.n() + j] = std::conj(wa[j]);
                    }
                    for (size_t kk = 0; kk < V.m(); ++kk) {
                        Complex F = V.chart_poly_fast(0, kk).eval(wa);
                        for (const auto& mono : monos) {
                            Complex t = F;
                            for (size_t j = 0; j < 2 * V.n(); ++j)
                                for (uint32_t e = 0; e < mono[j]; ++e) t *= pt[j];
                            row.push_back(t);
                        }
                    }
                    lsq_rows.push_back(std::move(row));
                    for (size_t ci = 0; ci < basis.size(); ++ci)
                        lsq_rhs[ci].push_back(comps[ci]);
                }
            }
        }
    }
    rep.scale = ambient;
    rep.residual = ambient > 0 ? on_v / ambient : 0.0;
    rep.closed = rep.residual <= tol;

    if (!lsq_rows.empty()) {
        Eigen::MatrixXcd A(lsq_rows.size(), lsq_rows[0].size());
        for (size_t i = 0; i < lsq_rows.size(); ++i)
            for (size_t j = 0; j < lsq_rows[i].size(); ++j) A(i, j) = lsq_rows[i][j];
        double worst = 0;
        for (size_t ci = 0; ci < basis.size(); ++ci) {
            Eigen::VectorXcd b(lsq_rhs[ci].size());
            for (size_t i = 0; i < lsq_rhs[ci].size(); ++i) b(i) = lsq_rhs[ci][i];
            if (b.norm() == 0) continue;
            Eigen::VectorXcd x = A.colPivHouseholderQr().solve(b);
            worst = std::max(worst, (A * x - b).norm() / b.norm());
        }
        rep.lsq_residual = worst;
    }
    return rep;
}

CompatibilityReport check_compatibility(const Variety& V, const ResidualCurrent& phi,
                                        const BaseGrid& grid, double tol) {
    CompatibilityReport rep;
    const WbarBasis basis(V.n(), phi.q);
    std::vector<Complex> ca, cb;
    double scale = 0, worst = 0;
    for (int a = 0; a < static_cast<int>(phi.charts.size()); ++a) {
        auto samples = V.sample(a, grid);
        size_t count = 0;
        for (const auto& smp : samples) {
            for (size_t ri = 0; ri < smp.fiber_roots.size(); ++ri) {
                if (++count % 11 != 0) continue;
                std::vector<Complex> w(V.n());
                for (size_t i = 0; i < V.m(); ++i) w[i] = smp.fiber_roots[ri][i];
                for (size_t i = V.m(); i < V.n(); ++i) w[i] = smp.base_point[i - V.m()];
                phi.charts[a].eval_components(w, basis, ca);
                for (Complex c : ca) scale = std::max(scale, std::abs(c));
                for (int b = 0; b < static_cast<int>(phi.charts.size()); ++b) {
                    if (b == a) continue;
                    // overlap guard: the chart-b coordinate must be moderate
                    size_t pos = static_cast<size_t>(b < a ? b : b - 1);
                    double r = std::abs(w[pos]);
                    if (r < 0.2 || r > 5.0) continue;
                    pushforward_components(phi.charts[b], b, a, w, basis, cb);
                    for (size_t ci = 0; ci < basis.size(); ++ci)
                        worst = std::max(worst, std::abs(ca[ci] - cb[ci]));
                }
            }
        }
    }
    rep.max_residual = scale > 0 ? worst / scale : worst;
    rep.compatible = rep.max_residual <= tol;
    return rep;
}

ResidueReport pair_current(const Variety& V, const ResidualCurrent& phi,
                           const DualizingSection& gamma, const FiberedConfig& cfg) {
    if (phi.q != V.dim())
        throw std::invalid_argument("pair_current: bidegree mismatch, need q = n-m");
    const WbarBasis basis(V.n(), phi.q);
    ResidueReport total;
    bool first = true;
    for (int a = 0; a <= static_cast<int>(V.n()); ++a) {
        const ChartForm& f = phi.charts[a];
        const CompiledPoly& h = gamma.fast[a];
        FiberedIntegrand integrand = [&, a](int, std::span<const Complex> w,
                                            std::vector<Complex>& out) {
            f.eval_components(w, basis, out);
            Complex weight = h.eval(w) * partition_weight_in_chart(a, a, w);
            for (auto& c : out) c *= weight;
        };
        auto rep = fibered_residue(V, a, integrand, cfg);
        if (first) {
            total = rep;
            first = false;
        } else {
            total.value += rep.value;
            total.extrapolated += rep.extrapolated;
            total.error_estimate += rep.error_estimate;
            total.excluded_measure += rep.excluded_measure;
            for (size_t i = 0; i < total.ladder.size() && i < rep.ladder.size(); ++i)
                total.ladder[i].value += rep.ladder[i].value;
        }
    }
    return total;
}

Complex pair_current_oracle(const Variety& V, const ResidualCurrent& phi,
                            const DualizingSection& gamma, const BaseGrid& grid) {
    if (V.n() != 2 || V.m() != 1)
        throw std::invalid_argument("pair_current_oracle: plane curves only");
    // swapped parametrization: base = w_1, fiber = w_2
    Complex total = 0;
    for (int a = 0; a < 3; ++a) {
        Complex acc = 0;
        for (const auto& node : grid.nodes(1)) {
            Complex w1 = node.point[0];
            // roots of F(w1, w2) = 0 in w2: direct companion matrix in w2
            uint32_t dmax = 0;
            for (const auto& [m, c] : V.chart_poly(a, 0).poly.terms) dmax = std::max(dmax, m[1]);
            std::vector<Complex> coef(dmax + 1, Complex(0));
            for (const auto& [m, c] : V.chart_poly(a, 0).poly.terms) {
                Complex t = c.to_complex();
                for (uint32_t e = 0; e < m[0]; ++e) t *= w1;
                coef[m[1]] += t;
            }
            while (coef.size() > 1 && std::abs(coef.back()) < 1e-250) coef.pop_back();
            if (coef.size() < 2) continue;
            const size_t deg = coef.size() - 1;
            Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(deg, deg);
            for (size_t i = 0; i + 1 < deg; ++i) C(i + 1, i) = 1.0;
            for (size_t i = 0; i < deg; ++i) C(i, deg - 1) = -coef[i] / coef[deg];
            Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(C, false);
            for (size_t ri = 0; ri < deg; ++ri) {
                Complex w2 = es.eigenvalues()(ri);
                // Newton polish on F(w1, w2) = 0 in w2
                std::vector<Complex> w = {w1, w2};
                for (int it = 0; it < 30; ++it) {
                    Complex Fv = V.chart_poly_fast(a, 0).eval(w);
                    Complex dF = V.chart_grad_fast(a, 0, 1).eval(w);
                    if (std::abs(Fv) < 1e-12) break;
                    if (dF == Complex(0)) break;
                    w[1] -= Fv / dF;
                }
                if (std::abs(V.chart_poly_fast(a, 0).eval(w)) > 1e-9) continue;
                Complex F1 = V.chart_grad_fast(a, 0, 0).eval(w);
                Complex F2 = V.chart_grad_fast(a, 0, 1).eval(w);
                if (std::abs(F2) < 1e-8) continue;
                const WbarBasis basis(2, 1);
                std::vector<Complex> comps;
                phi.charts[a].eval_components(w, basis, comps);
                // restriction with fiber w_2 over base w_1:
                // dw_1^dw_2^dwbar_J -> -(2 pi i)[h_1 + h_2 conj(-F1/F2)]/F2 dw_1^dwbar_1
                Complex restr = comps[0] + comps[1] * std::conj(-F1 / F2);
                double th = partition_weight_in_chart(a, a, w);
                Complex hv = gamma.fast[a].eval(w);
                acc += -th * hv * restr / F2 * node.weight;
            }
        }
        // measure: (2 pi i) * (-2i) from dw_1 ^ dwbar_1 = -2i dx dy
        total += acc * Complex(0, 2.0 * M_PI) * Complex(0, -2.0);
    }
    return total;
}

} // namespace hodgeci
