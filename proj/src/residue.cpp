#include <hodgeci/residue.hpp>

#include <hodgeci/parallel.hpp>

#include <Eigen/Dense>

#include <cmath>
#include <stdexcept>

namespace hodgeci {

std::vector<double> AdmissiblePath::at(double t) const {
    std::vector<double> eps(m);
    if (!admissible) {
        for (unsigned j = 0; j < m; ++j) eps[j] = t;
        return eps;
    }
    if (m == 1) {
        eps[0] = t;
        return eps;
    }
    for (unsigned j = 1; j <= m; ++j) eps[j - 1] = std::exp(-std::pow(t, -double(m - j + 1)));
    return eps;
}

bool AdmissiblePath::check_ratios(unsigned l_max, std::span<const double> ts) const {
    if (m < 2) return true;
    for (unsigned j = 0; j + 1 < m; ++j)
        for (unsigned l = 1; l <= l_max; ++l) {
            double prev = -1;
            for (size_t i = 0; i < ts.size(); ++i) {
                auto eps = at(ts[i]);
                double lr = std::log(eps[j]) - double(l) * std::log(eps[j + 1]);
                if (i > 0 && lr >= prev) return false; // must decrease toward -inf
                prev = lr;
            }
        }
    return true;
}

AdmissiblePath admissible_path(unsigned m) { return AdmissiblePath{m, true}; }

AdmissiblePath non_admissible_path(unsigned m, bool override_flag) {
    if (!override_flag)
        throw std::invalid_argument("non-admissible paths require the explicit override flag");
    return AdmissiblePath{m, false};
}

Complex richardson(std::span<const LadderEntry> ladder) {
    const size_t k = ladder.size();
    if (k == 0) return 0;
    std::vector<Complex> p(k);
    std::vector<double> x(k);
    for (size_t i = 0; i < k; ++i) {
        p[i] = ladder[i].value;
        x[i] = ladder[i].t;
    }
    // Neville to t = 0
    for (size_t lvl = 1; lvl < k; ++lvl)
        for (size_t i = 0; i + lvl < k; ++i)
            p[i] = p[i + 1] + (p[i + 1] - p[i]) * (x[i + lvl] / (x[i] - x[i + lvl]));
    return p[0];
}

ResidueReport make_report(std::vector<LadderEntry> ladder, double eta, double excluded) {
    ResidueReport r;
    r.ladder = std::move(ladder);
    r.extrapolated = richardson(r.ladder);
    r.value = r.extrapolated;
    if (!r.ladder.empty())
        r.error_estimate = std::abs(r.ladder.back().value - r.extrapolated);
    r.eta_used = eta;
    r.excluded_measure = excluded;
    return r;
}

WbarBasis::WbarBasis(size_t n_, unsigned q_) : n(n_), q(q_) {
    std::vector<uint8_t> cur;
    auto rec = [&](auto&& self, size_t start) -> void {
        if (cur.size() == q) {
            combos.push_back(cur);
            return;
        }
        for (size_t v = start; v < n; ++v) {
            cur.push_back(static_cast<uint8_t>(v));
            self(self, v + 1);
            cur.pop_back();
        }
    };
    if (q == 0)
        combos.push_back({});
    else
        rec(rec, 0);
}

int WbarBasis::index(std::span<const uint8_t> combo) const {
    for (size_t i = 0; i < combos.size(); ++i)
        if (combos[i].size() == combo.size() &&
            std::equal(combos[i].begin(), combos[i].end(), combo.begin()))
            return static_cast<int>(i);
    return -1;
}

TubeWeight unit_weight() {
    TubeWeight w;
    w.value = [](std::span<const Complex>) { return 1.0; };
    w.d_dw = [](std::span<const Complex> pt) {
        return std::vector<Complex>(pt.size(), Complex(0));
    };
    return w;
}

TubeWeight fs_weight(uint32_t degree) {
    TubeWeight w;
    double e = -0.5 * static_cast<double>(degree);
    w.value = [e](std::span<const Complex> pt) {
        double n2 = 1.0;
        for (Complex c : pt) n2 += std::norm(c);
        return std::pow(n2, e);
    };
    w.d_dw = [e](std::span<const Complex> pt) {
        double n2 = 1.0;
        for (Complex c : pt) n2 += std::norm(c);
        double f = e * std::pow(n2, e - 1.0);
        std::vector<Complex> d(pt.size());
        for (size_t j = 0; j < pt.size(); ++j) d[j] = f * std::conj(pt[j]);
        return d;
    };
    return w;
}

namespace {

// Solve {F_k(w) chi_k(w) = target_k} for the fiber block by real Newton.
// chi == nullptr means the plain holomorphic system.
bool solve_weighted(const Variety& V, int chart, std::span<const Complex> base,
                    std::span<const Complex> targets, const std::vector<TubeWeight>* chi,
                    std::vector<Complex>& fiber, double tol = 1e-12, int iters = 60) {
    const size_t m = V.m();
    const size_t n = V.n();
    std::vector<Complex> w(n);
    for (int it = 0; it < iters; ++it) {
        for (size_t i = 0; i < m; ++i) w[i] = fiber[i];
        for (size_t i = m; i < n; ++i) w[i] = base[i - m];
        Eigen::VectorXd r(2 * m);
        double rn = 0;
        std::vector<Complex> Fv(m), Cv(m, Complex(1));
        for (size_t k = 0; k < m; ++k) {
            Fv[k] = V.chart_poly_fast(chart, k).eval(w);
            if (chi) Cv[k] = (*chi)[k].value(w);
            Complex res = Fv[k] * Cv[k] - targets[k];
            r(2 * k) = res.real();
            r(2 * k + 1) = res.imag();
            rn = std::max(rn, std::abs(res));
        }
        if (rn < tol) return true;
        Eigen::MatrixXd J(2 * m, 2 * m);
        for (size_t k = 0; k < m; ++k) {
            std::vector<Complex> dchi;
            if (chi) dchi = (*chi)[k].d_dw(w);
            for (size_t l = 0; l < m; ++l) {
                Complex Hw = V.chart_grad_fast(chart, k, l).eval(w) * Cv[k];
                Complex Hwb = 0;
                if (chi) {
                    Hw += Fv[k] * dchi[l];
                    Hwb = Fv[k] * std::conj(dchi[l]); // chi real
                }
                Complex dx = Hw + Hwb;
                Complex dy = Complex(0, 1) * (Hw - Hwb);
                J(2 * k, 2 * l) = dx.real();
                J(2 * k + 1, 2 * l) = dx.imag();
                J(2 * k, 2 * l + 1) = dy.real();
                J(2 * k + 1, 2 * l + 1) = dy.imag();
            }
        }
        Eigen::VectorXd step = J.fullPivLu().solve(r);
        if (!step.allFinite()) return false;
        for (size_t l = 0; l < m; ++l) fiber[l] -= Complex(step(2 * l), step(2 * l + 1));
    }
    return false;
}

struct PhaseLattice {
    unsigned m;
    int nodes;
    size_t total;
    explicit PhaseLattice(unsigned m_, int nodes_) : m(m_), nodes(nodes_) {
        total = 1;
        for (unsigned k = 0; k < m; ++k) total *= static_cast<size_t>(nodes);
    }
    std::vector<double> thetas(size_t idx) const {
        std::vector<double> th(m);
        for (unsigned k = 0; k < m; ++k) {
            th[k] = 2.0 * M_PI * static_cast<double>(idx % nodes) / nodes;
            idx /= nodes;
        }
        return th;
    }
};

} // namespace

Complex tube_integrate(const Variety& V, int chart, const FiberedIntegrand& integrand,
                       std::span<const double> eps, const TubeConfig& cfg,
                       const std::vector<TubeWeight>* weights) {
    const size_t m = V.m();
    const size_t n = V.n();
    const size_t b = n - m;
    const size_t dim = 2 * n - m;
    const WbarBasis basis(n, static_cast<unsigned>(b));
    const PhaseLattice lattice(static_cast<unsigned>(m), cfg.phase_nodes);
    const double phase_weight = std::pow(2.0 * M_PI / cfg.phase_nodes, static_cast<double>(m));
    auto base_nodes = cfg.base.nodes(b);

    auto do_base_node = [&](size_t bi) -> Complex {
        const auto& bn = base_nodes[bi];
        Complex acc = 0;
        std::vector<std::vector<Complex>> seeds; // sheet continuation along phases
        std::vector<Complex> w(n), h(basis.size());
        for (size_t pi = 0; pi < lattice.total; ++pi) {
            auto th = lattice.thetas(pi);
            std::vector<Complex> targets(m);
            for (size_t k = 0; k < m; ++k) targets[k] = eps[k] * std::polar(1.0, th[k]);

            std::vector<std::vector<Complex>> roots;
            if (!weights) {
                roots = V.solve_fiber(chart, bn.point, targets, seeds.empty() ? nullptr : &seeds);
            } else {
                if (seeds.empty()) {
                    // bootstrap sheets from the unweighted solve at rescaled radii
                    std::vector<Complex> t0(m);
                    for (size_t k = 0; k < m; ++k) t0[k] = targets[k];
                    auto start = V.solve_fiber(chart, bn.point, t0);
                    for (auto& fb : start) {
                        if (solve_weighted(V, chart, bn.point, targets, weights, fb))
                            roots.push_back(fb);
                    }
                } else {
                    for (auto fb : seeds)
                        if (solve_weighted(V, chart, bn.point, targets, weights, fb))
                            roots.push_back(fb);
                }
            }
            if (!roots.empty()) seeds = roots;

            for (const auto& fiber : roots) {
                for (size_t i = 0; i < m; ++i) w[i] = fiber[i];
                for (size_t i = m; i < n; ++i) w[i] = bn.point[i - m];

                // tangents of the fiber block wrt (theta_k, x_l, y_l)
                Eigen::MatrixXcd A(m, m), B(m, b);
                std::vector<Complex> Fv(m), Cv(m, Complex(1));
                for (size_t k = 0; k < m; ++k) {
                    Fv[k] = V.chart_poly_fast(chart, k).eval(w);
                    if (weights) Cv[k] = (*weights)[k].value(w);
                    for (size_t l = 0; l < m; ++l)
                        A(k, l) = V.chart_grad_fast(chart, k, l).eval(w);
                    for (size_t l = 0; l < b; ++l)
                        B(k, l) = V.chart_grad_fast(chart, k, m + l).eval(w);
                }

                // d w_fiber / d u for u = theta_1..theta_m, x_1,y_1,..,x_b,y_b
                Eigen::MatrixXcd dwf(m, dim);
                if (!weights) {
                    Eigen::PartialPivLU<Eigen::MatrixXcd> lu(A);
                    for (size_t k = 0; k < m; ++k) {
                        Eigen::VectorXcd rhs = Eigen::VectorXcd::Zero(m);
                        rhs(k) = Complex(0, 1) * targets[k];
                        dwf.col(k) = lu.solve(rhs);
                    }
                    for (size_t l = 0; l < b; ++l) {
                        Eigen::VectorXcd sx = lu.solve(Eigen::VectorXcd(-B.col(l)));
                        dwf.col(m + 2 * l) = sx;
                        dwf.col(m + 2 * l + 1) = Complex(0, 1) * sx;
                    }
                } else {
                    // real linearization of H_k = F_k chi_k - target_k
                    Eigen::MatrixXd JR(2 * m, 2 * m);
                    std::vector<std::vector<Complex>> dchi(m);
                    for (size_t k = 0; k < m; ++k) dchi[k] = (*weights)[k].d_dw(w);
                    for (size_t k = 0; k < m; ++k)
                        for (size_t l = 0; l < m; ++l) {
                            Complex Hw = A(k, l) * Cv[k] + Fv[k] * dchi[k][l];
                            Complex Hwb = Fv[k] * std::conj(dchi[k][l]);
                            Complex dx = Hw + Hwb, dy = Complex(0, 1) * (Hw - Hwb);
                            JR(2 * k, 2 * l) = dx.real();
                            JR(2 * k + 1, 2 * l) = dx.imag();
                            JR(2 * k, 2 * l + 1) = dy.real();
                            JR(2 * k + 1, 2 * l + 1) = dy.imag();
                        }
                    Eigen::PartialPivLU<Eigen::MatrixXd> lu(JR);
                    auto solve_rhs = [&](const std::vector<Complex>& rhs) {
                        Eigen::VectorXd r(2 * m);
                        for (size_t k = 0; k < m; ++k) {
                            r(2 * k) = rhs[k].real();
                            r(2 * k + 1) = rhs[k].imag();
                        }
                        Eigen::VectorXd s = lu.solve(r);
                        Eigen::VectorXcd out(m);
                        for (size_t l = 0; l < m; ++l) out(l) = Complex(s(2 * l), s(2 * l + 1));
                        return out;
                    };
                    for (size_t k = 0; k < m; ++k) {
                        std::vector<Complex> rhs(m, Complex(0));
                        rhs[k] = Complex(0, 1) * targets[k]; // dH/dtheta_k = -i target
                        dwf.col(k) = solve_rhs(rhs);
                    }
                    for (size_t l = 0; l < b; ++l) {
                        std::vector<Complex> rx(m), ry(m);
                        for (size_t k = 0; k < m; ++k) {
                            Complex Hw = B(k, l) * Cv[k] + Fv[k] * dchi[k][m + l];
                            Complex Hwb = Fv[k] * std::conj(dchi[k][m + l]);
                            rx[k] = -(Hw + Hwb);
                            ry[k] = -(Complex(0, 1) * (Hw - Hwb));
                        }
                        dwf.col(m + 2 * l) = solve_rhs(rx);
                        dwf.col(m + 2 * l + 1) = solve_rhs(ry);
                    }
                    // note: dwf columns for weighted case solve J dw = rhs where
                    // rhs already carries the minus sign for base motions and
                    // +i target for phase motion (dH/dtheta moved to the rhs).
                }

                // full coordinate differentials on the tube tangent frame
                // rows: u index; cols: w_1..w_n then wbar_J
                const auto& combos = basis.combos;
                Eigen::MatrixXcd M(dim, dim);
                for (size_t u = 0; u < dim; ++u) {
                    for (size_t j = 0; j < n; ++j) {
                        Complex v;
                        if (j < m) {
                            v = dwf(j, u);
                        } else {
                            size_t l = j - m;
                            if (u == m + 2 * l)
                                v = 1;
                            else if (u == m + 2 * l + 1)
                                v = Complex(0, 1);
                            else
                                v = 0;
                        }
                        M(u, j) = v;
                    }
                }
                integrand(chart, w, h);
                Complex denom = 1;
                for (size_t k = 0; k < m; ++k) denom *= Fv[k];
                if (denom == Complex(0)) continue;
                Complex node_val = 0;
                for (size_t ci = 0; ci < combos.size(); ++ci) {
                    if (h[ci] == Complex(0)) continue;
                    for (size_t u = 0; u < dim; ++u)
                        for (size_t jj = 0; jj < combos[ci].size(); ++jj) {
                            size_t j = combos[ci][jj];
                            Complex v;
                            if (j < m)
                                v = std::conj(dwf(j, u));
                            else {
                                size_t l = j - m;
                                if (u == m + 2 * l)
                                    v = 1;
                                else if (u == m + 2 * l + 1)
                                    v = Complex(0, -1);
                                else
                                    v = 0;
                            }
                            M(u, n + jj) = v;
                        }
                    node_val += h[ci] * M.block(0, 0, dim, dim).determinant();
                }
                acc += node_val / denom;
            }
        }
        return acc * (phase_weight * bn.weight);
    };

    return ordered_parallel_sum(base_nodes.size(), cfg.workers, do_base_node);
}

ResidueReport tube_limit(const Variety& V, int chart, const FiberedIntegrand& integrand,
                         const AdmissiblePath& path, std::span<const double> ts,
                         const TubeConfig& cfg, const std::vector<TubeWeight>* weights) {
    std::vector<LadderEntry> ladder;
    for (double t : ts) {
        auto eps = path.at(t);
        ladder.push_back({t, tube_integrate(V, chart, integrand, eps, cfg, weights)});
    }
    return make_report(std::move(ladder), 0.0, 0.0);
}

// ---- fibered residues ----

namespace {

// Expand the restriction of dwbar_J to V: fiber differentials become
// conj(T) combinations of base differentials. Returns the coefficient of the
// full ascending base block dwbar_{m+1} ^ .. ^ dwbar_n.
Complex restriction_coefficient(std::span<const uint8_t> combo, size_t m, size_t b,
                                const std::vector<std::vector<Complex>>& Tconj) {
    // represent partial wedges as (bitmask over base slots) -> coefficient
    std::vector<std::pair<uint32_t, Complex>> cur = {{0u, Complex(1)}};
    for (uint8_t j : combo) {
        std::vector<std::pair<uint32_t, Complex>> next;
        for (const auto& [mask, coef] : cur) {
            auto add = [&](size_t slot, Complex c) {
                if (mask & (1u << slot)) return; // repeated generator
                // sign: count set bits below slot... generators appended in
                // wedge order; inserting ascending slot crosses the higher
                // slots already present
                int crossings = 0;
                for (size_t s = slot + 1; s < b; ++s)
                    if (mask & (1u << s)) ++crossings;
                Complex signed_c = (crossings % 2) ? -c : c;
                next.emplace_back(mask | (1u << slot), coef * signed_c);
            };
            if (j < m) {
                for (size_t l = 0; l < b; ++l) {
                    if (Tconj[j][l] != Complex(0)) add(l, Tconj[j][l]);
                }
            } else {
                add(j - m, Complex(1));
            }
        }
        // merge duplicates
        std::sort(next.begin(), next.end(),
                  [](const auto& a, const auto& bb) { return a.first < bb.first; });
        cur.clear();
        for (const auto& [mask, coef] : next) {
            if (!cur.empty() && cur.back().first == mask)
                cur.back().second += coef;
            else
                cur.emplace_back(mask, coef);
        }
    }
    uint32_t full = (b == 32) ? 0xffffffffu : ((1u << b) - 1u);
    for (const auto& [mask, coef] : cur)
        if (mask == full) return coef;
    return 0;
}

} // namespace

ResidueGrid make_residue_grid(const Variety& V, int chart, const BaseGrid& base,
                              double discriminant_tol) {
    const size_t m = V.m();
    const size_t n = V.n();
    const size_t b = n - m;
    ResidueGrid grid;
    grid.chart = chart;
    grid.n = n;
    grid.m = m;
    grid.basis = WbarBasis(n, static_cast<unsigned>(b));

    SampleStats stats;
    auto samples = V.sample(chart, base, &stats, discriminant_tol);
    grid.excluded_measure = stats.excluded_measure;
    grid.total_measure = stats.total_measure;

    for (const auto& s : samples) {
        for (size_t ri = 0; ri < s.fiber_roots.size(); ++ri) {
            if (std::find(s.excluded_roots.begin(), s.excluded_roots.end(), static_cast<int>(ri)) !=
                s.excluded_roots.end())
                continue;
            ResidueGrid::Root g;
            g.w.resize(n);
            for (size_t i = 0; i < m; ++i) g.w[i] = s.fiber_roots[ri][i];
            for (size_t i = m; i < n; ++i) g.w[i] = s.base_point[i - m];
            g.inv_jac = Complex(1) / s.jacobian_dets[ri];
            auto T = V.graph_matrix(chart, g.w);
            std::vector<std::vector<Complex>> Tc(m, std::vector<Complex>(b));
            for (size_t k = 0; k < m; ++k)
                for (size_t l = 0; l < b; ++l) Tc[k][l] = std::conj(T[k][l]);
            g.restrict_coeff.resize(grid.basis.size());
            for (size_t ci = 0; ci < grid.basis.size(); ++ci)
                g.restrict_coeff[ci] = restriction_coefficient(grid.basis.combos[ci], m, b, Tc);
            g.g_abs = std::abs(V.cutoff_at(chart, g.w));
            g.weight = s.base_weight;
            grid.roots.push_back(std::move(g));
        }
    }

    // measure factor: (2 pi i)^m from the fiber phases, (-2i)^{n-m} and the
    // block reorder sign from dw ^ dwbar -> dx dy on the base
    Complex measure = 1;
    for (size_t k = 0; k < m; ++k) measure *= Complex(0, 2.0 * M_PI);
    for (size_t l = 0; l < b; ++l) measure *= Complex(0, -2.0);
    if (((b * (b - 1)) / 2) % 2 == 1) measure = -measure;
    grid.measure_factor = measure;
    return grid;
}

Complex residue_eval(const ResidueGrid& grid, const FiberedIntegrand& integrand, double eta,
                     const std::function<bool(std::span<const Complex>)>& exclude, int workers) {
    auto term = [&](size_t i) -> Complex {
        const auto& g = grid.roots[i];
        if (g.g_abs <= eta) return 0;
        if (exclude && exclude(g.w)) return 0;
        std::vector<Complex> hh(grid.basis.size());
        integrand(grid.chart, g.w, hh);
        Complex acc = 0;
        for (size_t ci = 0; ci < grid.basis.size(); ++ci)
            if (hh[ci] != Complex(0)) acc += hh[ci] * g.restrict_coeff[ci];
        return acc * g.inv_jac * g.weight;
    };
    return ordered_parallel_sum(grid.roots.size(), workers, term) * grid.measure_factor;
}

ResidueReport fibered_residue(const Variety& V, int chart, const FiberedIntegrand& integrand,
                              const FiberedConfig& cfg) {
    auto grid = make_residue_grid(V, chart, cfg.base, cfg.discriminant_tol);
    std::vector<LadderEntry> ladder;
    if (cfg.eta > 0) {
        for (double eta = cfg.eta; eta > cfg.eta / 8.0; eta /= 2.0)
            ladder.push_back({eta, residue_eval(grid, integrand, eta, cfg.exclude, cfg.workers)});
    } else {
        ladder.push_back({1.0, residue_eval(grid, integrand, 0.0, cfg.exclude, cfg.workers)});
    }
    auto rep = make_report(std::move(ladder), cfg.eta, grid.excluded_measure);
    if (cfg.eta > 0 && !rep.ladder.empty()) {
        // eta ladder values are typically constant once eta excludes nothing;
        // report the last (smallest-eta) value, extrapolation kept for audit
        rep.value = rep.ladder.back().value;
    }
    return rep;
}

WeightedTubeComparison weighted_tube_equivalence(const Variety& V, int chart,
                                                 const FiberedIntegrand& integrand,
                                                 const std::vector<TubeWeight>& weights,
                                                 const AdmissiblePath& path,
                                                 std::span<const double> ts,
                                                 const TubeConfig& cfg) {
    WeightedTubeComparison out{
        tube_limit(V, chart, integrand, path, ts, cfg, &weights),
        tube_limit(V, chart, integrand, path, ts, cfg, nullptr),
        0.0,
    };
    out.difference = std::abs(out.weighted.value - out.unweighted.value);
    return out;
}

} // namespace hodgeci
