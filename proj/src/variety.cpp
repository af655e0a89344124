#include <hodgeci/variety.hpp>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace hodgeci {

std::vector<BaseGrid::Node> BaseGrid::nodes(size_t base_dim) const {
    std::vector<Node> out;
    if (base_dim == 0) {
        out.push_back({{}, 1.0});
        return out;
    }
    // one-dimensional node set for a single complex coordinate
    std::vector<std::pair<Complex, double>> one;
    const double du = u_max / radial;
    const double dv = 2.0 * M_PI / angular;
    for (int i = 0; i < radial; ++i) {
        double u = (i + 0.5) * du;
        double t = std::tan(u);
        double sec = 1.0 / std::cos(u);
        double jac = t * sec * sec; // r dr = tan sec^2 du
        for (int j = 0; j < angular; ++j) {
            double v = j * dv;
            one.push_back({Complex(t * std::cos(v), t * std::sin(v)), jac * du * dv});
        }
    }
    // product over base_dim coordinates
    out.push_back({{}, 1.0});
    for (size_t d = 0; d < base_dim; ++d) {
        std::vector<Node> next;
        next.reserve(out.size() * one.size());
        for (const auto& base : out)
            for (const auto& [pt, wgt] : one) {
                Node n = base;
                n.point.push_back(pt);
                n.weight *= wgt;
                next.push_back(std::move(n));
            }
        out = std::move(next);
    }
    return out;
}

Variety::Variety(size_t n, std::vector<HomogeneousPolynomial> polys)
    : n_(n), polys_(std::move(polys)) {
    if (polys_.empty() || polys_.size() > n_)
        throw std::invalid_argument("Variety: need 1 <= m <= n defining polynomials");
    for (const auto& P : polys_) {
        if (P.num_vars() != n_ + 1) throw std::invalid_argument("Variety: wrong variable count");
        if (P.poly.is_zero()) throw std::invalid_argument("Variety: zero defining polynomial");
        degrees_.push_back(P.degree);
        total_degree_ += P.degree;
    }
    const size_t m = polys_.size();
    charts_.resize(n_ + 1);
    charts_fast_.resize(n_ + 1);
    grads_fast_.resize(n_ + 1);
    cutoffs_.resize(n_ + 1);
    cutoffs_fast_.resize(n_ + 1);
    for (size_t a = 0; a <= n_; ++a) {
        for (size_t k = 0; k < m; ++k) {
            ChartPolynomial F = dehomogenize(polys_[k], static_cast<int>(a));
            charts_fast_[a].emplace_back(F.poly);
            for (size_t l = 0; l < n_; ++l)
                grads_fast_[a].emplace_back(F.poly.derivative(l));
            charts_[a].push_back(std::move(F));
        }
        // default cutoff g_alpha = w corresponding to z_{alpha+1 mod n+1}
        ChartPolynomial g;
        g.chart = static_cast<int>(a);
        g.poly = PolyMap(n_);
        size_t next = (a + 1) % (n_ + 1);
        // position of z_next among the chart coordinates of chart a
        size_t pos = next < a ? next : next - 1;
        MultiIndex e(n_);
        e[pos] = 1;
        g.poly.add_term(e, ComplexRational(1));
        cutoffs_fast_[a] = CompiledPoly(g.poly);
        cutoffs_[a] = std::move(g);
    }
}

void Variety::set_cutoff(int alpha, ChartPolynomial g) {
    if (g.num_vars() != n_) throw std::invalid_argument("set_cutoff: wrong variable count");
    cutoffs_fast_[alpha] = CompiledPoly(g.poly);
    cutoffs_[alpha] = std::move(g);
}

Complex Variety::cutoff_at(int alpha, std::span<const Complex> w) const {
    return cutoffs_fast_[alpha].eval(w);
}

Complex Variety::fiber_jacobian_det(int alpha, std::span<const Complex> w) const {
    const size_t m = polys_.size();
    Eigen::MatrixXcd A(m, m);
    for (size_t k = 0; k < m; ++k)
        for (size_t l = 0; l < m; ++l) A(k, l) = chart_grad_fast(alpha, k, l).eval(w);
    return A.determinant();
}

std::vector<std::vector<Complex>> Variety::graph_matrix(int alpha,
                                                        std::span<const Complex> w) const {
    const size_t m = polys_.size();
    const size_t b = n_ - m;
    Eigen::MatrixXcd A(m, m), B(m, b);
    for (size_t k = 0; k < m; ++k) {
        for (size_t l = 0; l < m; ++l) A(k, l) = chart_grad_fast(alpha, k, l).eval(w);
        for (size_t l = 0; l < b; ++l) B(k, l) = chart_grad_fast(alpha, k, m + l).eval(w);
    }
    Eigen::MatrixXcd T = -A.fullPivLu().solve(B);
    std::vector<std::vector<Complex>> out(m, std::vector<Complex>(b));
    for (size_t k = 0; k < m; ++k)
        for (size_t l = 0; l < b; ++l) out[k][l] = T(k, l);
    return out;
}

bool Variety::newton_polish(int alpha, std::span<const Complex> base,
                            std::span<const Complex> targets, std::vector<Complex>& fiber,
                            double tol, int iters) const {
    const size_t m = polys_.size();
    std::vector<Complex> w(n_);
    for (int it = 0; it < iters; ++it) {
        for (size_t i = 0; i < m; ++i) w[i] = fiber[i];
        for (size_t i = m; i < n_; ++i) w[i] = base[i - m];
        Eigen::VectorXcd r(m);
        double rn = 0;
        for (size_t k = 0; k < m; ++k) {
            r(k) = chart_poly_fast(alpha, k).eval(w) - targets[k];
            rn = std::max(rn, std::abs(r(k)));
        }
        if (rn < tol) return true;
        Eigen::MatrixXcd J(m, m);
        for (size_t k = 0; k < m; ++k)
            for (size_t l = 0; l < m; ++l) J(k, l) = chart_grad_fast(alpha, k, l).eval(w);
        Eigen::VectorXcd step = J.fullPivLu().solve(r);
        if (!step.allFinite()) return false;
        for (size_t l = 0; l < m; ++l) fiber[l] -= step(l);
    }
    // final residual check
    for (size_t i = 0; i < m; ++i) w[i] = fiber[i];
    for (size_t i = m; i < n_; ++i) w[i] = base[i - m];
    for (size_t k = 0; k < m; ++k)
        if (std::abs(chart_poly_fast(alpha, k).eval(w) - targets[k]) > tol) return false;
    return true;
}

namespace {

// Coefficients of F(w_1) as a univariate polynomial with the other chart
// coordinates frozen. rest[i] carries w_2..w_n (and any fixed fiber vars).
std::vector<Complex> univariate_coeffs(const PolyMap& F, std::span<const Complex> rest) {
    uint32_t dmax = 0;
    for (const auto& [m, c] : F.terms) dmax = std::max(dmax, m[0]);
    std::vector<Complex> coef(dmax + 1, Complex(0));
    for (const auto& [m, c] : F.terms) {
        Complex t = c.to_complex();
        for (size_t i = 1; i < F.num_vars; ++i)
            for (uint32_t e = 0; e < m[i]; ++e) t *= rest[i - 1];
        coef[m[0]] += t;
    }
    return coef;
}

std::vector<Complex> companion_roots(std::vector<Complex> coef) {
    // strip vanishing leading coefficients
    while (coef.size() > 1 && std::abs(coef.back()) < 1e-300) coef.pop_back();
    const size_t d = coef.size() - 1;
    std::vector<Complex> roots;
    if (d == 0) return roots;
    Eigen::MatrixXcd C = Eigen::MatrixXcd::Zero(d, d);
    for (size_t i = 0; i + 1 < d; ++i) C(i + 1, i) = 1.0;
    for (size_t i = 0; i < d; ++i) C(i, d - 1) = -coef[i] / coef[d];
    Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(C, false);
    for (size_t i = 0; i < d; ++i) roots.push_back(es.eigenvalues()(i));
    return roots;
}

} // namespace

std::vector<std::vector<Complex>> Variety::solve_fiber(
    int alpha, std::span<const Complex> base, std::span<const Complex> targets,
    const std::vector<std::vector<Complex>>* seeds) const {
    const size_t m = polys_.size();
    const double tol = 1e-12;
    std::vector<std::vector<Complex>> roots;

    if (seeds) {
        for (auto fiber : *seeds) {
            if (newton_polish(alpha, base, targets, fiber, tol, 30)) roots.push_back(fiber);
        }
        // seeds are trusted to cover all sheets (tube continuation)
        if (!roots.empty() && roots.size() == seeds->size()) return roots;
        roots.clear();
    }

    if (m == 1) {
        // univariate in w_1: F(w_1; base) - target
        std::vector<Complex> coef = univariate_coeffs(charts_[alpha][0].poly, base);
        if (coef.empty()) return roots;
        coef[0] -= targets[0];
        for (Complex r : companion_roots(coef)) {
            std::vector<Complex> fiber = {r};
            if (newton_polish(alpha, base, targets, fiber, tol, 40)) {
                bool dup = false;
                for (const auto& q : roots)
                    if (std::abs(q[0] - fiber[0]) < 1e-8) dup = true;
                if (!dup) roots.push_back(fiber);
            }
        }
    } else {
        // m >= 2: slice on w_m, solving the first m-1 equations as a fiber
        // subsystem of the (m-1)-codimension slice, then close with F_m.
        // Desk-scale varieties have low fiber degrees, so a coarse multistart
        // over companion roots of F_m along each branch is robust.
        // Special case first: all F_k linear in the fiber variables.
        bool linear = true;
        for (size_t k = 0; k < m && linear; ++k)
            for (const auto& [mi, c] : charts_[alpha][k].poly.terms) {
                uint32_t fdeg = 0;
                for (size_t l = 0; l < m; ++l) fdeg += mi[l];
                if (fdeg > 1) linear = false;
            }
        if (linear) {
            Eigen::MatrixXcd A(m, m);
            Eigen::VectorXcd b(m);
            std::vector<Complex> w0(n_, Complex(0));
            for (size_t i = m; i < n_; ++i) w0[i] = base[i - m];
            for (size_t k = 0; k < m; ++k) {
                b(k) = targets[k] - chart_poly_fast(alpha, k).eval(w0);
                for (size_t l = 0; l < m; ++l) A(k, l) = chart_grad_fast(alpha, k, l).eval(w0);
            }
            Eigen::VectorXcd x = A.fullPivLu().solve(b);
            std::vector<Complex> fiber(m);
            for (size_t l = 0; l < m; ++l) fiber[l] = x(l);
            if (newton_polish(alpha, base, targets, fiber, tol, 40)) roots.push_back(fiber);
            return roots;
        }
        // multistart Newton from a small deterministic seed lattice
        std::vector<Complex> seeds2;
        for (int a = -2; a <= 2; ++a)
            for (int b2 = -2; b2 <= 2; ++b2) seeds2.push_back(Complex(0.7 * a, 0.7 * b2));
        for (Complex s1 : seeds2)
            for (Complex s2 : seeds2) {
                std::vector<Complex> fiber(m, Complex(0));
                fiber[0] = s1;
                if (m > 1) fiber[1] = s2;
                if (!newton_polish(alpha, base, targets, fiber, tol, 60)) continue;
                bool dup = false;
                for (const auto& q : roots) {
                    double dd = 0;
                    for (size_t l = 0; l < m; ++l) dd += std::abs(q[l] - fiber[l]);
                    if (dd < 1e-8) dup = true;
                }
                if (!dup) roots.push_back(fiber);
            }
    }
    std::sort(roots.begin(), roots.end(), [](const auto& a, const auto& b) {
        for (size_t i = 0; i < a.size(); ++i) {
            if (a[i].real() != b[i].real()) return a[i].real() < b[i].real();
            if (a[i].imag() != b[i].imag()) return a[i].imag() < b[i].imag();
        }
        return false;
    });
    return roots;
}

std::vector<VarietySample> Variety::sample(int alpha, const BaseGrid& grid, SampleStats* stats,
                                           double discriminant_tol) const {
    const size_t m = polys_.size();
    std::vector<Complex> zero_targets(m, Complex(0));
    std::vector<VarietySample> out;
    SampleStats st;
    // scale for the discriminant guard: typical gradient magnitude
    double scale = 0;
    {
        std::vector<Complex> probe(n_, Complex(0.5, 0.25));
        for (size_t k = 0; k < m; ++k)
            for (size_t l = 0; l < m; ++l)
                scale = std::max(scale, std::abs(chart_grad_fast(alpha, k, l).eval(probe)));
        if (scale == 0) scale = 1;
    }
    for (const auto& node : grid.nodes(n_ - m)) {
        auto roots = solve_fiber(alpha, node.point, zero_targets);
        if (roots.empty()) continue;
        VarietySample s;
        s.chart = alpha;
        s.base_point = node.point;
        s.base_weight = node.weight;
        st.total_measure += node.weight;
        bool any_excluded = false;
        std::vector<Complex> w(n_);
        for (size_t i = m; i < n_; ++i) w[i] = node.point[i - m];
        for (size_t ri = 0; ri < roots.size(); ++ri) {
            for (size_t i = 0; i < m; ++i) w[i] = roots[ri][i];
            Complex J = fiber_jacobian_det(alpha, w);
            double res = 0;
            for (size_t k = 0; k < m; ++k)
                res = std::max(res, std::abs(chart_poly_fast(alpha, k).eval(w)));
            s.fiber_roots.push_back(roots[ri]);
            s.jacobian_dets.push_back(J);
            if (std::abs(J) < discriminant_tol * scale) {
                s.excluded_roots.push_back(static_cast<int>(ri));
                any_excluded = true;
                ++st.excluded_roots;
            } else {
                ++st.accepted_roots;
                st.max_residual = std::max(st.max_residual, res);
            }
        }
        if (any_excluded) st.excluded_measure += node.weight;
        out.push_back(std::move(s));
    }
    if (stats) *stats = st;
    return out;
}

bool Variety::reducedness_witness(int alpha, const std::vector<VarietySample>& samples,
                                  double tol) const {
    const size_t m = polys_.size();
    for (const auto& s : samples) {
        std::vector<Complex> w(n_);
        for (size_t i = m; i < n_; ++i) w[i] = s.base_point[i - m];
        for (size_t ri = 0; ri < s.fiber_roots.size(); ++ri) {
            if (std::find(s.excluded_roots.begin(), s.excluded_roots.end(), static_cast<int>(ri)) !=
                s.excluded_roots.end())
                continue;
            for (size_t i = 0; i < m; ++i) w[i] = s.fiber_roots[ri][i];
            Eigen::MatrixXcd J(m, n_);
            for (size_t k = 0; k < m; ++k)
                for (size_t l = 0; l < n_; ++l) J(k, l) = chart_grad_fast(alpha, k, l).eval(w);
            Eigen::JacobiSVD<Eigen::MatrixXcd> svd(J);
            if (svd.singularValues()(m - 1) < tol * svd.singularValues()(0))
                return false;
        }
    }
    return true;
}

bool Variety::cutoff_witness(int alpha, const std::vector<VarietySample>& samples, double small,
                             double tol) const {
    const size_t m = polys_.size();
    for (const auto& s : samples) {
        std::vector<Complex> w(n_);
        for (size_t i = m; i < n_; ++i) w[i] = s.base_point[i - m];
        for (size_t ri = 0; ri < s.fiber_roots.size(); ++ri) {
            for (size_t i = 0; i < m; ++i) w[i] = s.fiber_roots[ri][i];
            if (std::abs(cutoff_at(alpha, w)) > small) continue;
            Eigen::MatrixXcd J(m + 1, n_);
            for (size_t k = 0; k < m; ++k)
                for (size_t l = 0; l < n_; ++l) J(k, l) = chart_grad_fast(alpha, k, l).eval(w);
            PolyMap g = cutoffs_[alpha].poly;
            for (size_t l = 0; l < n_; ++l) J(m, l) = CompiledPoly(g.derivative(l)).eval(w);
            Eigen::JacobiSVD<Eigen::MatrixXcd> svd(J);
            if (svd.singularValues()(m) < tol * std::max(1.0, svd.singularValues()(0)))
                return false;
        }
    }
    return true;
}

std::vector<Complex> Variety::lift_to_sphere(int alpha, std::span<const Complex> w) const {
    double norm2 = 1.0;
    for (Complex wi : w) norm2 += std::norm(wi);
    double s = 1.0 / std::sqrt(norm2);
    std::vector<Complex> z(n_ + 1);
    size_t j = 0;
    for (size_t i = 0; i <= n_; ++i) {
        if (static_cast<int>(i) == alpha)
            z[i] = s;
        else
            z[i] = w[j++] * s;
    }
    return z;
}

std::vector<double> partition_of_unity(std::span<const Complex> z) {
    double n2 = 0;
    for (Complex zi : z) n2 += std::norm(zi);
    if (n2 == 0) throw std::invalid_argument("partition_of_unity: zero vector");
    std::vector<double> w(z.size());
    for (size_t i = 0; i < z.size(); ++i) w[i] = std::norm(z[i]) / n2;
    return w;
}

double partition_weight_in_chart(int beta, int alpha, std::span<const Complex> w) {
    double n2 = 1.0;
    for (Complex wi : w) n2 += std::norm(wi);
    if (beta == alpha) return 1.0 / n2;
    size_t pos = static_cast<size_t>(beta) < static_cast<size_t>(alpha) ? beta : beta - 1;
    return std::norm(w[pos]) / n2;
}

} // namespace hodgeci
