#include <hodgeci/kernels.hpp>

#include <cmath>

namespace hodgeci {

Complex eval_Bstar(std::span<const Complex> zeta, std::span<const Complex> z) {
    Complex acc = 0;
    for (size_t j = 0; j < z.size(); ++j) acc += std::conj(z[j]) * (zeta[j] - z[j]);
    return acc;
}

Complex eval_B(std::span<const Complex> zeta, std::span<const Complex> z) {
    Complex acc = 0;
    for (size_t j = 0; j < z.size(); ++j) acc += std::conj(zeta[j]) * (zeta[j] - z[j]);
    return acc;
}

namespace {

void det_rec(std::span<const KernelColumn> cols, size_t col, uint32_t used_rows, int perm_sign,
             Complex scalar_acc, FormKey key_acc, ExteriorForm& out) {
    const size_t nrows = cols[0].entries.size();
    if (scalar_acc == Complex(0)) return;
    if (col == cols.size()) {
        out.add_term(std::move(key_acc), scalar_acc * static_cast<double>(perm_sign));
        return;
    }
    const auto& c = cols[col];
    for (size_t row = 0; row < nrows; ++row) {
        if (used_rows & (1u << row)) continue;
        Complex e = c.entries[row];
        if (e == Complex(0)) continue;
        // sign of inserting `row` into the partial permutation
        int s = perm_sign;
        for (size_t r = row + 1; r < nrows; ++r)
            if (used_rows & (1u << r)) s = -s;
        FormKey key = key_acc;
        int merge_sign = 1;
        if (c.kind != KernelColumn::Kind::Scalar) {
            Family f = c.kind == KernelColumn::Kind::DZbar ? Family::DZBAR : Family::DZETABAR;
            FormKey g{{gen_id(f, static_cast<unsigned>(row))}};
            FormKey merged;
            if (!merge_keys(key, g, merged, merge_sign)) continue;
            key = std::move(merged);
        }
        det_rec(cols, col + 1, used_rows | (1u << row), s * merge_sign, scalar_acc * e,
                std::move(key), out);
    }
}

} // namespace

ExteriorForm bracket_det(std::span<const KernelColumn> cols) {
    if (cols.empty()) return ExteriorForm::scalar(1.0);
    const size_t nrows = cols[0].entries.size();
    if (cols.size() != nrows)
        throw std::invalid_argument("bracket_det: need exactly n+1 columns of length n+1");
    for (const auto& c : cols)
        if (c.entries.size() != nrows)
            throw std::invalid_argument("bracket_det: ragged columns");
    ExteriorForm out;
    det_rec(cols, 0, 0u, 1, Complex(1), FormKey{}, out);
    return out;
}

std::vector<Complex> CfSection::values() const {
    const size_t nv = z.size();
    Complex Bs = eval_Bstar(zeta, z);
    Complex B = eval_B(zeta, z);
    double a = 1.0 - lambda;
    for (double m : mu) a -= m;
    if (Bs == Complex(0) && a != 0) throw SingularKernelError("B*");
    if (B == Complex(0) && lambda != 0) throw SingularKernelError("B");
    std::vector<Complex> eta(nv, Complex(0));
    for (size_t j = 0; j < nv; ++j) {
        if (a != 0) eta[j] += a * std::conj(z[j]) / Bs;
        if (lambda != 0) eta[j] += lambda * std::conj(zeta[j]) / B;
    }
    for (size_t k = 0; k < mu.size(); ++k) {
        if (mu[k] == 0) continue;
        Complex dP = (*polys)[k].eval(zeta) - (*polys)[k].eval(z);
        if (dP == Complex(0)) throw SingularKernelError("P_k(zeta)-P_k(z)");
        for (size_t j = 0; j < nv; ++j)
            eta[j] += mu[k] * (*hefer)[k].coefficients[j].eval(zeta, z) / dP;
    }
    return eta;
}

std::vector<ExteriorForm> CfSection::differentials() const {
    const size_t nv = z.size();
    Complex Bs = eval_Bstar(zeta, z);
    Complex B = eval_B(zeta, z);
    double a = 1.0 - lambda;
    for (double m : mu) a -= m;

    std::vector<Complex> w(nv), c(nv);
    for (size_t j = 0; j < nv; ++j) {
        w[j] = std::conj(z[j]) / Bs;
        c[j] = std::conj(zeta[j]) / B;
    }
    std::vector<std::vector<Complex>> v(mu.size(), std::vector<Complex>(nv));
    for (size_t k = 0; k < mu.size(); ++k) {
        Complex dP = (*polys)[k].eval(zeta) - (*polys)[k].eval(z);
        for (size_t j = 0; j < nv; ++j)
            v[k][j] = (*hefer)[k].coefficients[j].eval(zeta, z) / dP;
    }

    std::vector<ExteriorForm> d(nv);
    for (size_t j = 0; j < nv; ++j) {
        ExteriorForm f;
        // chain parameters
        f += ExteriorForm::generator(Family::PARAM, 0, c[j] - w[j]); // dlambda
        for (size_t k = 0; k < mu.size(); ++k)
            f += ExteriorForm::generator(Family::PARAM, 1 + static_cast<unsigned>(k),
                                         v[k][j] - w[j]); // dmu_k
        // dzbar part of a * zbar_j/B*: dzbar_j/B* - zbar_j dB*/B*^2
        for (size_t l = 0; l < nv; ++l) {
            Complex coeff = 0;
            if (l == j) coeff += a / Bs;
            coeff -= a * std::conj(z[j]) * (zeta[l] - z[l]) / (Bs * Bs);
            f += ExteriorForm::generator(Family::DZBAR, static_cast<unsigned>(l), coeff);
        }
        // dzetabar part of lambda * zetabar_j/B
        for (size_t l = 0; l < nv; ++l) {
            Complex coeff = 0;
            if (l == j) coeff += lambda / B;
            coeff -= lambda * std::conj(zeta[j]) * (zeta[l] - z[l]) / (B * B);
            f += ExteriorForm::generator(Family::DZETABAR, static_cast<unsigned>(l), coeff);
        }
        d[j] = std::move(f);
    }
    return d;
}

std::vector<ExteriorForm> omega_prime_components(const CfSection& s) {
    const size_t nv = s.z.size();
    auto eta = s.values();
    auto deta = s.differentials();
    ExteriorForm total;
    for (size_t k = 0; k < nv; ++k) {
        if (eta[k] == Complex(0)) continue;
        ExteriorForm term = ExteriorForm::scalar(eta[k] * ((k % 2 == 0) ? -1.0 : 1.0));
        for (size_t j = 0; j < nv; ++j) {
            if (j == k) continue;
            term = wedge(term, deta[j]);
            if (term.coeff.empty()) break;
        }
        total += term;
    }
    // split by dzbar count
    std::vector<ExteriorForm> out(nv + 1);
    for (const auto& [key, cf] : total.coeff) {
        size_t q = 0;
        for (uint16_t id : key.ids)
            if (gen_family(id) == Family::DZBAR) ++q;
        out[q].add_term(key, cf);
    }
    return out;
}

double rho0(std::span<const Complex> w) {
    double n2 = 1.0;
    for (Complex wi : w) n2 += std::norm(wi);
    return 1.0 / std::sqrt(n2);
}

std::vector<Complex> sphere_lift(int alpha, std::span<const Complex> w, double phi) {
    Complex ph = std::polar(rho0(w), phi);
    std::vector<Complex> zeta(w.size() + 1);
    size_t j = 0;
    for (size_t i = 0; i < zeta.size(); ++i)
        zeta[i] = (static_cast<int>(i) == alpha) ? ph : ph * w[j++];
    return zeta;
}

Complex zbar_dot_aug(int alpha, std::span<const Complex> z, std::span<const Complex> w) {
    Complex acc = std::conj(z[alpha]);
    size_t j = 0;
    for (size_t i = 0; i < z.size(); ++i) {
        if (static_cast<int>(i) == alpha) continue;
        acc += std::conj(z[i]) * w[j++];
    }
    return acc;
}

std::vector<std::vector<Complex>> sphere_conj_to_chart(int alpha, std::span<const Complex> w) {
    const size_t n = w.size();
    double r = rho0(w);
    double r3 = r * r * r;
    std::vector<std::vector<Complex>> R(n + 1, std::vector<Complex>(n, Complex(0)));
    // zbar_alpha = rho0, zbar_(chart j) = wbar_j rho0
    for (size_t l = 0; l < n; ++l) R[alpha][l] = -0.5 * w[l] * r3;
    size_t j = 0;
    for (size_t i = 0; i <= n; ++i) {
        if (static_cast<int>(i) == alpha) continue;
        for (size_t l = 0; l < n; ++l) {
            Complex c = -0.5 * std::conj(w[j]) * w[l] * r3;
            if (l == j) c += r;
            R[i][l] = c;
        }
        ++j;
    }
    return R;
}

std::vector<std::vector<Complex>> tube_conj_to_chart(int alpha, std::span<const Complex> w,
                                                     double phi) {
    const size_t n = w.size();
    double r = rho0(w);
    double r3 = r * r * r;
    Complex phc = std::polar(1.0, -phi);
    std::vector<std::vector<Complex>> R(n + 1, std::vector<Complex>(n, Complex(0)));
    // dzetabar_alpha -> e^{-i phi} (d rho0)|dwbar = e^{-i phi} sum_l (-w_l/2) rho0^3 dwbar_l
    for (size_t l = 0; l < n; ++l) R[alpha][l] = phc * (-0.5) * w[l] * r3;
    size_t j = 0;
    for (size_t i = 0; i <= n; ++i) {
        if (static_cast<int>(i) == alpha) continue;
        // zetabar_i = zetabar_alpha wbar_j: dzetabar_i = wbar_j dzetabar_alpha + zetabar_alpha dwbar_j
        for (size_t l = 0; l < n; ++l) {
            Complex c = std::conj(w[j]) * R[alpha][l];
            if (l == j) c += std::conj(std::polar(r, phi));
            R[i][l] = c;
        }
        ++j;
    }
    return R;
}

Complex omega_prime_euler(std::span<const Complex> zeta,
                          const std::vector<std::vector<Complex>>& tangents) {
    const size_t np1 = zeta.size();
    const size_t n = np1 - 1;
    if (tangents.size() != n) throw std::invalid_argument("omega_prime_euler: need n tangents");
    // omega'(zeta) applied to n tangent vectors: sum_i (-1)^i zeta_i det(T without row i)
    Complex acc = 0;
    std::vector<std::vector<Complex>> minor(n, std::vector<Complex>(n));
    for (size_t skip = 0; skip < np1; ++skip) {
        for (size_t t = 0; t < n; ++t) {
            size_t col = 0;
            for (size_t i = 0; i < np1; ++i) {
                if (i == skip) continue;
                minor[t][col++] = tangents[t][i];
            }
        }
        // Laplace by the small size at hand (n <= 4)
        std::function<Complex(std::vector<std::vector<Complex>>&, std::vector<int>&, size_t)> dd =
            [&](std::vector<std::vector<Complex>>& M, std::vector<int>& cols, size_t row) -> Complex {
            if (cols.empty()) return 1.0;
            Complex s = 0;
            for (size_t pick = 0; pick < cols.size(); ++pick) {
                int c = cols[pick];
                cols.erase(cols.begin() + pick);
                Complex sub = dd(M, cols, row + 1);
                cols.insert(cols.begin() + pick, c);
                Complex term = M[row][c] * sub;
                if (pick % 2 == 1) term = -term;
                s += term;
            }
            return s;
        };
        std::vector<int> cols(n);
        for (size_t i = 0; i < n; ++i) cols[i] = static_cast<int>(i);
        Complex det = dd(minor, cols, 0);
        Complex term = zeta[skip] * det;
        if (skip % 2 == 1) term = -term;
        acc += term;
    }
    return acc;
}

} // namespace hodgeci
