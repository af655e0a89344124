#include <hodgeci/constants.hpp>

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>
#include <stdexcept>

namespace hodgeci {

namespace {

BigRational factorial(unsigned n) {
    BigRational r = 1;
    for (unsigned i = 2; i <= n; ++i) r *= i;
    return r;
}

} // namespace

BigRational simplex_moment(std::span<const unsigned> alpha, unsigned beta, unsigned p) {
    unsigned s = 0;
    BigRational num = factorial(beta);
    for (unsigned a : alpha) {
        num *= factorial(a);
        s += a;
    }
    return num / factorial(beta + s + p);
}

BigRational binomial(unsigned n, unsigned k) {
    if (k > n) return 0;
    return factorial(n) / (factorial(k) * factorial(n - k));
}

Complex ExactScalar::numeric() const {
    double p = std::pow(2.0 * M_PI, two_pi_power);
    return value.to_complex() * p;
}

// ---------------------------------------------------------------------------
// Formal expansion engine.
//
// The Cauchy-Fantappie section is a combination of abstract scalar columns
//   W_j  (zbar_j / B*),  C_j  (zetabar_j / B),  V_{k,j}  (Q_k^j / (P_k-P_k)),
// row differentials
//   DZ_j (dzbar_j / B*), DC_j (dzetabar_j / B),
// and the two correction 1-forms
//   S (-dB*/B*, paired with W), T (-dB/B, paired with C)
// coming from d(zbar_j/B*) = DZ_j + W_j S and d(zetabar_j/B) = DC_j + C_j T.
// omega'(eta) = -det[eta, d eta, ..., d eta] / n!; the engine expands the
// determinant with polynomial coefficients in (lambda, mu), integrates the
// chain parameters over the simplex, verifies that every S/T term cancels and
// that the result is an exact multiple of the canonical bracket.
// ---------------------------------------------------------------------------

namespace {

// odd generator ids, canonical order
constexpr uint16_t GEN_DLAMBDA = 0;
constexpr uint16_t GEN_DMU = 1;    // dmu_k = GEN_DMU + k - 1
constexpr uint16_t GEN_DZ = 40;    // dzbar row j = GEN_DZ + j
constexpr uint16_t GEN_DC = 80;    // dzetabar row j = GEN_DC + j
constexpr uint16_t GEN_S = 120;
constexpr uint16_t GEN_T = 121;

// scalar symbols
constexpr uint8_t SYM_W = 0;
constexpr uint8_t SYM_C = 1;
constexpr uint8_t SYM_V = 2; // V_k = SYM_V + k - 1

using Mono = std::vector<uint8_t>; // exponents of (lambda, mu_1..mu_m)
using FormalPoly = std::map<Mono, BigRational>;

void poly_add(FormalPoly& p, const Mono& m, const BigRational& c) {
    if (c == 0) return;
    auto it = p.find(m);
    if (it == p.end())
        p.emplace(m, c);
    else {
        it->second += c;
        if (it->second == 0) p.erase(it);
    }
}

FormalPoly poly_mul(const FormalPoly& a, const FormalPoly& b) {
    FormalPoly r;
    for (const auto& [ma, ca] : a)
        for (const auto& [mb, cb] : b) {
            Mono m(ma.size());
            for (size_t i = 0; i < m.size(); ++i) m[i] = ma[i] + mb[i];
            poly_add(r, m, ca * cb);
        }
    return r;
}

struct TermKey {
    std::vector<uint16_t> odd;               // sorted generator ids
    std::vector<std::pair<uint8_t, uint8_t>> scal; // sorted (symbol,row)
    friend bool operator<(const TermKey& a, const TermKey& b) {
        if (a.odd != b.odd) return a.odd < b.odd;
        return a.scal < b.scal;
    }
};

using FormalSum = std::map<TermKey, FormalPoly>;

// One selectable piece of a column entry.
struct Option {
    FormalPoly coeff;            // polynomial in (lambda, mu)
    int scalar_sym = -1;         // symbol evaluated at the chosen row, or -1
    int odd_fixed = -1;          // fixed odd generator (dlambda/dmu/S/T), or -1
    int odd_row_base = -1;       // row-indexed odd generator base (GEN_DZ/GEN_DC), or -1
};

struct Column {
    std::vector<Option> options;
};

// Insert odd generator into sorted list; false if repeated.
bool odd_insert(std::vector<uint16_t>& odd, uint16_t g, int& sign) {
    size_t pos = 0;
    while (pos < odd.size() && odd[pos] < g) ++pos;
    if (pos < odd.size() && odd[pos] == g) return false;
    // crossing the generators to the right of pos... we append g after the
    // existing list conceptually, so it crosses (size-pos) of them
    if ((odd.size() - pos) % 2 == 1) sign = -sign;
    odd.insert(odd.begin() + pos, g);
    return true;
}

void expand_rec(const std::vector<Column>& cols, size_t col, uint32_t used, int perm_sign,
                const FormalPoly& coeff, const TermKey& key, size_t nrows, FormalSum& out) {
    if (col == cols.size()) {
        TermKey k = key;
        std::sort(k.scal.begin(), k.scal.end());
        for (const auto& [m, c] : coeff) {
            FormalPoly add;
            poly_add(add, m, c * perm_sign);
            for (const auto& [mm, cc] : add) poly_add(out[k], mm, cc);
        }
        return;
    }
    for (size_t row = 0; row < nrows; ++row) {
        if (used & (1u << row)) continue;
        int s0 = perm_sign;
        for (size_t r = row + 1; r < nrows; ++r)
            if (used & (1u << r)) s0 = -s0;
        for (const auto& opt : cols[col].options) {
            int s = s0;
            TermKey k = key;
            if (opt.scalar_sym >= 0)
                k.scal.emplace_back(static_cast<uint8_t>(opt.scalar_sym),
                                    static_cast<uint8_t>(row));
            bool ok = true;
            if (opt.odd_fixed >= 0)
                ok = odd_insert(k.odd, static_cast<uint16_t>(opt.odd_fixed), s);
            if (ok && opt.odd_row_base >= 0)
                ok = odd_insert(k.odd, static_cast<uint16_t>(opt.odd_row_base + row), s);
            if (!ok) continue;
            // scalar symbols repeated on two columns with identical rows are
            // fine (they cancel via the determinant only columnwise); exact
            // duplicate (symbol,row) pairs cannot cancel and are kept; the
            // determinant antisymmetry is realized through perm_sign over rows.
            FormalPoly c2 = poly_mul(coeff, opt.coeff);
            if (c2.empty()) continue;
            expand_rec(cols, col + 1, used | (1u << row), s, c2, k, nrows, out);
        }
    }
}

FormalSum expand_det(const std::vector<Column>& cols) {
    FormalSum out;
    FormalPoly one;
    poly_add(one, Mono(0), 1); // monomial size fixed later; use empty==const
    // Mono length consistency: use the length found in options
    size_t mono_len = 0;
    for (const auto& c : cols)
        for (const auto& o : c.options)
            if (!o.coeff.empty()) mono_len = std::max(mono_len, o.coeff.begin()->first.size());
    FormalPoly unit;
    poly_add(unit, Mono(mono_len), 1);
    expand_rec(cols, 0, 0u, 1, unit, TermKey{}, cols.size(), out);
    return out;
}

// polynomial in (lambda, mu) for a*(=1-lambda-sum mu) powers etc.
struct PolyBuilder {
    size_t mono_len; // 1 + m
    FormalPoly constant(const BigRational& c) const {
        FormalPoly p;
        poly_add(p, Mono(mono_len), c);
        return p;
    }
    FormalPoly lambda() const {
        FormalPoly p;
        Mono m(mono_len);
        m[0] = 1;
        poly_add(p, m, 1);
        return p;
    }
    FormalPoly mu(unsigned k) const { // 1-based
        FormalPoly p;
        Mono m(mono_len);
        m[k] = 1;
        poly_add(p, m, 1);
        return p;
    }
    FormalPoly a(bool with_lambda, unsigned mcount) const {
        FormalPoly p = constant(1);
        FormalPoly neg;
        if (with_lambda) {
            Mono m(mono_len);
            m[0] = 1;
            poly_add(neg, m, -1);
        }
        for (unsigned k = 1; k <= mcount; ++k) {
            Mono m(mono_len);
            m[k] = 1;
            poly_add(neg, m, -1);
        }
        for (const auto& [m, c] : neg) poly_add(p, m, c);
        return p;
    }
};

// Integrate the chain parameters of a dlambda/dmu-complete term over the
// simplex; p = number of parameters.
BigRational integrate_simplex(const FormalPoly& poly, unsigned nparams) {
    BigRational acc = 0;
    for (const auto& [m, c] : poly) {
        unsigned s = 0;
        BigRational num = 1;
        for (uint8_t e : m) {
            num *= factorial(e);
            s += e;
        }
        acc += c * num / factorial(s + nparams);
    }
    return acc;
}

struct EngineSetup {
    unsigned n, m, q;
    bool with_lambda;   // I/K kernels carry the lambda leg
    bool with_hefer;    // L/I kernels carry the mu legs
    unsigned dz_count, dc_count;
};

// Build eta and d(eta) columns, expand, integrate, and match against the
// canonical bracket. Returns the exact proportionality constant.
BigRational engine_constant(const EngineSetup& su) {
    const unsigned nrows = su.n + 1;
    PolyBuilder pb{1 + su.m};

    Column eta;
    eta.options.push_back({pb.a(su.with_lambda, su.with_hefer ? su.m : 0), SYM_W, -1, -1});
    if (su.with_lambda) eta.options.push_back({pb.lambda(), SYM_C, -1, -1});
    if (su.with_hefer)
        for (unsigned k = 1; k <= su.m; ++k)
            eta.options.push_back({pb.mu(k), static_cast<int>(SYM_V + k - 1), -1, -1});

    Column deta;
    if (su.with_lambda) {
        deta.options.push_back({pb.constant(-1), SYM_W, GEN_DLAMBDA, -1});
        deta.options.push_back({pb.constant(1), SYM_C, GEN_DLAMBDA, -1});
    }
    if (su.with_hefer)
        for (unsigned k = 1; k <= su.m; ++k) {
            deta.options.push_back({pb.constant(-1), SYM_W, GEN_DMU + static_cast<int>(k) - 1, -1});
            deta.options.push_back(
                {pb.constant(1), static_cast<int>(SYM_V + k - 1), GEN_DMU + static_cast<int>(k) - 1, -1});
        }
    FormalPoly a_poly = pb.a(su.with_lambda, su.with_hefer ? su.m : 0);
    deta.options.push_back({a_poly, -1, -1, GEN_DZ});
    deta.options.push_back({a_poly, SYM_W, GEN_S, -1});
    if (su.with_lambda) {
        deta.options.push_back({pb.lambda(), -1, -1, GEN_DC});
        deta.options.push_back({pb.lambda(), SYM_C, GEN_T, -1});
    }

    std::vector<Column> cols(nrows, deta);
    cols[0] = eta;
    FormalSum sum = expand_det(cols);

    // Collect the chain-complete component and verify the S/T cancellation.
    const unsigned nparams = (su.with_lambda ? 1 : 0) + (su.with_hefer ? su.m : 0);
    std::map<TermKey, BigRational> reduced;
    for (const auto& [key, poly] : sum) {
        bool complete = true;
        if (su.with_lambda && !std::binary_search(key.odd.begin(), key.odd.end(), GEN_DLAMBDA))
            complete = false;
        if (su.with_hefer)
            for (unsigned k = 1; k <= su.m && complete; ++k)
                if (!std::binary_search(key.odd.begin(), key.odd.end(),
                                        static_cast<uint16_t>(GEN_DMU + k - 1)))
                    complete = false;
        if (!complete) continue; // lower-dimensional in the chain parameters
        unsigned dz = 0, dc = 0;
        bool has_st = false;
        for (uint16_t g : key.odd) {
            if (g >= GEN_S) has_st = true;
            else if (g >= GEN_DC) ++dc;
            else if (g >= GEN_DZ) ++dz;
        }
        BigRational val = integrate_simplex(poly, nparams);
        if (val == 0) continue;
        if (has_st)
            throw std::logic_error("constants engine: dB correction terms failed to cancel");
        if (dz != su.dz_count || dc != su.dc_count) continue; // other bidegree components
        TermKey k2 = key;
        // strip the chain generators (they are the smallest ids: front block)
        k2.odd.erase(k2.odd.begin(), k2.odd.begin() + nparams);
        reduced[k2] += val;
    }

    // canonical bracket expansion
    Column cw, cc;
    cw.options.push_back({pb.constant(1), SYM_W, -1, -1});
    cc.options.push_back({pb.constant(1), SYM_C, -1, -1});
    Column cdz, cdc;
    cdz.options.push_back({pb.constant(1), -1, -1, GEN_DZ});
    cdc.options.push_back({pb.constant(1), -1, -1, GEN_DC});
    std::vector<Column> canon;
    canon.push_back(cw);
    if (su.with_lambda) canon.push_back(cc);
    if (su.with_hefer)
        for (unsigned k = 1; k <= su.m; ++k) {
            Column cv;
            cv.options.push_back({pb.constant(1), static_cast<int>(SYM_V + k - 1), -1, -1});
            canon.push_back(cv);
        }
    for (unsigned i = 0; i < su.dz_count; ++i) canon.push_back(cdz);
    for (unsigned i = 0; i < su.dc_count; ++i) canon.push_back(cdc);
    if (canon.size() != nrows) throw std::logic_error("constants engine: column count mismatch");
    FormalSum canon_sum = expand_det(canon);

    std::map<TermKey, BigRational> canon_red;
    for (const auto& [key, poly] : canon_sum) {
        BigRational c = 0;
        for (const auto& [m, v] : poly) c += v;
        if (c != 0) canon_red[key] += c;
    }

    // exact proportionality
    BigRational k;
    bool have = false;
    for (const auto& [key, v] : canon_red) {
        auto it = reduced.find(key);
        BigRational lhs = (it == reduced.end()) ? BigRational(0) : it->second;
        if (v == 0) continue;
        BigRational ratio = lhs / v;
        if (!have) {
            k = ratio;
            have = true;
        } else if (ratio != k) {
            throw std::logic_error("constants engine: result not proportional to the bracket");
        }
    }
    for (const auto& [key, v] : reduced)
        if (v != 0 && canon_red.find(key) == canon_red.end())
            throw std::logic_error("constants engine: stray term outside the bracket span");
    if (!have) throw std::logic_error("constants engine: empty bracket");
    return k;
}

ComplexRational i_power(int p) {
    p = ((p % 4) + 4) % 4;
    switch (p) {
        case 0: return ComplexRational(1);
        case 1: return ComplexRational(0, 1);
        case 2: return ComplexRational(-1);
        default: return ComplexRational(0, -1);
    }
}

} // namespace

BigRational weil_mu_constant(unsigned n, unsigned m) {
    EngineSetup su{n, m, n - m, /*with_lambda=*/false, /*with_hefer=*/true,
                   /*dz=*/n - m, /*dc=*/0};
    return engine_constant(su);
}

BigRational cwl_lambda_mu_constant(unsigned n, unsigned m, unsigned q) {
    if (q < 1 || q > n - m) throw std::invalid_argument("cwl constant: q out of range");
    EngineSetup su{n, m, q, true, true, q - 1, n - m - q};
    return engine_constant(su);
}

BigRational bm_lambda_constant(unsigned n, unsigned q) {
    if (q + 1 > n) throw std::invalid_argument("bm constant: q out of range");
    EngineSetup su{n, 0, q, true, false, q, n - 1 - q};
    return engine_constant(su);
}

BigRational series_coefficient(unsigned q, unsigned r) { return binomial(q + r, q); }

OperatorConstant projector_constant(unsigned n, unsigned m, unsigned d, unsigned r) {
    OperatorConstant out;
    if (d <= n || r > d - n - 1) {
        out.structural_zero = true;
        out.provenance.push_back("index range empty: r <= d-n-1 fails (Lemma ZeroIntegrals regime)");
        return out;
    }
    unsigned q = n - m;
    BigRational kmu = weil_mu_constant(n, m);
    BigRational cr = series_coefficient(q, r);
    int sign = ((m + q + 1) % 2 == 0) ? 1 : -1; // (-1)^{m-1} * (-1 from omega'=-det/n!) * (-1)^{q+1}
    ComplexRational val = ComplexRational(BigRational(sign) * kmu * cr) / i_power(static_cast<int>(n + 1));
    out.scalar.value = val;
    out.scalar.two_pi_power = -static_cast<int>(n + 1);
    std::ostringstream p;
    out.provenance.push_back("L operator sign (-1)^{|J|-1} with |J|=m=" + std::to_string(m));
    out.provenance.push_back("omega' = -det[eta,d eta,..]/n! ; n! cancels the global n!/(2 pi i)^{n+1}");
    p << "mu-simplex bracket constant k = " << kmu.str() << " (formal engine, Dirichlet moments)";
    out.provenance.push_back(p.str());
    out.provenance.push_back("(B*)^{-(q+1)} = (-1)^{q+1}(1-<zbar.zeta>)^{-(q+1)}, series c_r = binom(q+r,q) = " + cr.str());
    out.provenance.push_back("global factor 1/(2 pi i)^{n+1}");
    out.provenance.push_back("residue factors i * (2 pi i)^m applied by the phase integral and Res_V quadrature");
    return out;
}

OperatorConstant solver_constant(unsigned n, unsigned q, unsigned m) {
    OperatorConstant out;
    BigRational k = cwl_lambda_mu_constant(n, m, q);
    ComplexRational val = ComplexRational(-k) / i_power(static_cast<int>(n + 1));
    out.scalar.value = val;
    out.scalar.two_pi_power = -static_cast<int>(n + 1);
    out.provenance.push_back("I operator (Gamma_J chain term), J = (1..m)");
    out.provenance.push_back("omega' = -det[eta,d eta,..]/n! ; n! cancels the global n!/(2 pi i)^{n+1}");
    out.provenance.push_back("(lambda,mu)-simplex bracket constant k = " + k.str());
    out.provenance.push_back("global factor 1/(2 pi i)^{n+1}");
    out.provenance.push_back("residue factors i * (2 pi i)^m applied by the phase integral and Res_V quadrature");
    return out;
}

OperatorConstant bm_constant(unsigned n, unsigned q) {
    OperatorConstant out;
    BigRational k = bm_lambda_constant(n, q);
    // K_q carries the leading minus of the Koppelman formula
    ComplexRational val = ComplexRational(k) / i_power(static_cast<int>(n + 1));
    out.scalar.value = val;
    out.scalar.two_pi_power = -static_cast<int>(n + 1);
    out.provenance.push_back("K operator: -n!/(2 pi i)^{n+1} with omega' = -det/n!");
    out.provenance.push_back("lambda-interval bracket constant k = " + k.str());
    return out;
}

} // namespace hodgeci
