#include <hodgeci/hefer.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fs = std::filesystem;

namespace hodgeci {

void BihomogeneousPolynomial::add_term(const MultiIndex& zeta_exp, const MultiIndex& z_exp,
                                       const ComplexRational& c) {
    if (zeta_exp.size() != num_vars || z_exp.size() != num_vars)
        throw std::invalid_argument("BihomogeneousPolynomial: exponent length mismatch");
    if (zeta_exp.degree() + z_exp.degree() != joint_degree)
        throw std::invalid_argument("BihomogeneousPolynomial: joint degree violated");
    poly.add_term(zeta_exp.concat(z_exp), c);
}

Complex BihomogeneousPolynomial::eval(std::span<const Complex> zeta,
                                      std::span<const Complex> z) const {
    if (zeta.size() != num_vars || z.size() != num_vars)
        throw std::invalid_argument("BihomogeneousPolynomial: point length mismatch");
    std::vector<Complex> pt(zeta.begin(), zeta.end());
    pt.insert(pt.end(), z.begin(), z.end());
    return poly.eval(pt);
}

ComplexRational BihomogeneousPolynomial::eval_exact(std::span<const ComplexRational> zeta,
                                                    std::span<const ComplexRational> z) const {
    std::vector<ComplexRational> pt(zeta.begin(), zeta.end());
    pt.insert(pt.end(), z.begin(), z.end());
    return poly.eval_exact(pt);
}

BihomogeneousPolynomial& BihomogeneousPolynomial::operator+=(const BihomogeneousPolynomial& o) {
    if (num_vars != o.num_vars || joint_degree != o.joint_degree)
        throw std::invalid_argument("BihomogeneousPolynomial: shape mismatch");
    poly += o.poly;
    return *this;
}

BihomogeneousPolynomial BihomogeneousPolynomial::scaled(const ComplexRational& c) const {
    BihomogeneousPolynomial r = *this;
    r.poly = poly.scaled(c);
    return r;
}

std::vector<PolyMap> BihomogeneousPolynomial::zeta_degree_slices() const {
    std::vector<PolyMap> slices(joint_degree + 1, PolyMap(2 * num_vars));
    for (const auto& [m, c] : poly.terms) {
        uint32_t a = 0;
        for (size_t i = 0; i < num_vars; ++i) a += m[i];
        slices[a].add_term(m, c);
    }
    return slices;
}

namespace {

// zeta^d - z^d = (zeta - z) * sum_{j<d} zeta^{d-1-j} z^j in variable `var`.
BihomogeneousPolynomial one_variable_q(size_t nv, size_t var, uint32_t d) {
    BihomogeneousPolynomial Q(nv, d - 1);
    for (uint32_t j = 0; j < d; ++j) {
        MultiIndex ze(nv), zz(nv);
        ze[var] = d - 1 - j;
        zz[var] = j;
        Q.add_term(ze, zz, ComplexRational(1));
    }
    return Q;
}

// Hefer coefficients of a single monic monomial, by induction on the set of
// variables that actually occur.
std::vector<BihomogeneousPolynomial> monomial_coeffs(size_t nv, const MultiIndex& m) {
    const uint32_t d = m.degree();
    std::vector<BihomogeneousPolynomial> Q(nv, BihomogeneousPolynomial(nv, d ? d - 1 : 0));
    if (d == 0) return Q;

    size_t lead = 0;
    while (m[lead] == 0) ++lead;
    const uint32_t d0 = m[lead];

    // tail = monomial with the lead variable removed
    MultiIndex tail = m;
    tail[lead] = 0;
    const uint32_t dt = tail.degree();

    // Q^lead = (sum_j zeta_lead^{d0-1-j} z_lead^j) * zeta^tail
    {
        BihomogeneousPolynomial lead_q = one_variable_q(nv, lead, d0);
        for (const auto& [me, c] : lead_q.poly.terms) {
            MultiIndex ze(nv), zz(nv);
            for (size_t i = 0; i < nv; ++i) {
                ze[i] = me[i] + tail[i];
                zz[i] = me[nv + i];
            }
            Q[lead].add_term(ze, zz, c);
        }
    }
    if (dt == 0) return Q;

    // Q^i = z_lead^{d0} * q^i for the tail's coefficients
    auto q = monomial_coeffs(nv, tail);
    for (size_t i = 0; i < nv; ++i) {
        for (const auto& [me, c] : q[i].poly.terms) {
            MultiIndex ze(nv), zz(nv);
            for (size_t j = 0; j < nv; ++j) {
                ze[j] = me[j];
                zz[j] = me[nv + j];
            }
            zz[lead] += d0;
            Q[i].add_term(ze, zz, c);
        }
    }
    return Q;
}

} // namespace

HeferDecomposition hefer_monomial(size_t num_vars, const MultiIndex& monomial,
                                  const ComplexRational& coefficient) {
    HeferDecomposition dec;
    dec.source = HomogeneousPolynomial(num_vars, monomial.degree());
    dec.source.add_term(monomial, coefficient);
    dec.coefficients = monomial_coeffs(num_vars, monomial);
    for (auto& Q : dec.coefficients) Q = Q.scaled(coefficient);
    return dec;
}

HeferDecomposition hefer_decompose(const HomogeneousPolynomial& P) {
    const size_t nv = P.num_vars();
    HeferDecomposition dec;
    dec.source = P;
    dec.coefficients.assign(nv, BihomogeneousPolynomial(nv, P.degree ? P.degree - 1 : 0));
    for (const auto& [m, c] : P.poly.terms) {
        auto piece = monomial_coeffs(nv, m);
        for (size_t i = 0; i < nv; ++i) dec.coefficients[i] += piece[i].scaled(c);
    }
    return dec;
}

PolyMap hefer_residual(const HeferDecomposition& dec) {
    const size_t nv = dec.source.num_vars();
    PolyMap r(2 * nv);
    // P(zeta) - P(z)
    for (const auto& [m, c] : dec.source.poly.terms) {
        MultiIndex ze(2 * nv), zz(2 * nv);
        for (size_t i = 0; i < nv; ++i) {
            ze[i] = m[i];
            zz[nv + i] = m[i];
        }
        r.add_term(ze, c);
        r.add_term(zz, -c);
    }
    // - sum Q^i (zeta_i - z_i)
    for (size_t i = 0; i < nv; ++i) {
        for (const auto& [m, c] : dec.coefficients[i].poly.terms) {
            MultiIndex a = m, b = m;
            a[i] += 1;
            b[nv + i] += 1;
            r.add_term(a, -c);
            r.add_term(b, c);
        }
    }
    return r;
}

bool hefer_bihomogeneous(const HeferDecomposition& dec) {
    const uint32_t d = dec.source.degree;
    for (const auto& Q : dec.coefficients) {
        if (!Q.is_zero() && Q.joint_degree != d - 1) return false;
        for (const auto& [m, c] : Q.poly.terms)
            if (m.degree() != d - 1) return false;
    }
    return true;
}

Complex eval_hefer(const BihomogeneousPolynomial& Q, std::span<const Complex> zeta,
                   std::span<const Complex> z) {
    return Q.eval(zeta, z);
}

// -------- serialization / cache --------

namespace {
constexpr const char* kCacheVersion = "hefer-cache v1";

void write_polymap(std::ostream& os, const PolyMap& p) {
    os << p.num_vars << ' ' << p.terms.size() << '\n';
    for (const auto& [m, c] : p.terms) {
        for (size_t i = 0; i < p.num_vars; ++i) os << m[i] << ' ';
        os << rational_str(c.re) << ' ' << rational_str(c.im) << '\n';
    }
}

PolyMap read_polymap(std::istream& is) {
    size_t nv, nt;
    if (!(is >> nv >> nt)) throw std::runtime_error("hefer cache: truncated record");
    PolyMap p(nv);
    for (size_t t = 0; t < nt; ++t) {
        MultiIndex m(nv);
        for (size_t i = 0; i < nv; ++i) is >> m[i];
        std::string re, im;
        is >> re >> im;
        p.add_term(m, ComplexRational(rational_parse(re), rational_parse(im)));
    }
    return p;
}
} // namespace

std::string serialize_hefer(const HeferDecomposition& dec) {
    std::ostringstream os;
    os << kCacheVersion << '\n';
    os << dec.source.num_vars() << ' ' << dec.source.degree << '\n';
    write_polymap(os, dec.source.poly);
    os << dec.coefficients.size() << '\n';
    for (const auto& Q : dec.coefficients) {
        os << Q.num_vars << ' ' << Q.joint_degree << '\n';
        write_polymap(os, Q.poly);
    }
    return os.str();
}

HeferDecomposition deserialize_hefer(const std::string& text) {
    std::istringstream is(text);
    std::string header;
    std::getline(is, header);
    if (header != kCacheVersion) throw std::runtime_error("hefer cache: bad version header");
    size_t nv;
    uint32_t d;
    is >> nv >> d;
    HeferDecomposition dec;
    dec.source = HomogeneousPolynomial(nv, d);
    dec.source.poly = read_polymap(is);
    size_t nq;
    is >> nq;
    for (size_t i = 0; i < nq; ++i) {
        size_t qnv;
        uint32_t jd;
        is >> qnv >> jd;
        BihomogeneousPolynomial Q(qnv, jd);
        Q.poly = read_polymap(is);
        dec.coefficients.push_back(std::move(Q));
    }
    return dec;
}

uint64_t poly_content_hash(const HomogeneousPolynomial& P) {
    // FNV-1a over the canonical text form
    std::ostringstream os;
    os << P.num_vars() << '|' << P.degree << '|';
    for (const auto& [m, c] : P.poly.terms) {
        for (size_t i = 0; i < P.num_vars(); ++i) os << m[i] << ',';
        os << rational_str(c.re) << ',' << rational_str(c.im) << ';';
    }
    uint64_t h = 0xcbf29ce484222325ull;
    for (char ch : os.str()) {
        h ^= static_cast<unsigned char>(ch);
        h *= 0x100000001b3ull;
    }
    return h;
}

std::string HeferCache::default_dir() {
    if (const char* env = std::getenv("HODGECI_CACHE_DIR")) return env;
    return ".hodgeci-cache";
}

std::optional<HeferDecomposition> HeferCache::load(const HomogeneousPolynomial& P) const {
    std::ostringstream name;
    name << dir_ << "/hefer-" << std::hex << poly_content_hash(P) << ".rec";
    std::ifstream f(name.str());
    if (!f) return std::nullopt;
    std::stringstream buf;
    buf << f.rdbuf();
    try {
        auto dec = deserialize_hefer(buf.str());
        if (!(dec.source == P)) return std::nullopt; // hash collision or stale record
        return dec;
    } catch (const std::exception&) {
        return std::nullopt;
    }
}

void HeferCache::store(const HeferDecomposition& dec) const {
    fs::create_directories(dir_);
    std::ostringstream name;
    name << dir_ << "/hefer-" << std::hex << poly_content_hash(dec.source) << ".rec";
    std::ofstream f(name.str());
    f << serialize_hefer(dec);
}

HeferDecomposition HeferCache::decompose_cached(const HomogeneousPolynomial& P) const {
    if (auto hit = load(P)) return *hit;
    auto dec = hefer_decompose(P);
    store(dec);
    return dec;
}

std::vector<std::string> HeferCache::list() const {
    std::vector<std::string> out;
    if (!fs::exists(dir_)) return out;
    for (const auto& e : fs::directory_iterator(dir_))
        if (e.path().extension() == ".rec") out.push_back(e.path().filename().string());
    std::sort(out.begin(), out.end());
    return out;
}

size_t HeferCache::clear() const {
    size_t n = 0;
    if (!fs::exists(dir_)) return 0;
    for (const auto& e : fs::directory_iterator(dir_))
        if (e.path().extension() == ".rec") {
            fs::remove(e.path());
            ++n;
        }
    return n;
}

} // namespace hodgeci
