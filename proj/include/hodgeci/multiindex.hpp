#pragma once

#include <cstdint>
#include <numeric>
#include <vector>

namespace hodgeci {

/// Monomial exponent vector. Length is fixed by context (n+1 homogeneous
/// variables, 2(n+1) for bihomogeneous (zeta,z) pairs, 2n for (w,wbar) chart data).
struct MultiIndex {
    std::vector<uint32_t> exp;

    MultiIndex() = default;
    explicit MultiIndex(size_t n) : exp(n, 0) {}
    MultiIndex(std::initializer_list<uint32_t> e) : exp(e) {}

    size_t size() const { return exp.size(); }
    uint32_t operator[](size_t i) const { return exp[i]; }
    uint32_t& operator[](size_t i) { return exp[i]; }

    uint32_t degree() const { return std::accumulate(exp.begin(), exp.end(), 0u); }

    friend bool operator<(const MultiIndex& a, const MultiIndex& b) { return a.exp < b.exp; }
    friend bool operator==(const MultiIndex& a, const MultiIndex& b) { return a.exp == b.exp; }

    MultiIndex concat(const MultiIndex& o) const {
        MultiIndex r = *this;
        r.exp.insert(r.exp.end(), o.exp.begin(), o.exp.end());
        return r;
    }
};

/// All exponent vectors of the given length with total degree exactly d,
/// in lexicographic order. Used for monomial bases and section spaces.
inline std::vector<MultiIndex> monomials_of_degree(size_t nvars, uint32_t d) {
    std::vector<MultiIndex> out;
    MultiIndex cur(nvars);
    auto rec = [&](auto&& self, size_t pos, uint32_t left) -> void {
        if (pos + 1 == nvars) {
            cur[pos] = left;
            out.push_back(cur);
            return;
        }
        for (uint32_t e = 0; e <= left; ++e) {
            cur[pos] = e;
            self(self, pos + 1, left - e);
        }
        cur[pos] = 0;
    };
    if (nvars == 0) return out;
    rec(rec, 0, d);
    return out;
}

/// Exponent vectors with total degree at most d.
inline std::vector<MultiIndex> monomials_up_to_degree(size_t nvars, uint32_t d) {
    std::vector<MultiIndex> out;
    for (uint32_t k = 0; k <= d; ++k) {
        auto v = monomials_of_degree(nvars, k);
        out.insert(out.end(), v.begin(), v.end());
    }
    return out;
}

} // namespace hodgeci
