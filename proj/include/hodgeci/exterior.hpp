#pragma once

#include <hodgeci/rational.hpp>

#include <cstdint>
#include <map>
#include <vector>

namespace hodgeci {

/// Differential generator families. The three geometric families carry the
/// kernels; PARAM holds the chain parameters (dlambda = index 0, dmu_k = k)
/// used by the kernel identity checks.
enum class Family : uint8_t { DZETA = 0, DZETABAR = 1, DZBAR = 2, PARAM = 3 };

/// One wedge monomial: a strictly increasing list of generator ids.
/// id = family*4096 + index; all generators are 1-forms (odd).
struct FormKey {
    std::vector<uint16_t> ids;
    friend bool operator<(const FormKey& a, const FormKey& b) { return a.ids < b.ids; }
    friend bool operator==(const FormKey& a, const FormKey& b) { return a.ids == b.ids; }
};

inline uint16_t gen_id(Family f, unsigned index) {
    return static_cast<uint16_t>(static_cast<unsigned>(f) * 4096u + index);
}
inline Family gen_family(uint16_t id) { return static_cast<Family>(id / 4096u); }
inline unsigned gen_index(uint16_t id) { return id % 4096u; }

/// Graded antisymmetric form with complex coefficients over the generator
/// families. Antisymmetry is realized by keeping each key sorted and tracking
/// the sort sign in wedge().
class ExteriorForm {
  public:
    std::map<FormKey, Complex> coeff;

    ExteriorForm() = default;

    static ExteriorForm scalar(Complex c);
    static ExteriorForm generator(Family f, unsigned index, Complex c = 1.0);

    bool is_zero(double tol = 0.0) const;
    double max_abs() const;

    ExteriorForm& operator+=(const ExteriorForm& o);
    ExteriorForm& operator-=(const ExteriorForm& o);
    friend ExteriorForm operator+(ExteriorForm a, const ExteriorForm& b) { return a += b; }
    friend ExteriorForm operator-(ExteriorForm a, const ExteriorForm& b) { return a -= b; }
    ExteriorForm scaled(Complex c) const;

    friend ExteriorForm wedge(const ExteriorForm& a, const ExteriorForm& b);

    /// Component with exactly the given generators (sorted), 0 if absent.
    Complex component(const FormKey& k) const;

    /// Number of generators of the given family in every term must agree for
    /// a pure form; returns the count of the first term.
    int degree() const;

    void add_term(FormKey k, Complex c);
};

/// Merge two strictly increasing id lists; returns false (zero form) when a
/// generator repeats, else fills `out` and the interleaving sign.
bool merge_keys(const FormKey& a, const FormKey& b, FormKey& out, int& sign);

} // namespace hodgeci
