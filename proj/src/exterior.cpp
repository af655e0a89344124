#include <hodgeci/exterior.hpp>

#include <algorithm>
#include <cmath>

namespace hodgeci {

ExteriorForm ExteriorForm::scalar(Complex c) {
    ExteriorForm f;
    if (c != Complex(0)) f.coeff[FormKey{}] = c;
    return f;
}

ExteriorForm ExteriorForm::generator(Family fam, unsigned index, Complex c) {
    ExteriorForm f;
    if (c != Complex(0)) f.coeff[FormKey{{gen_id(fam, index)}}] = c;
    return f;
}

bool ExteriorForm::is_zero(double tol) const {
    for (const auto& [k, c] : coeff)
        if (std::abs(c) > tol) return false;
    return true;
}

double ExteriorForm::max_abs() const {
    double m = 0;
    for (const auto& [k, c] : coeff) m = std::max(m, std::abs(c));
    return m;
}

ExteriorForm& ExteriorForm::operator+=(const ExteriorForm& o) {
    for (const auto& [k, c] : o.coeff) add_term(k, c);
    return *this;
}

ExteriorForm& ExteriorForm::operator-=(const ExteriorForm& o) {
    for (const auto& [k, c] : o.coeff) add_term(k, -c);
    return *this;
}

ExteriorForm ExteriorForm::scaled(Complex c) const {
    ExteriorForm f;
    if (c == Complex(0)) return f;
    for (const auto& [k, v] : coeff) f.coeff[k] = v * c;
    return f;
}

void ExteriorForm::add_term(FormKey k, Complex c) {
    if (c == Complex(0)) return;
    auto it = coeff.find(k);
    if (it == coeff.end())
        coeff.emplace(std::move(k), c);
    else {
        it->second += c;
        if (it->second == Complex(0)) coeff.erase(it);
    }
}

Complex ExteriorForm::component(const FormKey& k) const {
    auto it = coeff.find(k);
    return it == coeff.end() ? Complex(0) : it->second;
}

int ExteriorForm::degree() const {
    if (coeff.empty()) return 0;
    return static_cast<int>(coeff.begin()->first.ids.size());
}

bool merge_keys(const FormKey& a, const FormKey& b, FormKey& out, int& sign) {
    out.ids.clear();
    out.ids.reserve(a.ids.size() + b.ids.size());
    sign = 1;
    size_t i = 0, j = 0;
    // Count how many of a's generators each b-generator must cross.
    while (i < a.ids.size() && j < b.ids.size()) {
        if (a.ids[i] == b.ids[j]) return false;
        if (a.ids[i] < b.ids[j]) {
            out.ids.push_back(a.ids[i++]);
        } else {
            // b[j] moves left past the remaining a-generators
            if ((a.ids.size() - i) % 2 == 1) sign = -sign;
            out.ids.push_back(b.ids[j++]);
        }
    }
    while (i < a.ids.size()) out.ids.push_back(a.ids[i++]);
    while (j < b.ids.size()) out.ids.push_back(b.ids[j++]);
    return true;
}

ExteriorForm wedge(const ExteriorForm& a, const ExteriorForm& b) {
    ExteriorForm r;
    FormKey merged;
    int sign;
    for (const auto& [ka, ca] : a.coeff)
        for (const auto& [kb, cb] : b.coeff) {
            if (!merge_keys(ka, kb, merged, sign)) continue;
            r.add_term(merged, ca * cb * static_cast<double>(sign));
        }
    return r;
}

} // namespace hodgeci
