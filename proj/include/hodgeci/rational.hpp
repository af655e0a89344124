#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace hodgeci {

using BigRational = boost::multiprecision::cpp_rational;
using Complex = std::complex<double>;

/// Exact element of Q(i). All polynomial coefficients in the library live here;
/// conversion to floating point happens once, at evaluation time.
struct ComplexRational {
    BigRational re{0};
    BigRational im{0};

    ComplexRational() = default;
    ComplexRational(long r) : re(r) {}
    ComplexRational(BigRational r) : re(std::move(r)) {}
    ComplexRational(BigRational r, BigRational i) : re(std::move(r)), im(std::move(i)) {}
    ComplexRational(long r, long i) : re(r), im(i) {}

    static ComplexRational unit_i() { return ComplexRational(0, 1); }

    bool is_zero() const { return re == 0 && im == 0; }

    ComplexRational operator-() const { return {-re, -im}; }
    ComplexRational& operator+=(const ComplexRational& o) {
        re += o.re;
        im += o.im;
        return *this;
    }
    ComplexRational& operator-=(const ComplexRational& o) {
        re -= o.re;
        im -= o.im;
        return *this;
    }
    friend ComplexRational operator+(ComplexRational a, const ComplexRational& b) { return a += b; }
    friend ComplexRational operator-(ComplexRational a, const ComplexRational& b) { return a -= b; }
    friend ComplexRational operator*(const ComplexRational& a, const ComplexRational& b) {
        return {a.re * b.re - a.im * b.im, a.re * b.im + a.im * b.re};
    }
    ComplexRational& operator*=(const ComplexRational& o) { return *this = *this * o; }
    friend ComplexRational operator/(const ComplexRational& a, const ComplexRational& b) {
        BigRational n = b.re * b.re + b.im * b.im;
        if (n == 0) throw std::domain_error("ComplexRational: division by zero");
        return {(a.re * b.re + a.im * b.im) / n, (a.im * b.re - a.re * b.im) / n};
    }
    friend bool operator==(const ComplexRational& a, const ComplexRational& b) {
        return a.re == b.re && a.im == b.im;
    }
    friend bool operator!=(const ComplexRational& a, const ComplexRational& b) { return !(a == b); }

    ComplexRational conj() const { return {re, -im}; }

    Complex to_complex() const { return {static_cast<double>(re), static_cast<double>(im)}; }

    std::string str() const;
};

std::string rational_str(const BigRational& r);
BigRational rational_parse(const std::string& s);

inline std::string ComplexRational::str() const {
    return rational_str(re) + (im >= 0 ? "+" : "") + rational_str(im) + "i";
}

inline std::string rational_str(const BigRational& r) {
    return r.str();
}

inline BigRational rational_parse(const std::string& s) {
    try {
        return BigRational(s);
    } catch (const std::exception&) {
        throw std::invalid_argument("bad rational literal: '" + s + "'");
    }
}

inline ComplexRational pow(ComplexRational b, unsigned e) {
    ComplexRational r(1);
    while (e) {
        if (e & 1) r *= b;
        b *= b;
        e >>= 1;
    }
    return r;
}

} // namespace hodgeci
