#pragma once

#include <hodgeci/rational.hpp>

#include <cmath>
#include <cstdint>

namespace hodgeci {

/// splitmix64. Self-contained so that seeded runs are bit-identical across
/// platforms and standard libraries.
struct Rng {
    uint64_t state;
    explicit Rng(uint64_t seed) : state(seed) {}

    uint64_t next_u64() {
        uint64_t z = (state += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    /// Uniform in [0,1).
    double uniform() { return std::ldexp(static_cast<double>(next_u64() >> 11), -53); }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    Complex complex_in_disk(double radius) {
        double r = radius * std::sqrt(uniform());
        double th = 2.0 * M_PI * uniform();
        return {r * std::cos(th), r * std::sin(th)};
    }

    Complex complex_box(double half) { return {uniform(-half, half), uniform(-half, half)}; }

    /// Small Gaussian rational a/b + (c/d)i with |a|,|c| <= mag, 1 <= b,d <= den.
    ComplexRational gaussian_rational(long mag, long den) {
        auto f = [&](long m, long d) {
            long num = static_cast<long>(next_u64() % static_cast<uint64_t>(2 * m + 1)) - m;
            long dd = 1 + static_cast<long>(next_u64() % static_cast<uint64_t>(d));
            return BigRational(num, dd);
        };
        return {f(mag, den), f(mag, den)};
    }
};

} // namespace hodgeci
