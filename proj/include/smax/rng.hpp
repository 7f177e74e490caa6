#pragma once

// Seeded pseudo-randomness for probe families. Every draw is derived from
// mt19937_64 raw output only, so identical seeds reproduce identical streams
// regardless of library distribution internals.

#include <cmath>
#include <complex>
#include <cstdint>
#include <numbers>
#include <random>

namespace smax {

class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    // uniform in [0, 1)
    double uniform() {
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    std::uint64_t bits() { return eng_(); }

    // standard normal (Box-Muller)
    double normal() {
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) *
               std::cos(2.0 * std::numbers::pi * u2);
    }

    std::complex<double> complex_normal() {
        double u1 = uniform();
        while (u1 <= 0.0) u1 = uniform();
        const double u2 = uniform();
        const double r = std::sqrt(-std::log(u1));
        return {r * std::cos(2.0 * std::numbers::pi * u2),
                r * std::sin(2.0 * std::numbers::pi * u2)};
    }

    // unit-modulus phase
    std::complex<double> phase() {
        const double th = 2.0 * std::numbers::pi * uniform();
        return {std::cos(th), std::sin(th)};
    }

private:
    std::mt19937_64 eng_;
};

}  // namespace smax
