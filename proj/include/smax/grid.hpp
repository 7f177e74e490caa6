#pragma once

// Periodic grid representation of band-limited functions.
//
// A SpectralFunction stores complex Fourier coefficients c_m for the integer
// multipliers m in [-N/2, N/2), laid out in DFT order (index i holds m = i for
// i < N/2 and m = i - N otherwise). The represented frequency is
// xi_m = m * (2*pi/L).
//
// Conventions (documented once, used everywhere):
//   synthesize:  f(x_j) = (1/L) * sum_m c_m e^{i x_j xi_m},  x_j = j L / N
//   analyze:     c_m    = (L/N) * sum_j f(x_j) e^{-i x_j xi_m}
//   physical L2: ||f||_2 = sqrt( sum_m |c_m|^2 * dxi / (2 pi) )
// which is the discrete version of f(x) = (1/2pi) int e^{i x xi} fhat(xi) dxi,
// so Parseval holds exactly up to rounding.

#include <cmath>
#include <complex>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "smax/fft.hpp"

namespace smax {

struct GridSpec {
    std::size_t n_points = 0;
    double period = 0.0;

    GridSpec() = default;
    GridSpec(std::size_t n, double L) : n_points(n), period(L) {
        if (n < 8 || !is_power_of_two(n))
            throw std::invalid_argument(
                "GridSpec: n_points must be a power of two >= 8");
        if (!(L > 0.0) || !std::isfinite(L))
            throw std::invalid_argument("GridSpec: period must be positive");
    }

    double freq_step() const { return 2.0 * std::numbers::pi / period; }
    double space_step() const { return period / static_cast<double>(n_points); }

    // integer multiplier for DFT slot i
    long multiplier(std::size_t i) const {
        const long n = static_cast<long>(n_points);
        const long li = static_cast<long>(i);
        return li < n / 2 ? li : li - n;
    }

    double xi(std::size_t i) const {
        return static_cast<double>(multiplier(i)) * freq_step();
    }

    double x(std::size_t j) const {
        return static_cast<double>(j) * space_step();
    }

    // DFT slot for multiplier m in [-N/2, N/2)
    std::size_t slot(long m) const {
        const long n = static_cast<long>(n_points);
        if (m < -n / 2 || m >= n / 2)
            throw std::out_of_range("GridSpec: multiplier outside [-N/2, N/2)");
        return static_cast<std::size_t>(m >= 0 ? m : m + n);
    }

    bool operator==(const GridSpec& o) const {
        return n_points == o.n_points && period == o.period;
    }
};

inline GridSpec build_grid(std::size_t n_points, double period) {
    return GridSpec(n_points, period);
}

struct SpectralFunction {
    GridSpec grid;
    std::vector<cdouble> coeffs;  // DFT order, length grid.n_points

    SpectralFunction() = default;
    explicit SpectralFunction(const GridSpec& g)
        : grid(g), coeffs(g.n_points, cdouble(0.0, 0.0)) {}
    SpectralFunction(const GridSpec& g, std::vector<cdouble> c)
        : grid(g), coeffs(std::move(c)) {
        if (coeffs.size() != grid.n_points)
            throw std::invalid_argument(
                "SpectralFunction: coefficient count != n_points");
        for (const auto& z : coeffs)
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
                throw std::invalid_argument(
                    "SpectralFunction: non-finite coefficient");
    }

    cdouble& at_multiplier(long m) { return coeffs[grid.slot(m)]; }
    const cdouble& at_multiplier(long m) const { return coeffs[grid.slot(m)]; }

    // largest |xi| with a nonzero coefficient (0 for the zero function)
    double top_frequency() const {
        double top = 0.0;
        for (std::size_t i = 0; i < coeffs.size(); ++i)
            if (coeffs[i] != cdouble(0.0, 0.0))
                top = std::max(top, std::abs(grid.xi(i)));
        return top;
    }

    bool one_sided_nonpositive() const {
        for (std::size_t i = 0; i < coeffs.size(); ++i)
            if (grid.multiplier(i) > 0 && coeffs[i] != cdouble(0.0, 0.0))
                return false;
        return true;
    }
    bool one_sided_nonnegative() const {
        for (std::size_t i = 0; i < coeffs.size(); ++i)
            if (grid.multiplier(i) < 0 && coeffs[i] != cdouble(0.0, 0.0))
                return false;
        return true;
    }
};

inline std::vector<cdouble> synthesize(const SpectralFunction& f) {
    std::vector<cdouble> v = f.coeffs;
    fft_inverse(v);
    const double scale = 1.0 / f.grid.period;
    for (auto& z : v) z *= scale;
    return v;
}

inline SpectralFunction analyze(const GridSpec& grid,
                                std::vector<cdouble> samples) {
    if (samples.size() != grid.n_points)
        throw std::invalid_argument("analyze: sample count != n_points");
    fft_forward(samples);
    const double scale = grid.period / static_cast<double>(grid.n_points);
    for (auto& z : samples) z *= scale;
    return SpectralFunction(grid, std::move(samples));
}

// physical-side L2 norm, computed on the frequency side via Parseval
inline double l2_norm(const SpectralFunction& f) {
    double s = 0.0;
    for (const auto& z : f.coeffs) s += std::norm(z);
    return std::sqrt(s * f.grid.freq_step() / (2.0 * std::numbers::pi));
}

inline double l2_norm_samples(const std::vector<cdouble>& v, const GridSpec& g) {
    double s = 0.0;
    for (const auto& z : v) s += std::norm(z);
    return std::sqrt(s * g.space_step());
}

}  // namespace smax
