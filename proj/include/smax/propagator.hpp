#pragma once

// The propagator S^a as a Fourier multiplier: coefficient-wise multiplication
// by e^{i t |xi|^a}, plus the frequency-localized variant S^a_lambda and the
// a = 1 translation fast path.

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>

#include "smax/grid.hpp"

namespace smax {

// C-infinity step: 0 for u <= 0, 1 for u >= 1, built from exp(-1/u) ramps.
inline double smooth_step(double u) {
    if (u <= 0.0) return 0.0;
    if (u >= 1.0) return 1.0;
    const double a = std::exp(-1.0 / u);
    const double b = std::exp(-1.0 / (1.0 - u));
    return a / (a + b);
}

// |xi|^a with the exact special cases used throughout
inline double dispersive_omega(double xi, double a) {
    const double r = std::abs(xi);
    if (r == 0.0) return 0.0;
    if (a == 2.0) return r * r;
    if (a == 1.0) return r;
    return std::pow(r, a);
}

// Smooth even cutoff supported in {1/2 <= |xi| <= 1}, flat on [0.55, 0.95].
struct BandCutoff {
    std::string tag = "smooth-band";

    double operator()(double xi) const {
        const double r = std::abs(xi);
        if (r <= 0.5 || r >= 1.0) return 0.0;
        return smooth_step((r - 0.5) / 0.05) * smooth_step((1.0 - r) / 0.05);
    }
};

inline void require_valid_time(double t) {
    if (t < 0.0 || !std::isfinite(t))
        throw std::invalid_argument("propagator: time must be >= 0");
}

inline void require_valid_dispersion(double a) {
    if (!(a > 0.0) || !std::isfinite(a))
        throw std::invalid_argument("propagator: dispersion exponent a must be > 0");
}

inline SpectralFunction evolve(const SpectralFunction& f, double t, double a) {
    require_valid_time(t);
    require_valid_dispersion(a);
    if (t == 0.0) return f;
    SpectralFunction out(f.grid);
    for (std::size_t i = 0; i < f.coeffs.size(); ++i) {
        const double omega = dispersive_omega(f.grid.xi(i), a);
        out.coeffs[i] = f.coeffs[i] * std::polar(1.0, t * omega);
    }
    return out;
}

inline SpectralFunction evolve_band(const SpectralFunction& f, double t,
                                    double a, double lambda,
                                    const BandCutoff& chi = BandCutoff{}) {
    require_valid_time(t);
    require_valid_dispersion(a);
    if (!(lambda >= 1.0))
        throw std::invalid_argument("evolve_band: lambda must be >= 1");
    SpectralFunction out(f.grid);
    for (std::size_t i = 0; i < f.coeffs.size(); ++i) {
        const double xi = f.grid.xi(i);
        const double c = chi(xi / lambda);
        if (c == 0.0) continue;
        const double omega = dispersive_omega(xi, a);
        out.coeffs[i] = f.coeffs[i] * (c * std::polar(1.0, t * omega));
    }
    return out;
}

// S^1 on one-sided spectra is a translation: for spectrum in (-inf, 0] the
// multiplier e^{i t |xi|} is the ramp e^{-i t xi}, i.e. x -> x - t.
inline SpectralFunction translate_a1(const SpectralFunction& f, double t) {
    require_valid_time(t);
    const bool neg = f.one_sided_nonpositive();
    const bool pos = f.one_sided_nonnegative();
    if (!neg && !pos)
        throw std::invalid_argument(
            "translate_a1: spectrum must be one-sided");
    const double sign = neg ? -1.0 : 1.0;
    SpectralFunction out(f.grid);
    for (std::size_t i = 0; i < f.coeffs.size(); ++i) {
        const double xi = f.grid.xi(i);
        out.coeffs[i] = f.coeffs[i] * std::polar(1.0, sign * t * xi);
    }
    return out;
}

}  // namespace smax
