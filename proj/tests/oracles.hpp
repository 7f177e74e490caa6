#pragma once

// Test-only oracles, independent of the library's transform and quadrature
// paths: brute-force DFT synthesis, Simpson integration, and closed forms.

#include <complex>
#include <functional>
#include <numbers>
#include <vector>

#include "smax/grid.hpp"

namespace oracle {

using smax::cdouble;

// direct O(N^2) synthesis: f(x_j) = (1/L) sum_m c_m e^{i x_j xi_m}
inline std::vector<cdouble> brute_synthesize(const smax::SpectralFunction& f) {
    const std::size_t n = f.grid.n_points;
    std::vector<cdouble> out(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double x = f.grid.x(j);
        cdouble acc(0.0, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            acc += f.coeffs[i] * std::polar(1.0, x * f.grid.xi(i));
        out[j] = acc / f.grid.period;
    }
    return out;
}

// composite Simpson rule (n panels, n even)
inline cdouble simpson(const std::function<cdouble(double)>& fn, double a,
                       double b, std::size_t n = 4096) {
    if (n % 2) ++n;
    const double h = (b - a) / static_cast<double>(n);
    cdouble acc = fn(a) + fn(b);
    for (std::size_t i = 1; i < n; ++i)
        acc += fn(a + h * static_cast<double>(i)) * (i % 2 ? 4.0 : 2.0);
    return acc * (h / 3.0);
}

inline double simpson_real(const std::function<double(double)>& fn, double a,
                           double b, std::size_t n = 4096) {
    return simpson([&fn](double x) { return cdouble(fn(x), 0.0); }, a, b, n)
        .real();
}

// brute-force maximal profile: per point, loop all times through the
// library's own evolve/synthesize (arithmetic-equality oracle)
template <typename EvolveFn>
std::vector<double> brute_profile(const smax::SpectralFunction& f,
                                  const std::vector<double>& times,
                                  EvolveFn&& evolve_synth) {
    std::vector<double> best(f.grid.n_points, 0.0);
    for (const double t : times) {
        const auto samples = evolve_synth(f, t);
        for (std::size_t j = 0; j < samples.size(); ++j)
            best[j] = std::max(best[j], std::abs(samples[j]));
    }
    return best;
}

}  // namespace oracle
