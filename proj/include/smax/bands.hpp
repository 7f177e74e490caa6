#pragma once

// Sobolev / Besov norms and sharp dyadic frequency projections.
//
// Band layout (indicator cutoffs):
//   band 0:      |xi| <= 1/2
//   band k >= 1: 2^{k-1} < |xi| <= 2^k, except band 1 which is (1/2, 2]
// so every frequency belongs to exactly one band and the boundary 2^k sits in
// band k. Band 1 absorbs (1/2, 1], which the textbook cutoffs leave uncovered
// on grids whose frequency step is not an integer.

#include <cmath>
#include <cstddef>
#include <numbers>

#include "smax/grid.hpp"

namespace smax {

// dyadic band index of a frequency
inline int band_of(double xi) {
    const double r = std::abs(xi);
    if (r <= 0.5) return 0;
    if (r <= 2.0) return 1;
    int k = static_cast<int>(std::ceil(std::log2(r)));
    // log2 rounding can be off by one at exact powers of two
    while (std::ldexp(1.0, k - 1) >= r) --k;
    while (std::ldexp(1.0, k) < r) ++k;
    return k;
}

inline SpectralFunction band_project(const SpectralFunction& f, int k) {
    SpectralFunction out(f.grid);
    for (std::size_t i = 0; i < f.coeffs.size(); ++i)
        if (band_of(f.grid.xi(i)) == k) out.coeffs[i] = f.coeffs[i];
    return out;
}

// largest band index carrying a nonzero coefficient (0 for the zero function)
inline int top_band(const SpectralFunction& f) {
    int top = 0;
    for (std::size_t i = 0; i < f.coeffs.size(); ++i)
        if (f.coeffs[i] != cdouble(0.0, 0.0))
            top = std::max(top, band_of(f.grid.xi(i)));
    return top;
}

// || f ||_{H^s} = ( sum_m (1 + xi_m^2)^s |c_m|^2 dxi )^{1/2}
inline double sobolev_norm(const SpectralFunction& f, double s) {
    double acc = 0.0;
    for (std::size_t i = 0; i < f.coeffs.size(); ++i) {
        const double xi = f.grid.xi(i);
        acc += std::exp(s * std::log1p(xi * xi)) * std::norm(f.coeffs[i]);
    }
    return std::sqrt(acc * f.grid.freq_step());
}

// frequency-side L2 with the same measure convention as sobolev_norm(.,0)
inline double band_l2(const SpectralFunction& f, int k) {
    double acc = 0.0;
    for (std::size_t i = 0; i < f.coeffs.size(); ++i)
        if (band_of(f.grid.xi(i)) == k) acc += std::norm(f.coeffs[i]);
    return std::sqrt(acc * f.grid.freq_step());
}

// || f ||_{B^s_{2,1}} = sum_k 2^{ks} || P_k f ||_2
inline double besov_norm_21(const SpectralFunction& f, double s) {
    const int kmax = top_band(f);
    double acc = 0.0;
    for (int k = 0; k <= kmax; ++k) {
        const double nk = band_l2(f, k);
        if (nk > 0.0) acc += std::exp2(s * k) * nk;
    }
    return acc;
}

}  // namespace smax
