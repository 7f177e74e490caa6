#pragma once

// Iterative radix-2 complex FFT for power-of-two lengths.
// Conventions:
//   fft_forward : X[k] = sum_j x[j] e^{-2*pi*i*j*k/N}   (no scaling)
//   fft_inverse : x[j] = sum_k X[k] e^{+2*pi*i*j*k/N}   (no scaling)
// Callers apply their own measure weights; the grid layer owns normalization.

#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace smax {

using cdouble = std::complex<double>;

inline bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

namespace detail {

// Twiddle table for size n (half-length, sign = +1 inverse / -1 forward).
// Cached per (n, sign) to keep repeated transforms cheap and deterministic.
inline const std::vector<cdouble>& twiddles(std::size_t n, int sign) {
    struct Cache {
        std::size_t n = 0;
        std::vector<cdouble> fwd, inv;
    };
    thread_local Cache cache;
    if (cache.n != n) {
        cache.n = n;
        cache.fwd.resize(n / 2);
        cache.inv.resize(n / 2);
        const double step = 2.0 * std::numbers::pi / static_cast<double>(n);
        for (std::size_t k = 0; k < n / 2; ++k) {
            const double ang = step * static_cast<double>(k);
            cache.fwd[k] = cdouble(std::cos(ang), -std::sin(ang));
            cache.inv[k] = cdouble(std::cos(ang), std::sin(ang));
        }
    }
    return sign < 0 ? cache.fwd : cache.inv;
}

inline void fft_radix2(std::vector<cdouble>& a, int sign) {
    const std::size_t n = a.size();
    if (!is_power_of_two(n))
        throw std::invalid_argument("fft: length must be a power of two");
    if (n == 1) return;

    // bit reversal permutation
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }

    const auto& w = twiddles(n, sign);
    for (std::size_t len = 2; len <= n; len <<= 1) {
        const std::size_t stride = n / len;
        for (std::size_t i = 0; i < n; i += len) {
            for (std::size_t k = 0; k < len / 2; ++k) {
                const cdouble t = a[i + k + len / 2] * w[k * stride];
                a[i + k + len / 2] = a[i + k] - t;
                a[i + k] += t;
            }
        }
    }
}

}  // namespace detail

inline void fft_forward(std::vector<cdouble>& a) { detail::fft_radix2(a, -1); }
inline void fft_inverse(std::vector<cdouble>& a) { detail::fft_radix2(a, +1); }

}  // namespace smax
