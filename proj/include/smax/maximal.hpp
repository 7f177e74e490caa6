#pragma once

// Maximal functions along time sequences and over intervals: per-point
// suprema of |S^a f|, weak level-set measures, H^s ratio functionals, the
// E1/E2/E3 bucket decomposition and the frequency-localized growth fit.
//
// Profiles over one-sided narrow bands run on the modulus envelope: if the
// spectrum occupies W consecutive multipliers of one sign, |S^a f| is a
// band-limited function of bandwidth W * dxi, so it is computed exactly on a
// reduced grid via a size-O(W) FFT instead of the full synthesis grid.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "smax/bands.hpp"
#include "smax/counterexample.hpp"
#include "smax/grid.hpp"
#include "smax/parallel.hpp"
#include "smax/propagator.hpp"
#include "smax/rng.hpp"
#include "smax/sequences.hpp"

namespace smax {

struct MaximalProfile {
    GridSpec grid;                  // grid the values live on
    std::vector<double> values;     // sup over sampled times of |S^a f|
    std::vector<std::uint32_t> argmax;  // attaining time index per point
    double a = 0.0;
    std::string sequence_tag;
    std::size_t times_used = 0;
    double time_cutoff = 0.0;       // smallest time kept

    double l2(double x_lo, double x_hi) const {
        double acc = 0.0;
        for (std::size_t j = 0; j < values.size(); ++j) {
            const double x = grid.x(j);
            if (x >= x_lo && x < x_hi) acc += values[j] * values[j];
        }
        return std::sqrt(acc * grid.space_step());
    }
    double l2_global() const { return l2(0.0, grid.period); }
};

// Times kept for profile computation: everything at or above the resolution
// cutoff freq_step * 1e-3 (evolution below it is indistinguishable from the
// identity at the grid's scales). Returns indices into seq.
inline std::vector<std::size_t> profile_time_indices(const GridSpec& grid,
                                                     const TimeSequence& seq) {
    const double cutoff = grid.freq_step() * 1e-3;
    std::vector<std::size_t> idx;
    for (std::size_t n = 0; n < seq.size(); ++n)
        if (seq[n] >= cutoff) idx.push_back(n);
    if (idx.empty()) idx.push_back(0);  // keep at least the largest time
    return idx;
}

namespace detail {

// sup over the given times of |S^a f| on the full synthesis grid;
// arithmetic matches evolve + synthesize exactly.
inline void full_grid_sup(const SpectralFunction& f, double a,
                          const std::vector<double>& times,
                          std::vector<double>& values,
                          std::vector<std::uint32_t>& argmax) {
    const std::size_t n = f.grid.n_points;
    values.assign(n, 0.0);
    argmax.assign(n, 0);
    std::vector<double> omega(n);
    for (std::size_t i = 0; i < n; ++i)
        omega[i] = dispersive_omega(f.grid.xi(i), a);
    std::vector<cdouble> work(n);
    const double scale = 1.0 / f.grid.period;
    for (std::size_t ti = 0; ti < times.size(); ++ti) {
        const double t = times[ti];
        for (std::size_t i = 0; i < n; ++i)
            work[i] = f.coeffs[i] * std::polar(1.0, t * omega[i]);
        fft_inverse(work);
        for (std::size_t j = 0; j < n; ++j) {
            const double v = std::abs(work[j] * scale);
            if (v > values[j]) {
                values[j] = v;
                argmax[j] = static_cast<std::uint32_t>(ti);
            }
        }
    }
}

struct BandSlice {
    bool ok = false;
    long m_lo = 0;                 // first multiplier of the occupied run
    std::vector<cdouble> coeffs;   // one entry per multiplier in the run
};

// contiguous one-sided occupied multiplier range, if the spectrum has one
inline BandSlice extract_band_slice(const SpectralFunction& f) {
    BandSlice s;
    long lo = 0, hi = 0;
    bool any = false;
    for (std::size_t i = 0; i < f.coeffs.size(); ++i) {
        if (f.coeffs[i] == cdouble(0.0, 0.0)) continue;
        const long m = f.grid.multiplier(i);
        if (!any) {
            lo = hi = m;
            any = true;
        } else {
            lo = std::min(lo, m);
            hi = std::max(hi, m);
        }
    }
    if (!any || (lo < 0 && hi > 0)) return s;  // empty or two-sided
    s.ok = true;
    s.m_lo = lo;
    s.coeffs.resize(static_cast<std::size_t>(hi - lo + 1));
    for (long m = lo; m <= hi; ++m)
        s.coeffs[static_cast<std::size_t>(m - lo)] =
            f.coeffs[f.grid.slot(m)];
    return s;
}

// sup over times of |S^a f| for a one-sided contiguous band, on a reduced
// envelope grid (period preserved). Exact: the modulus has bandwidth W dxi.
// Uniformly spaced times advance by per-mode rotors, re-synchronized against
// exact phases every 1024 steps to cap the accumulated rounding drift.
inline MaximalProfile band_envelope_sup(const SpectralFunction& f,
                                        const BandSlice& slice, double a,
                                        const std::vector<double>& times) {
    const double L = f.grid.period;
    const double dxi = f.grid.freq_step();
    const std::size_t w = slice.coeffs.size();
    std::size_t n_env = 64;
    while (n_env < 4 * w) n_env <<= 1;

    MaximalProfile prof;
    prof.grid = GridSpec(n_env, L);
    prof.values.assign(n_env, 0.0);
    prof.argmax.assign(n_env, 0);
    prof.a = a;

    std::vector<double> omega(w);
    for (std::size_t i = 0; i < w; ++i)
        omega[i] = dispersive_omega(
            (static_cast<double>(slice.m_lo) + static_cast<double>(i)) * dxi, a);

    bool uniform = times.size() > 2;
    const double dt = times.size() > 1 ? times[1] - times[0] : 0.0;
    for (std::size_t i = 1; i + 1 < times.size() && uniform; ++i)
        if (std::abs((times[i + 1] - times[i]) - dt) > 1e-12 * std::abs(dt))
            uniform = false;
    std::vector<cdouble> rotor, state(w);
    if (uniform) {
        rotor.resize(w);
        for (std::size_t i = 0; i < w; ++i)
            rotor[i] = std::polar(1.0, dt * omega[i]);
    }

    std::vector<cdouble> work(n_env);
    std::vector<double> best2(n_env, 0.0);  // squared moduli in the hot loop
    for (std::size_t ti = 0; ti < times.size(); ++ti) {
        const double t = times[ti];
        if (!uniform || ti % 1024 == 0) {
            for (std::size_t i = 0; i < w; ++i)
                state[i] = slice.coeffs[i] * std::polar(1.0, t * omega[i]);
        } else {
            for (std::size_t i = 0; i < w; ++i) state[i] *= rotor[i];
        }
        std::fill(work.begin() + static_cast<long>(w), work.end(),
                  cdouble(0.0, 0.0));
        std::copy(state.begin(), state.end(), work.begin());
        fft_inverse(work);
        for (std::size_t j = 0; j < n_env; ++j) {
            const double v2 = std::norm(work[j]);
            if (v2 > best2[j]) {
                best2[j] = v2;
                prof.argmax[j] = static_cast<std::uint32_t>(ti);
            }
        }
    }
    const double scale = 1.0 / L;
    for (std::size_t j = 0; j < n_env; ++j)
        prof.values[j] = std::sqrt(best2[j]) * scale;
    return prof;
}

}  // namespace detail

// sup_n |S^a f(x, t_n)| over the kept truncation; exact max, no subsampling
inline MaximalProfile maximal_profile(const SpectralFunction& f,
                                      const TimeSequence& seq, double a) {
    require_valid_dispersion(a);
    const auto kept = profile_time_indices(f.grid, seq);
    std::vector<double> times;
    times.reserve(kept.size());
    for (auto n : kept) times.push_back(seq[n]);

    MaximalProfile prof;
    prof.grid = f.grid;
    prof.a = a;
    prof.sequence_tag = seq.tag;
    prof.times_used = times.size();
    prof.time_cutoff = times.empty() ? 0.0 : times.back();
    detail::full_grid_sup(f, a, times, prof.values, prof.argmax);
    // argmax slots refer to kept[], remap to original sequence indices
    for (auto& idx : prof.argmax)
        idx = static_cast<std::uint32_t>(kept[idx]);
    return prof;
}

struct ContinuumOptions {
    std::size_t oversample = 4;
    std::size_t max_steps = std::size_t(1) << 23;
};

// sup over a t-grid on J = [t_lo, t_hi] with step |J|/(oversample(1+L^a|J|)),
// L the top occupied frequency. One-sided contiguous spectra run on the
// envelope grid. Throws when the step count exceeds the budget.
inline MaximalProfile continuum_maximal(const SpectralFunction& f, double a,
                                        double t_lo, double t_hi,
                                        const ContinuumOptions& opts = {}) {
    require_valid_dispersion(a);
    if (!(t_lo >= 0.0) || !(t_hi <= 1.0) || !(t_lo <= t_hi))
        throw std::invalid_argument(
            "continuum_maximal: need [t_lo, t_hi] inside [0, 1]");
    if (opts.oversample < 4)
        throw std::invalid_argument("continuum_maximal: oversample >= 4");
    const double len = t_hi - t_lo;
    const double top = f.top_frequency();
    const double top_a = dispersive_omega(top, a);
    std::vector<double> times;
    if (len == 0.0) {
        times.push_back(t_lo);
    } else {
        const double steps_real =
            static_cast<double>(opts.oversample) * (1.0 + top_a * len);
        if (steps_real > static_cast<double>(opts.max_steps))
            throw std::invalid_argument(
                "continuum_maximal: time budget exceeded (" +
                std::to_string(steps_real) + " steps for Lambda^a|J| = " +
                std::to_string(top_a * len) + ")");
        const auto n_steps = static_cast<std::size_t>(std::ceil(steps_real));
        times.reserve(n_steps + 1);
        for (std::size_t i = 0; i <= n_steps; ++i)
            times.push_back(t_lo + len * static_cast<double>(i) /
                            static_cast<double>(n_steps));
    }

    const auto slice = detail::extract_band_slice(f);
    MaximalProfile prof;
    if (slice.ok && slice.coeffs.size() * 4 <= f.grid.n_points) {
        prof = detail::band_envelope_sup(f, slice, a, times);
    } else {
        prof.grid = f.grid;
        detail::full_grid_sup(f, a, times, prof.values, prof.argmax);
    }
    prof.a = a;
    prof.sequence_tag = "continuum";
    prof.times_used = times.size();
    prof.time_cutoff = t_lo;
    return prof;
}

// Lebesgue measure of {x in B : profile(x) > alpha}; B = [lo, hi) so that the
// measure is additive over disjoint intervals.
inline double weak_level_measure(const MaximalProfile& profile, double alpha,
                                 double x_lo, double x_hi) {
    if (!(alpha > 0.0) && alpha != 0.0)
        throw std::invalid_argument("weak_level_measure: alpha must be >= 0");
    if (!(x_lo <= x_hi) || x_lo < 0.0 || x_hi > profile.grid.period + 1e-12)
        throw std::invalid_argument(
            "weak_level_measure: B must lie within the torus period");
    double cells = 0.0;
    for (std::size_t j = 0; j < profile.values.size(); ++j) {
        const double x = profile.grid.x(j);
        if (x >= x_lo && x < x_hi && profile.values[j] > alpha) cells += 1.0;
    }
    return cells * profile.grid.space_step();
}

// || profile ||_{L^2(B)} / || f ||_{H^s}
inline double ratio_Hs(const SpectralFunction& f, const MaximalProfile& profile,
                       double s, double x_lo, double x_hi) {
    const double hs = sobolev_norm(f, s);
    if (!(hs > 0.0))
        throw std::invalid_argument("ratio_Hs: ||f||_{H^s} vanishes");
    return profile.l2(x_lo, x_hi) / hs;
}

inline double ratio_Hs(const SpectralFunction& f,
                       const MaximalProfile& profile, double s) {
    return ratio_Hs(f, profile, s, 0.0, profile.grid.period);
}

// ---------------------------------------------------------------------------
// E1/E2/E3 decomposition (bucket l vs dyadic band k):
//   E1: k <  l/(1+2r)        (a != 1: low bands, long times)
//   E2: l/(1+2r) <= k < l
//   E3: k >= l
// For a = 1 the split is k < l / k >= l and E2 is identically zero.
// ---------------------------------------------------------------------------

struct DecompositionReport {
    GridSpec grid;
    std::vector<double> e1, e2, e3;  // envelopes over the grid
    double norm_e1 = 0.0, norm_e2 = 0.0, norm_e3 = 0.0;  // physical L2
    double a = 0.0, r = 0.0, s = 0.0;
    double hs_norm = 0.0;  // ||f||_{H^s} at the matched s

    double ratio(int i) const {
        const double n = i == 1 ? norm_e1 : i == 2 ? norm_e2 : norm_e3;
        return n / hs_norm;
    }
};

inline DecompositionReport decompose_E123(const SpectralFunction& f,
                                          const TimeSequence& seq, double a,
                                          double r) {
    require_valid_dispersion(a);
    if (!(r > 0.0))
        throw std::invalid_argument("decompose_E123: r must be > 0");
    const std::size_t n = f.grid.n_points;
    DecompositionReport rep;
    rep.grid = f.grid;
    rep.a = a;
    rep.r = r;
    rep.s = a == 1.0 ? r / (2.0 + 2.0 * r) : s_from_r(r, a);
    rep.hs_norm = sobolev_norm(f, rep.s);
    rep.e1.assign(n, 0.0);
    rep.e2.assign(n, 0.0);
    rep.e3.assign(n, 0.0);

    const auto kept = profile_time_indices(f.grid, seq);
    TimeSequence trunc;
    {
        std::vector<double> tv;
        tv.reserve(kept.size());
        for (auto i : kept) tv.push_back(seq[i]);
        if (tv.size() < 2) tv.push_back(tv.back());  // same time twice
        trunc = TimeSequence(std::move(tv), seq.tag);
    }
    const BucketFamily fam = dyadic_buckets(trunc, a, r);

    std::vector<int> band(n);
    for (std::size_t i = 0; i < n; ++i) band[i] = band_of(f.grid.xi(i));
    std::vector<double> omega(n);
    for (std::size_t i = 0; i < n; ++i)
        omega[i] = dispersive_omega(f.grid.xi(i), a);

    std::vector<cdouble> work(n);
    const double scale = 1.0 / f.grid.period;
    const auto run_piece = [&](int k_lo, int k_hi, double t,
                               std::vector<double>& env) {
        // bands k with k_lo <= k < k_hi (k_hi < 0 means unbounded above)
        bool any = false;
        for (std::size_t i = 0; i < n; ++i) {
            const bool in = band[i] >= k_lo && (k_hi < 0 || band[i] < k_hi);
            if (in && f.coeffs[i] != cdouble(0.0, 0.0)) {
                work[i] = f.coeffs[i] * std::polar(1.0, t * omega[i]);
                any = true;
            } else {
                work[i] = cdouble(0.0, 0.0);
            }
        }
        if (!any) return;
        fft_inverse(work);
        for (std::size_t j = 0; j < n; ++j)
            env[j] = std::max(env[j], std::abs(work[j] * scale));
    };

    for (const auto& [l, members] : fam.buckets) {
        // band thresholds for this bucket
        int split1, split2;
        if (a == 1.0) {
            split1 = l;   // E1: k < l, E2 empty
            split2 = l;
        } else {
            split1 = static_cast<int>(
                std::ceil(static_cast<double>(l) / (1.0 + 2.0 * r) - 1e-12));
            split2 = l;   // E2: split1 <= k < l
        }
        for (auto idx : members) {
            const double t = trunc[idx];
            if (split1 > 0) run_piece(0, split1, t, rep.e1);
            if (split2 > split1) run_piece(split1, split2, t, rep.e2);
            run_piece(split2, -1, t, rep.e3);
        }
    }

    const double dx = f.grid.space_step();
    double s1 = 0, s2 = 0, s3 = 0;
    for (std::size_t j = 0; j < n; ++j) {
        s1 += rep.e1[j] * rep.e1[j];
        s2 += rep.e2[j] * rep.e2[j];
        s3 += rep.e3[j] * rep.e3[j];
    }
    rep.norm_e1 = std::sqrt(s1 * dx);
    rep.norm_e2 = std::sqrt(s2 * dx);
    rep.norm_e3 = std::sqrt(s3 * dx);
    return rep;
}

// ---------------------------------------------------------------------------
// Frequency-localized growth fit: best measured ||sup_n S^a_lambda f||_2 /
// ||f||_2 against lambda, maximized over a probe family of one-sided packets
// with the counterexample scaling (width eps * b^{-1/2} lambda^{1-a/2} at
// b = lambda^{-a/(1+2r)}) plus random packets, fitted in log-log.
// ---------------------------------------------------------------------------

struct GrowthProbeFamily {
    std::vector<double> dk_epsilons{0.3, 0.7, 1.3};
    std::size_t n_random = 2;
    double random_width_factor = 4.0;  // random packet width / tuned width
    std::uint64_t seed = 1;
};

struct GrowthFit {
    double slope = 0.0;
    double stderr_slope = 0.0;
    double residual_rms = 0.0;
    bool low_confidence = false;
    std::vector<double> lambdas;
    std::vector<double> best_ratio;
};

namespace detail {

// measured sup-ratio of a packet (offsets/coeffs around center frequency)
// over the given times; all computations on the envelope grid
inline double packet_sup_ratio(double center_xi, double dxi,
                               const std::vector<cdouble>& coeffs, double L,
                               double a, const std::vector<double>& times) {
    const std::size_t w = coeffs.size();
    std::size_t n_env = 64;
    while (n_env < 4 * w) n_env <<= 1;
    std::vector<double> omega(w);
    for (std::size_t i = 0; i < w; ++i) {
        const double xi = center_xi + (static_cast<double>(i) -
                                       0.5 * static_cast<double>(w - 1)) * dxi;
        omega[i] = dispersive_omega(xi, a);
    }
    std::vector<double> sup2(n_env, 0.0);
    std::vector<cdouble> work(n_env);
    for (const double t : times) {
        std::fill(work.begin(), work.end(), cdouble(0.0, 0.0));
        for (std::size_t i = 0; i < w; ++i)
            work[i] = coeffs[i] * std::polar(1.0, t * omega[i]);
        fft_inverse(work);
        for (std::size_t j = 0; j < n_env; ++j)
            sup2[j] = std::max(sup2[j], std::norm(work[j]));
    }
    double num = 0.0;
    for (double v2 : sup2) num += v2;
    num = std::sqrt(num * L / static_cast<double>(n_env)) / L;
    double den = 0.0;
    for (const auto& c : coeffs) den += std::norm(c);
    den = std::sqrt(den * dxi / (2.0 * std::numbers::pi));
    return num / den;
}

}  // namespace detail

// Per-lambda measurement at the scale-covariant truncation: torus period and
// kept times both scale with the packet-train geometry so the fitted slope is
// free of window artifacts.
inline double growth_best_ratio(double lambda, double a, double r,
                                const TimeSequence& seq,
                                const GrowthProbeFamily& family) {
    const double center = 0.75 * lambda;  // cutoff plateau of S^a_lambda
    const double b = std::pow(center, -a / (1.0 + 2.0 * r));
    const double speed = a * std::pow(center, a - 1.0);

    // narrowest packet width in the family
    double rho_min = family.dk_epsilons.empty() ? 0.3 : family.dk_epsilons[0];
    for (double e : family.dk_epsilons) rho_min = std::min(rho_min, e);
    rho_min *= std::pow(b, -0.5) * std::pow(center, 1.0 - a / 2.0);

    // torus period: no wrap over the coherence window, >= 8 modes per packet
    double L = 2.0 * std::numbers::pi;
    while (L < 7.0 * (2.0 * speed * b) || L < 16.0 * std::numbers::pi / rho_min)
        L *= 2.0;
    const double dxi = 2.0 * std::numbers::pi / L;

    // scale-covariant truncation: keep t in [b/8, 1]
    std::vector<double> times;
    for (double t : seq.values)
        if (t >= b / 8.0) times.push_back(t);
    if (times.size() < 2)
        throw std::invalid_argument(
            "growth_best_ratio: sequence too short for this lambda");

    const BumpG g;
    double best = 0.0;
    for (double eps : family.dk_epsilons) {
        const double rho = eps * std::pow(b, -0.5) *
                           std::pow(center, 1.0 - a / 2.0);
        const auto w = static_cast<std::size_t>(std::floor(rho / dxi)) + 1;
        std::vector<cdouble> coeffs(w);
        for (std::size_t i = 0; i < w; ++i) {
            const double off = (static_cast<double>(i) -
                                0.5 * static_cast<double>(w - 1)) * dxi;
            coeffs[i] = cdouble(g(off / rho) / rho, 0.0);
        }
        best = std::max(best, detail::packet_sup_ratio(-center, dxi, coeffs, L,
                                                       a, times));
    }
    Rng rng(family.seed ^ static_cast<std::uint64_t>(lambda));
    for (std::size_t p = 0; p < family.n_random; ++p) {
        const double rho = family.random_width_factor * rho_min;
        const auto w = static_cast<std::size_t>(std::floor(rho / dxi)) + 1;
        std::vector<cdouble> coeffs(w);
        for (std::size_t i = 0; i < w; ++i) coeffs[i] = rng.complex_normal();
        best = std::max(best, detail::packet_sup_ratio(-center, dxi, coeffs, L,
                                                       a, times));
    }
    return best;
}

inline GrowthFit growth_exponent_fit(double a, const TimeSequence& seq,
                                     double r,
                                     const std::vector<double>& lambdas,
                                     const GrowthProbeFamily& family = {},
                                     unsigned threads = 1) {
    require_valid_dispersion(a);
    if (lambdas.size() < 4)
        throw std::invalid_argument("growth_exponent_fit: need >= 4 scales");
    const auto [mn, mx] = std::minmax_element(lambdas.begin(), lambdas.end());
    if (!(*mx / *mn >= 64.0))
        throw std::invalid_argument(
            "growth_exponent_fit: scales must span a factor >= 64");

    GrowthFit fit;
    fit.lambdas = lambdas;
    fit.best_ratio.assign(lambdas.size(), 0.0);
    parallel_for(lambdas.size(), threads, [&](std::size_t i) {
        fit.best_ratio[i] = growth_best_ratio(lambdas[i], a, r, seq, family);
    });

    const double n = static_cast<double>(lambdas.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        const double x = std::log(lambdas[i]);
        const double y = std::log(fit.best_ratio[i]);
        sx += x;
        sy += y;
        sxx += x * x;
        sxy += x * y;
    }
    const double denom = n * sxx - sx * sx;
    fit.slope = (n * sxy - sx * sy) / denom;
    const double icpt = (sy - fit.slope * sx) / n;
    double rss = 0.0;
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
        const double e = std::log(fit.best_ratio[i]) -
                         (icpt + fit.slope * std::log(lambdas[i]));
        rss += e * e;
    }
    fit.residual_rms = std::sqrt(rss / n);
    const double sxx_c = sxx - sx * sx / n;
    fit.stderr_slope =
        n > 2 ? std::sqrt(rss / (n - 2.0) / sxx_c) : 0.0;
    fit.low_confidence = fit.residual_rms > 0.15;
    return fit;
}

}  // namespace smax
