#pragma once

// Composite Gauss-Legendre quadrature for oscillatory integrals
//   I = int_a^b amp(xi) e^{i phase(xi)} dxi
// with panel counts driven by the sampled total phase variation, then doubled
// until successive refinements agree. Summation is compensated and runs in a
// fixed order, so results are reproducible run to run.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "smax/grid.hpp"
#include "smax/propagator.hpp"

namespace smax {

struct QuadratureError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct QuadratureOptions {
    double tol = 1e-8;             // successive-refinement agreement target
    std::size_t start_nodes = 64;  // initial node budget (>= 16)
    std::size_t max_nodes = std::size_t(1) << 25;
};

namespace detail {

struct GaussRule {
    std::vector<double> nodes;    // on (-1, 1)
    std::vector<double> weights;
};

// Gauss-Legendre nodes/weights by Newton iteration on P_n.
inline const GaussRule& gauss_rule(std::size_t n) {
    thread_local GaussRule rule;
    thread_local std::size_t cached = 0;
    if (cached == n) return rule;
    rule.nodes.assign(n, 0.0);
    rule.weights.assign(n, 0.0);
    for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(std::numbers::pi * (static_cast<double>(i) + 0.75) /
                            (static_cast<double>(n) + 0.5));
        double dp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = x;
            for (std::size_t k = 2; k <= n; ++k) {
                const double pk = ((2.0 * k - 1.0) * x * p1 -
                                   (k - 1.0) * p0) / static_cast<double>(k);
                p0 = p1;
                p1 = pk;
            }
            dp = static_cast<double>(n) * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        rule.nodes[i] = -x;
        rule.nodes[n - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.weights[i] = w;
        rule.weights[n - 1 - i] = w;
    }
    cached = n;
    return rule;
}

inline void kahan_add(double& sum, double& comp, double term) {
    const double y = term - comp;
    const double t = sum + y;
    comp = (t - sum) - y;
    sum = t;
}

}  // namespace detail

using PhaseFn = std::function<double(double)>;
using AmplitudeFn = std::function<cdouble(double)>;

// one composite pass with `panels` panels of a fixed 16-point rule
inline cdouble composite_pass(const AmplitudeFn& amp, const PhaseFn& phase,
                              double a, double b, std::size_t panels) {
    constexpr std::size_t kOrder = 16;
    const auto& rule = detail::gauss_rule(kOrder);
    const double h = (b - a) / static_cast<double>(panels);
    double sr = 0.0, cr = 0.0, si = 0.0, ci = 0.0;
    for (std::size_t p = 0; p < panels; ++p) {
        const double lo = a + h * static_cast<double>(p);
        const double mid = lo + 0.5 * h;
        for (std::size_t q = 0; q < kOrder; ++q) {
            const double xi = mid + 0.5 * h * rule.nodes[q];
            const double w = 0.5 * h * rule.weights[q];
            cdouble v = amp(xi);
            if (v != cdouble(0.0, 0.0)) {
                const double ph = phase(xi);
                v *= cdouble(std::cos(ph), std::sin(ph));
            }
            detail::kahan_add(sr, cr, w * v.real());
            detail::kahan_add(si, ci, w * v.imag());
        }
    }
    return {sr, si};
}

// total phase variation sampled on a uniform probe grid
inline double sampled_phase_variation(const PhaseFn& phase, double a, double b,
                                      std::size_t probes = 257) {
    double var = 0.0;
    double prev = phase(a);
    for (std::size_t i = 1; i < probes; ++i) {
        const double xi = a + (b - a) * static_cast<double>(i) /
                          static_cast<double>(probes - 1);
        const double cur = phase(xi);
        var += std::abs(cur - prev);
        prev = cur;
    }
    return var;
}

// Adaptive oscillatory integral over [a, b]. Doubles the panel count until two
// successive composite passes agree to opts.tol (relative to max(1, |I|)).
inline cdouble oscillatory_integral(const AmplitudeFn& amp, const PhaseFn& phase,
                                    double a, double b,
                                    const QuadratureOptions& opts = {}) {
    if (!(b > a)) return {0.0, 0.0};
    const double var = sampled_phase_variation(phase, a, b);
    // initial node budget >= 20 (1 + variation / 2pi), in 16-point panels
    std::size_t panels = std::max<std::size_t>(
        {4, opts.start_nodes / 16,
         static_cast<std::size_t>(var / 5.0) + 2});
    cdouble prev = composite_pass(amp, phase, a, b, panels);
    while (true) {
        if (2 * panels * 16 > opts.max_nodes)
            throw QuadratureError(
                "oscillatory_integral: node budget exhausted before "
                "refinements agreed (phase too wild)");
        panels *= 2;
        const cdouble cur = composite_pass(amp, phase, a, b, panels);
        const double scale = std::max(1.0, std::abs(cur));
        if (std::abs(cur - prev) <= opts.tol * scale) return cur;
        prev = cur;
    }
}

inline double integrate_smooth(const std::function<double(double)>& fn,
                               double a, double b,
                               const QuadratureOptions& opts = {}) {
    const auto amp = [&fn](double xi) { return cdouble(fn(xi), 0.0); };
    const auto phase = [](double) { return 0.0; };
    return oscillatory_integral(amp, phase, a, b, opts).real();
}

// ---------------------------------------------------------------------------
// Sampled spectra: compactly supported fhat given by samples on an interval,
// evaluated by natural cubic spline, zero outside the support.
// ---------------------------------------------------------------------------

class SampledSpectrum {
public:
    SampledSpectrum(std::vector<double> xi, std::vector<cdouble> values)
        : xi_(std::move(xi)), val_(std::move(values)) {
        if (xi_.size() != val_.size() || xi_.size() < 4)
            throw std::invalid_argument(
                "SampledSpectrum: need >= 4 matching samples");
        for (std::size_t i = 1; i < xi_.size(); ++i)
            if (!(xi_[i] > xi_[i - 1]))
                throw std::invalid_argument(
                    "SampledSpectrum: abscissae must be strictly increasing");
        build_spline();
    }

    static SampledSpectrum from_function(const std::function<cdouble(double)>& f,
                                         double lo, double hi,
                                         std::size_t n_samples) {
        if (n_samples < 4)
            throw std::invalid_argument("SampledSpectrum: n_samples >= 4");
        std::vector<double> xs(n_samples);
        std::vector<cdouble> vs(n_samples);
        for (std::size_t i = 0; i < n_samples; ++i) {
            xs[i] = lo + (hi - lo) * static_cast<double>(i) /
                    static_cast<double>(n_samples - 1);
            vs[i] = f(xs[i]);
        }
        return SampledSpectrum(std::move(xs), std::move(vs));
    }

    double support_lo() const { return xi_.front(); }
    double support_hi() const { return xi_.back(); }

    cdouble operator()(double xi) const {
        if (xi < xi_.front() || xi > xi_.back()) return {0.0, 0.0};
        const auto it = std::upper_bound(xi_.begin(), xi_.end(), xi);
        std::size_t i = static_cast<std::size_t>(it - xi_.begin());
        if (i == 0) i = 1;
        if (i >= xi_.size()) i = xi_.size() - 1;
        const std::size_t j = i - 1;
        const double h = xi_[i] - xi_[j];
        const double t = (xi - xi_[j]) / h;
        const double u = 1.0 - t;
        const double w0 = (u * u * u - u) * h * h / 6.0;
        const double w1 = (t * t * t - t) * h * h / 6.0;
        return u * val_[j] + t * val_[i] + w0 * m2_[j] + w1 * m2_[i];
    }

private:
    void build_spline() {
        const std::size_t n = xi_.size();
        m2_.assign(n, cdouble(0.0, 0.0));
        std::vector<double> diag(n, 2.0);
        std::vector<double> sub(n, 0.0), sup(n, 0.0);
        std::vector<cdouble> rhs(n, cdouble(0.0, 0.0));
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const double h0 = xi_[i] - xi_[i - 1];
            const double h1 = xi_[i + 1] - xi_[i];
            sub[i] = h0 / (h0 + h1);
            sup[i] = h1 / (h0 + h1);
            rhs[i] = 6.0 / (h0 + h1) *
                     ((val_[i + 1] - val_[i]) / h1 - (val_[i] - val_[i - 1]) / h0);
        }
        // natural ends: m2[0] = m2[n-1] = 0; Thomas solve on the interior
        std::vector<double> cp(n, 0.0);
        std::vector<cdouble> dp(n, cdouble(0.0, 0.0));
        for (std::size_t i = 1; i + 1 < n; ++i) {
            const double m = diag[i] - sub[i] * cp[i - 1];
            cp[i] = sup[i] / m;
            dp[i] = (rhs[i] - sub[i] * dp[i - 1]) / m;
        }
        for (std::size_t i = n - 2; i >= 1; --i) {
            m2_[i] = dp[i] - cp[i] * m2_[i + 1];
            if (i == 1) break;
        }
    }

    std::vector<double> xi_;
    std::vector<cdouble> val_;
    std::vector<cdouble> m2_;
};

// ---------------------------------------------------------------------------
// Direct quadrature oracle for S^a f(x,t) = (1/2pi) int e^{i(x xi + t|xi|^a)}
// fhat(xi) dxi, independent of the DFT synthesis path. Panels are split at
// xi = 0 where |xi|^a has a kink.
// ---------------------------------------------------------------------------

inline cdouble evaluate_direct(const SampledSpectrum& spectrum, double x,
                               double t, double a, std::size_t nodes = 64) {
    if (nodes < 16)
        throw std::invalid_argument("evaluate_direct: node count must be >= 16");
    require_valid_time(t);
    require_valid_dispersion(a);
    QuadratureOptions opts;
    opts.start_nodes = nodes;
    const auto amp = [&spectrum](double xi) { return spectrum(xi); };
    const auto phase = [x, t, a](double xi) {
        return x * xi + t * dispersive_omega(xi, a);
    };
    const double lo = spectrum.support_lo();
    const double hi = spectrum.support_hi();
    cdouble total{0.0, 0.0};
    if (lo < 0.0 && hi > 0.0) {
        total = oscillatory_integral(amp, phase, lo, 0.0, opts) +
                oscillatory_integral(amp, phase, 0.0, hi, opts);
    } else {
        total = oscillatory_integral(amp, phase, lo, hi, opts);
    }
    return total / (2.0 * std::numbers::pi);
}

// ---------------------------------------------------------------------------
// TT* kernel probe (frequency-localized maximal operator):
//   K_lambda^a(x,y) = (1/2pi) int e^{i[lambda(x-y)xi + lambda^a dt |xi|^a]}
//                     chi^2(xi) dxi
// over the cutoff support {1/2 <= |xi| <= 1}.
// ---------------------------------------------------------------------------

struct KernelProbe {
    double lambda = 1.0;
    double a = 2.0;
    double t_of_x = 0.0;
    double t_of_y = 0.0;
    double x = 0.0;
    double y = 0.0;

    void validate() const {
        if (!(lambda >= 1.0))
            throw std::invalid_argument("KernelProbe: lambda must be >= 1");
        require_valid_dispersion(a);
        if (t_of_x < 0.0 || t_of_x > 1.0 || t_of_y < 0.0 || t_of_y > 1.0)
            throw std::invalid_argument("KernelProbe: times must be in [0,1]");
    }
};

inline cdouble ttstar_kernel(const KernelProbe& probe,
                             const BandCutoff& chi = BandCutoff{},
                             std::size_t nodes = 64) {
    probe.validate();
    if (nodes < 16)
        throw std::invalid_argument("ttstar_kernel: node count must be >= 16");
    QuadratureOptions opts;
    opts.start_nodes = nodes;
    const double A = probe.lambda * (probe.x - probe.y);
    const double B = std::pow(probe.lambda, probe.a) *
                     (probe.t_of_x - probe.t_of_y);
    const double a = probe.a;
    const auto amp = [&chi](double xi) {
        const double c = chi(xi);
        return cdouble(c * c, 0.0);
    };
    const auto phase = [A, B, a](double xi) {
        return A * xi + B * dispersive_omega(xi, a);
    };
    const cdouble total = oscillatory_integral(amp, phase, -1.0, -0.5, opts) +
                          oscillatory_integral(amp, phase, 0.5, 1.0, opts);
    return total / (2.0 * std::numbers::pi);
}

}  // namespace smax
