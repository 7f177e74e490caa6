#pragma once

// Constructive Dahlberg-Kenig counterexample families.
//
// A test function fhat(eta) = rho^{-1} g((eta + lambda)/rho) concentrates on a
// window of width rho near frequency -lambda. In the rescaled variable
// xi = (eta + lambda)/rho in [-1/2, 1/2] the propagator phase is
//   Phi(xi; x, t) = x (rho xi - lambda) + t (lambda - rho xi)^a
// and, dropping the xi-independent part (which cannot change moduli),
//   Phi~(xi) = x rho xi + t lambda^a [ (1 - rho xi / lambda)^a - 1 ].
// The bracket is evaluated as expm1(a log1p(-u)), which stays accurate when
// lambda^a t is as large as 1e9; the naive difference of a-th powers does not.
//
// Amplitudes are reported relative to the zero-phase value, i.e.
// |int e^{i Phi~} g| / int g, so the Fourier normalization constant cancels
// and the coherent value is 1. Parameter schedules follow the scale relations
//   lambda = M^{2/a} b^{-1/(a-4s)},  rho = eps b^{-1/2} lambda^{1-a/2}
// with the window count of the sequence supplying M at each scale b.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "smax/quadrature.hpp"
#include "smax/sequences.hpp"

namespace smax {

// Smooth unit-mass bump supported in [-1/2, 1/2].
struct BumpG {
    double norm_const = 1.0;  // c in g = c exp(-1/(1-(2 xi)^2))

    BumpG() {
        const auto raw = [](double xi) {
            const double u = 2.0 * xi;
            const double q = 1.0 - u * u;
            return q > 0.0 ? std::exp(-1.0 / q) : 0.0;
        };
        QuadratureOptions opts;
        opts.tol = 1e-13;
        const double mass = integrate_smooth(raw, -0.5, 0.5, opts);
        norm_const = 1.0 / mass;
    }

    double operator()(double xi) const {
        const double u = 2.0 * xi;
        const double q = 1.0 - u * u;
        return q > 0.0 ? norm_const * std::exp(-1.0 / q) : 0.0;
    }

    double mass(const QuadratureOptions& opts = {}) const {
        return integrate_smooth([this](double x) { return (*this)(x); }, -0.5,
                                0.5, opts);
    }

    double mass_squared() const {
        QuadratureOptions opts;
        opts.tol = 1e-13;
        return integrate_smooth(
            [this](double x) {
                const double v = (*this)(x);
                return v * v;
            },
            -0.5, 0.5, opts);
    }
};

inline BumpG make_bump() { return BumpG{}; }

// (1 - u)^a - 1, stable for small u
inline double pow_one_minus_m1(double a, double u) {
    return std::expm1(a * std::log1p(-u));
}

// Integral-form Taylor remainder E3(u) of (1-u)^a about 0:
//   E3(u) = -(1/2) a (a-1) (a-2) [ int_0^1 (1 - s u)^{a-3} (1-s)^2 ds ] u^3
inline double taylor_remainder_e3(double a, double u) {
    const double coef = -0.5 * a * (a - 1.0) * (a - 2.0);
    if (coef == 0.0) return 0.0;  // integer a in {0,1,2}: expansion is exact
    const double integral = integrate_smooth(
        [a, u](double s) {
            const double base = 1.0 - s * u;
            const double w = 1.0 - s;
            return std::pow(base, a - 3.0) * w * w;
        },
        0.0, 1.0);
    return coef * integral * u * u * u;
}

struct DKParams {
    double a = 2.0;
    double s = 0.2;
    double epsilon = 0.0;
    double b = 0.0;
    double M = 1.0;
    double lambda = 0.0;
    double rho = 0.0;
    double interval_length = 0.0;  // |I| = a lambda^{a-1} b / 2
    bool local_regime = true;      // s < 1/4 (needs |I| <= 1/2)

    double r_of_s() const { return critical_r(s, a); }
};

inline double dk_epsilon_limit(double a) { return 0.1 / (a + 2.0); }
inline double dk_default_epsilon(double a) { return 0.8 * dk_epsilon_limit(a); }

// Validated parameter bundle per the scale relations above. In the local
// regime (s < 1/4) the amplitude must satisfy a M^{2(a-1)/a} b^{(1-4s)/(a-4s)}
// <= 1 so that the interval I fits inside [0, 1/2].
inline DKParams select_params(double a, double s, double epsilon, double b,
                              double M) {
    if (a == 1.0)
        throw std::invalid_argument("select_params: a = 1 has its own family");
    require_valid_dispersion(a);
    if (!(s > 0.0) || !(s < a / 4.0))
        throw std::invalid_argument("select_params: need 0 < s < a/4");
    if (!(epsilon > 0.0) || !(epsilon < dk_epsilon_limit(a)))
        throw std::invalid_argument(
            "select_params: need 0 < eps < 0.1/(a+2) = " +
            std::to_string(dk_epsilon_limit(a)));
    if (!(b > 0.0) || !(b < 1.0))
        throw std::invalid_argument("select_params: need b in (0,1)");
    if (!(M >= 1.0))
        throw std::invalid_argument("select_params: need M >= 1");

    DKParams p;
    p.a = a;
    p.s = s;
    p.epsilon = epsilon;
    p.b = b;
    p.M = M;
    p.lambda = std::pow(M, 2.0 / a) * std::pow(b, -1.0 / (a - 4.0 * s));
    p.rho = epsilon * std::pow(b, -0.5) * std::pow(p.lambda, 1.0 - a / 2.0);
    p.interval_length = a * std::pow(p.lambda, a - 1.0) * b / 2.0;
    p.local_regime = s < 0.25;
    if (p.local_regime) {
        const double cond = a * std::pow(M, 2.0 * (a - 1.0) / a) *
                            std::pow(b, (1.0 - 4.0 * s) / (a - 4.0 * s));
        if (cond > 1.0 + 1e-12)
            throw std::invalid_argument(
                "select_params: local-regime amplitude condition violated "
                "(a M^{2(a-1)/a} b^{(1-4s)/(a-4s)} = " +
                std::to_string(cond) + " > 1)");
    }
    if (p.rho / p.lambda > epsilon + 1e-15)
        throw std::invalid_argument("select_params: rho/lambda exceeds eps");
    return p;
}

// fhat(eta) = rho^{-1} g((eta + lambda)/rho), supported in
// [-lambda - rho/2, -lambda + rho/2] subset [-2 lambda, -lambda/2]
struct DKSpectrum {
    double lambda = 0.0;
    double rho = 0.0;
    BumpG g;

    double support_lo() const { return -lambda - rho / 2.0; }
    double support_hi() const { return -lambda + rho / 2.0; }

    double operator()(double eta) const {
        return g((eta + lambda) / rho) / rho;
    }
};

inline DKSpectrum dk_spectrum(const DKParams& p, const BumpG& g) {
    if (!(p.rho > 0.0) || p.rho / p.lambda > p.epsilon + 1e-15)
        throw std::invalid_argument("dk_spectrum: need rho << lambda");
    return DKSpectrum{p.lambda, p.rho, g};
}

// H^s norm of the DK family computed in the rescaled variable:
//   ||f||_{H^s}^2 = rho^{-1} int (1 + (lambda - rho xi)^2)^s g(xi)^2 dxi
inline double dk_sobolev_norm(const DKSpectrum& spec, double s) {
    const double lambda = spec.lambda;
    const double rho = spec.rho;
    const double val = integrate_smooth(
        [&](double xi) {
            const double eta = lambda - rho * xi;
            const double g = spec.g(xi);
            return std::exp(s * std::log1p(eta * eta)) * g * g;
        },
        -0.5, 0.5);
    return std::sqrt(val / rho);
}

struct PhaseBreakdown {
    double linear = 0.0;
    double quadratic = 0.0;
    double cubic_remainder = 0.0;
    double exact = 0.0;  // full phase minus xi-independent terms

    double sum() const { return linear + quadratic + cubic_remainder; }
};

// Taylor pieces of Phi~ at (xi, x, t); `exact` uses the expm1/log1p route.
inline PhaseBreakdown phase_breakdown(const DKParams& p, double xi, double x,
                                      double t) {
    if (std::abs(xi) > 0.5 + 1e-12)
        throw std::invalid_argument("phase_breakdown: |xi| <= 1/2 required");
    if (t > p.b + 1e-12 * p.b)
        throw std::invalid_argument("phase_breakdown: t <= b required");
    const double a = p.a;
    const double u = p.rho * xi / p.lambda;
    const double lam_a = std::pow(p.lambda, a);
    PhaseBreakdown out;
    out.linear = (x - a * std::pow(p.lambda, a - 1.0) * t) * p.rho * xi;
    out.quadratic = 0.5 * a * (a - 1.0) * p.rho * p.rho *
                    std::pow(p.lambda, a - 2.0) * t * xi * xi;
    out.cubic_remainder = lam_a * t * taylor_remainder_e3(a, u);
    out.exact = x * p.rho * xi + t * lam_a * pow_one_minus_m1(a, u);
    return out;
}

// Relative amplitude |int e^{i Phi~} g| / int g at a single (x, t).
inline double dk_amplitude(const DKParams& p, const BumpG& g, double x,
                           double t) {
    const double a = p.a;
    const double rho = p.rho;
    const double lambda = p.lambda;
    const double lam_a = std::pow(lambda, a);
    const auto phase = [&](double xi) {
        return x * rho * xi + t * lam_a * pow_one_minus_m1(a, rho * xi / lambda);
    };
    const auto amp = [&g](double xi) { return cdouble(g(xi), 0.0); };
    const cdouble val = oscillatory_integral(amp, phase, -0.5, 0.5);
    return std::abs(val);  // int g = 1
}

// n(x, j): the unique n with x in (a lambda^{a-1} t_{n+1}, a lambda^{a-1} t_n].
// Indices are 0-based positions into the stored sequence.
inline std::size_t assign_index(double x, const TimeSequence& seq,
                                const DKParams& p) {
    const double speed = p.a * std::pow(p.lambda, p.a - 1.0);
    const double target = x / speed;
    const auto& t = seq.values;  // nonincreasing
    if (!(target <= t.front()) || !(target > t.back()))
        throw std::invalid_argument(
            "assign_index: x outside the range covered by the sequence");
    // first index with t_n < target; then n = that index - 1
    const auto it = std::lower_bound(t.begin(), t.end(), target,
                                     [](double a_, double v) { return a_ >= v; });
    const std::size_t idx = static_cast<std::size_t>(it - t.begin());
    if (idx == 0)
        throw std::invalid_argument("assign_index: x above covered range");
    return idx - 1;
}

struct DKStepReport {
    double b = 0.0;
    double M = 0.0;
    double lambda = 0.0;
    double rho = 0.0;
    double interval_length = 0.0;
    double min_sup = 0.0;        // min over samples of the relative amplitude
    double hs_norm_sq = 0.0;     // ||f||_{H^s}^2
    double weak_constant = 0.0;  // |I| (1/2)^2 / ||f||_{H^s}^2
};

// Evaluate the coherent lower bound on I = [0, a lambda^{a-1} b/2]:
// at each sample x the evaluation time is t_{n(x,j)} and the relative
// amplitude must come out >= 1/2. Also reports the weak-type constant whose
// growth along a schedule contradicts the weak (2,2) inequality.
inline DKStepReport verify_lower_bound(const DKParams& p,
                                       const TimeSequence& seq,
                                       std::size_t x_samples,
                                       const BumpG& g = BumpG{}) {
    if (x_samples == 0)
        throw std::invalid_argument("verify_lower_bound: x_samples >= 1");
    // counting precondition at scale b
    const double need = p.M * std::pow(p.b, -p.r_of_s());
    const auto have = static_cast<double>(doubling_count(seq, p.b));
    if (have + 1e-9 < need)
        throw std::invalid_argument(
            "verify_lower_bound: sequence has too few terms in (b, 2b] "
            "(have " + std::to_string(have) + ", need " +
            std::to_string(need) + ")");
    const auto conv = is_decreasing_convex(seq);
    if (!conv.ok)
        throw std::invalid_argument(
            "verify_lower_bound: sequence must be decreasing convex");
    const double speed = p.a * std::pow(p.lambda, p.a - 1.0);
    if (!(seq.values.back() <= p.b / 2.0))
        throw std::invalid_argument(
            "verify_lower_bound: sequence must reach below b/2");

    DKStepReport rep;
    rep.b = p.b;
    rep.M = p.M;
    rep.lambda = p.lambda;
    rep.rho = p.rho;
    rep.interval_length = p.interval_length;
    rep.min_sup = 2.0;
    // sample midpoints of I, avoiding x below the sequence coverage
    const double x_floor = speed * seq.values.back();
    for (std::size_t i = 0; i < x_samples; ++i) {
        double x = rep.interval_length * (static_cast<double>(i) + 0.5) /
                   static_cast<double>(x_samples);
        if (x <= x_floor) continue;
        const std::size_t n = assign_index(x, seq, p);
        const double amp = dk_amplitude(p, g, x, seq[n]);
        rep.min_sup = std::min(rep.min_sup, amp);
    }
    if (rep.min_sup > 1.5)
        throw std::invalid_argument(
            "verify_lower_bound: no sample point covered by the sequence");
    const DKSpectrum spec = dk_spectrum(p, g);
    const double hs = dk_sobolev_norm(spec, p.s);
    rep.hs_norm_sq = hs * hs;
    rep.weak_constant = rep.interval_length * 0.25 / rep.hs_norm_sq;
    return rep;
}

// One admissible schedule: at scales b_l = 2^{-l} (l in `levels`) take
// M = min(window count * b^{r(s)}, largest M allowed in the local regime).
struct DKSchedule {
    std::vector<DKParams> steps;
};

inline DKSchedule build_schedule(double a, double s, double epsilon,
                                 const TimeSequence& seq,
                                 const std::vector<int>& levels) {
    DKSchedule sched;
    const double r = critical_r(s, a);
    for (int l : levels) {
        const double b = std::ldexp(1.0, -l);
        const auto count = static_cast<double>(doubling_count(seq, b));
        if (count < 1.0)
            throw std::invalid_argument(
                "build_schedule: empty doubling window at level " +
                std::to_string(l));
        double M = count * std::pow(b, r);
        if (s < 0.25 && a > 1.0) {
            // largest M with a M^{2(a-1)/a} b^{(1-4s)/(a-4s)} <= 1; for a < 1
            // that inequality only gets easier as M grows
            const double cap = std::pow(
                std::pow(b, -(1.0 - 4.0 * s) / (a - 4.0 * s)) / a,
                a / (2.0 * (a - 1.0)));
            M = std::min(M, cap);
        }
        if (M < 1.0)
            throw std::invalid_argument(
                "build_schedule: window at level " + std::to_string(l) +
                " too thin (M = " + std::to_string(M) + " < 1)");
        sched.steps.push_back(select_params(a, s, epsilon, b, M));
    }
    return sched;
}

// ---------------------------------------------------------------------------
// a = 1 family: fhat_lambda(xi) = 10 lambda^{-1} g(10 lambda^{-1}(xi+lambda)),
// for which |S^1 f(x,t)| = |int e^{i lambda (x-t) u / 10} g(u) du| / (2 pi),
// so the relative amplitude is >= 1/2 whenever |x - t| <= 1/lambda.
// ---------------------------------------------------------------------------

struct DKParamsA1 {
    double s = 0.25;
    double b = 0.0;
    double M = 0.0;
    double lambda = 0.0;  // M b^{-1/(1-2s)}
};

inline DKParamsA1 select_params_a1(double s, double b, double M) {
    if (!(s > 0.0) || !(s < 0.5))
        throw std::invalid_argument("select_params_a1: need 0 < s < 1/2");
    if (!(b > 0.0) || !(b < 1.0))
        throw std::invalid_argument("select_params_a1: need b in (0,1)");
    if (!(M >= 1.0))
        throw std::invalid_argument("select_params_a1: need M >= 1");
    DKParamsA1 p;
    p.s = s;
    p.b = b;
    p.M = M;
    p.lambda = M * std::pow(b, -1.0 / (1.0 - 2.0 * s));
    return p;
}

// relative amplitude of S^1 f_lambda at offset d = x - t
inline double a1_amplitude(double lambda, double d, const BumpG& g) {
    const double c = lambda * d / 10.0;
    const auto amp = [&g](double u) { return cdouble(g(u), 0.0); };
    const auto phase = [c](double u) { return c * u; };
    return std::abs(oscillatory_integral(amp, phase, -0.5, 0.5));
}

// ||f_lambda||_{H^s} by quadrature in the rescaled variable
inline double a1_sobolev_norm(double lambda, double s, const BumpG& g) {
    const double w = lambda / 10.0;  // spectral half-width is w/2
    const double val = integrate_smooth(
        [&](double u) {
            const double eta = -lambda + w * u;
            const double gv = g(u);
            return std::exp(s * std::log1p(eta * eta)) * gv * gv;
        },
        -0.5, 0.5);
    return std::sqrt(val / w);
}

struct A1StepReport {
    double b = 0.0;
    double M = 0.0;
    double lambda = 0.0;
    double min_sup = 0.0;        // min over x samples in (0, b/2)
    double hs_norm_sq = 0.0;
    double weak_constant = 0.0;  // (b/2) / (4 ||f||^2)
};

// Verifies the a = 1 lower bound: with gaps t_n - t_{n+1} <= 2 M^{-1}
// b^{1/(1-2s)} below b, every x in (0, b/2) is within 1/lambda of a sequence
// time, so sup_n |S^1 f_lambda(x, t_n)| >= 1/2 there.
inline A1StepReport a1_counterexample(const DKParamsA1& p,
                                      const TimeSequence& seq,
                                      const BumpG& g,
                                      std::size_t x_samples = 64) {
    const double gap_bound = 2.0 / p.M * std::pow(p.b, 1.0 / (1.0 - 2.0 * p.s));
    const auto& t = seq.values;
    for (std::size_t n = 0; n + 1 < t.size(); ++n) {
        if (t[n] <= p.b && t[n] - t[n + 1] > gap_bound * (1.0 + 1e-9))
            throw std::invalid_argument(
                "a1_counterexample: gap bound t_n - t_{n+1} <= 2 M^{-1} "
                "b^{1/(1-2s)} fails below b");
    }
    if (!(t.back() <= p.b / 2.0))
        throw std::invalid_argument(
            "a1_counterexample: sequence must reach below b/2");

    A1StepReport rep;
    rep.b = p.b;
    rep.M = p.M;
    rep.lambda = p.lambda;
    rep.min_sup = 2.0;
    const double x_floor = t.back();
    for (std::size_t i = 0; i < x_samples; ++i) {
        const double x = 0.5 * p.b * (static_cast<double>(i) + 0.5) /
                         static_cast<double>(x_samples);
        if (x <= x_floor) continue;
        // nearest sequence time below/above x
        const auto it = std::lower_bound(
            t.begin(), t.end(), x, [](double a_, double v) { return a_ > v; });
        double best = 2.0;
        if (it != t.end()) best = std::min(best, std::abs(x - *it));
        if (it != t.begin()) best = std::min(best, std::abs(x - *(it - 1)));
        rep.min_sup = std::min(rep.min_sup, a1_amplitude(p.lambda, best, g));
    }
    if (rep.min_sup > 1.5)
        throw std::invalid_argument(
            "a1_counterexample: no sample point covered by the sequence");
    const double hs = a1_sobolev_norm(p.lambda, p.s, g);
    rep.hs_norm_sq = hs * hs;
    rep.weak_constant = 0.5 * p.b / (4.0 * rep.hs_norm_sq);
    return rep;
}

// ---------------------------------------------------------------------------
// Convergence thresholds for the model sequences t_n = n^{-gamma}.
// ---------------------------------------------------------------------------

struct SharpnessVerdict {
    double local_threshold = 0.0;
    double global_threshold = 0.0;
    bool local_converges = false;   // s >= local threshold
    bool global_bounded = false;    // s >= global threshold
    std::string recommended_run;    // which experiment the verdict calls for
};

inline SharpnessVerdict sharpness_verdict(double gamma, double a, double s) {
    if (!(gamma > 0.0))
        throw std::invalid_argument("sharpness_verdict: gamma > 0");
    require_valid_dispersion(a);
    SharpnessVerdict v;
    if (a == 1.0) {
        v.local_threshold = 1.0 / (2.0 * gamma + 2.0);
        v.global_threshold = v.local_threshold;
    } else {
        const double base = a / (2.0 * gamma + 4.0);
        v.local_threshold = a > 1.0 ? std::min(base, 0.25) : base;
        v.global_threshold = base;
    }
    v.local_converges = s >= v.local_threshold;
    v.global_bounded = s >= v.global_threshold;
    v.recommended_run =
        v.local_converges ? "ratio-boundedness" : "counterexample schedule";
    return v;
}

}  // namespace smax
