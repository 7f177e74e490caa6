#pragma once

// Decreasing time sequences and their Lorentz-scale classification: weak-lr
// quasinorms, critical exponent estimation, convexity checks, dyadic buckets,
// doubling bounds and the exponent maps tying s, r and a together.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace smax {

struct TimeSequence {
    std::vector<double> values;  // nonincreasing, in (0, 1]
    std::string tag = "custom";

    TimeSequence() = default;
    TimeSequence(std::vector<double> v, std::string t = "custom")
        : values(std::move(v)), tag(std::move(t)) {
        validate();
    }

    std::size_t size() const { return values.size(); }
    double operator[](std::size_t i) const { return values[i]; }

    void validate() const {
        if (values.size() < 2)
            throw std::invalid_argument("TimeSequence: need at least 2 terms");
        double prev = 1.0 + 1e-12;
        for (double t : values) {
            if (!(t > 0.0) || t > 1.0 + 1e-12)
                throw std::invalid_argument(
                    "TimeSequence: values must lie in (0, 1]");
            if (t > prev + 1e-15)
                throw std::invalid_argument(
                    "TimeSequence: values must be nonincreasing");
            prev = t;
        }
    }
};

enum class SequenceKind { power, power_log, geometric };

// power:     t_n = n^{-gamma}
// power_log: t_n = n^{-gamma} log(n+1), leading non-monotone entries dropped,
//            rescaled by the maximum into (0, 1]
// geometric: t_n = q^n
inline TimeSequence generate_sequence(SequenceKind kind, double param,
                                      std::size_t n_terms) {
    if (n_terms < 2)
        throw std::invalid_argument("generate_sequence: need N >= 2");
    std::vector<double> v;
    v.reserve(n_terms);
    switch (kind) {
        case SequenceKind::power: {
            if (!(param > 0.0))
                throw std::invalid_argument("generate_sequence: gamma > 0");
            for (std::size_t n = 1; n <= n_terms; ++n)
                v.push_back(std::pow(static_cast<double>(n), -param));
            return TimeSequence(std::move(v),
                                "power gamma=" + std::to_string(param));
        }
        case SequenceKind::power_log: {
            if (!(param > 0.0))
                throw std::invalid_argument("generate_sequence: gamma > 0");
            // raw_n = n^{-gamma} log(n+1) peaks at some small n; keep the
            // decreasing tail and normalize by the peak value
            auto raw = [param](std::size_t n) {
                return std::pow(static_cast<double>(n), -param) *
                       std::log(static_cast<double>(n + 1));
            };
            std::size_t peak = 1;
            double peak_val = raw(1);
            for (std::size_t n = 2; n <= 10'000'000; ++n) {
                const double r = raw(n);
                if (r > peak_val) {
                    peak_val = r;
                    peak = n;
                }
                if (n > 4 * peak + 16) break;
            }
            for (std::size_t n = peak; n < peak + n_terms; ++n)
                v.push_back(raw(n) / peak_val);
            return TimeSequence(std::move(v),
                                "power_log gamma=" + std::to_string(param));
        }
        case SequenceKind::geometric: {
            if (!(param > 0.0 && param < 1.0))
                throw std::invalid_argument(
                    "generate_sequence: q must be in (0,1)");
            double t = 1.0;
            for (std::size_t n = 1; n <= n_terms; ++n) {
                t *= param;
                v.push_back(t);
            }
            return TimeSequence(std::move(v),
                                "geometric q=" + std::to_string(param));
        }
    }
    throw std::logic_error("generate_sequence: unreachable");
}

// sup_k t_k^r #{n : t_n >= t_k}; realizes sup_b b^r #{n : t_n > b} exactly
// for finite sequences (jump candidates of the counting step function).
inline double lorentz_quasinorm(const TimeSequence& seq, double r) {
    if (!(r > 0.0))
        throw std::invalid_argument("lorentz_quasinorm: r must be > 0");
    double best = 0.0;
    const auto& t = seq.values;
    std::size_t k = 0;
    while (k < t.size()) {
        // count ties so #{n : t_n >= t_k} uses the last equal index
        std::size_t j = k;
        while (j + 1 < t.size() && t[j + 1] == t[k]) ++j;
        const double val = std::pow(t[k], r) * static_cast<double>(j + 1);
        best = std::max(best, val);
        k = j + 1;
    }
    return best;
}

struct ExponentFit {
    double exponent = 0.0;
    double residual = 0.0;  // rms residual of the log-log fit
    bool low_confidence = false;
};

// Estimated infimal r with {t_n} in weak-lr: slope of log #{t_n > b} against
// log(1/b) over the middle dyadic decades of the truncated range.
inline ExponentFit critical_exponent(const TimeSequence& seq,
                                     double residual_threshold = 0.1) {
    if (seq.size() < 100)
        throw std::invalid_argument("critical_exponent: need N >= 100");
    const auto& t = seq.values;  // nonincreasing
    const double t_min = t.back();
    const double t_max = t.front();
    const int lo_level = static_cast<int>(std::floor(-std::log2(t_max))) + 1;
    const int hi_level = static_cast<int>(std::ceil(-std::log2(t_min))) - 1;
    std::vector<double> xs, ys;
    for (int lev = lo_level; lev <= hi_level; ++lev) {
        const double b = std::ldexp(1.0, -lev);
        // #{n : t_n > b} on the sorted-descending array
        const auto it = std::lower_bound(t.begin(), t.end(), b,
                                         [](double a, double v) { return a > v; });
        const auto count = static_cast<double>(it - t.begin());
        if (count < 1.0) continue;
        xs.push_back(static_cast<double>(lev) * std::log(2.0));  // log(1/b)
        ys.push_back(std::log(count));
    }
    // keep the middle portion; the head is pre-asymptotic, the tail truncated
    const std::size_t m = xs.size();
    if (m < 4)
        throw std::invalid_argument(
            "critical_exponent: sequence range spans too few dyadic levels");
    const std::size_t trim = m / 4;
    std::vector<double> fx(xs.begin() + trim, xs.end() - trim);
    std::vector<double> fy(ys.begin() + trim, ys.end() - trim);
    if (fx.size() < 2) {
        fx = xs;
        fy = ys;
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    const double n = static_cast<double>(fx.size());
    for (std::size_t i = 0; i < fx.size(); ++i) {
        sx += fx[i];
        sy += fy[i];
        sxx += fx[i] * fx[i];
        sxy += fx[i] * fy[i];
    }
    const double denom = n * sxx - sx * sx;
    ExponentFit fit;
    fit.exponent = (n * sxy - sx * sy) / denom;
    double rss = 0.0;
    const double icpt = (sy - fit.exponent * sx) / n;
    for (std::size_t i = 0; i < fx.size(); ++i) {
        const double e = fy[i] - (icpt + fit.exponent * fx[i]);
        rss += e * e;
    }
    fit.residual = std::sqrt(rss / n);
    fit.low_confidence = fit.residual > residual_threshold;
    return fit;
}

struct ConvexityReport {
    bool ok = true;
    std::size_t first_violation = 0;  // index n of the first bad gap/value
};

// true iff t_n and the gaps t_n - t_{n+1} are both nonincreasing; on failure
// first_violation is the 0-based index whose gap is exceeded by the next one
inline ConvexityReport is_decreasing_convex(const TimeSequence& seq) {
    const auto& t = seq.values;
    for (std::size_t n = 0; n + 1 < t.size(); ++n) {
        if (t[n + 1] > t[n]) return {false, n};
        if (n + 2 < t.size()) {
            const double g0 = t[n] - t[n + 1];
            const double g1 = t[n + 1] - t[n + 2];
            if (g1 > g0 + 1e-15 * t[n]) return {false, n};
        }
    }
    return {true, 0};
}

struct BucketFamily {
    std::map<int, std::vector<std::size_t>> buckets;  // l -> indices
    double exponent = 0.0;                            // e in thresholds 2^{-l e}
    double a = 0.0;
    double r = 0.0;

    int bucket_of_index(std::size_t n) const {
        for (const auto& [l, idx] : buckets)
            if (std::binary_search(idx.begin(), idx.end(), n)) return l;
        return -1;
    }
};

inline double bucket_exponent(double a, double r) {
    if (!(a > 0.0) || !(r > 0.0))
        throw std::invalid_argument("dyadic_buckets: a, r must be > 0");
    return a == 1.0 ? 1.0 / (1.0 + r) : a / (1.0 + 2.0 * r);
}

// bucket level of a single time value for threshold exponent e
inline int bucket_level(double t, double e) {
    int l = static_cast<int>(std::floor(-std::log2(t) / e));
    if (l < 0) l = 0;
    while (l > 0 && t > std::exp2(-e * l)) --l;
    while (t <= std::exp2(-e * (l + 1))) ++l;
    return l;
}

// N_l = { n : 2^{-(l+1)e} < t_n <= 2^{-l e} }, e = a/(1+2r); for a = 1 the
// exponent is e = 1/(1+r). Every index lands in exactly one bucket.
inline BucketFamily dyadic_buckets(const TimeSequence& seq, double a, double r) {
    BucketFamily fam;
    fam.exponent = bucket_exponent(a, r);
    fam.a = a;
    fam.r = r;
    const double e = fam.exponent;
    for (std::size_t n = 0; n < seq.size(); ++n)
        fam.buckets[bucket_level(seq[n], e)].push_back(n);
    return fam;
}

// A = sup_b b^r #{n : b < t_n <= 2b}. The step function's jump candidates are
// b in {t_k} and {t_k / 2}; at each the sup sees both the value and the
// left limit (window [b, 2b) as b decreases through t_k).
inline double doubling_bound(const TimeSequence& seq, double r) {
    if (!(r > 0.0))
        throw std::invalid_argument("doubling_bound: r must be > 0");
    const auto& t = seq.values;  // nonincreasing
    const auto count_open_closed = [&](double lo, double hi) {
        // #{n : lo < t_n <= hi} on a descending array
        const auto ge = std::lower_bound(t.begin(), t.end(), hi,
                                         [](double a, double v) { return a > v; });
        const auto gt = std::lower_bound(t.begin(), t.end(), lo,
                                         [](double a, double v) { return a > v; });
        const auto le_hi = t.end() - ge;  // count of t_n <= hi
        const auto le_lo = t.end() - gt;  // count of t_n <= lo
        return static_cast<double>(le_hi - le_lo);
    };
    const auto count_closed_open = [&](double lo, double hi) {
        // #{n : lo <= t_n < hi}
        const auto gt_ge = std::upper_bound(
            t.begin(), t.end(), hi, [](double v, double a) { return a < v; });
        const auto gt_lo = std::upper_bound(
            t.begin(), t.end(), lo, [](double v, double a) { return a < v; });
        return static_cast<double>(gt_lo - gt_ge);
    };
    double best = 0.0;
    std::vector<double> cands;
    cands.reserve(2 * t.size());
    for (double v : t) {
        cands.push_back(v);
        cands.push_back(v / 2.0);
    }
    std::sort(cands.begin(), cands.end());
    cands.erase(std::unique(cands.begin(), cands.end()), cands.end());
    for (double b : cands) {
        const double at = count_open_closed(b, 2.0 * b);
        const double left = count_closed_open(b, 2.0 * b);
        best = std::max(best, std::pow(b, r) * std::max(at, left));
    }
    return best;
}

// #{n : b < t_n <= 2b} at a given scale
inline std::size_t doubling_count(const TimeSequence& seq, double b) {
    const auto& t = seq.values;
    std::size_t c = 0;
    for (double v : t)
        if (v > b && v <= 2.0 * b) ++c;
    return c;
}

struct ExponentMap {
    double r = 0.0;       // 2s/(a-4s)
    double rho = 0.0;     // 2s/(1-2s)
    double s_back = 0.0;  // ar/(2+4r) evaluated at r above
};

inline double critical_r(double s, double a) {
    if (!(s > 0.0) || !(s < a / 4.0))
        throw std::invalid_argument("critical_r: need 0 < s < a/4");
    return 2.0 * s / (a - 4.0 * s);
}

inline double critical_rho(double s) {
    if (!(s > 0.0) || !(s < 0.5))
        throw std::invalid_argument("critical_rho: need 0 < s < 1/2");
    return 2.0 * s / (1.0 - 2.0 * s);
}

inline double s_from_r(double r, double a) {
    if (!(r > 0.0))
        throw std::invalid_argument("s_from_r: r must be > 0");
    return a * r / (2.0 + 4.0 * r);
}

inline ExponentMap exponent_map(double s, double a) {
    ExponentMap m;
    m.r = critical_r(s, a);
    m.rho = critical_rho(s);
    m.s_back = s_from_r(m.r, a);
    return m;
}

// ---------------------------------------------------------------------------
// Plain-text serialization: one value per line, '#' comment lines.
// ---------------------------------------------------------------------------

inline void write_sequence(std::ostream& os, const TimeSequence& seq) {
    os << "# time sequence: " << seq.tag << "\n";
    os << "# terms: " << seq.size() << "\n";
    char buf[48];
    for (double t : seq.values) {
        std::snprintf(buf, sizeof(buf), "%.17g", t);
        os << buf << "\n";
    }
}

inline TimeSequence read_sequence(std::istream& is, std::string tag = "file") {
    std::vector<double> v;
    std::string line;
    while (std::getline(is, line)) {
        const auto pos = line.find('#');
        if (pos != std::string::npos) line.erase(pos);
        std::istringstream ss(line);
        double t;
        if (ss >> t) v.push_back(t);
    }
    return TimeSequence(std::move(v), std::move(tag));
}

inline void save_sequence(const std::string& path, const TimeSequence& seq) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("save_sequence: cannot open " + path);
    write_sequence(os, seq);
}

inline TimeSequence load_sequence(const std::string& path) {
    std::ifstream is(path);
    if (!is) throw std::runtime_error("load_sequence: cannot open " + path);
    return read_sequence(is, path);
}

}  // namespace smax
