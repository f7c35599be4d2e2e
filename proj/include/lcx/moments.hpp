#pragma once

#include <cmath>
#include <limits>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "lcx/classify.hpp"
#include "lcx/continuous.hpp"
#include "lcx/discrete.hpp"
#include "lcx/io.hpp"

namespace lcx {

/// Falling factorial (m)_n = m!/(m-n)!, with (m)_n = 0 for m < n and
/// (m)_0 = 1.  Exact integer arithmetic; throws on overflow.
inline long long falling_factorial(long long m, long long n) {
    if (m < 0 || n < 0) throw std::invalid_argument("falling_factorial: negative argument");
    if (m < n) return 0;
    long long acc = 1;
    for (long long j = 0; j < n; ++j) {
        const long long factor = m - j;
        if (factor != 0 && acc > std::numeric_limits<long long>::max() / factor)
            throw std::overflow_error("falling_factorial: overflow");
        acc *= factor;
    }
    return acc;
}

namespace detail {

// double-precision falling factorial for moment sums (supports can exceed
// the exact integer range; each factor is an exact small integer)
inline double falling_factorial_d(long long m, long long n) {
    if (m < n) return 0.0;
    double acc = 1.0;
    for (long long j = 0; j < n; ++j) acc *= static_cast<double>(m - j);
    return acc;
}

// E[(X)_r] in closed form for the tagged families; nullopt when no closed
// form applies.  geometric on {1,...}: r!(1-p)^{r-1}/p^r; the {0,...} variant:
// r!((1-p)/p)^r; poisson: lambda^r; binomial: (n)_r q^r.
inline std::optional<double> factorial_moment_closed(const DiscreteDist& d, long long r) {
    if (!d.family()) return std::nullopt;
    if (r == 0) return 1.0;
    const FamilyTag& t = *d.family();
    switch (t.kind) {
        case Family::geometric: {
            const double a = (1.0 - t.p) / t.p;
            double rf = 1.0;
            for (long long j = 2; j <= r; ++j) rf *= static_cast<double>(j);
            if (d.offset() == 0) return rf * std::pow(a, static_cast<double>(r));
            if (d.offset() == 1)
                return rf * std::pow(1.0 - t.p, static_cast<double>(r - 1)) /
                       std::pow(t.p, static_cast<double>(r));
            return std::nullopt;
        }
        case Family::poisson:
            return std::pow(t.lambda, static_cast<double>(r));
        case Family::binomial:
            return falling_factorial_d(t.n, r) * std::pow(t.p, static_cast<double>(r));
        case Family::custom:
            return std::nullopt;
    }
    return std::nullopt;
}

inline double factorial_moment_raw(const DiscreteDist& d, long long r) {
    if (auto closed = factorial_moment_closed(d, r)) return *closed;
    long double s = 0.0L;
    for (std::size_t i = 0; i < d.size(); ++i) {
        const long long k = d.offset() + static_cast<long long>(i);
        if (k < r) continue;
        s += static_cast<long double>(d.probs()[i]) * falling_factorial_d(k, r);
    }
    return static_cast<double>(s);
}

}  // namespace detail

enum class FactNorm { raw, keilson, ulc_n };

/// Table of factorial moments E[(X)_p] for p = 0..P under the chosen
/// normalization: raw, Keilson's E[(X)_p]/p!, or the ULC(n) form
/// E[(X)_p]/(n)_p.  Serializes as CSV `p,value`.
struct FactorialMomentTable {
    std::vector<double> values;
    FactNorm normalization = FactNorm::raw;
    int n = 0;  // for the ulc_n normalization

    void write_csv(std::ostream& out) const {
        out << "p,value\n";
        for (std::size_t p = 0; p < values.size(); ++p)
            out << p << ',' << format_g12(values[p]) << '\n';
    }
};

inline FactorialMomentTable factorial_moments(const DiscreteDist& d, int P,
                                              FactNorm norm = FactNorm::raw, int n = 0) {
    if (P < 0) throw std::invalid_argument("factorial_moments: P must be >= 0");
    if (d.offset() < 0)
        throw std::invalid_argument("factorial_moments: support must be non-negative");
    FactorialMomentTable t;
    t.normalization = norm;
    t.n = n;
    double factorial = 1.0;
    for (int p = 0; p <= P; ++p) {
        if (p > 1) factorial *= static_cast<double>(p);
        double v = detail::factorial_moment_raw(d, p);
        switch (norm) {
            case FactNorm::raw:
                break;
            case FactNorm::keilson:
                v /= factorial;
                break;
            case FactNorm::ulc_n: {
                const double denom = detail::falling_factorial_d(n, p);
                v = denom > 0.0 ? v / denom : 0.0;
                break;
            }
        }
        t.values.push_back(v);
    }
    return t;
}

/// Result of a log-concavity check over a moment sequence.
struct SlackReport {
    double min_log_slack = kInf;  // +inf when no inequality applied
    bool verdict = true;
    std::optional<int> witness;
};

/// Keilson: for discrete log-concave X on the non-negative integers,
/// Phi(p) = E[(X)_p]/p! is a log-concave sequence.  With
/// enforce_precondition=false the inequality is evaluated regardless of the
/// input's class (negative controls).
inline SlackReport keilson_check(const DiscreteDist& d, int P,
                                 bool enforce_precondition = true) {
    if (enforce_precondition && !is_log_concave_discrete(d).is_member)
        throw std::invalid_argument("keilson_check: input is not discrete log-concave");
    const FactorialMomentTable t = factorial_moments(d, P, FactNorm::keilson);
    SlackReport r;
    for (int p = 0; p + 2 <= P; ++p) {
        const double a = t.values[static_cast<std::size_t>(p)];
        const double b = t.values[static_cast<std::size_t>(p + 1)];
        const double c = t.values[static_cast<std::size_t>(p + 2)];
        if (c <= 0.0 || b <= 0.0) break;  // beyond the support; (m)_n = 0 convention
        const double slack = 2.0 * std::log(b) - std::log(a) - std::log(c);
        if (slack < r.min_log_slack) r.min_log_slack = slack;
        if (slack < -1e-9 && r.verdict) {
            r.verdict = false;
            r.witness = p;
        }
    }
    return r;
}

/// Theorem-1.6-style strengthening: E[(X)_p]^2 >= c_n(p) E[(X)_{p+1}] E[(X)_{p-1}]
/// with c_n(p) = 1 + 1/(n-p) for ULC(n) and c = 1 for ULC.
inline SlackReport ulc_factorial_check(const DiscreteDist& d, std::optional<int> n, int P,
                                       bool enforce_precondition = true) {
    if (enforce_precondition && !is_ulc(d, n).is_member)
        throw std::invalid_argument("ulc_factorial_check: input is not in the stated class");
    const FactorialMomentTable t = factorial_moments(d, P, FactNorm::raw);
    SlackReport r;
    for (int p = 1; p + 1 <= P; ++p) {
        if (n && p >= *n) break;
        const double prev = t.values[static_cast<std::size_t>(p - 1)];
        const double cur = t.values[static_cast<std::size_t>(p)];
        const double next = t.values[static_cast<std::size_t>(p + 1)];
        if (cur <= 0.0 || next <= 0.0) break;
        const double lc = n ? std::log1p(1.0 / static_cast<double>(*n - p)) : 0.0;
        const double slack = 2.0 * std::log(cur) - lc - std::log(next) - std::log(prev);
        if (slack < r.min_log_slack) r.min_log_slack = slack;
        if (slack < -1e-9 && r.verdict) {
            r.verdict = false;
            r.witness = p;
        }
    }
    return r;
}

/// E[X^alpha] with 0^alpha = 0; exact finite sum for discrete laws,
/// closed forms or adaptive quadrature for continuous ones.
inline double moment(const DiscreteDist& d, double alpha) {
    if (!(alpha > 0.0)) throw std::invalid_argument("moment: alpha must be > 0");
    if (d.offset() < 0)
        throw std::invalid_argument("moment: support must be non-negative for real powers");
    long double s = 0.0L;
    for (std::size_t i = 0; i < d.size(); ++i) {
        const long long k = d.offset() + static_cast<long long>(i);
        if (k == 0) continue;
        s += static_cast<long double>(d.probs()[i]) *
             std::pow(static_cast<double>(k), alpha);
    }
    return static_cast<double>(s);
}

inline double moment(const ContinuousDist& d, double alpha) {
    if (!(alpha > 0.0)) throw std::invalid_argument("moment: alpha must be > 0");
    switch (d.family()) {
        case ContFamily::exponential:
            return std::exp(std::lgamma(alpha + 1.0)) / std::pow(d.rate(), alpha);
        case ContFamily::uniform: {
            const double a = d.uniform_lo(), b = d.uniform_hi();
            if (a < 0.0) throw std::invalid_argument("moment: support must be non-negative");
            return (std::pow(b, alpha + 1.0) - std::pow(a, alpha + 1.0)) /
                   ((alpha + 1.0) * (b - a));
        }
        case ContFamily::gaussian:
            throw std::invalid_argument("moment: gaussian support includes negatives");
        case ContFamily::grid: {
            if (d.support_lo() < 0.0)
                throw std::invalid_argument("moment: support must be non-negative");
            const auto& g = d.grid();
            double s = 0.0;
            const double tol = 1e-10 / static_cast<double>(g.x.size());
            for (std::size_t i = 0; i + 1 < g.x.size(); ++i) {
                s += detail::adaptive_simpson(
                    [&](double t) { return std::pow(t, alpha) * d.density(t); }, g.x[i],
                    g.x[i + 1], tol);
            }
            return s;
        }
    }
    return 0.0;
}

/// A_{alpha,beta} = E[Z^beta]^{1/beta} / E[Z^alpha]^{1/alpha} for a log-affine
/// reference Z (the sharp constant in the moment-comparison corollary).
inline double moment_comparison_constant(double alpha, double beta, const DiscreteDist& z) {
    if (!(alpha > 0.0 && alpha <= beta))
        throw std::invalid_argument("moment_comparison_constant: need 0 < alpha <= beta");
    const bool affine =
        is_log_affine(z, IntSupport{z.offset(),
                                    z.unbounded_family()
                                        ? std::nullopt
                                        : std::optional<long long>(z.max_support())})
            .is_member;
    if (!affine)
        throw std::invalid_argument("moment_comparison_constant: reference is not log-affine");
    if (alpha == beta) return 1.0;
    return std::pow(moment(z, beta), 1.0 / beta) / std::pow(moment(z, alpha), 1.0 / alpha);
}

inline double moment_comparison_constant(double alpha, double beta, const ContinuousDist& z) {
    if (!(alpha > 0.0 && alpha <= beta))
        throw std::invalid_argument("moment_comparison_constant: need 0 < alpha <= beta");
    if (z.family() != ContFamily::exponential)
        throw std::invalid_argument("moment_comparison_constant: reference is not log-affine");
    if (alpha == beta) return 1.0;
    // rate cancels: Gamma(beta+1)^{1/beta} / Gamma(alpha+1)^{1/alpha}
    return std::exp(std::lgamma(beta + 1.0) / beta - std::lgamma(alpha + 1.0) / alpha);
}

/// Outcome of one moment-comparison corollary evaluation.
struct MomentBoundReport {
    double lhs = 0.0;  // E[X^beta]^{1/beta}
    double rhs = 0.0;  // the corollary's right-hand side
    bool holds = true;
    double log_slack = 0.0;  // log rhs - log lhs
};

namespace detail {

inline MomentBoundReport make_moment_report(double lhs, double rhs) {
    MomentBoundReport r;
    r.lhs = lhs;
    r.rhs = rhs;
    r.log_slack = std::log(rhs) - std::log(lhs);
    r.holds = r.log_slack >= -1e-9;
    return r;
}

inline double gamma_ratio(double alpha, double beta) {
    return std::exp(std::lgamma(beta + 1.0) / beta - std::lgamma(alpha + 1.0) / alpha);
}

}  // namespace detail

/// Discrete moment-comparison corollaries for log-concave X on the
/// non-negative integers:
///   1 <= alpha <= beta, E[X] >= 1:
///       E[X^b]^{1/b} <= e (G(b+1)^{1/b}/G(a+1)^{1/a}) E[X^a]^{1/a}
///   alpha in (0,1], beta >= alpha:
///       E[X^b]^{1/b} <= 2^{1/a-1} (G(b+1)^{1/b}/G(a+1)^{1/a}) (E[X^a]^{1/a} + 1)
inline MomentBoundReport corollary_moment_bounds(const DiscreteDist& d, double alpha,
                                                 double beta) {
    if (!(alpha > 0.0 && beta >= alpha))
        throw std::invalid_argument("corollary_moment_bounds: need 0 < alpha <= beta");
    if (!is_log_concave_discrete(d).is_member)
        throw std::invalid_argument("corollary_moment_bounds: input is not log-concave");
    if (d.offset() < 0)
        throw std::invalid_argument("corollary_moment_bounds: support must be non-negative");
    const double ma = std::pow(moment(d, alpha), 1.0 / alpha);
    const double lhs = std::pow(moment(d, beta), 1.0 / beta);
    if (alpha >= 1.0) {
        if (mean(d) < 1.0 - 1e-12)
            throw std::invalid_argument("corollary_moment_bounds: needs E[X] >= 1");
        return detail::make_moment_report(lhs,
                                          std::exp(1.0) * detail::gamma_ratio(alpha, beta) * ma);
    }
    const double rhs = std::pow(2.0, 1.0 / alpha - 1.0) * detail::gamma_ratio(alpha, beta) *
                       (ma + 1.0);
    return detail::make_moment_report(lhs, rhs);
}

/// Continuous corollary: for non-negative X with log-concave density,
/// E[X^b]^{1/b} <= (G(b+1)^{1/b}/G(a+1)^{1/a}) E[X^a]^{1/a}; equality for the
/// exponential family.
inline MomentBoundReport corollary_moment_bounds(const ContinuousDist& d, double alpha,
                                                 double beta) {
    if (!(alpha > 0.0 && beta >= alpha))
        throw std::invalid_argument("corollary_moment_bounds: need 0 < alpha <= beta");
    if (d.support_lo() < 0.0)
        throw std::invalid_argument("corollary_moment_bounds: support must be non-negative");
    if (!detail::is_log_concave_density(d))
        throw std::invalid_argument("corollary_moment_bounds: density is not log-concave");
    const double lhs = std::pow(moment(d, beta), 1.0 / beta);
    const double rhs =
        detail::gamma_ratio(alpha, beta) * std::pow(moment(d, alpha), 1.0 / alpha);
    return detail::make_moment_report(lhs, rhs);
}

}  // namespace lcx
