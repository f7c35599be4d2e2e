#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "lcx/io.hpp"
#include "lcx/oracle.hpp"
#include "lcx/rate.hpp"

namespace lcx {

/// Legendre transform value Lambda*(t).  `vacuous` marks a t outside the
/// achievable deviation range, where 0 (a trivial bound of 1) is returned.
struct LegendreResult {
    double value = 0.0;
    bool vacuous = false;
};

namespace detail {

// Golden-section maximization of a concave objective on [lo, hi] to an
// absolute abscissa tolerance of 1e-10.
template <typename F>
double golden_max(const F& f, double lo, double hi) {
    constexpr double inv_phi = 0.6180339887498949;
    double a = lo, b = hi;
    double c = b - inv_phi * (b - a);
    double d = a + inv_phi * (b - a);
    double fc = f(c), fd = f(d);
    for (int i = 0; i < 220 && (b - a) > 1e-10; ++i) {
        if (fc >= fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - inv_phi * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + inv_phi * (b - a);
            fd = f(d);
        }
    }
    return std::max(fc, fd);
}

}  // namespace detail

/// sup over the admissible half-line of lambda*t - Lambda(lambda); the
/// exponent of the Chernoff bound P(X >= t) <= exp(-Lambda_+*(t)) for any
/// X ≺_cx Z.  Brackets run from 0 to the divergence boundary minus 1e-8, or
/// expand by doubling when the domain is unbounded.
inline LegendreResult legendre(const RateFunction& rate, double t, Side side) {
    const double tiny = 1e-12 * std::max(1.0, std::abs(rate.mean));
    auto objective = [&](double l) { return l * t - rate.cgf(l); };
    double lo = 0.0, hi = 0.0;
    if (side == Side::geq) {
        if (t <= rate.mean + tiny) return {0.0, t < rate.mean - tiny};
        if (std::isfinite(rate.lambda_max)) {
            hi = rate.lambda_max - 1e-8;
        } else {
            hi = 1.0;
            while (hi < 690.0 && objective(2.0 * hi) > objective(hi)) hi *= 2.0;
            hi = std::min(2.0 * hi, 690.0);
        }
        if (hi <= lo) return {0.0, false};
    } else {
        if (t >= rate.mean - tiny) return {0.0, t > rate.mean + tiny};
        hi = 0.0;
        if (std::isfinite(rate.lambda_min)) {
            lo = rate.lambda_min + 1e-8;
        } else {
            lo = -1.0;
            while (lo > -690.0 && objective(2.0 * lo) > objective(lo)) lo *= 2.0;
            lo = std::max(2.0 * lo, -700.0);
        }
        if (hi <= lo) return {0.0, false};
    }
    return {std::max(0.0, detail::golden_max(objective, lo, hi)), false};
}

// ---------------------------------------------------------------------------
// Closed-form concentration bounds.  Each is clamped to 1 before reporting
// (the raw formulas can exceed 1 near the mean).

namespace detail {

inline double clamp_prob(double b) { return std::min(1.0, b); }

// t - 1 - log t, the deviation exponent shared by the geometric/exponential
// style bounds; non-negative for all t > 0 with equality at t = 1.
inline double deviation_exponent(double t) { return t - 1.0 - std::log(t); }

inline void check_multiplicative_t(double t, Side side) {
    if (!(t > 0.0)) throw std::invalid_argument("bound: t must be > 0");
    if (side == Side::geq && t < 1.0 - 1e-12)
        throw std::domain_error("bound: upper-tail form requires t >= 1");
    if (side == Side::leq && t > 1.0 + 1e-12)
        throw std::domain_error("bound: lower-tail form requires t <= 1");
}

}  // namespace detail

/// Sums of independent discrete log-concave variables on {1,2,...}:
/// P(S_n >=< t E[S_n]) <= exp(-(E[S_n]/max_i E[X_i]) (t - 1 - log t)).
inline double bound_sum_discrete_lc(const std::vector<double>& means, double t, Side side) {
    detail::check_multiplicative_t(t, side);
    if (means.empty()) throw std::invalid_argument("bound_sum_discrete_lc: no summands");
    double total = 0.0, mx = 0.0;
    for (double m : means) {
        if (!(m >= 1.0))
            throw std::invalid_argument("bound_sum_discrete_lc: means must be >= 1");
        total += m;
        mx = std::max(mx, m);
    }
    return detail::clamp_prob(std::exp(-(total / mx) * detail::deviation_exponent(t)));
}

/// Single discrete log-concave variable on {1,2,...}: P(X >=< t E[X]) <= t e^{1-t}.
inline double bound_single_lc(double mean, double t, Side side) {
    detail::check_multiplicative_t(t, side);
    if (!(mean >= 1.0)) throw std::invalid_argument("bound_single_lc: mean must be >= 1");
    return detail::clamp_prob(t * std::exp(1.0 - t));
}

/// Weighted sums of independent unit-mean positive continuous log-concave
/// variables: P(X_lambda >=< t lambda) <= exp(-lambda (min_i lambda_i)(t-1-log t)).
inline double bound_weighted_continuous(const std::vector<double>& lambda_weights, double t,
                                        Side side) {
    detail::check_multiplicative_t(t, side);
    if (lambda_weights.empty())
        throw std::invalid_argument("bound_weighted_continuous: no weights");
    double total = 0.0, mn = kInf;
    for (double w : lambda_weights) {
        if (!(w > 0.0))
            throw std::invalid_argument("bound_weighted_continuous: weights must be > 0");
        total += w;
        mn = std::min(mn, w);
    }
    return detail::clamp_prob(std::exp(-total * mn * detail::deviation_exponent(t)));
}

/// Weighted discrete sums, exponent exactly as printed in the source remark:
/// exp(-(min_i a_i E[X_i]) E[sum a_i X_i] (t - 1 - log t)).  See the report
/// command for the side-by-side comparison with the unweighted form.
inline double bound_weighted_discrete(const std::vector<double>& a_weights,
                                      const std::vector<double>& means, double t, Side side) {
    detail::check_multiplicative_t(t, side);
    if (a_weights.empty() || a_weights.size() != means.size())
        throw std::invalid_argument("bound_weighted_discrete: weights/means size mismatch");
    double weighted_total = 0.0, mn = kInf;
    for (std::size_t i = 0; i < a_weights.size(); ++i) {
        if (!(a_weights[i] > 0.0))
            throw std::invalid_argument("bound_weighted_discrete: weights must be > 0");
        if (!(means[i] >= 1.0))
            throw std::invalid_argument("bound_weighted_discrete: means must be >= 1");
        weighted_total += a_weights[i] * means[i];
        mn = std::min(mn, a_weights[i] * means[i]);
    }
    return detail::clamp_prob(
        std::exp(-mn * weighted_total * detail::deviation_exponent(t)));
}

/// Bernoulli relative entropy D(p||q) with the 0 log 0 = 0 convention.
inline double bernoulli_kl(double p, double q) {
    if (!(p >= 0.0 && p <= 1.0 && q > 0.0 && q < 1.0))
        throw std::invalid_argument("bernoulli_kl: arguments outside [0,1]");
    double s = 0.0;
    if (p > 0.0) s += p * std::log(p / q);
    if (p < 1.0) s += (1.0 - p) * std::log((1.0 - p) / (1.0 - q));
    return s;
}

/// ULC(n) Chernoff-Hoeffding bound: P(X >= (mu+t)n) <= exp(-n D(mu+t || mu)),
/// and symmetrically for the lower tail.
inline double bound_ulc_n(int n, double mu, double t, Side side) {
    if (n < 1) throw std::invalid_argument("bound_ulc_n: n must be >= 1");
    if (!(mu > 0.0 && mu < 1.0)) throw std::invalid_argument("bound_ulc_n: mu must be in (0,1)");
    if (!(t >= 0.0)) throw std::invalid_argument("bound_ulc_n: t must be >= 0");
    const double q = side == Side::geq ? mu + t : mu - t;
    if (q < -1e-12 || q > 1.0 + 1e-12)
        throw std::invalid_argument("bound_ulc_n: mu +- t outside [0,1]");
    return detail::clamp_prob(std::exp(-n * bernoulli_kl(std::clamp(q, 0.0, 1.0), mu)));
}

/// ULC (Poisson-reference) bound: P(X - E[X] >= t) <= exp(-t^2/(2(t+E[X]))),
/// P(X - E[X] <= -t) <= exp(-t^2/(2 E[X])).
inline double bound_ulc(double mean, double t, Side side) {
    if (!(mean > 0.0)) throw std::invalid_argument("bound_ulc: mean must be > 0");
    if (!(t >= 0.0)) throw std::invalid_argument("bound_ulc: t must be >= 0");
    const double expo =
        side == Side::geq ? t * t / (2.0 * (t + mean)) : t * t / (2.0 * mean);
    return detail::clamp_prob(std::exp(-expo));
}

/// Mgf bound for geometric(p)/exponential(p) references:
/// E[e^{theta Z}] <= exp(-(lambda/p) log(1 - theta/lambda)) for theta < lambda <= p.
inline double mgf_bound_lemma(double p, double theta, double lambda) {
    if (!(p > 0.0)) throw std::invalid_argument("mgf_bound_lemma: p must be > 0");
    if (!(lambda > 0.0 && lambda <= p && theta < lambda))
        throw std::invalid_argument("mgf_bound_lemma: requires theta < lambda <= p");
    return std::exp(-(lambda / p) * std::log1p(-theta / lambda));
}

// ---------------------------------------------------------------------------
// Bound curves: a deviation grid with bound values, oracle tails and
// domination verdicts.  Serializes as CSV `t,bound,oracle,dominated`.

struct BoundCurve {
    std::vector<double> t_grid;
    std::vector<double> bound;
    std::vector<double> oracle;      // empty when the oracle is off
    std::vector<double> oracle_ci;   // nonzero only for Monte Carlo oracles
    std::vector<bool> dominated;

    bool has_oracle() const { return !oracle.empty(); }

    bool all_dominated() const {
        for (bool b : dominated)
            if (!b) return false;
        return true;
    }

    void write_csv(std::ostream& out) const {
        out << "t,bound,oracle,dominated\n";
        for (std::size_t i = 0; i < t_grid.size(); ++i) {
            out << format_g12(t_grid[i]) << ',' << format_g12(bound[i]) << ',';
            if (has_oracle())
                out << format_g12(oracle[i]) << ',' << (dominated[i] ? "true" : "false");
            else
                out << ',';
            out << '\n';
        }
    }
};

namespace detail {

inline constexpr double kDominationTol = 1e-10;

inline void attach_exact_oracle(BoundCurve& c, const std::vector<double>& tails) {
    c.oracle = tails;
    c.oracle_ci.assign(tails.size(), 0.0);
    c.dominated.resize(tails.size());
    for (std::size_t i = 0; i < tails.size(); ++i)
        c.dominated[i] = tails[i] <= c.bound[i] + kDominationTol;
}

}  // namespace detail

/// Theorem-1.1-style curve; the exact oracle is the negative-binomial-type law
/// of a sum of geometrics with the given means.
inline BoundCurve curve_sum_discrete_lc(const std::vector<double>& means,
                                        const std::vector<double>& t_grid, Side side,
                                        bool with_oracle) {
    BoundCurve c;
    c.t_grid = t_grid;
    for (double t : t_grid) c.bound.push_back(bound_sum_discrete_lc(means, t, side));
    if (with_oracle) {
        std::vector<DiscreteDist> parts;
        double total = 0.0;
        for (double m : means) {
            parts.push_back(m == 1.0 ? point_mass(1) : geometric(1.0 / m));
            total += m;
        }
        const DiscreteDist s = convolve(parts);
        std::vector<double> tails;
        for (double t : t_grid) tails.push_back(tail(s, t * total, side));
        detail::attach_exact_oracle(c, tails);
    }
    return c;
}

/// Corollary-3.3 curve with the geometric oracle.
inline BoundCurve curve_single_lc(double mean, const std::vector<double>& t_grid, Side side,
                                  bool with_oracle) {
    BoundCurve c;
    c.t_grid = t_grid;
    for (double t : t_grid) c.bound.push_back(bound_single_lc(mean, t, side));
    if (with_oracle) {
        const DiscreteDist z = mean == 1.0 ? point_mass(1) : geometric(1.0 / mean);
        std::vector<double> tails;
        for (double t : t_grid) tails.push_back(tail(z, t * mean, side));
        detail::attach_exact_oracle(c, tails);
    }
    return c;
}

/// Theorem-1.3 curve with the binomial oracle; t is the deviation of the
/// success fraction, thresholds are (mu +- t) n.
inline BoundCurve curve_ulc_n(int n, double mu, const std::vector<double>& t_grid, Side side,
                              bool with_oracle) {
    BoundCurve c;
    c.t_grid = t_grid;
    for (double t : t_grid) c.bound.push_back(bound_ulc_n(n, mu, t, side));
    if (with_oracle) {
        const DiscreteDist z = binomial(n, mu);
        std::vector<double> tails;
        for (double t : t_grid) {
            const double thr = side == Side::geq ? (mu + t) * n : (mu - t) * n;
            tails.push_back(tail(z, thr, side));
        }
        detail::attach_exact_oracle(c, tails);
    }
    return c;
}

/// Theorem-1.4 curve with the Poisson oracle; t is the absolute deviation
/// from the mean.
inline BoundCurve curve_ulc(double mean, const std::vector<double>& t_grid, Side side,
                            bool with_oracle) {
    BoundCurve c;
    c.t_grid = t_grid;
    for (double t : t_grid) c.bound.push_back(bound_ulc(mean, t, side));
    if (with_oracle) {
        const DiscreteDist z = poisson(mean);
        std::vector<double> tails;
        for (double t : t_grid) {
            const double thr = side == Side::geq ? mean + t : mean - t;
            tails.push_back(tail(z, thr, side));
        }
        detail::attach_exact_oracle(c, tails);
    }
    return c;
}

/// Theorem-1.2 curve; the only feasible oracle is seeded Monte Carlo over the
/// given unit-mean summands.  Domination allows 3 confidence half-widths.
inline BoundCurve curve_weighted_continuous(const std::vector<double>& weights,
                                            const std::vector<ContinuousDist>& summands,
                                            const std::vector<double>& t_grid, Side side,
                                            bool with_oracle, std::size_t n_samples,
                                            std::uint64_t seed) {
    BoundCurve c;
    c.t_grid = t_grid;
    for (double t : t_grid) c.bound.push_back(bound_weighted_continuous(weights, t, side));
    if (with_oracle) {
        if (side != Side::geq)
            throw std::invalid_argument("curve_weighted_continuous: MC oracle covers side >= only");
        for (std::size_t i = 0; i < t_grid.size(); ++i) {
            const McTailResult r = mc_tail(summands, weights, t_grid[i], n_samples, seed + i);
            c.oracle.push_back(r.estimate);
            c.oracle_ci.push_back(r.ci_halfwidth);
            c.dominated.push_back(r.estimate <=
                                  c.bound[i] + 3.0 * r.ci_halfwidth + detail::kDominationTol);
        }
    }
    return c;
}

/// Generic engine curve: exp(-Lambda*(t)) for the reference rate function,
/// with the reference's own exact tail as oracle.  t is an absolute threshold.
template <typename Dist>
inline BoundCurve curve_chernoff(const Dist& z, const std::vector<double>& t_grid, Side side,
                                 bool with_oracle) {
    const RateFunction rate = rate_function(z);
    BoundCurve c;
    c.t_grid = t_grid;
    for (double t : t_grid) c.bound.push_back(std::exp(-legendre(rate, t, side).value));
    if (with_oracle) {
        std::vector<double> tails;
        for (double t : t_grid) tails.push_back(tail(z, t, side));
        detail::attach_exact_oracle(c, tails);
    }
    return c;
}

/// Both printed exponents for weighted discrete sums at a_i = 1, side by side;
/// the report surfaces the dimensional discrepancy instead of correcting it.
struct WeightedComparison {
    double weighted_bound;
    double unweighted_bound;
};

inline WeightedComparison remark_weighted_comparison(const std::vector<double>& a_weights,
                                                     const std::vector<double>& means, double t,
                                                     Side side) {
    return {bound_weighted_discrete(a_weights, means, t, side),
            bound_sum_discrete_lc(means, t, side)};
}

}  // namespace lcx
