#pragma once

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <vector>

#include "lcx/classify.hpp"
#include "lcx/continuous.hpp"
#include "lcx/discrete.hpp"
#include "lcx/io.hpp"

namespace lcx {

/// Rényi entropy value; `differential` distinguishes h_alpha from H_alpha.
struct EntropyValue {
    double alpha = 1.0;
    double value = 0.0;
    bool differential = false;
};

namespace detail {

// sum_k pmf(k)^alpha for a discrete law.  Tagged geometric sums in closed
// form and tagged poisson extends the series beyond the truncation point, so
// the result carries no truncation error (H_alpha is tail-sensitive for
// alpha < 1).
inline double power_sum(const DiscreteDist& d, double alpha) {
    if (d.family() && d.family()->kind == Family::geometric) {
        const double p = d.family()->p;
        // sum p^a (1-p)^{a(k-offset)} = p^a / (1 - (1-p)^a)
        return std::pow(p, alpha) / -std::expm1(alpha * std::log1p(-p));
    }
    long double s = 0.0L;
    for (double v : d.probs())
        if (v > 0.0) s += std::pow(static_cast<long double>(v), alpha);
    if (d.family() && d.family()->kind == Family::poisson) {
        for (long long k = d.max_support() + 1;; ++k) {
            const long double term =
                std::exp(alpha * static_cast<long double>(d.log_pmf(k)));
            s += term;
            if (term < 1e-30L * s || k > d.max_support() + 100000) break;
        }
    }
    return static_cast<double>(s);
}

// -sum_k pmf(k) log pmf(k), with the same tagged-family extensions.
inline double shannon_sum(const DiscreteDist& d) {
    if (d.family() && d.family()->kind == Family::geometric) {
        const double p = d.family()->p;
        return -std::log(p) - (1.0 - p) / p * std::log1p(-p);
    }
    long double s = 0.0L;
    for (double v : d.probs())
        if (v > 0.0) s -= static_cast<long double>(v) * std::log(v);
    if (d.family() && d.family()->kind == Family::poisson) {
        for (long long k = d.max_support() + 1;; ++k) {
            const double lp = d.log_pmf(k);
            const long double term = -std::exp(static_cast<long double>(lp)) * lp;
            s += term;
            if (term < 1e-30L * std::max(s, 1.0L) || k > d.max_support() + 100000) break;
        }
    }
    return static_cast<double>(s);
}

}  // namespace detail

/// H_alpha(X) = (1-alpha)^{-1} log sum_k x_k^alpha, with the special cases
/// H_0 = log |support|, H_1 = Shannon (0 log 0 = 0), H_inf = -log max_k x_k.
/// alpha = 1 is computed by its own branch, never as a limit.
inline EntropyValue renyi(const DiscreteDist& d, double alpha) {
    if (!(alpha >= 0.0)) throw std::invalid_argument("renyi: alpha must be >= 0");
    EntropyValue e;
    e.alpha = alpha;
    e.differential = false;
    if (alpha == 0.0) {
        if (d.unbounded_family()) {
            e.value = kInf;
            return e;
        }
        std::size_t cnt = 0;
        for (double v : d.probs())
            if (v > 0.0) ++cnt;
        e.value = std::log(static_cast<double>(cnt));
        return e;
    }
    if (std::isinf(alpha)) {
        double mx = 0.0;
        for (double v : d.probs()) mx = std::max(mx, v);
        e.value = -std::log(mx);
        return e;
    }
    if (alpha == 1.0) {
        e.value = detail::shannon_sum(d);
        return e;
    }
    e.value = std::log(detail::power_sum(d, alpha)) / (1.0 - alpha);
    return e;
}

/// Differential Rényi entropy h_alpha; closed forms per family, exact
/// segment integrals for grids.
inline EntropyValue renyi(const ContinuousDist& d, double alpha) {
    if (!(alpha >= 0.0)) throw std::invalid_argument("renyi: alpha must be >= 0");
    EntropyValue e;
    e.alpha = alpha;
    e.differential = true;
    switch (d.family()) {
        case ContFamily::exponential: {
            const double r = d.rate();
            if (alpha == 0.0)
                e.value = kInf;
            else if (std::isinf(alpha))
                e.value = -std::log(r);
            else if (alpha == 1.0)
                e.value = 1.0 - std::log(r);
            else
                e.value = -std::log(r) - std::log(alpha) / (1.0 - alpha);
            return e;
        }
        case ContFamily::uniform:
            e.value = std::log(d.uniform_hi() - d.uniform_lo());
            return e;
        case ContFamily::gaussian: {
            const double half_log = 0.5 * std::log(2.0 * M_PI * d.gauss_var());
            if (alpha == 0.0)
                e.value = kInf;
            else if (std::isinf(alpha))
                e.value = half_log;
            else if (alpha == 1.0)
                e.value = half_log + 0.5;
            else
                e.value = half_log - 0.5 * std::log(alpha) / (1.0 - alpha);
            return e;
        }
        case ContFamily::grid: {
            const auto& g = d.grid();
            if (alpha == 0.0) {
                e.value = std::log(g.x.back() - g.x.front());
                return e;
            }
            if (std::isinf(alpha)) {
                double mx = 0.0;
                for (double v : g.f) mx = std::max(mx, v);
                e.value = -std::log(mx);
                return e;
            }
            double s = 0.0;
            if (alpha == 1.0) {
                for (std::size_t i = 0; i + 1 < g.x.size(); ++i)
                    s -= detail::seg_f_logf(g.x[i], g.x[i + 1], g.f[i], g.f[i + 1]);
                e.value = s;
                return e;
            }
            for (std::size_t i = 0; i + 1 < g.x.size(); ++i)
                s += detail::seg_mass(g.x[i], g.x[i + 1], std::pow(g.f[i], alpha),
                                      std::pow(g.f[i + 1], alpha));
            e.value = std::log(s) / (1.0 - alpha);
            return e;
        }
    }
    return e;
}

/// Entropy error budget for a right-truncated vector: the dropped mass times
/// the log scale of the smallest kept probability.
inline double entropy_truncation_budget(const DiscreteDist& d) {
    if (d.tail_mass_dropped() == 0.0) return 0.0;
    double mn = 1.0;
    for (double v : d.probs())
        if (v > 0.0) mn = std::min(mn, v);
    return d.tail_mass_dropped() * std::abs(std::log(mn));
}

/// The sufficient condition behind entropy maximization: with g the mass
/// function of Z, comparing E[g^{alpha-1}(X)] against E[g^{alpha-1}(Z)]
/// (reversed for alpha > 1; -E[log g] for alpha = 1) decides
/// H_alpha(X) <= H_alpha(Z).  Both the condition and the conclusion are
/// evaluated and reported.
struct Lemma51Report {
    double lhs = 0.0;
    double rhs = 0.0;
    bool sufficient_condition_holds = false;
    bool entropy_conclusion_holds = false;
    bool support_ok = true;
    double H_x = 0.0;
    double H_z = 0.0;
};

inline Lemma51Report lemma51_check(const DiscreteDist& x, const DiscreteDist& z, double alpha) {
    if (!(alpha > 0.0)) throw std::invalid_argument("lemma51_check: alpha must be > 0");
    Lemma51Report r;
    // E[phi(X)] with phi = g^{alpha-1} (or -log g); diverges if g vanishes on
    // x's support, which is flagged rather than silently dropped.
    long double lhs = 0.0L;
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x.probs()[i] == 0.0) continue;
        const long long k = x.offset() + static_cast<long long>(i);
        const double lg = z.log_pmf(k);
        if (lg == -kInf) {
            r.support_ok = false;
            break;
        }
        lhs += static_cast<long double>(x.probs()[i]) *
               (alpha == 1.0 ? -lg : std::exp((alpha - 1.0) * lg));
    }
    if (alpha == 1.0) {
        // -E[log g(Z)] is exactly the Shannon entropy of Z
        r.rhs = renyi(z, 1.0).value;
    } else {
        r.rhs = detail::power_sum(z, alpha);  // E[g^{alpha-1}(Z)] = sum g^alpha
    }
    r.lhs = static_cast<double>(lhs);
    const double tol = 1e-12 * std::max(1.0, std::abs(r.rhs));
    if (r.support_ok) {
        if (alpha > 1.0)
            r.sufficient_condition_holds = r.lhs >= r.rhs - tol;
        else
            r.sufficient_condition_holds = r.lhs <= r.rhs + tol;
    }
    r.H_x = renyi(x, alpha).value;
    r.H_z = renyi(z, alpha).value;
    const double budget =
        1e-9 + entropy_truncation_budget(x) + entropy_truncation_budget(z);
    r.entropy_conclusion_holds = r.H_x <= r.H_z + budget;
    return r;
}

/// One row of a maximum-entropy verification.
struct MaxEntropyRow {
    double alpha = 0.0;
    double H_x = 0.0;
    double H_z = 0.0;
    bool holds = true;
};

struct MaxEntropyReport {
    std::vector<MaxEntropyRow> rows;
    bool all_hold = true;
    double min_slack = kInf;  // min over alphas of H_z - H_x

    void write_csv(std::ostream& out) const {
        out << "alpha,H_x,H_z,holds\n";
        for (const auto& r : rows)
            out << format_g12(r.alpha) << ',' << format_g12(r.H_x) << ',' << format_g12(r.H_z)
                << ',' << (r.holds ? "true" : "false") << '\n';
    }
};

/// Maximum entropy of the matched-mean log-affine majorant (alpha <= 1):
/// verifies x ≺_lc z and then H_alpha(x) <= H_alpha(z) on the grid.
inline MaxEntropyReport max_entropy_check(const DiscreteDist& x, const DiscreteDist& z,
                                          const std::vector<double>& alpha_grid) {
    for (double a : alpha_grid)
        if (!(a > 0.0 && a <= 1.0))
            throw std::invalid_argument("max_entropy_check: alpha grid must lie in (0,1]");
    if (!relative_lc(x, z).is_member)
        throw std::invalid_argument("max_entropy_check: x is not log-concave relative to z");
    const double budget =
        1e-9 + entropy_truncation_budget(x) + entropy_truncation_budget(z);
    MaxEntropyReport rep;
    for (double a : alpha_grid) {
        MaxEntropyRow row;
        row.alpha = a;
        row.H_x = renyi(x, a).value;
        row.H_z = renyi(z, a).value;
        row.holds = row.H_x <= row.H_z + budget;
        rep.all_hold = rep.all_hold && row.holds;
        rep.min_slack = std::min(rep.min_slack, row.H_z - row.H_x);
        rep.rows.push_back(row);
    }
    return rep;
}

/// Continuous analogue with differential entropies.
inline MaxEntropyReport max_entropy_check(const ContinuousDist& x, const ContinuousDist& z,
                                          const std::vector<double>& alpha_grid) {
    for (double a : alpha_grid)
        if (!(a > 0.0 && a <= 1.0))
            throw std::invalid_argument("max_entropy_check: alpha grid must lie in (0,1]");
    if (!relative_LC_continuous(x, z).is_member)
        throw std::invalid_argument("max_entropy_check: x is not log-concave relative to z");
    MaxEntropyReport rep;
    for (double a : alpha_grid) {
        MaxEntropyRow row;
        row.alpha = a;
        row.H_x = renyi(x, a).value;
        row.H_z = renyi(z, a).value;
        row.holds = row.H_x <= row.H_z + 1e-9;
        rep.all_hold = rep.all_hold && row.holds;
        rep.min_slack = std::min(rep.min_slack, row.H_z - row.H_x);
        rep.rows.push_back(row);
    }
    return rep;
}

/// The alpha > 1 counterexample: Bernoulli((1-p)/p) against the matched-mean
/// geometric on the non-negative integers.  Returns both entropies, whether
/// the Bernoulli strictly exceeds, and E(p)/(p-1)^2 whose limit as p -> 1 is
/// alpha, where E(p) = p^{2a} - [(1-p)^a + (2p-1)^a](1 - (1-p)^a).
struct Prop53Report {
    double H_bernoulli = 0.0;
    double H_geometric = 0.0;
    bool strict_violation = false;
    double ratio_to_limit = 0.0;
};

inline Prop53Report prop53_counterexample(double alpha, double p) {
    if (!(alpha > 1.0)) throw std::invalid_argument("prop53: alpha must be > 1");
    if (!(p > 0.5 && p < 1.0)) throw std::invalid_argument("prop53: p must be in (1/2, 1)");
    Prop53Report r;
    const double q0 = (2.0 * p - 1.0) / p;  // P(X = 0)
    const double q1 = (1.0 - p) / p;        // P(X = 1)
    r.H_bernoulli =
        std::log(std::pow(q1, alpha) + std::pow(q0, alpha)) / (1.0 - alpha);
    // e^{(1-a) H_a(Z)} = p^a / (1 - (1-p)^a), independent of the support shift
    r.H_geometric = (alpha * std::log(p) -
                     std::log(-std::expm1(alpha * std::log1p(-p)))) /
                    (1.0 - alpha);
    r.strict_violation = r.H_bernoulli > r.H_geometric;
    const double E = std::pow(p, 2.0 * alpha) -
                     (std::pow(1.0 - p, alpha) + std::pow(2.0 * p - 1.0, alpha)) *
                         (1.0 - std::pow(1.0 - p, alpha));
    r.ratio_to_limit = E / ((p - 1.0) * (p - 1.0));
    return r;
}

}  // namespace lcx
