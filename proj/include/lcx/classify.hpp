#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <vector>

#include "lcx/continuous.hpp"
#include "lcx/discrete.hpp"

namespace lcx {

// Class inequalities are checked in log space with a relative slack so that
// floating-point noise cannot flip verdicts on exact-equality families
// (binomial is ULC(n) with equality everywhere).  Strict mode sets the slack
// to zero.
inline constexpr double kDiscreteLogTol = 1e-9;
inline constexpr double kContinuousLogTol = 1e-7;

/// Outcome of a membership test.  `margin` is the minimum slack of the
/// defining inequality in log space (0 by convention when no inequality
/// applies); `witness` is the first support point whose inequality fails.
struct ClassVerdict {
    bool is_member = true;
    std::optional<long long> witness;
    double margin = 0.0;
};

namespace detail {

// Core test: is a non-negative sequence (given by its logs, -inf for zeros)
// log-concave with contiguous support?  `base` is the absolute support point
// of lw[0], used for witness reporting.
inline ClassVerdict log_concave_from_logs(const std::vector<double>& lw, long long base,
                                          double tol) {
    std::size_t lo = 0, hi = lw.size();
    while (lo < hi && lw[lo] == -kInf) ++lo;
    while (hi > lo && lw[hi - 1] == -kInf) --hi;
    if (lo == hi) return {true, std::nullopt, 0.0};
    for (std::size_t i = lo; i < hi; ++i) {
        if (lw[i] == -kInf)  // interior zero: support gap
            return {false, base + static_cast<long long>(i), -kInf};
    }
    ClassVerdict v;
    bool any = false;
    double margin = kInf;
    for (std::size_t i = lo + 1; i + 1 < hi; ++i) {
        const double slack = 2.0 * lw[i] - lw[i - 1] - lw[i + 1];
        any = true;
        if (slack < margin) margin = slack;
        if (slack < -tol && v.is_member) {
            v.is_member = false;
            v.witness = base + static_cast<long long>(i);
        }
    }
    v.margin = any ? margin : 0.0;
    return v;
}

}  // namespace detail

/// Discrete log-concavity: contiguous support and x_k^2 >= x_{k-1} x_{k+1}.
inline ClassVerdict is_log_concave_discrete(const DiscreteDist& d,
                                            double tol = kDiscreteLogTol) {
    std::vector<double> lw(d.size());
    for (std::size_t i = 0; i < d.size(); ++i)
        lw[i] = d.probs()[i] > 0.0 ? std::log(d.probs()[i]) : -kInf;
    return detail::log_concave_from_logs(lw, d.offset(), tol);
}

/// Ultra log-concavity of order n (binomial reference), or of infinite order
/// (Poisson reference) when n is nullopt:
///   x_k^2 >= (1 + 1/k)(1 + 1/(n-k)) x_{k-1} x_{k+1}   (finite n, 1<=k<=n-1)
///   x_k^2 >= (1 + 1/k) x_{k-1} x_{k+1}                (n = infinity, k>=1)
inline ClassVerdict is_ulc(const DiscreteDist& d, std::optional<int> n,
                           double tol = kDiscreteLogTol) {
    if (d.offset() < 0) throw std::invalid_argument("is_ulc: support must be non-negative");
    if (n && (*n < 1 || d.max_support() > *n))
        throw std::invalid_argument("is_ulc: support must lie in {0..n}");
    // contiguity first
    ClassVerdict base = is_log_concave_discrete(d, tol);
    if (!base.is_member && base.margin == -kInf) return base;
    ClassVerdict v;
    bool any = false;
    double margin = kInf;
    for (long long k = d.offset() + 1; k + 1 <= d.max_support(); ++k) {
        const double xk = d.pmf(k), xm = d.pmf(k - 1), xp = d.pmf(k + 1);
        if (xm <= 0.0 || xp <= 0.0) continue;  // neighbor zero: trivially satisfied
        double lc = std::log1p(1.0 / static_cast<double>(k));
        if (n) lc += std::log1p(1.0 / static_cast<double>(*n - k));
        const double slack = 2.0 * std::log(xk) - lc - std::log(xm) - std::log(xp);
        any = true;
        if (slack < margin) margin = slack;
        if (slack < -tol && v.is_member) {
            v.is_member = false;
            v.witness = k;
        }
    }
    v.margin = any ? margin : 0.0;
    return v;
}

/// Relative log-concavity x ≺_lc z: the ratio sequence
/// y_k = P(X=k)/P(Z=k) (0 where P(Z=k)=0) is log-concave on z's support.
/// z must have contiguous support.  Mass of x outside z's support makes the
/// verdict false with a witness rather than an error.
inline ClassVerdict relative_lc(const DiscreteDist& x, const DiscreteDist& z,
                                double tol = kDiscreteLogTol) {
    for (std::size_t i = 1; i + 1 < z.size(); ++i)
        if (z.probs()[i] == 0.0)
            throw std::invalid_argument("relative_lc: reference has a support gap");
    const bool z_unbounded = z.unbounded_family();
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (x.probs()[i] == 0.0) continue;
        const long long k = x.offset() + static_cast<long long>(i);
        const bool covered = k >= z.min_support() && (z_unbounded || k <= z.max_support());
        if (!covered) return {false, k, -kInf};
    }
    // log-ratio over x's support; z contributes its closed-form log pmf when
    // tagged, so truncation does not distort deep-tail ratios.
    std::vector<double> lw(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const long long k = x.offset() + static_cast<long long>(i);
        lw[i] = x.probs()[i] > 0.0 ? std::log(x.probs()[i]) - z.log_pmf(k) : -kInf;
    }
    return detail::log_concave_from_logs(lw, x.offset(), tol);
}

/// Integer support interval; hi = nullopt means unbounded above.
struct IntSupport {
    long long lo = 0;
    std::optional<long long> hi;
};

/// Is d log-affine on the *entire* reference support?  (The extremal
/// majorants: geometric in the discrete case, exponential in the continuous.)
inline ClassVerdict is_log_affine(const DiscreteDist& d, const IntSupport& ref,
                                  double tol = kDiscreteLogTol) {
    if (d.family() && d.family()->kind == Family::geometric) {
        const bool match = d.offset() == ref.lo && !ref.hi;
        return {match, match ? std::nullopt : std::optional<long long>(ref.lo), match ? 0.0 : -kInf};
    }
    if (!ref.hi)  // finite vector cannot cover an unbounded reference
        return {false, d.max_support() + 1, -kInf};
    if (d.offset() != ref.lo || d.max_support() != *ref.hi)
        return {false, d.offset() != ref.lo ? ref.lo : *ref.hi, -kInf};
    ClassVerdict v;
    double worst = 0.0;
    for (std::size_t i = 0; i + 2 < d.size(); ++i) {
        if (d.probs()[i] <= 0.0 || d.probs()[i + 1] <= 0.0 || d.probs()[i + 2] <= 0.0)
            return {false, d.offset() + static_cast<long long>(i), -kInf};
        const double dd = std::log(d.probs()[i + 2]) - 2.0 * std::log(d.probs()[i + 1]) +
                          std::log(d.probs()[i]);
        if (std::abs(dd) > worst) {
            worst = std::abs(dd);
            if (worst > tol && v.is_member) {
                v.is_member = false;
                v.witness = d.offset() + static_cast<long long>(i) + 1;
            }
        }
    }
    v.margin = -worst;
    return v;
}

/// Real support interval for the continuous overload.
struct RealSupport {
    double lo = 0.0;
    double hi = kInf;
};

inline ClassVerdict is_log_affine(const ContinuousDist& d, const RealSupport& ref,
                                  double tol = kContinuousLogTol) {
    auto support_matches = [&](double lo, double hi) {
        return std::abs(lo - ref.lo) <= 1e-9 &&
               ((std::isinf(hi) && std::isinf(ref.hi)) || std::abs(hi - ref.hi) <= 1e-9);
    };
    switch (d.family()) {
        case ContFamily::exponential: {
            const bool m = support_matches(0.0, kInf);
            return {m, std::nullopt, m ? 0.0 : -kInf};
        }
        case ContFamily::uniform: {
            const bool m = support_matches(d.uniform_lo(), d.uniform_hi());
            return {m, std::nullopt, m ? 0.0 : -kInf};
        }
        case ContFamily::gaussian:
            return {false, std::nullopt, -kInf};
        case ContFamily::grid: {
            if (!support_matches(d.support_lo(), d.support_hi()))
                return {false, std::nullopt, -kInf};
            const auto& g = d.grid();
            double worst = 0.0;
            for (std::size_t i = 0; i + 2 < g.x.size(); ++i) {
                const double s0 = (std::log(g.f[i + 1]) - std::log(g.f[i])) /
                                  (g.x[i + 1] - g.x[i]);
                const double s1 = (std::log(g.f[i + 2]) - std::log(g.f[i + 1])) /
                                  (g.x[i + 2] - g.x[i + 1]);
                worst = std::max(worst, std::abs(s1 - s0));
            }
            return {worst <= tol, std::nullopt, -worst};
        }
    }
    return {false, std::nullopt, -kInf};
}

/// Relative log-concavity for continuous laws, x ≺_LC z: log(g/h) has
/// non-increasing slope on a common refinement of the supplied grid.
/// h = 0 somewhere g > 0 inside z's support makes the verdict false.
inline ClassVerdict relative_LC_continuous(const ContinuousDist& x, const ContinuousDist& z,
                                           std::vector<double> grid = {},
                                           double tol = kContinuousLogTol) {
    const double lo = x.support_lo();
    const double hi = std::isinf(x.support_hi())
                          ? std::max(quantile(x, 1.0 - 1e-10), lo + 1.0)
                          : x.support_hi();
    if (grid.empty()) {
        const int n = 257;
        for (int i = 0; i <= n; ++i)
            grid.push_back(lo + (hi - lo) * static_cast<double>(i) / n);
    }
    if (x.family() == ContFamily::grid)
        grid.insert(grid.end(), x.grid().x.begin(), x.grid().x.end());
    if (z.family() == ContFamily::grid)
        grid.insert(grid.end(), z.grid().x.begin(), z.grid().x.end());
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end(),
                           [](double a, double b) { return std::abs(a - b) < 1e-12; }),
               grid.end());

    std::vector<double> pts, ratio;
    for (double t : grid) {
        if (t < lo - 1e-12 || t > hi + 1e-12) continue;
        const double g = x.density(t);
        if (g <= 0.0) continue;
        const double h = z.density(t);
        if (h <= 0.0) return {false, static_cast<long long>(std::floor(t)), -kInf};
        pts.push_back(t);
        ratio.push_back(std::log(g) - std::log(h));
    }
    if (pts.size() < 3) return {true, std::nullopt, 0.0};
    ClassVerdict v;
    double margin = kInf;
    for (std::size_t i = 0; i + 2 < pts.size(); ++i) {
        const double s0 = (ratio[i + 1] - ratio[i]) / (pts[i + 1] - pts[i]);
        const double s1 = (ratio[i + 2] - ratio[i + 1]) / (pts[i + 2] - pts[i + 1]);
        const double slack = s0 - s1;  // concavity: slopes non-increasing
        if (slack < margin) margin = slack;
        if (slack < -tol && v.is_member) {
            v.is_member = false;
            v.witness = static_cast<long long>(std::floor(pts[i + 1]));
        }
    }
    v.margin = margin;
    return v;
}

namespace detail {

// Log-concavity of a continuous density (used as a corollary precondition).
inline bool is_log_concave_density(const ContinuousDist& d) {
    switch (d.family()) {
        case ContFamily::exponential:
        case ContFamily::uniform:
        case ContFamily::gaussian:
            return true;
        case ContFamily::grid: {
            const auto& g = d.grid();
            for (std::size_t i = 0; i + 2 < g.x.size(); ++i) {
                const double s0 =
                    (std::log(g.f[i + 1]) - std::log(g.f[i])) / (g.x[i + 1] - g.x[i]);
                const double s1 =
                    (std::log(g.f[i + 2]) - std::log(g.f[i + 1])) / (g.x[i + 2] - g.x[i + 1]);
                if (s1 > s0 + kContinuousLogTol) return false;
            }
            return true;
        }
    }
    return false;
}

}  // namespace detail
}  // namespace lcx
