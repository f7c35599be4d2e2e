#pragma once

#include <algorithm>
#include <cmath>
#include <map>
#include <optional>
#include <stdexcept>
#include <vector>

#include "lcx/continuous.hpp"
#include "lcx/discrete.hpp"

namespace lcx {

/// One maximal interval of constant sign in a density difference.
struct SignRun {
    long long lo = 0;  // inclusive support bounds
    long long hi = 0;
    int sign = 0;  // -1, 0, +1
};

/// Sign pattern of f - g and its crossing count.  Entries with
/// |f - g| <= tie_tol carry sign 0 and are absorbed into neighboring runs, so
/// the partition is minimal and adjacent signs alternate.
struct CrossingReport {
    int count = 0;
    std::vector<SignRun> partition;
};

inline CrossingReport crossing_count(const std::vector<double>& f, const std::vector<double>& g,
                                     long long offset = 0, double tie_tol = 1e-12) {
    if (f.size() != g.size())
        throw std::invalid_argument("crossing_count: mismatched grids");
    std::vector<int> sign(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        const double d = f[i] - g[i];
        sign[i] = std::abs(d) <= tie_tol ? 0 : (d > 0.0 ? 1 : -1);
    }
    CrossingReport r;
    int last = 0;
    for (std::size_t i = 0; i < sign.size(); ++i) {
        const long long k = offset + static_cast<long long>(i);
        if (sign[i] == 0 || sign[i] == last) {
            if (r.partition.empty()) {
                r.partition.push_back({k, k, sign[i]});
            } else {
                r.partition.back().hi = k;
            }
            if (sign[i] != 0 && r.partition.back().sign == 0) r.partition.back().sign = sign[i];
            continue;
        }
        if (last == 0 && !r.partition.empty() && r.partition.back().sign == 0) {
            // leading zero block adopts the first nonzero sign
            r.partition.back().hi = k;
            r.partition.back().sign = sign[i];
        } else if (r.partition.empty()) {
            r.partition.push_back({k, k, sign[i]});
        } else {
            ++r.count;
            r.partition.push_back({k, k, sign[i]});
        }
        last = sign[i];
    }
    return r;
}

/// Align two distributions on the union of their support ranges (zero-padded)
/// and count crossings of the pmf difference.
inline CrossingReport crossing_count(const DiscreteDist& f, const DiscreteDist& g,
                                     double tie_tol = 1e-12) {
    const long long lo = std::min(f.min_support(), g.min_support());
    const long long hi = std::max(f.max_support(), g.max_support());
    std::vector<double> fv(static_cast<std::size_t>(hi - lo + 1), 0.0);
    std::vector<double> gv(fv.size(), 0.0);
    for (long long k = lo; k <= hi; ++k) {
        fv[static_cast<std::size_t>(k - lo)] = f.pmf(k);
        gv[static_cast<std::size_t>(k - lo)] = g.pmf(k);
    }
    return crossing_count(fv, gv, lo, tie_tol);
}

/// Non-decreasing map on integer support.  `affine(a,b)` is k -> a*k+b with
/// a >= 0; `floor_shift(r)` is k -> (k-r) 1{k >= r}; `table` maps an explicit
/// contiguous block and clamps to its end values outside.
class MonotoneMap {
public:
    enum class Kind { affine, floor_shift, table };

    static MonotoneMap affine(double a, double b) {
        if (!(a >= 0.0)) throw std::invalid_argument("MonotoneMap: affine slope must be >= 0");
        MonotoneMap m;
        m.kind_ = Kind::affine;
        m.a_ = a;
        m.b_ = b;
        return m;
    }

    static MonotoneMap floor_shift(long long r) {
        MonotoneMap m;
        m.kind_ = Kind::floor_shift;
        m.r_ = r;
        return m;
    }

    static MonotoneMap table(long long lo, std::vector<long long> values) {
        if (values.empty()) throw std::invalid_argument("MonotoneMap: empty table");
        for (std::size_t i = 1; i < values.size(); ++i)
            if (values[i] < values[i - 1])
                throw std::invalid_argument("MonotoneMap: non-monotone table");
        MonotoneMap m;
        m.kind_ = Kind::table;
        m.lo_ = lo;
        m.values_ = std::move(values);
        return m;
    }

    Kind kind() const { return kind_; }

    double operator()(double x) const {
        switch (kind_) {
            case Kind::affine:
                return a_ * x + b_;
            case Kind::floor_shift:
                return x >= static_cast<double>(r_) ? x - static_cast<double>(r_) : 0.0;
            case Kind::table: {
                long long k = static_cast<long long>(std::floor(x));
                k = std::clamp(k, lo_, lo_ + static_cast<long long>(values_.size()) - 1);
                return static_cast<double>(values_[static_cast<std::size_t>(k - lo_)]);
            }
        }
        return x;
    }

    long long image_point(long long k) const {
        const double y = (*this)(static_cast<double>(k));
        const double r = std::round(y);
        if (std::abs(y - r) > 1e-9)
            throw std::invalid_argument("pushforward: image point " + std::to_string(y) +
                                        " is not an integer");
        return static_cast<long long>(r);
    }

private:
    MonotoneMap() = default;
    Kind kind_ = Kind::affine;
    double a_ = 1.0, b_ = 0.0;
    long long r_ = 0;
    long long lo_ = 0;
    std::vector<long long> values_;
};

/// Law of T(X): mass at y is the total mass of T^{-1}({y}).
inline DiscreteDist pushforward(const DiscreteDist& d, const MonotoneMap& T) {
    const long long img_lo = T.image_point(d.min_support());
    const long long img_hi = T.image_point(d.max_support());
    if (img_hi < img_lo) throw std::invalid_argument("pushforward: map is decreasing");
    std::vector<double> out(static_cast<std::size_t>(img_hi - img_lo + 1), 0.0);
    long long prev = img_lo;
    double before = 0.0;  // E[T(X)] on the source side
    for (std::size_t i = 0; i < d.size(); ++i) {
        const long long k = d.offset() + static_cast<long long>(i);
        const long long y = T.image_point(k);
        if (y < prev) throw std::invalid_argument("pushforward: map is not non-decreasing");
        prev = y;
        out[static_cast<std::size_t>(y - img_lo)] += d.probs()[i];
        before += d.probs()[i] * static_cast<double>(y);
    }
    DiscreteDist result(img_lo, std::move(out), d.tail_mass_dropped());
    double after = 0.0;
    for (std::size_t i = 0; i < result.size(); ++i)
        after += result.probs()[i] *
                 static_cast<double>(result.offset() + static_cast<long long>(i));
    if (std::abs(before - after) > 1e-12 * std::max(1.0, std::abs(before)))
        throw std::logic_error("pushforward: mean not preserved");
    return result;
}

/// Reference supports for the matched-mean log-affine majorant.
enum class RefSupport {
    positive_integers,  ///< {1,2,...}  -> geometric(1/mean)
    nonneg_integers,    ///< {0,1,...}  -> geometric variant, mean (1-p)/p
    binomial_n,         ///< {0..n}     -> binomial(n, mean/n)
    poisson_weights     ///< Poisson reference -> poisson(mean)
};

/// The log-affine distribution on the reference support whose mean matches
/// mean(x) (the extremal majorant of Theorem-2.4 type results).
inline DiscreteDist matched_mean_log_affine(double m, RefSupport ref, int n = 0,
                                            double mass_tol = 1e-12) {
    DiscreteDist z = point_mass(0);
    switch (ref) {
        case RefSupport::positive_integers:
            if (m < 1.0) throw std::invalid_argument("matched mean below support minimum 1");
            z = m == 1.0 ? point_mass(1) : geometric(1.0 / m, mass_tol);
            break;
        case RefSupport::nonneg_integers:
            if (m < 0.0) throw std::invalid_argument("matched mean below support minimum 0");
            z = m == 0.0 ? point_mass(0) : geometric_variant(1.0 / (1.0 + m), mass_tol);
            break;
        case RefSupport::binomial_n:
            if (n < 1 || m < 0.0 || m > static_cast<double>(n))
                throw std::invalid_argument("matched mean outside [0, n]");
            z = binomial(n, m / static_cast<double>(n));
            break;
        case RefSupport::poisson_weights:
            if (m <= 0.0)
                z = point_mass(0);
            else
                z = poisson(m, mass_tol);
            break;
    }
    if (std::abs(mean(z) - m) > 1e-10 * std::max(1.0, std::abs(m)))
        throw std::logic_error("matched_mean_log_affine: mean match failed");
    return z;
}

inline DiscreteDist matched_mean_log_affine(const DiscreteDist& x, RefSupport ref, int n = 0,
                                            double mass_tol = 1e-12) {
    return matched_mean_log_affine(mean(x), ref, n, mass_tol);
}

/// Matched-mean exponential majorant for non-negative continuous laws.
inline ContinuousDist matched_mean_log_affine(const ContinuousDist& x) {
    const double m = mean(x);
    if (!(m > 0.0)) throw std::invalid_argument("matched mean must be positive");
    return ContinuousDist::exponential(1.0 / m);
}

/// Certificate for X ≺_cx Z via the stop-loss gap
/// Psi(l) = E[(Z-l)_+] - E[(X-l)_+]; non-negativity of Psi together with
/// equal means characterizes the convex order.
struct CxReport {
    double min_psi = kInf;
    double max_violation = 0.0;
    bool verdict = true;
    double tol = 0.0;
};

namespace detail {

inline std::vector<double> default_lambda_grid(long long lo, long long hi) {
    std::vector<double> grid;
    grid.reserve(2 * static_cast<std::size_t>(hi - lo + 2) + 1);
    grid.push_back(static_cast<double>(lo) - 1.0);
    for (long long k = lo; k <= hi; ++k) {
        grid.push_back(static_cast<double>(k));
        grid.push_back(static_cast<double>(k) + 0.5);
    }
    grid.push_back(static_cast<double>(hi) + 1.0);
    return grid;
}

}  // namespace detail

inline CxReport verify_convex_order(const DiscreteDist& x, const DiscreteDist& z,
                                    std::vector<double> lambda_grid = {}) {
    const double mx = mean(x), mz = mean(z);
    if (std::abs(mx - mz) > 1e-9 * std::max(1.0, std::abs(mx)))
        throw std::invalid_argument("verify_convex_order: means differ");
    if (lambda_grid.empty())
        lambda_grid = detail::default_lambda_grid(std::min(x.min_support(), z.min_support()),
                                                  std::max(x.max_support(), z.max_support()));
    CxReport r;
    r.tol = 1e-9 + truncation_budget(x) + truncation_budget(z);
    for (double l : lambda_grid) r.min_psi = std::min(r.min_psi, stop_loss(z, l) - stop_loss(x, l));
    r.max_violation = std::max(0.0, -r.min_psi);
    r.verdict = r.min_psi >= -r.tol;
    return r;
}

inline CxReport verify_convex_order(const ContinuousDist& x, const ContinuousDist& z,
                                    std::vector<double> lambda_grid = {}) {
    const double mx = mean(x), mz = mean(z);
    if (std::abs(mx - mz) > 1e-9 * std::max(1.0, std::abs(mx)))
        throw std::invalid_argument("verify_convex_order: means differ");
    if (lambda_grid.empty()) {
        const double lo = std::min(x.support_lo(), z.support_lo());
        const double hi = std::max(std::isinf(x.support_hi()) ? quantile(x, 1.0 - 1e-12)
                                                              : x.support_hi(),
                                   std::isinf(z.support_hi()) ? quantile(z, 1.0 - 1e-12)
                                                              : z.support_hi());
        const int n = 512;
        for (int i = 0; i <= n; ++i)
            lambda_grid.push_back(lo + (hi - lo) * static_cast<double>(i) / n);
    }
    CxReport r;
    r.tol = 1e-9;
    for (double l : lambda_grid) r.min_psi = std::min(r.min_psi, stop_loss(z, l) - stop_loss(x, l));
    r.max_violation = std::max(0.0, -r.min_psi);
    r.verdict = r.min_psi >= -r.tol;
    return r;
}

/// Cross-check of the two certification routes: a two-crossing pattern with
/// the interval shape (f >= g inside, f <= g outside) must imply a
/// non-negative stop-loss gap.
struct TwoCrossingReport {
    CrossingReport crossings;
    bool pattern_holds = false;
    CxReport cx;
    bool implication_holds = true;
};

inline TwoCrossingReport two_crossing_implies_cx_check(const DiscreteDist& x,
                                                       const DiscreteDist& z) {
    TwoCrossingReport r;
    r.crossings = crossing_count(x, z);
    int first_sign = 0;
    for (const auto& run : r.crossings.partition) {
        if (run.sign != 0) {
            first_sign = run.sign;
            break;
        }
    }
    r.pattern_holds =
        r.crossings.count == 0 || (r.crossings.count == 2 && first_sign == -1);
    r.cx = verify_convex_order(x, z);
    r.implication_holds = !r.pattern_holds || r.cx.verdict;
    return r;
}

/// Solve for the geometric reference on {offset, offset+1, ...} whose
/// pushforward mean matches E[T(X)] (bisection on p).  Needed to exercise the
/// monotone-map extension, where the matched parameter has no closed form.
inline DiscreteDist solve_log_affine_for_map(const DiscreteDist& x, const MonotoneMap& T,
                                             long long support_lo, double mass_tol = 1e-13) {
    double target = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i)
        target += x.probs()[i] * T(static_cast<double>(x.offset() + static_cast<long long>(i)));

    auto t_mean = [&](double p) {
        const DiscreteDist z = support_lo == 0 ? geometric_variant(p, mass_tol)
                                               : shifted(geometric(p, mass_tol), support_lo - 1);
        double s = 0.0;
        for (std::size_t i = 0; i < z.size(); ++i)
            s += z.probs()[i] * T(static_cast<double>(z.offset() + static_cast<long long>(i)));
        return s;
    };

    double p_lo = 1e-4, p_hi = 1.0 - 1e-12;
    if (t_mean(p_lo) < target)
        throw std::invalid_argument("solve_log_affine_for_map: target mean unreachable");
    // E[T(Z_p)] is non-increasing in p
    for (int it = 0; it < 200; ++it) {
        const double p = 0.5 * (p_lo + p_hi);
        const double v = t_mean(p);
        if (std::abs(v - target) <= 1e-12 * std::max(1.0, std::abs(target))) {
            p_lo = p_hi = p;
            break;
        }
        (v > target ? p_lo : p_hi) = p;
        if (p_hi - p_lo < 1e-15) break;
    }
    const double p = 0.5 * (p_lo + p_hi);
    return support_lo == 0 ? geometric_variant(p, mass_tol)
                           : shifted(geometric(p, mass_tol), support_lo - 1);
}

}  // namespace lcx
