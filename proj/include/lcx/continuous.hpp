#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lcx/common.hpp"

namespace lcx {

enum class ContFamily { exponential, uniform, gaussian, grid };

/// Tabulated density: strictly increasing breakpoints x with positive values
/// f, interpolated log-linearly between nodes and zero outside [x.front(),
/// x.back()].  Log-linear interpolation keeps gridded log-concave densities
/// log-concave exactly.
struct GridDensity {
    std::vector<double> x;
    std::vector<double> f;
};

namespace detail {

// Segment primitives for log-linear pieces.  u = log(f1/f0) is the log ratio
// across the segment; series branches keep them stable as u -> 0.

// integral of the density over the segment
inline double seg_mass(double x0, double x1, double f0, double f1) {
    const double dx = x1 - x0;
    const double u = std::log(f1) - std::log(f0);
    if (std::abs(u) < 1e-8) return dx * f0 * (1.0 + u / 2.0 + u * u / 6.0);
    return dx * (f1 - f0) / u;
}

// integral of x * density over the segment
inline double seg_first_moment(double x0, double x1, double f0, double f1) {
    const double dx = x1 - x0;
    const double u = std::log(f1) - std::log(f0);
    const double mass = seg_mass(x0, x1, f0, f1);
    double core;  // (u e^u - e^u + 1) / u^2
    if (std::abs(u) < 1e-6) {
        core = 0.5 + u / 3.0 + u * u / 8.0;
    } else {
        core = (u * std::exp(u) - std::expm1(u)) / (u * u);
    }
    return x0 * mass + dx * dx * f0 * core;
}

// integral of density * log(density) over the segment
inline double seg_f_logf(double x0, double x1, double f0, double f1) {
    const double dx = x1 - x0;
    const double L0 = std::log(f0), L1 = std::log(f1);
    const double u = L1 - L0;
    if (std::abs(u) < 1e-6)
        return dx * f0 * (L0 + (u / 2.0) * (1.0 + L0) + (u * u / 6.0) * (2.0 + L0));
    return dx * (f1 * (L1 - 1.0) - f0 * (L0 - 1.0)) / u;
}

// density value at t inside [x0, x1]
inline double seg_interp(double x0, double x1, double f0, double f1, double t) {
    const double w = (t - x0) / (x1 - x0);
    return std::exp((1.0 - w) * std::log(f0) + w * std::log(f1));
}

inline double gauss_pdf(double z) { return std::exp(-0.5 * z * z) / std::sqrt(2.0 * M_PI); }
inline double gauss_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

// Adaptive Simpson quadrature with absolute tolerance.
inline double simpson(double a, double b, double fa, double fm, double fb) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double adaptive_simpson_rec(const std::function<double(double)>& f, double a, double b,
                                   double fa, double fm, double fb, double whole, double tol,
                                   int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson(f, a, m, fa, flm, fm);
    const double right = simpson(f, m, b, fm, frm, fb);
    if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson_rec(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) +
           adaptive_simpson_rec(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1);
}

inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double tol, int depth = 48) {
    if (!(b > a)) return 0.0;
    const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
    return adaptive_simpson_rec(f, a, b, fa, fm, fb, simpson(f, a, b, fa, fm, fb), tol, depth);
}

}  // namespace detail

/// Tagged continuous reference family with a density evaluator.  Immutable;
/// all operations are pure functions.
class ContinuousDist {
public:
    static ContinuousDist exponential(double rate) {
        if (!(rate > 0.0)) throw std::invalid_argument("exponential: rate must be > 0");
        ContinuousDist d;
        d.family_ = ContFamily::exponential;
        d.a_ = rate;
        d.lo_ = 0.0;
        d.hi_ = kInf;
        return d;
    }

    static ContinuousDist uniform(double a, double b) {
        if (!(a < b)) throw std::invalid_argument("uniform: requires a < b");
        ContinuousDist d;
        d.family_ = ContFamily::uniform;
        d.a_ = a;
        d.b_ = b;
        d.lo_ = a;
        d.hi_ = b;
        return d;
    }

    static ContinuousDist gaussian(double mean, double var) {
        if (!(var > 0.0)) throw std::invalid_argument("gaussian: var must be > 0");
        ContinuousDist d;
        d.family_ = ContFamily::gaussian;
        d.a_ = mean;
        d.b_ = var;
        d.lo_ = -kInf;
        d.hi_ = kInf;
        return d;
    }

    /// Build from a tabulated density; the declared interpolation must
    /// integrate to 1 within 1e-9.
    static ContinuousDist from_grid(GridDensity g) {
        if (g.x.size() < 2 || g.x.size() != g.f.size())
            throw std::invalid_argument("grid: need matching x/f with >= 2 breakpoints");
        for (std::size_t i = 1; i < g.x.size(); ++i)
            if (!(g.x[i] > g.x[i - 1]))
                throw std::invalid_argument("grid: breakpoints must be strictly increasing");
        for (double v : g.f)
            if (!(v > 0.0))
                throw std::invalid_argument("grid: density values must be positive");
        double total = 0.0;
        for (std::size_t i = 0; i + 1 < g.x.size(); ++i)
            total += detail::seg_mass(g.x[i], g.x[i + 1], g.f[i], g.f[i + 1]);
        if (std::abs(total - 1.0) > 1e-9)
            throw std::invalid_argument("grid: density integrates to " + std::to_string(total) +
                                        ", not 1 within 1e-9");
        ContinuousDist d;
        d.family_ = ContFamily::grid;
        d.grid_ = std::move(g);
        d.lo_ = d.grid_.x.front();
        d.hi_ = d.grid_.x.back();
        return d;
    }

    ContFamily family() const { return family_; }
    double rate() const { return a_; }
    double uniform_lo() const { return a_; }
    double uniform_hi() const { return b_; }
    double gauss_mean() const { return a_; }
    double gauss_var() const { return b_; }
    const GridDensity& grid() const { return grid_; }
    double support_lo() const { return lo_; }
    double support_hi() const { return hi_; }

    double density(double t) const {
        switch (family_) {
            case ContFamily::exponential:
                return t < 0.0 ? 0.0 : a_ * std::exp(-a_ * t);
            case ContFamily::uniform:
                return (t < a_ || t > b_) ? 0.0 : 1.0 / (b_ - a_);
            case ContFamily::gaussian:
                return detail::gauss_pdf((t - a_) / std::sqrt(b_)) / std::sqrt(b_);
            case ContFamily::grid: {
                if (t < lo_ || t > hi_) return 0.0;
                const auto& x = grid_.x;
                auto it = std::upper_bound(x.begin(), x.end(), t);
                std::size_t i = static_cast<std::size_t>(
                    std::max<std::ptrdiff_t>(0, (it - x.begin()) - 1));
                if (i + 1 >= x.size()) i = x.size() - 2;
                return detail::seg_interp(x[i], x[i + 1], grid_.f[i], grid_.f[i + 1], t);
            }
        }
        return 0.0;
    }

    double log_density(double t) const {
        const double v = density(t);
        return v > 0.0 ? std::log(v) : -kInf;
    }

private:
    ContinuousDist() = default;
    ContFamily family_ = ContFamily::exponential;
    double a_ = 1.0, b_ = 0.0;
    GridDensity grid_;
    double lo_ = 0.0, hi_ = kInf;
};

inline double mean(const ContinuousDist& d) {
    switch (d.family()) {
        case ContFamily::exponential:
            return 1.0 / d.rate();
        case ContFamily::uniform:
            return 0.5 * (d.uniform_lo() + d.uniform_hi());
        case ContFamily::gaussian:
            return d.gauss_mean();
        case ContFamily::grid: {
            double s = 0.0;
            const auto& g = d.grid();
            for (std::size_t i = 0; i + 1 < g.x.size(); ++i)
                s += detail::seg_first_moment(g.x[i], g.x[i + 1], g.f[i], g.f[i + 1]);
            return s;
        }
    }
    return 0.0;
}

inline double cgf(const ContinuousDist& d, double theta) {
    switch (d.family()) {
        case ContFamily::exponential: {
            if (theta >= d.rate())
                throw std::domain_error("mgf diverges: theta >= rate = " +
                                        std::to_string(d.rate()));
            return -std::log1p(-theta / d.rate());
        }
        case ContFamily::uniform: {
            const double a = d.uniform_lo(), b = d.uniform_hi();
            // (e^{tb} - e^{ta}) / (t (b-a)), evaluated as a log-linear segment
            return std::log(detail::seg_mass(a, b, std::exp(0.0), std::exp(theta * (b - a)))) +
                   theta * a - std::log(b - a);
        }
        case ContFamily::gaussian:
            return theta * d.gauss_mean() + 0.5 * theta * theta * d.gauss_var();
        case ContFamily::grid: {
            const auto& g = d.grid();
            double s = 0.0;
            double scale = theta * g.x[0];  // factor the largest exponent out for stability
            for (double xv : g.x) scale = std::max(scale, theta * xv);
            for (std::size_t i = 0; i + 1 < g.x.size(); ++i)
                s += detail::seg_mass(g.x[i], g.x[i + 1],
                                      g.f[i] * std::exp(theta * g.x[i] - scale),
                                      g.f[i + 1] * std::exp(theta * g.x[i + 1] - scale));
            return std::log(s) + scale;
        }
    }
    return 0.0;
}

inline double mgf(const ContinuousDist& d, double theta) { return std::exp(cgf(d, theta)); }

inline double tail(const ContinuousDist& d, double t, Side side) {
    double upper = 0.0;
    switch (d.family()) {
        case ContFamily::exponential:
            upper = t <= 0.0 ? 1.0 : std::exp(-d.rate() * t);
            break;
        case ContFamily::uniform: {
            const double a = d.uniform_lo(), b = d.uniform_hi();
            upper = t <= a ? 1.0 : (t >= b ? 0.0 : (b - t) / (b - a));
            break;
        }
        case ContFamily::gaussian:
            upper = 0.5 * std::erfc((t - d.gauss_mean()) / std::sqrt(2.0 * d.gauss_var()));
            break;
        case ContFamily::grid: {
            const auto& g = d.grid();
            if (t <= g.x.front()) {
                upper = 1.0;
            } else if (t >= g.x.back()) {
                upper = 0.0;
            } else {
                double s = 0.0;
                for (std::size_t i = 0; i + 1 < g.x.size(); ++i) {
                    const double x0 = g.x[i], x1 = g.x[i + 1];
                    if (x1 <= t) continue;
                    const double lo = std::max(x0, t);
                    const double flo = detail::seg_interp(x0, x1, g.f[i], g.f[i + 1], lo);
                    s += detail::seg_mass(lo, x1, flo, g.f[i + 1]);
                }
                upper = s;
            }
            break;
        }
    }
    return side == Side::geq ? std::min(1.0, upper) : std::min(1.0, std::max(0.0, 1.0 - upper));
}

/// E[(X - lambda)_+], closed form per family.
inline double stop_loss(const ContinuousDist& d, double lambda) {
    switch (d.family()) {
        case ContFamily::exponential:
            return lambda <= 0.0 ? 1.0 / d.rate() - lambda
                                 : std::exp(-d.rate() * lambda) / d.rate();
        case ContFamily::uniform: {
            const double a = d.uniform_lo(), b = d.uniform_hi();
            if (lambda <= a) return 0.5 * (a + b) - lambda;
            if (lambda >= b) return 0.0;
            return (b - lambda) * (b - lambda) / (2.0 * (b - a));
        }
        case ContFamily::gaussian: {
            const double mu = d.gauss_mean(), sd = std::sqrt(d.gauss_var());
            const double z = (mu - lambda) / sd;
            return (mu - lambda) * detail::gauss_cdf(z) + sd * detail::gauss_pdf(z);
        }
        case ContFamily::grid: {
            const auto& g = d.grid();
            double s = 0.0;
            for (std::size_t i = 0; i + 1 < g.x.size(); ++i) {
                const double x0 = g.x[i], x1 = g.x[i + 1];
                if (x1 <= lambda) continue;
                const double lo = std::max(x0, lambda);
                const double flo = detail::seg_interp(x0, x1, g.f[i], g.f[i + 1], lo);
                s += detail::seg_first_moment(lo, x1, flo, g.f[i + 1]) -
                     lambda * detail::seg_mass(lo, x1, flo, g.f[i + 1]);
            }
            return s;
        }
    }
    return 0.0;
}

inline double quantile(const ContinuousDist& d, double q) {
    if (!(q >= 0.0 && q < 1.0)) throw std::invalid_argument("quantile: q must be in [0,1)");
    switch (d.family()) {
        case ContFamily::exponential:
            return -std::log1p(-q) / d.rate();
        case ContFamily::uniform:
            return d.uniform_lo() + q * (d.uniform_hi() - d.uniform_lo());
        case ContFamily::grid: {
            const auto& g = d.grid();
            double acc = 0.0;
            for (std::size_t i = 0; i + 1 < g.x.size(); ++i) {
                const double m = detail::seg_mass(g.x[i], g.x[i + 1], g.f[i], g.f[i + 1]);
                if (acc + m >= q || i + 2 == g.x.size()) {
                    const double v = std::max(0.0, q - acc);
                    const double dx = g.x[i + 1] - g.x[i];
                    const double u = std::log(g.f[i + 1]) - std::log(g.f[i]);
                    if (std::abs(u) < 1e-8) return g.x[i] + std::min(dx, v / g.f[i]);
                    const double b = u / dx;
                    return g.x[i] + std::min(dx, std::log1p(v * b / g.f[i]) / b);
                }
                acc += m;
            }
            return g.x.back();
        }
        case ContFamily::gaussian:
            throw std::invalid_argument("quantile: not provided for gaussian");
    }
    return 0.0;
}

}  // namespace lcx
