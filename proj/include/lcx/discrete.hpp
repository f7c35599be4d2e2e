#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "lcx/common.hpp"

namespace lcx {

enum class Family { geometric, poisson, binomial, custom };

/// Closed-form family metadata attached to a materialized distribution.
/// Semantics: geometric has pmf p*(1-p)^(k-offset) on {offset, offset+1, ...}
/// (offset 1 is the standard convention, offset 0 the variant on the
/// non-negative integers); poisson and binomial always live on their natural
/// supports {0,1,...} and {0..n}.
struct FamilyTag {
    Family kind = Family::custom;
    double p = 0.0;       ///< geometric / binomial success probability
    double lambda = 0.0;  ///< poisson mean
    int n = 0;            ///< binomial trial count
};

/// Finite probability vector over a contiguous integer range
/// {offset, ..., offset + size() - 1}.
///
/// Infinite families are materialized by right-truncation at a mass tolerance;
/// the dropped mass is recorded so downstream tolerances can budget for it.
/// Values are immutable after construction and all operations on them are pure.
class DiscreteDist {
public:
    DiscreteDist(long long offset, std::vector<double> probs, double tail_mass_dropped = 0.0,
                 std::optional<FamilyTag> family = std::nullopt)
        : offset_(offset),
          probs_(std::move(probs)),
          tail_mass_dropped_(tail_mass_dropped),
          family_(family) {
        validate();
    }

    long long offset() const { return offset_; }
    const std::vector<double>& probs() const { return probs_; }
    double tail_mass_dropped() const { return tail_mass_dropped_; }
    const std::optional<FamilyTag>& family() const { return family_; }

    std::size_t size() const { return probs_.size(); }
    long long min_support() const { return offset_; }
    long long max_support() const { return offset_ + static_cast<long long>(probs_.size()) - 1; }

    /// Mass stored at k; 0 outside the materialized vector.
    double pmf(long long k) const {
        if (k < offset_ || k > max_support()) return 0.0;
        return probs_[static_cast<std::size_t>(k - offset_)];
    }

    /// log pmf(k).  For tagged geometric/poisson families this is the
    /// closed-form log mass of the *untruncated* law, valid beyond the
    /// materialized vector; classification and entropy sums rely on that.
    double log_pmf(long long k) const {
        if (family_) {
            switch (family_->kind) {
                case Family::geometric:
                    if (k < offset_) return -kInf;
                    return std::log(family_->p) +
                           static_cast<double>(k - offset_) * std::log1p(-family_->p);
                case Family::poisson:
                    if (k < 0) return -kInf;
                    return -family_->lambda +
                           static_cast<double>(k) * std::log(family_->lambda) -
                           std::lgamma(static_cast<double>(k) + 1.0);
                case Family::binomial: {
                    if (k < 0 || k > family_->n) return -kInf;
                    const double n = family_->n, kk = static_cast<double>(k);
                    if (family_->p == 0.0) return k == 0 ? 0.0 : -kInf;
                    if (family_->p == 1.0) return k == family_->n ? 0.0 : -kInf;
                    return std::lgamma(n + 1) - std::lgamma(kk + 1) - std::lgamma(n - kk + 1) +
                           kk * std::log(family_->p) + (n - kk) * std::log1p(-family_->p);
                }
                case Family::custom:
                    break;
            }
        }
        const double v = pmf(k);
        return v > 0.0 ? std::log(v) : -kInf;
    }

    /// True when the tag's mathematical support extends beyond the vector.
    bool unbounded_family() const {
        return family_ &&
               (family_->kind == Family::geometric || family_->kind == Family::poisson);
    }

private:
    void validate() const {
        if (probs_.empty()) throw std::invalid_argument("DiscreteDist: empty probability vector");
        for (double v : probs_) {
            if (!(v >= 0.0)) throw std::invalid_argument("DiscreteDist: negative probability");
        }
        if (!(probs_.front() > 0.0) || !(probs_.back() > 0.0))
            throw std::invalid_argument("DiscreteDist: vector must be trimmed (ends > 0)");
        if (!(tail_mass_dropped_ >= 0.0))
            throw std::invalid_argument("DiscreteDist: negative dropped mass");
        long double s = 0.0L;
        for (double v : probs_) s += v;
        s += static_cast<long double>(tail_mass_dropped_);
        if (std::abs(static_cast<double>(s) - 1.0) > 1e-12)
            throw std::invalid_argument("DiscreteDist: mass " + std::to_string(double(s)) +
                                        " not within 1e-12 of 1");
        if (family_) {
            switch (family_->kind) {
                case Family::geometric:
                    if (!(family_->p > 0.0 && family_->p < 1.0))
                        throw std::invalid_argument("geometric: p must be in (0,1)");
                    break;
                case Family::poisson:
                    if (!(family_->lambda > 0.0))
                        throw std::invalid_argument("poisson: lambda must be > 0");
                    break;
                case Family::binomial:
                    if (family_->n < 1) throw std::invalid_argument("binomial: n must be >= 1");
                    if (!(family_->p >= 0.0 && family_->p <= 1.0))
                        throw std::invalid_argument("binomial: p must be in [0,1]");
                    break;
                case Family::custom:
                    break;
            }
        }
    }

    long long offset_;
    std::vector<double> probs_;
    double tail_mass_dropped_;
    std::optional<FamilyTag> family_;
};

// ---------------------------------------------------------------------------
// Family factories.  Infinite families are truncated at mass_tol (default
// 1e-12); every later computation is then an exact finite sum plus a tracked
// remainder.

inline DiscreteDist point_mass(long long k) { return DiscreteDist(k, {1.0}); }

namespace detail {

inline DiscreteDist make_geometric(double p, long long offset, double mass_tol) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("geometric: p must be in (0,1)");
    if (!(mass_tol > 0.0 && mass_tol <= 1e-6))
        throw std::invalid_argument("truncate_family: mass_tol must be in (0, 1e-6]");
    const double lq = std::log1p(-p);  // log(1-p)
    long long K = static_cast<long long>(std::ceil(std::log(mass_tol) / lq));
    while (std::exp(static_cast<double>(K) * lq) > mass_tol) ++K;
    std::vector<double> probs(static_cast<std::size_t>(K));
    const double lp = std::log(p);
    for (long long j = 0; j < K; ++j)
        probs[static_cast<std::size_t>(j)] = std::exp(lp + static_cast<double>(j) * lq);
    const double dropped = std::exp(static_cast<double>(K) * lq);
    return DiscreteDist(offset, std::move(probs), dropped,
                        FamilyTag{Family::geometric, p, 0.0, 0});
}

}  // namespace detail

/// geometric(p) on {1, 2, ...}: P(X=k) = p(1-p)^(k-1).
inline DiscreteDist geometric(double p, double mass_tol = 1e-12) {
    return detail::make_geometric(p, 1, mass_tol);
}

/// Variant of the geometric on {0, 1, ...}: P(X=k) = p(1-p)^k.  This is the
/// log-affine reference for log-concave laws on the non-negative integers.
inline DiscreteDist geometric_variant(double p, double mass_tol = 1e-12) {
    return detail::make_geometric(p, 0, mass_tol);
}

inline DiscreteDist poisson(double lambda, double mass_tol = 1e-12) {
    if (!(lambda > 0.0)) throw std::invalid_argument("poisson: lambda must be > 0");
    if (!(mass_tol > 0.0 && mass_tol <= 1e-6))
        throw std::invalid_argument("truncate_family: mass_tol must be in (0, 1e-6]");
    std::vector<double> probs;
    long double cum = 0.0L;
    const double llam = std::log(lambda);
    for (long long k = 0;; ++k) {
        const double pk = std::exp(-lambda + static_cast<double>(k) * llam -
                                   std::lgamma(static_cast<double>(k) + 1.0));
        probs.push_back(pk);
        cum += pk;
        if (static_cast<double>(1.0L - cum) <= mass_tol && static_cast<double>(k) >= lambda) break;
        if (k > 200000) throw std::runtime_error("poisson truncation failed to converge");
    }
    const double dropped = std::max(0.0, static_cast<double>(1.0L - cum));
    return DiscreteDist(0, std::move(probs), dropped, FamilyTag{Family::poisson, 0.0, lambda, 0});
}

inline DiscreteDist binomial(int n, double p) {
    if (n < 1) throw std::invalid_argument("binomial: n must be >= 1");
    if (!(p >= 0.0 && p <= 1.0)) throw std::invalid_argument("binomial: p must be in [0,1]");
    if (p == 0.0) return DiscreteDist(0, {1.0}, 0.0, FamilyTag{Family::binomial, p, 0.0, n});
    if (p == 1.0) return DiscreteDist(n, {1.0}, 0.0, FamilyTag{Family::binomial, p, 0.0, n});
    std::vector<double> probs(static_cast<std::size_t>(n) + 1);
    const double lp = std::log(p), lq = std::log1p(-p), lgn = std::lgamma(n + 1.0);
    for (int k = 0; k <= n; ++k) {
        probs[static_cast<std::size_t>(k)] =
            std::exp(lgn - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) + k * lp +
                     (n - k) * lq);
    }
    // Trim entries that underflowed to zero so the canonical invariant holds.
    std::size_t lo = 0, hi = probs.size();
    while (lo < hi && probs[lo] == 0.0) ++lo;
    while (hi > lo && probs[hi - 1] == 0.0) --hi;
    std::vector<double> trimmed(probs.begin() + static_cast<std::ptrdiff_t>(lo),
                                probs.begin() + static_cast<std::ptrdiff_t>(hi));
    return DiscreteDist(static_cast<long long>(lo), std::move(trimmed), 0.0,
                        FamilyTag{Family::binomial, p, 0.0, n});
}

/// Materialize a tagged family at the given mass tolerance.
inline DiscreteDist truncate_family(const FamilyTag& tag, double mass_tol) {
    switch (tag.kind) {
        case Family::geometric: return geometric(tag.p, mass_tol);
        case Family::poisson: return poisson(tag.lambda, mass_tol);
        case Family::binomial: return binomial(tag.n, tag.p);
        case Family::custom: break;
    }
    throw std::invalid_argument("truncate_family: tag must name a closed-form family");
}

/// Shift support by s.  The geometric tag survives (its closed forms are
/// expressed relative to offset); other tags are dropped.
inline DiscreteDist shifted(const DiscreteDist& d, long long s) {
    std::optional<FamilyTag> tag;
    if (d.family() && d.family()->kind == Family::geometric) tag = d.family();
    return DiscreteDist(d.offset() + s, d.probs(), d.tail_mass_dropped(), tag);
}

// ---------------------------------------------------------------------------
// Summary functionals.  Closed forms are used whenever a family tag is
// present; untagged vectors fall back to exact finite sums.

inline double mean(const DiscreteDist& d) {
    if (d.family()) {
        const FamilyTag& t = *d.family();
        switch (t.kind) {
            case Family::geometric: return static_cast<double>(d.offset()) + (1.0 - t.p) / t.p;
            case Family::poisson: return t.lambda;
            case Family::binomial: return t.n * t.p;
            case Family::custom: break;
        }
    }
    long double s = 0.0L;
    for (std::size_t i = 0; i < d.size(); ++i)
        s += static_cast<long double>(d.probs()[i]) *
             static_cast<long double>(d.offset() + static_cast<long long>(i));
    return static_cast<double>(s);
}

/// Cumulant generating function Λ(θ) = log E[e^{θX}].  Computed in log space,
/// so it stays finite wherever the mgf converges.  Throws std::domain_error
/// naming the divergence boundary when θ is outside the convergence domain.
inline double cgf(const DiscreteDist& d, double theta) {
    if (d.family()) {
        const FamilyTag& t = *d.family();
        switch (t.kind) {
            case Family::geometric: {
                const double boundary = -std::log1p(-t.p);
                if (theta >= boundary)
                    throw std::domain_error("mgf diverges: theta >= -log(1-p) = " +
                                            std::to_string(boundary));
                // log(1 - (1-p) e^theta) = log(-expm1(theta + log(1-p)))
                return std::log(t.p) + theta * static_cast<double>(d.offset()) -
                       std::log(-std::expm1(theta + std::log1p(-t.p)));
            }
            case Family::poisson:
                return t.lambda * std::expm1(theta);
            case Family::binomial: {
                // n log(1-p+p e^theta), rearranged to avoid overflow for theta > 0
                if (theta > 0.0)
                    return t.n * (theta + std::log(t.p + (1.0 - t.p) * std::exp(-theta)));
                return t.n * std::log1p(t.p * std::expm1(theta));
            }
            case Family::custom: break;
        }
    }
    std::vector<double> terms(d.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
        const double p = d.probs()[i];
        terms[i] = p > 0.0 ? std::log(p) + theta * static_cast<double>(d.offset() +
                                                                       static_cast<long long>(i))
                           : -kInf;
    }
    return detail::log_sum_exp(terms);
}

/// E[e^{θX}] to relative accuracy ~1e-14 inside the convergence domain.
inline double mgf(const DiscreteDist& d, double theta) { return std::exp(cgf(d, theta)); }

/// Exact tail probability.  Dropped mass from right-truncation belongs to the
/// upper tail, so P(X >= t) accounts for it; tagged geometric uses the closed
/// form instead.
inline double tail(const DiscreteDist& d, double t, Side side) {
    if (side == Side::geq) {
        if (d.family() && d.family()->kind == Family::geometric) {
            const double m = std::ceil(t);
            if (m <= static_cast<double>(d.offset())) return 1.0;
            return std::exp((m - static_cast<double>(d.offset())) * std::log1p(-d.family()->p));
        }
        long double s = static_cast<long double>(d.tail_mass_dropped());
        for (std::size_t i = d.size(); i-- > 0;) {
            if (static_cast<double>(d.offset() + static_cast<long long>(i)) >= t)
                s += d.probs()[i];
            else
                break;
        }
        return std::min(1.0, static_cast<double>(s));
    }
    long double s = 0.0L;
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (static_cast<double>(d.offset() + static_cast<long long>(i)) <= t)
            s += d.probs()[i];
        else
            break;
    }
    return std::min(1.0, static_cast<double>(s));
}

/// E[(X - lambda)_+] over the materialized vector (the stop-loss transform).
inline double stop_loss(const DiscreteDist& d, double lambda) {
    long double s = 0.0L;
    for (std::size_t i = d.size(); i-- > 0;) {
        const double k = static_cast<double>(d.offset() + static_cast<long long>(i));
        if (k <= lambda) break;
        s += static_cast<long double>(d.probs()[i]) * (k - lambda);
    }
    return static_cast<double>(s);
}

/// Upper bound on the stop-loss / mean mass missing to right-truncation;
/// used as the tolerance budget in convex-order certificates.
inline double truncation_budget(const DiscreteDist& d) {
    if (d.tail_mass_dropped() == 0.0) return 0.0;
    const double m = std::abs(mean(d));
    return 2.0 * d.tail_mass_dropped() * (static_cast<double>(d.max_support()) + m + 2.0);
}

}  // namespace lcx
