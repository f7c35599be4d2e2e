#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "lcx/classify.hpp"
#include "lcx/continuous.hpp"
#include "lcx/discrete.hpp"
#include "lcx/io.hpp"
#include "lcx/rng.hpp"

namespace lcx {

/// Exact finite convolution: the law of X1 + X2 for independent summands.
/// Offsets add; truncation masses add.
inline DiscreteDist convolve(const DiscreteDist& a, const DiscreteDist& b) {
    std::vector<double> out(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double ai = a.probs()[i];
        if (ai == 0.0) continue;
        for (std::size_t j = 0; j < b.size(); ++j) out[i + j] += ai * b.probs()[j];
    }
    double dropped = a.tail_mass_dropped() + b.tail_mass_dropped();
    // cross term a.dropped*b.dropped is below 1e-12^2; fold it into dropped
    dropped -= a.tail_mass_dropped() * b.tail_mass_dropped();
    return DiscreteDist(a.offset() + b.offset(), std::move(out), dropped);
}

inline DiscreteDist convolve(const std::vector<DiscreteDist>& parts) {
    if (parts.empty()) throw std::invalid_argument("convolve: empty list");
    DiscreteDist acc = parts.front();
    for (std::size_t i = 1; i < parts.size(); ++i) acc = convolve(acc, parts[i]);
    return acc;
}

/// One draw from a continuous law, consuming the rng stream deterministically.
inline double sample(const ContinuousDist& d, SplitMix64& rng) {
    switch (d.family()) {
        case ContFamily::exponential:
            return -std::log1p(-rng.next_double()) / d.rate();
        case ContFamily::uniform:
            return d.uniform_lo() + (d.uniform_hi() - d.uniform_lo()) * rng.next_double();
        case ContFamily::gaussian: {
            double u1 = rng.next_double(), u2 = rng.next_double();
            if (u1 < 1e-300) u1 = 1e-300;
            const double z = std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
            return d.gauss_mean() + std::sqrt(d.gauss_var()) * z;
        }
        case ContFamily::grid:
            return quantile(d, rng.next_double());
    }
    return 0.0;
}

struct McTailResult {
    double estimate = 0.0;
    double ci_halfwidth = 0.0;  // 99% normal-approximation half-width
};

/// Monte Carlo estimate of P(sum_i w_i X_i >= t * sum_i w_i) for independent
/// continuous summands.  Deterministic given the seed.
inline McTailResult mc_tail(const std::vector<ContinuousDist>& dists,
                            const std::vector<double>& weights, double t,
                            std::size_t n_samples, std::uint64_t seed) {
    if (dists.size() != weights.size() || dists.empty())
        throw std::invalid_argument("mc_tail: dists/weights size mismatch");
    if (n_samples < 10000) throw std::invalid_argument("mc_tail: need at least 1e4 samples");
    double wsum = 0.0;
    for (double w : weights) wsum += w;
    const double threshold = t * wsum;
    SplitMix64 rng(seed);
    std::size_t hits = 0;
    for (std::size_t s = 0; s < n_samples; ++s) {
        double acc = 0.0;
        for (std::size_t i = 0; i < dists.size(); ++i) acc += weights[i] * sample(dists[i], rng);
        if (acc >= threshold) ++hits;
    }
    const double est = static_cast<double>(hits) / static_cast<double>(n_samples);
    const double z99 = 2.5758293035489004;  // Phi^{-1}(0.995)
    McTailResult r;
    r.estimate = est;
    r.ci_halfwidth = z99 * std::sqrt(std::max(est * (1.0 - est), 1.0 / n_samples) /
                                     static_cast<double>(n_samples));
    return r;
}

enum class GenClass { lc, ulc, ulc_n };

/// Seeded generator for the log-concavity classes.  A random concave
/// piecewise-linear exponent (slope uniform in [-2,2], second differences
/// uniform in [-1,0]) is exponentiated and normalized; the ULC variants
/// multiply in Poisson(1) / binomial(n, 1/2) weights, which preserves the
/// class by definition of relative log-concavity.  Output support starts at 0.
inline DiscreteDist gen_log_concave(std::uint64_t seed, int support_size, GenClass cls,
                                    int n = 0) {
    if (support_size < 1) throw std::invalid_argument("gen_log_concave: support_size >= 1");
    if (cls == GenClass::ulc_n && support_size > n + 1)
        throw std::invalid_argument("gen_log_concave: ulc_n needs support_size <= n+1");
    SplitMix64 rng(seed);
    std::vector<double> logw(static_cast<std::size_t>(support_size));
    double slope = rng.uniform(-2.0, 2.0);
    logw[0] = 0.0;
    for (int k = 1; k < support_size; ++k) {
        logw[static_cast<std::size_t>(k)] = logw[static_cast<std::size_t>(k - 1)] + slope;
        slope += rng.uniform(-1.0, 0.0);
    }
    switch (cls) {
        case GenClass::lc:
            break;
        case GenClass::ulc:
            for (int k = 0; k < support_size; ++k)
                logw[static_cast<std::size_t>(k)] -= std::lgamma(k + 1.0);
            break;
        case GenClass::ulc_n:
            for (int k = 0; k < support_size; ++k)
                logw[static_cast<std::size_t>(k)] += std::lgamma(n + 1.0) -
                                                     std::lgamma(k + 1.0) -
                                                     std::lgamma(n - k + 1.0);
            break;
    }
    const double m = *std::max_element(logw.begin(), logw.end());
    std::vector<double> probs(logw.size());
    long double total = 0.0L;
    for (std::size_t i = 0; i < logw.size(); ++i) {
        probs[i] = std::exp(logw[i] - m);
        total += probs[i];
    }
    for (double& v : probs) v = static_cast<double>(v / total);
    DiscreteDist d(0, std::move(probs));
    // construction guarantees membership; verify anyway
    const bool ok = cls == GenClass::lc   ? is_log_concave_discrete(d).is_member
                    : cls == GenClass::ulc ? is_ulc(d, std::nullopt).is_member
                                            : is_ulc(d, n).is_member;
    if (!ok) throw std::logic_error("gen_log_concave: generated distribution failed its class");
    return d;
}

inline const char* gen_class_name(GenClass cls) {
    switch (cls) {
        case GenClass::lc: return "lc";
        case GenClass::ulc: return "ulc";
        case GenClass::ulc_n: return "ulc_n";
    }
    return "lc";
}

/// Corpus draw as a pure function of (class, seed): the support size comes
/// off the seed stream first, then the weights.
inline DiscreteDist corpus_draw(GenClass cls, std::uint64_t seed, int n = 12) {
    SplitMix64 rng(seed);
    const int max_size = cls == GenClass::ulc_n ? n + 1 : 14;
    const int size = 1 + static_cast<int>(rng.next_u64() % static_cast<std::uint64_t>(max_size));
    return gen_log_concave(rng.next_u64(), size, cls, n);
}

/// Write one corpus draw as a PMF CSV named {class}_{seed}.csv under dir;
/// returns the path.
inline std::string dump_corpus_file(const std::string& dir, GenClass cls, std::uint64_t seed,
                                    int n = 12) {
    const std::string path =
        dir + "/" + gen_class_name(cls) + "_" + std::to_string(seed) + ".csv";
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    write_pmf_csv(out, corpus_draw(cls, seed, n));
    return path;
}

/// Seeded log-concave density grid on [0, ~len]: concave piecewise-linear
/// log-density, normalized exactly under log-linear interpolation.
inline ContinuousDist gen_log_concave_grid(std::uint64_t seed, int n_segments = 8) {
    if (n_segments < 1) throw std::invalid_argument("gen_log_concave_grid: n_segments >= 1");
    SplitMix64 rng(seed);
    GridDensity g;
    double x = 0.0;
    double slope = rng.uniform(-1.5, 1.5);
    double logf = 0.0;
    g.x.push_back(x);
    g.f.push_back(1.0);
    for (int i = 0; i < n_segments; ++i) {
        const double dx = rng.uniform(0.2, 1.0);
        x += dx;
        logf += slope * dx;
        slope += rng.uniform(-1.0, 0.0);
        g.x.push_back(x);
        g.f.push_back(std::exp(logf));
    }
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < g.x.size(); ++i)
        total += detail::seg_mass(g.x[i], g.x[i + 1], g.f[i], g.f[i + 1]);
    for (double& v : g.f) v /= total;
    return ContinuousDist::from_grid(std::move(g));
}

}  // namespace lcx
