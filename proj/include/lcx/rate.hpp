#pragma once

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "lcx/continuous.hpp"
#include "lcx/discrete.hpp"

namespace lcx {

/// Cumulant generating function of a reference law Z together with its
/// admissible domains on each side of zero.  Lambda(0) = 0 and Lambda is
/// convex on its domain.
struct RateFunction {
    std::function<double(double)> cgf;
    double lambda_min = -kInf;  ///< domain (lambda_min, 0) for lower tails
    double lambda_max = kInf;   ///< domain (0, lambda_max) for upper tails
    double mean = 0.0;          ///< Lambda'(0); deviations are measured against it
};

inline RateFunction rate_function(const DiscreteDist& d) {
    RateFunction r;
    r.mean = mean(d);
    if (d.family() && d.family()->kind == Family::geometric)
        r.lambda_max = -std::log1p(-d.family()->p);
    r.cgf = [d](double t) { return cgf(d, t); };
    return r;
}

inline RateFunction rate_function(const ContinuousDist& d) {
    RateFunction r;
    r.mean = mean(d);
    if (d.family() == ContFamily::exponential) r.lambda_max = d.rate();
    r.cgf = [d](double t) { return cgf(d, t); };
    return r;
}

/// Rate function of an independent sum: cgfs add, domains intersect.
inline RateFunction rate_function_sum(const std::vector<RateFunction>& parts) {
    if (parts.empty()) throw std::invalid_argument("rate_function_sum: empty list");
    RateFunction r;
    for (const auto& p : parts) {
        r.mean += p.mean;
        r.lambda_min = std::max(r.lambda_min, p.lambda_min);
        r.lambda_max = std::min(r.lambda_max, p.lambda_max);
    }
    r.cgf = [parts](double t) {
        double s = 0.0;
        for (const auto& p : parts) s += p.cgf(t);
        return s;
    };
    return r;
}

}  // namespace lcx
