#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace lcx {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

/// Tail side selector: `geq` means upper-tail events {X >= t}.
enum class Side { geq, leq };

namespace detail {

// log(sum_i exp(v_i)) without overflow; -inf entries are allowed.
inline double log_sum_exp(const std::vector<double>& v) {
    double m = -kInf;
    for (double x : v) m = std::max(m, x);
    if (!std::isfinite(m)) return m;
    double s = 0.0;
    for (double x : v) s += std::exp(x - m);
    return m + std::log(s);
}

inline bool nearly_integer(double x, double tol = 1e-9) {
    return std::abs(x - std::round(x)) <= tol;
}

}  // namespace detail
}  // namespace lcx
