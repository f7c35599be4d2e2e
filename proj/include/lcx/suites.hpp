#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "lcx/chernoff.hpp"
#include "lcx/entropy.hpp"
#include "lcx/io.hpp"
#include "lcx/majorize.hpp"
#include "lcx/moments.hpp"
#include "lcx/oracle.hpp"

namespace lcx {

/// One property line of a report: pass/fail counts over a seeded corpus and
/// the worst slack seen.  Properties whose name ends in "_flag" are
/// informational measurements and do not gate the exit code.
struct SuiteRow {
    std::string property;
    int pass = 0;
    int fail = 0;
    double min_slack = kInf;

    bool gating() const {
        return property.size() < 5 || property.substr(property.size() - 5) != "_flag";
    }
};

inline void write_suite_csv(std::ostream& out, const std::vector<SuiteRow>& rows) {
    out << "property,pass,fail,min_slack\n";
    for (const auto& r : rows)
        out << r.property << ',' << r.pass << ',' << r.fail << ','
            << format_g12(std::isfinite(r.min_slack) ? r.min_slack : 0.0) << '\n';
}

inline bool all_gating_pass(const std::vector<SuiteRow>& rows) {
    for (const auto& r : rows)
        if (r.gating() && r.fail > 0) return false;
    return true;
}

namespace corpus {

// Draw helpers over the seeded corpora.  Support sizes are uniform in
// {1..max_size}; ULC(n) draws cycle n through {2..12}.

inline DiscreteDist draw_lc(SplitMix64& rng, int max_size = 14) {
    return gen_log_concave(rng.next_u64(), 1 + int(rng.next_u64() % max_size), GenClass::lc);
}

inline DiscreteDist draw_ulc(SplitMix64& rng, int max_size = 14) {
    return gen_log_concave(rng.next_u64(), 1 + int(rng.next_u64() % max_size), GenClass::ulc);
}

inline DiscreteDist draw_ulc_n(SplitMix64& rng, int& n_out) {
    const int n = 2 + int(rng.next_u64() % 11);
    n_out = n;
    return gen_log_concave(rng.next_u64(), 1 + int(rng.next_u64() % (n + 1)),
                           GenClass::ulc_n, n);
}

inline MonotoneMap draw_map(SplitMix64& rng, long long lo, long long hi) {
    switch (rng.next_u64() % 3) {
        case 0:
            return MonotoneMap::affine(double(rng.uniform_int(0, 3)),
                                       double(rng.uniform_int(-2, 2)));
        case 1:
            return MonotoneMap::floor_shift(rng.uniform_int(0, 4));
        default: {
            std::vector<long long> vals;
            long long v = rng.uniform_int(-2, 2);
            for (long long k = lo; k <= hi; ++k) {
                vals.push_back(v);
                v += rng.uniform_int(0, 2);
            }
            return MonotoneMap::table(lo, std::move(vals));
        }
    }
}

}  // namespace corpus

namespace detail {

inline void tally(SuiteRow& row, bool ok, double slack) {
    (ok ? row.pass : row.fail) += 1;
    row.min_slack = std::min(row.min_slack, slack);
}

}  // namespace detail

/// Convex-order majorization, crossing monotonicity, the monotone-map
/// extension, and the stop-loss cross-checks, on seeded corpora.
inline std::vector<SuiteRow> majorize_suite(std::uint64_t seed, int draws) {
    SplitMix64 rng(seed);
    std::vector<SuiteRow> rows;

    {
        SuiteRow r{"thm24_cx_geometric"};
        SuiteRow r0{"thm24_cx_geometric_variant"};
        SuiteRow rp{"thm24_cx_poisson"};
        SuiteRow rb{"thm24_cx_binomial"};
        for (int i = 0; i < draws; ++i) {
            const DiscreteDist x0 = corpus::draw_lc(rng);
            const DiscreteDist x1 = shifted(x0, 1);
            const CxReport c1 =
                verify_convex_order(x1, matched_mean_log_affine(x1, RefSupport::positive_integers));
            detail::tally(r, c1.verdict, c1.min_psi);
            const CxReport c0 =
                verify_convex_order(x0, matched_mean_log_affine(x0, RefSupport::nonneg_integers));
            detail::tally(r0, c0.verdict, c0.min_psi);
            const DiscreteDist xu = corpus::draw_ulc(rng);
            const CxReport cp =
                verify_convex_order(xu, matched_mean_log_affine(xu, RefSupport::poisson_weights));
            detail::tally(rp, cp.verdict, cp.min_psi);
            int n = 0;
            const DiscreteDist xn = corpus::draw_ulc_n(rng, n);
            const CxReport cb =
                verify_convex_order(xn, matched_mean_log_affine(xn, RefSupport::binomial_n, n));
            detail::tally(rb, cb.verdict, cb.min_psi);
        }
        rows.push_back(r);
        rows.push_back(r0);
        rows.push_back(rp);
        rows.push_back(rb);
    }

    {
        SuiteRow r{"thm25_crossing_monotone"};
        const int pairs = std::max(1, std::min(draws, 50));
        for (int i = 0; i < pairs; ++i) {
            const DiscreteDist f = corpus::draw_lc(rng, 12);
            const DiscreteDist g = corpus::draw_lc(rng, 12);
            const long long lo = std::min(f.min_support(), g.min_support());
            const long long hi = std::max(f.max_support(), g.max_support());
            const int before = crossing_count(f, g).count;
            for (int j = 0; j < 50; ++j) {
                const MonotoneMap T = corpus::draw_map(rng, lo, hi);
                const int after = crossing_count(pushforward(f, T), pushforward(g, T)).count;
                detail::tally(r, after <= before, double(before - after));
            }
        }
        rows.push_back(r);
    }

    {
        SuiteRow r{"thm26_pushforward_cx"};
        const int count = std::max(1, std::min(draws, 50));
        for (int i = 0; i < count; ++i) {
            const DiscreteDist x = shifted(corpus::draw_lc(rng, 10), 1);
            const MonotoneMap T = corpus::draw_map(rng, 1, x.max_support());
            if (T(double(x.max_support() + 50)) <= T(1.0) + 1e-12) continue;  // constant map
            const DiscreteDist z = solve_log_affine_for_map(x, T, 1);
            const CxReport c = verify_convex_order(pushforward(x, T), pushforward(z, T));
            detail::tally(r, c.verdict, c.min_psi);
        }
        rows.push_back(r);
    }

    {
        SuiteRow r{"psi_endpoint_identities"};
        for (int i = 0; i < std::min(draws, 50); ++i) {
            const DiscreteDist x = corpus::draw_lc(rng);
            const DiscreteDist z = matched_mean_log_affine(x, RefSupport::nonneg_integers);
            const double budget = 1e-9 + truncation_budget(x) + truncation_budget(z);
            const double lo = double(std::min(x.min_support(), z.min_support()));
            const double hi = double(std::max(x.max_support(), z.max_support())) + 1.0;
            const double at_lo = std::abs(stop_loss(z, lo) - stop_loss(x, lo));
            const double at_hi = std::abs(stop_loss(z, hi) - stop_loss(x, hi));
            detail::tally(r, at_lo <= budget && at_hi <= budget,
                          budget - std::max(at_lo, at_hi));
        }
        rows.push_back(r);
    }

    {
        SuiteRow r{"cx_implies_mgf_domination"};
        for (int i = 0; i < std::min(draws, 50); ++i) {
            const DiscreteDist x = corpus::draw_lc(rng);
            const DiscreteDist z = matched_mean_log_affine(x, RefSupport::nonneg_integers);
            const double boundary = -std::log1p(-z.family()->p);
            bool ok = true;
            double slack = kInf;
            for (int j = 1; j <= 8; ++j) {
                const double theta = -1.0 + (0.95 * boundary + 1.0) * j / 8.0;
                const double gap = mgf(z, theta) - mgf(x, theta);
                slack = std::min(slack, gap);
                ok = ok && gap >= -1e-9 * std::max(1.0, mgf(z, theta));
            }
            detail::tally(r, ok, slack);
        }
        rows.push_back(r);
    }

    {
        SuiteRow r{"two_crossing_crosscheck"};
        for (int i = 0; i < draws; ++i) {
            const DiscreteDist x = corpus::draw_lc(rng);
            const DiscreteDist z = matched_mean_log_affine(x, RefSupport::nonneg_integers);
            const TwoCrossingReport t = two_crossing_implies_cx_check(x, z);
            detail::tally(r, t.implication_holds && t.crossings.count != 1,
                          t.cx.min_psi);
        }
        rows.push_back(r);
    }

    return rows;
}

/// Keilson/ULC factorial-moment log-concavity, the derived chains, the
/// moment-comparison corollaries, and the printed-exponent comparison.
inline std::vector<SuiteRow> moments_suite(std::uint64_t seed, int draws) {
    SplitMix64 rng(seed);
    std::vector<SuiteRow> rows;

    {
        SuiteRow r{"thm15_keilson_lc"};
        for (int i = 0; i < draws; ++i) {
            const DiscreteDist d = corpus::draw_lc(rng);
            const SlackReport s =
                keilson_check(d, int(std::min<long long>(d.max_support(), 12)));
            detail::tally(r, s.verdict && s.min_log_slack >= -1e-9, s.min_log_slack);
        }
        rows.push_back(r);
    }

    {
        SuiteRow rn{"thm16_ulc_n"};
        SuiteRow ri{"thm16_ulc_inf"};
        for (int i = 0; i < draws; ++i) {
            int n = 0;
            const DiscreteDist dn = corpus::draw_ulc_n(rng, n);
            const SlackReport sn = ulc_factorial_check(dn, n, std::min(n, 12));
            detail::tally(rn, sn.verdict && sn.min_log_slack >= -1e-9, sn.min_log_slack);
            const DiscreteDist di = corpus::draw_ulc(rng);
            const SlackReport si = ulc_factorial_check(di, std::nullopt, 12);
            detail::tally(ri, si.verdict && si.min_log_slack >= -1e-9, si.min_log_slack);
        }
        rows.push_back(rn);
        rows.push_back(ri);
    }

    {
        SuiteRow r{"factorial_equality_probes"};
        for (int n : {2, 5, 10, 20}) {
            for (double q : {0.1, 0.3, 0.5, 0.7, 0.9}) {
                const SlackReport s = ulc_factorial_check(binomial(n, q), n, n + 1);
                detail::tally(r, std::abs(s.min_log_slack) <= 1e-9, -std::abs(s.min_log_slack));
            }
        }
        for (double lam : {0.5, 1.0, 2.0, 5.0}) {
            const SlackReport s = ulc_factorial_check(poisson(lam), std::nullopt, 12);
            detail::tally(r, std::abs(s.min_log_slack) <= 1e-9, -std::abs(s.min_log_slack));
            const SlackReport k = keilson_check(geometric_variant(1.0 / (1.0 + lam)), 12);
            detail::tally(r, std::abs(k.min_log_slack) <= 1e-9, -std::abs(k.min_log_slack));
        }
        rows.push_back(r);
    }

    {
        SuiteRow rk{"chain_keilson_root_monotone"};
        SuiteRow ru{"chain_ulc_n_root_monotone"};
        for (int i = 0; i < draws; ++i) {
            const DiscreteDist d = corpus::draw_lc(rng);
            const FactorialMomentTable t = factorial_moments(d, 12, FactNorm::keilson);
            bool ok = true;
            double slack = kInf;
            for (int p = 1; p + 1 <= 12; ++p) {
                const double a = t.values[size_t(p)], b = t.values[size_t(p + 1)];
                if (a <= 0.0 || b <= 0.0) break;
                const double gap = std::log(a) / p - std::log(b) / (p + 1);
                slack = std::min(slack, gap);
                ok = ok && gap >= -1e-9;
            }
            detail::tally(rk, ok, slack);

            int n = 0;
            const DiscreteDist dn = corpus::draw_ulc_n(rng, n);
            const FactorialMomentTable tn = factorial_moments(dn, n, FactNorm::ulc_n, n);
            ok = true;
            slack = kInf;
            for (int p = 1; p + 1 <= n; ++p) {
                const double a = tn.values[size_t(p)], b = tn.values[size_t(p + 1)];
                if (a <= 0.0 || b <= 0.0) break;
                const double gap = std::log(a) / p - std::log(b) / (p + 1);
                slack = std::min(slack, gap);
                ok = ok && gap >= -1e-9;
            }
            detail::tally(ru, ok, slack);
        }
        rows.push_back(rk);
        rows.push_back(ru);
    }

    {
        SuiteRow re{"cor_discrete_mean_ge_1"};
        SuiteRow ra{"cor_discrete_alpha_le_1"};
        for (int i = 0; i < draws; ++i) {
            const DiscreteDist d = shifted(corpus::draw_lc(rng), 1);
            for (auto [a, b] : {std::pair{1.0, 2.0}, {1.5, 3.0}, {2.0, 4.0}}) {
                const MomentBoundReport m = corollary_moment_bounds(d, a, b);
                detail::tally(re, m.holds, m.log_slack);
            }
            for (auto [a, b] : {std::pair{0.5, 1.0}, {0.3, 2.0}, {0.9, 1.8}}) {
                const MomentBoundReport m = corollary_moment_bounds(d, a, b);
                detail::tally(ra, m.holds, m.log_slack);
            }
        }
        rows.push_back(re);
        rows.push_back(ra);
    }

    {
        SuiteRow r{"cor_continuous_exponential_equality"};
        for (double rate : {0.5, 1.0, 2.0}) {
            const MomentBoundReport m =
                corollary_moment_bounds(ContinuousDist::exponential(rate), 1.0, 2.0);
            detail::tally(r, m.holds && std::abs(m.lhs - m.rhs) <= 1e-9,
                          -std::abs(m.lhs - m.rhs));
        }
        rows.push_back(r);
    }

    {
        SuiteRow r{"remark34_printed_exponent_flag"};
        // the printed weighted exponent does not reduce to the unweighted one
        // at a_i = 1; measured and flagged, not reconciled
        const WeightedComparison c =
            remark_weighted_comparison({1.0, 1.0}, {2.0, 2.0}, 2.0, Side::geq);
        detail::tally(r, c.weighted_bound == c.unweighted_bound,
                      std::log(c.unweighted_bound) - std::log(c.weighted_bound));
        rows.push_back(r);
    }

    {
        SuiteRow r{"gamma_root_le_alpha"};
        for (int i = 0; i <= 90; ++i) {
            const double alpha = 1.0 + 0.1 * i;
            const double slack = alpha - std::exp(std::lgamma(alpha + 1.0) / alpha);
            detail::tally(r, slack >= -1e-12, slack);
        }
        rows.push_back(r);
    }

    return rows;
}

/// Rényi monotonicity, maximum entropy per reference class, the sufficiency
/// lemma, the alpha > 1 counterexample measurements, and the Shannon seam.
inline std::vector<SuiteRow> entropy_suite(std::uint64_t seed, int draws) {
    SplitMix64 rng(seed);
    std::vector<SuiteRow> rows;
    const std::vector<double> alphas = {0.25, 0.5, 0.75, 1.0};

    {
        SuiteRow r{"renyi_monotone_in_alpha"};
        const std::vector<double> grid = {0.0, 0.25, 0.5, 1.0, 2.0, kInf};
        for (int i = 0; i < draws; ++i) {
            const DiscreteDist d = corpus::draw_lc(rng);
            bool ok = true;
            double slack = kInf;
            double prev = kInf;
            for (double a : grid) {
                const double h = renyi(d, a).value;
                if (std::isfinite(prev)) {
                    slack = std::min(slack, prev - h);
                    ok = ok && h <= prev + 1e-12;
                }
                prev = h;
            }
            detail::tally(r, ok, slack);
        }
        rows.push_back(r);
    }

    {
        SuiteRow r1{"thm17_lc_vs_geometric"};
        SuiteRow r0{"thm17_lc_vs_geometric_variant"};
        SuiteRow rp{"thm17_ulc_vs_poisson"};
        SuiteRow rb{"thm17_ulcn_vs_binomial"};
        SuiteRow rc{"thm17_continuous_vs_exponential"};
        for (int i = 0; i < draws; ++i) {
            const DiscreteDist x0 = corpus::draw_lc(rng);
            const MaxEntropyReport m0 = max_entropy_check(
                x0, matched_mean_log_affine(x0, RefSupport::nonneg_integers), alphas);
            detail::tally(r0, m0.all_hold, m0.min_slack);
            const DiscreteDist x1 = shifted(x0, 1);
            const MaxEntropyReport m1 = max_entropy_check(
                x1, matched_mean_log_affine(x1, RefSupport::positive_integers), alphas);
            detail::tally(r1, m1.all_hold, m1.min_slack);
            const DiscreteDist xu = corpus::draw_ulc(rng);
            const MaxEntropyReport mp = max_entropy_check(
                xu, matched_mean_log_affine(xu, RefSupport::poisson_weights), alphas);
            detail::tally(rp, mp.all_hold, mp.min_slack);
            int n = 0;
            const DiscreteDist xn = corpus::draw_ulc_n(rng, n);
            const MaxEntropyReport mb = max_entropy_check(
                xn, matched_mean_log_affine(xn, RefSupport::binomial_n, n), alphas);
            detail::tally(rb, mb.all_hold, mb.min_slack);
            const ContinuousDist xc = gen_log_concave_grid(rng.next_u64(), 6);
            const MaxEntropyReport mc =
                max_entropy_check(xc, matched_mean_log_affine(xc), alphas);
            detail::tally(rc, mc.all_hold, mc.min_slack);
        }
        rows.push_back(r1);
        rows.push_back(r0);
        rows.push_back(rp);
        rows.push_back(rb);
        rows.push_back(rc);
    }

    {
        SuiteRow r{"lemma51_condition_implies_conclusion"};
        for (int i = 0; i < draws; ++i) {
            const DiscreteDist x = corpus::draw_lc(rng);
            const DiscreteDist z = matched_mean_log_affine(x, RefSupport::nonneg_integers);
            for (double a : alphas) {
                const Lemma51Report l = lemma51_check(x, z, a);
                detail::tally(r, !l.sufficient_condition_holds || l.entropy_conclusion_holds,
                              l.H_z - l.H_x);
            }
        }
        rows.push_back(r);
    }

    {
        SuiteRow r{"prop53_strict_violation_near_1"};
        for (double alpha : {1.5, 2.0, 3.0}) {
            const Prop53Report p = prop53_counterexample(alpha, 0.999);
            detail::tally(r, p.strict_violation, p.H_bernoulli - p.H_geometric);
        }
        rows.push_back(r);

        SuiteRow f{"prop53_ratio_envelope_flag"};
        // spec envelope |ratio - alpha| <= 10(1-p); measured only — the true
        // gap decays like 2 alpha (1-p)^{alpha-1}, which beats the envelope
        // only for alpha >= 2
        for (double alpha : {1.5, 2.0, 3.0}) {
            for (double p : {0.999, 0.9995, 0.9999}) {
                const Prop53Report r53 = prop53_counterexample(alpha, p);
                const double gap = 10.0 * (1.0 - p) - std::abs(r53.ratio_to_limit - alpha);
                detail::tally(f, gap >= 0.0, gap);
            }
        }
        rows.push_back(f);
    }

    {
        SuiteRow r{"shannon_seam_continuity"};
        for (int i = 0; i < std::min(draws, 25); ++i) {
            const DiscreteDist d = corpus::draw_lc(rng);
            const double h1 = renyi(d, 1.0).value;
            const double lo = renyi(d, 1.0 - 1e-4).value;
            const double hi = renyi(d, 1.0 + 1e-4).value;
            const double worst = std::max(std::abs(lo - h1), std::abs(hi - h1));
            detail::tally(r, worst <= 1e-3, 1e-3 - worst);
        }
        rows.push_back(r);
    }

    return rows;
}

inline std::vector<SuiteRow> all_suites(std::uint64_t seed, int draws) {
    std::vector<SuiteRow> rows = majorize_suite(seed, draws);
    const std::vector<SuiteRow> m = moments_suite(seed + 1, draws);
    rows.insert(rows.end(), m.begin(), m.end());
    const std::vector<SuiteRow> e = entropy_suite(seed + 2, draws);
    rows.insert(rows.end(), e.begin(), e.end());
    return rows;
}

}  // namespace lcx
