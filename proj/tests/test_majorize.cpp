#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "lcx/majorize.hpp"
#include "lcx/oracle.hpp"

using namespace lcx;

namespace {

MonotoneMap random_map(SplitMix64& rng, long long support_lo, long long support_hi) {
    switch (rng.next_u64() % 3) {
        case 0:
            return MonotoneMap::affine(double(rng.uniform_int(0, 3)),
                                       double(rng.uniform_int(-2, 2)));
        case 1:
            return MonotoneMap::floor_shift(rng.uniform_int(0, 4));
        default: {
            std::vector<long long> vals;
            long long v = rng.uniform_int(-2, 2);
            for (long long k = support_lo; k <= support_hi; ++k) {
                vals.push_back(v);
                v += rng.uniform_int(0, 2);
            }
            return MonotoneMap::table(support_lo, std::move(vals));
        }
    }
}

}  // namespace

TEST_CASE("crossing_count") {
    SECTION("identical densities cross zero times") {
        const DiscreteDist d = binomial(3, 0.4);
        const CrossingReport r = crossing_count(d, d);
        REQUIRE(r.count == 0);
        REQUIRE(r.partition.size() == 1);
        REQUIRE(r.partition[0].sign == 0);
    }
    SECTION("flat vs geometric variant: pattern -,+,+,-,... counts 2") {
        const DiscreteDist f(0, {1.0 / 3, 1.0 / 3, 1.0 / 3});
        const CrossingReport r = crossing_count(f, geometric_variant(0.5));
        REQUIRE(r.count == 2);
        REQUIRE(r.partition.front().sign == -1);
        REQUIRE(r.partition.back().sign == -1);
    }
    SECTION("binomial(2,1/2) vs (0.3,0.4,0.3): signs (-,+,-)") {
        const CrossingReport r =
            crossing_count(binomial(2, 0.5), DiscreteDist(0, {0.3, 0.4, 0.3}));
        REQUIRE(r.count == 2);
        REQUIRE(r.partition.size() == 3);
        REQUIRE(r.partition[0].sign == -1);
        REQUIRE(r.partition[1].sign == +1);
        REQUIRE(r.partition[2].sign == -1);
    }
    SECTION("adjacent nonzero signs alternate on random pairs") {
        SplitMix64 rng(8);
        for (int i = 0; i < 50; ++i) {
            const DiscreteDist f =
                gen_log_concave(rng.next_u64(), 1 + int(rng.next_u64() % 10), GenClass::lc);
            const DiscreteDist g =
                gen_log_concave(rng.next_u64(), 1 + int(rng.next_u64() % 10), GenClass::lc);
            const CrossingReport r = crossing_count(f, g);
            int last = 0;
            int alternations = 0;
            for (const auto& run : r.partition) {
                if (run.sign == 0) continue;
                if (last != 0) {
                    REQUIRE(run.sign == -last);
                    ++alternations;
                }
                last = run.sign;
            }
            REQUIRE(alternations == r.count);
        }
    }
    SECTION("mismatched raw grids are an error") {
        REQUIRE_THROWS_AS(crossing_count(std::vector<double>{1.0}, {0.5, 0.5}),
                          std::invalid_argument);
    }
}

TEST_CASE("pushforward") {
    SECTION("identity map keeps the distribution") {
        const DiscreteDist d = binomial(4, 0.6);
        const DiscreteDist out = pushforward(d, MonotoneMap::affine(1.0, 0.0));
        REQUIRE(out.offset() == d.offset());
        REQUIRE(out.probs() == d.probs());
    }
    SECTION("floor_shift(2) on poisson(1): mass at 0 is P(X<=2)") {
        const DiscreteDist out = pushforward(poisson(1.0), MonotoneMap::floor_shift(2));
        REQUIRE(out.pmf(0) == Catch::Approx(2.5 * std::exp(-1.0)).epsilon(1e-10));
        REQUIRE(out.offset() == 0);
    }
    SECTION("affine(2,0) doubles the support and keeps masses") {
        const DiscreteDist d(0, {0.2, 0.3, 0.5});
        const DiscreteDist out = pushforward(d, MonotoneMap::affine(2.0, 0.0));
        REQUIRE(out.offset() == 0);
        REQUIRE(out.pmf(0) == 0.2);
        REQUIRE(out.pmf(1) == 0.0);
        REQUIRE(out.pmf(2) == 0.3);
        REQUIRE(out.pmf(4) == 0.5);
    }
    SECTION("non-integer images are rejected") {
        const DiscreteDist d(0, {0.5, 0.5});
        REQUIRE_THROWS_AS(pushforward(d, MonotoneMap::affine(0.5, 0.0)),
                          std::invalid_argument);
    }
    SECTION("non-monotone tables are rejected at construction") {
        REQUIRE_THROWS_AS(MonotoneMap::table(0, {0, 2, 1}), std::invalid_argument);
    }
    SECTION("E[T(X)] is preserved") {
        SplitMix64 rng(3);
        for (int i = 0; i < 30; ++i) {
            const DiscreteDist d =
                gen_log_concave(rng.next_u64(), 1 + int(rng.next_u64() % 12), GenClass::lc);
            const MonotoneMap T = random_map(rng, d.min_support(), d.max_support());
            double expect = 0.0;
            for (std::size_t j = 0; j < d.size(); ++j)
                expect += d.probs()[j] * T(double(d.offset() + (long long)j));
            REQUIRE(mean(pushforward(d, T)) == Catch::Approx(expect).margin(1e-12));
        }
    }
}

TEST_CASE("matched_mean_log_affine") {
    REQUIRE(matched_mean_log_affine(2.0, RefSupport::positive_integers).family()->p ==
            Catch::Approx(0.5));
    REQUIRE(mean(matched_mean_log_affine(3.0, RefSupport::binomial_n, 10)) ==
            Catch::Approx(3.0).margin(1e-12));
    REQUIRE(mean(matched_mean_log_affine(1.5, RefSupport::nonneg_integers)) ==
            Catch::Approx(1.5).margin(1e-10));
    REQUIRE(mean(matched_mean_log_affine(2.5, RefSupport::poisson_weights)) ==
            Catch::Approx(2.5).margin(1e-12));
    const ContinuousDist e = matched_mean_log_affine(ContinuousDist::uniform(0.0, 2.0));
    REQUIRE(e.rate() == Catch::Approx(1.0));
    SECTION("mean outside the achievable range is an error") {
        REQUIRE_THROWS_AS(matched_mean_log_affine(11.0, RefSupport::binomial_n, 10),
                          std::invalid_argument);
        REQUIRE_THROWS_AS(matched_mean_log_affine(0.5, RefSupport::positive_integers),
                          std::invalid_argument);
    }
}

TEST_CASE("verify_convex_order") {
    SECTION("x = z gives Psi identically zero") {
        const DiscreteDist d = binomial(6, 0.4);
        const CxReport r = verify_convex_order(d, d);
        REQUIRE(r.verdict);
        REQUIRE(r.min_psi == Catch::Approx(0.0).margin(1e-15));
    }
    SECTION("uniform {1..5} against matched geometric(1/3)") {
        const DiscreteDist x(1, {0.2, 0.2, 0.2, 0.2, 0.2});
        const DiscreteDist z = matched_mean_log_affine(x, RefSupport::positive_integers);
        const CxReport r = verify_convex_order(x, z);
        REQUIRE(r.verdict);
        REQUIRE(r.min_psi >= -r.tol);
    }
    SECTION("direction check: (0.5,0,0.5) is not dominated by delta_1") {
        const DiscreteDist x(0, {0.5, 0.0, 0.5});
        const DiscreteDist z = point_mass(1);
        const CxReport r = verify_convex_order(x, z);
        REQUIRE_FALSE(r.verdict);
        // Psi(1) = E[(Z-1)+] - E[(X-1)+] = 0 - 0.5
        REQUIRE(r.min_psi == Catch::Approx(-0.5).margin(1e-12));
        REQUIRE(r.max_violation == Catch::Approx(0.5).margin(1e-12));
        // the reversed roles certify delta_1 ≺_cx x
        REQUIRE(verify_convex_order(z, x).verdict);
    }
    SECTION("mean mismatch is an error") {
        REQUIRE_THROWS_AS(verify_convex_order(point_mass(1), point_mass(2)),
                          std::invalid_argument);
    }
    SECTION("continuous: uniform(0,2) ≺_cx exponential(1)") {
        const CxReport r = verify_convex_order(ContinuousDist::uniform(0.0, 2.0),
                                               ContinuousDist::exponential(1.0));
        REQUIRE(r.verdict);
    }
}

TEST_CASE("majorization: matched-mean log-affine dominates (Theorem-2.4 style)") {
    SplitMix64 rng(2027);
    for (int i = 0; i < 200; ++i) {
        const int size = 1 + int(rng.next_u64() % 14);
        const DiscreteDist x0 = gen_log_concave(rng.next_u64(), size, GenClass::lc);
        // on {1,2,...} against the geometric
        const DiscreteDist x1 = shifted(x0, 1 - x0.offset());
        REQUIRE(verify_convex_order(x1, matched_mean_log_affine(x1, RefSupport::positive_integers))
                    .verdict);
        // on {0,1,...} against the geometric variant
        REQUIRE(verify_convex_order(x0, matched_mean_log_affine(x0, RefSupport::nonneg_integers))
                    .verdict);
    }
    for (int i = 0; i < 200; ++i) {
        const int size = 1 + int(rng.next_u64() % 14);
        const DiscreteDist x = gen_log_concave(rng.next_u64(), size, GenClass::ulc);
        REQUIRE(verify_convex_order(x, matched_mean_log_affine(x, RefSupport::poisson_weights))
                    .verdict);
    }
    for (int i = 0; i < 200; ++i) {
        const int n = 2 + int(rng.next_u64() % 11);
        const int size = 1 + int(rng.next_u64() % (n + 1));
        const DiscreteDist x = gen_log_concave(rng.next_u64(), size, GenClass::ulc_n, n);
        REQUIRE(verify_convex_order(x, matched_mean_log_affine(x, RefSupport::binomial_n, n))
                    .verdict);
    }
}

TEST_CASE("crossing counts never increase under monotone maps (Theorem-2.5 style)") {
    SplitMix64 rng(606);
    int worst = 0;
    for (int i = 0; i < 50; ++i) {
        const DiscreteDist f =
            gen_log_concave(rng.next_u64(), 1 + int(rng.next_u64() % 12), GenClass::lc);
        const DiscreteDist g =
            gen_log_concave(rng.next_u64(), 1 + int(rng.next_u64() % 12), GenClass::lc);
        const long long lo = std::min(f.min_support(), g.min_support());
        const long long hi = std::max(f.max_support(), g.max_support());
        const CrossingReport before = crossing_count(f, g);
        for (int j = 0; j < 50; ++j) {
            const MonotoneMap T = random_map(rng, lo, hi);
            const CrossingReport after = crossing_count(pushforward(f, T), pushforward(g, T));
            REQUIRE(after.count <= before.count);
            worst = std::max(worst, after.count - before.count);
        }
    }
    REQUIRE(worst <= 0);
}

TEST_CASE("monotone-map extension (Theorem-2.6 style)") {
    SplitMix64 rng(31337);
    for (int i = 0; i < 50; ++i) {
        const int size = 1 + int(rng.next_u64() % 10);
        const DiscreteDist x =
            shifted(gen_log_concave(rng.next_u64(), size, GenClass::lc), 1);
        MonotoneMap T = random_map(rng, 1, x.max_support());
        // degenerate constant maps make the matched mean unreachable; skip them
        double lo_val = T(1.0);
        if (T(double(x.max_support() + 50)) <= lo_val + 1e-12) continue;
        const DiscreteDist z = solve_log_affine_for_map(x, T, 1);
        const DiscreteDist tx = pushforward(x, T);
        const DiscreteDist tz = pushforward(z, T);
        REQUIRE(std::abs(mean(tx) - mean(tz)) <= 1e-9 * std::max(1.0, std::abs(mean(tx))));
        REQUIRE(verify_convex_order(tx, tz).verdict);
    }
}

TEST_CASE("Psi endpoint identities") {
    SplitMix64 rng(11);
    for (int i = 0; i < 40; ++i) {
        const DiscreteDist x =
            gen_log_concave(rng.next_u64(), 1 + int(rng.next_u64() % 12), GenClass::lc);
        const DiscreteDist z = matched_mean_log_affine(x, RefSupport::nonneg_integers);
        const double budget = 1e-9 + truncation_budget(x) + truncation_budget(z);
        const double lo = double(std::min(x.min_support(), z.min_support()));
        const double hi = double(std::max(x.max_support(), z.max_support())) + 1.0;
        // Psi at the support minimum equals the mean gap (zero)
        REQUIRE(std::abs(stop_loss(z, lo) - stop_loss(x, lo)) <= budget);
        // Psi vanishes beyond the joint support
        REQUIRE(std::abs(stop_loss(z, hi) - stop_loss(x, hi)) <= budget);
    }
}

TEST_CASE("convex order implies mgf domination") {
    SplitMix64 rng(13);
    for (int i = 0; i < 40; ++i) {
        const DiscreteDist x =
            gen_log_concave(rng.next_u64(), 1 + int(rng.next_u64() % 12), GenClass::lc);
        const DiscreteDist z = matched_mean_log_affine(x, RefSupport::nonneg_integers);
        REQUIRE(verify_convex_order(x, z).verdict);
        const double boundary = -std::log1p(-z.family()->p);
        for (int j = 1; j <= 8; ++j) {
            const double theta = -1.0 + (0.95 * boundary + 1.0) * j / 8.0;
            REQUIRE(mgf(x, theta) <= mgf(z, theta) * (1.0 + 1e-9) + 1e-12);
        }
    }
}

TEST_CASE("two_crossing_implies_cx_check") {
    SECTION("binomial(2,1/2) vs matched geometric variant") {
        const DiscreteDist x = binomial(2, 0.5);
        const DiscreteDist z = matched_mean_log_affine(x, RefSupport::nonneg_integers);
        REQUIRE(z.family()->p == Catch::Approx(0.5));
        const TwoCrossingReport r = two_crossing_implies_cx_check(x, z);
        REQUIRE(r.pattern_holds);
        REQUIRE(r.cx.verdict);
        REQUIRE(r.implication_holds);
    }
    SECTION("identical inputs trivially pass") {
        const DiscreteDist d = poisson(2.0);
        const TwoCrossingReport r = two_crossing_implies_cx_check(d, d);
        REQUIRE(r.pattern_holds);
        REQUIRE(r.implication_holds);
    }
    SECTION("random draws against their majorants keep both routes consistent") {
        SplitMix64 rng(500);
        for (int i = 0; i < 100; ++i) {
            const DiscreteDist x =
                gen_log_concave(rng.next_u64(), 1 + int(rng.next_u64() % 12), GenClass::lc);
            const DiscreteDist z = matched_mean_log_affine(x, RefSupport::nonneg_integers);
            const TwoCrossingReport r = two_crossing_implies_cx_check(x, z);
            REQUIRE(r.implication_holds);
            // a one-crossing pattern with equal means cannot arise
            REQUIRE(r.crossings.count != 1);
        }
    }
}
