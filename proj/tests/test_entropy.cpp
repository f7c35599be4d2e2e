#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <sstream>

#include "lcx/entropy.hpp"
#include "lcx/majorize.hpp"
#include "lcx/oracle.hpp"

using namespace lcx;

TEST_CASE("renyi discrete") {
    SECTION("geometric(1/2), alpha = 2: log 3") {
        REQUIRE(renyi(geometric(0.5), 2.0).value ==
                Catch::Approx(std::log(3.0)).epsilon(1e-12));
    }
    SECTION("uniform on m atoms: every order gives log m") {
        const DiscreteDist u(3, std::vector<double>(7, 1.0 / 7));
        for (double a : {0.0, 0.25, 0.5, 1.0, 2.0, kInf})
            REQUIRE(renyi(u, a).value == Catch::Approx(std::log(7.0)).epsilon(1e-12));
    }
    SECTION("special orders") {
        const DiscreteDist d(0, {0.5, 0.25, 0.25});
        REQUIRE(renyi(d, 0.0).value == Catch::Approx(std::log(3.0)).epsilon(1e-12));
        REQUIRE(renyi(d, kInf).value == Catch::Approx(std::log(2.0)).epsilon(1e-12));
        REQUIRE(renyi(d, 1.0).value == Catch::Approx(1.5 * std::log(2.0)).epsilon(1e-12));
    }
    SECTION("geometric closed forms match direct summation") {
        for (double p : {0.3, 0.5, 0.8}) {
            const DiscreteDist g = geometric(p);
            for (double a : {0.25, 0.5, 2.0}) {
                long double s = 0.0L;
                for (std::size_t i = 0; i < g.size(); ++i)
                    s += std::pow((long double)g.probs()[i], (long double)a);
                const double direct = std::log(double(s)) / (1.0 - a);
                // truncated sum vs closed form: gap shrinks with alpha
                REQUIRE(renyi(g, a).value ==
                        Catch::Approx(direct).margin(a < 1.0 ? 5e-3 : 1e-12));
                REQUIRE(renyi(g, a).value >= direct - 1e-12);  // closed form adds tail mass
            }
            long double sh = 0.0L;
            for (std::size_t i = 0; i < g.size(); ++i)
                sh -= (long double)g.probs()[i] * std::log((long double)g.probs()[i]);
            REQUIRE(renyi(g, 1.0).value == Catch::Approx(double(sh)).margin(1e-9));
        }
    }
    SECTION("poisson series extension agrees with wide summation") {
        const DiscreteDist po = poisson(2.0);
        for (double a : {0.25, 0.5, 2.0}) {
            long double s = 0.0L;
            for (long long k = 0; k <= 400; ++k)
                s += std::exp((long double)(a * po.log_pmf(k)));
            REQUIRE(renyi(po, a).value ==
                    Catch::Approx(std::log(double(s)) / (1.0 - a)).margin(1e-10));
        }
    }
    SECTION("H_alpha is non-increasing in alpha on 100 random draws") {
        SplitMix64 rng(21);
        const std::vector<double> alphas = {0.0, 0.25, 0.5, 1.0, 2.0, kInf};
        for (int i = 0; i < 100; ++i) {
            const DiscreteDist d =
                gen_log_concave(rng.next_u64(), 1 + int(rng.next_u64() % 15), GenClass::lc);
            double prev = kInf;
            for (double a : alphas) {
                const double h = renyi(d, a).value;
                REQUIRE(h <= prev + 1e-12);
                prev = h;
            }
        }
    }
    SECTION("alpha = 1 seam: the Shannon branch is continuous") {
        for (const DiscreteDist& d :
             {geometric(0.5), poisson(1.5), binomial(8, 0.3),
              DiscreteDist(0, {0.2, 0.5, 0.3})}) {
            const double h1 = renyi(d, 1.0).value;
            REQUIRE(renyi(d, 1.0 - 1e-4).value == Catch::Approx(h1).margin(1e-3));
            REQUIRE(renyi(d, 1.0 + 1e-4).value == Catch::Approx(h1).margin(1e-3));
        }
    }
}

TEST_CASE("renyi continuous") {
    SECTION("exponential(1): h_1 = 1 nat, h_alpha = -log(alpha)/(1-alpha)") {
        REQUIRE(renyi(ContinuousDist::exponential(1.0), 1.0).value ==
                Catch::Approx(1.0).epsilon(1e-12));
        REQUIRE(renyi(ContinuousDist::exponential(1.0), 0.5).value ==
                Catch::Approx(2.0 * std::log(2.0)).epsilon(1e-12));
    }
    SECTION("uniform(0,2): log 2 at every order") {
        for (double a : {0.25, 0.5, 1.0, 2.0})
            REQUIRE(renyi(ContinuousDist::uniform(0.0, 2.0), a).value ==
                    Catch::Approx(std::log(2.0)).epsilon(1e-12));
    }
    SECTION("gaussian Shannon entropy") {
        REQUIRE(renyi(ContinuousDist::gaussian(0.0, 1.0), 1.0).value ==
                Catch::Approx(0.5 * std::log(2.0 * M_PI * std::exp(1.0))).epsilon(1e-12));
    }
    SECTION("grid entropies match closed forms for an exact uniform grid") {
        GridDensity g;
        g.x = {0.0, 0.7, 2.0};
        g.f = {0.5, 0.5, 0.5};
        const ContinuousDist d = ContinuousDist::from_grid(g);
        for (double a : {0.25, 1.0, 2.0})
            REQUIRE(renyi(d, a).value == Catch::Approx(std::log(2.0)).margin(1e-10));
    }
    SECTION("grid seam continuity at alpha = 1") {
        SplitMix64 rng(77);
        const ContinuousDist d = gen_log_concave_grid(rng.next_u64(), 6);
        const double h1 = renyi(d, 1.0).value;
        REQUIRE(renyi(d, 1.0 - 1e-4).value == Catch::Approx(h1).margin(1e-3));
        REQUIRE(renyi(d, 1.0 + 1e-4).value == Catch::Approx(h1).margin(1e-3));
    }
}

TEST_CASE("lemma51_check") {
    SECTION("x = z gives equality on both sides") {
        const DiscreteDist z = geometric_variant(0.5);
        for (double a : {0.5, 1.0, 2.0}) {
            const Lemma51Report r = lemma51_check(z, z, a);
            REQUIRE(r.support_ok);
            REQUIRE(r.sufficient_condition_holds);
            REQUIRE(r.entropy_conclusion_holds);
            REQUIRE(r.lhs == Catch::Approx(r.rhs).epsilon(1e-6));
        }
    }
    SECTION("binomial(2,1/2) against matched geometric variant at alpha = 1/2 and 1") {
        const DiscreteDist x = binomial(2, 0.5);
        const DiscreteDist z = matched_mean_log_affine(x, RefSupport::nonneg_integers);
        for (double a : {0.5, 1.0}) {
            const Lemma51Report r = lemma51_check(x, z, a);
            REQUIRE(r.support_ok);
            REQUIRE(r.sufficient_condition_holds);
            REQUIRE(r.entropy_conclusion_holds);
        }
    }
    SECTION("support violation is flagged, not thrown") {
        const Lemma51Report r = lemma51_check(DiscreteDist(0, {0.5, 0.3, 0.2}),
                                              binomial(1, 0.5), 0.5);
        REQUIRE_FALSE(r.support_ok);
        REQUIRE_FALSE(r.sufficient_condition_holds);
    }
    SECTION("sufficiency: condition implies conclusion on 100 matched pairs") {
        SplitMix64 rng(3001);
        for (int i = 0; i < 100; ++i) {
            const DiscreteDist x =
                gen_log_concave(rng.next_u64(), 1 + int(rng.next_u64() % 12), GenClass::lc);
            const DiscreteDist z = matched_mean_log_affine(x, RefSupport::nonneg_integers);
            for (double a : {0.25, 0.5, 0.75, 1.0}) {
                const Lemma51Report r = lemma51_check(x, z, a);
                if (r.sufficient_condition_holds) REQUIRE(r.entropy_conclusion_holds);
            }
        }
    }
}

TEST_CASE("max_entropy_check") {
    const std::vector<double> alphas = {0.25, 0.5, 0.75, 1.0};
    SECTION("poisson(1) against itself: equality rows") {
        const DiscreteDist z = poisson(1.0);
        const MaxEntropyReport r = max_entropy_check(z, z, alphas);
        REQUIRE(r.all_hold);
        REQUIRE(r.min_slack == Catch::Approx(0.0).margin(1e-9));
    }
    SECTION("binomial(5, 0.2) against poisson(1)") {
        const MaxEntropyReport r = max_entropy_check(binomial(5, 0.2), poisson(1.0), alphas);
        REQUIRE(r.all_hold);
        REQUIRE(r.min_slack > 0.0);
    }
    SECTION("uniform(0,2) against exponential(1) at alpha = 1/2") {
        const MaxEntropyReport r = max_entropy_check(ContinuousDist::uniform(0.0, 2.0),
                                                     ContinuousDist::exponential(1.0), {0.5});
        REQUIRE(r.all_hold);
        REQUIRE(r.rows[0].H_x == Catch::Approx(std::log(2.0)).epsilon(1e-12));
        REQUIRE(r.rows[0].H_z == Catch::Approx(2.0 * std::log(2.0)).epsilon(1e-12));
    }
    SECTION("alpha outside (0,1] is rejected") {
        REQUIRE_THROWS_AS(max_entropy_check(poisson(1.0), poisson(1.0), {2.0}),
                          std::invalid_argument);
    }
    SECTION("class precondition failure is an error") {
        // geometric shifted onto {0,...} is not ULC, hence not ≺_lc poisson
        const DiscreteDist x = shifted(geometric(0.5), -1);
        REQUIRE_THROWS_AS(max_entropy_check(x, poisson(1.0), alphas), std::invalid_argument);
    }
    SECTION("csv serialization") {
        const MaxEntropyReport r = max_entropy_check(binomial(5, 0.2), poisson(1.0), {0.5});
        std::stringstream ss;
        r.write_csv(ss);
        std::string line;
        std::getline(ss, line);
        REQUIRE(line == "alpha,H_x,H_z,holds");
        std::getline(ss, line);
        REQUIRE(line.substr(0, 4) == "0.5,");
    }

    SECTION("theorem holds across all four reference classes (50 draws each)") {
        SplitMix64 rng(3100);
        for (int i = 0; i < 50; ++i) {
            const DiscreteDist x0 =
                gen_log_concave(rng.next_u64(), 1 + int(rng.next_u64() % 12), GenClass::lc);
            REQUIRE(max_entropy_check(x0, matched_mean_log_affine(x0, RefSupport::nonneg_integers),
                                      alphas)
                        .all_hold);
            const DiscreteDist x1 = shifted(x0, 1);
            REQUIRE(max_entropy_check(x1, matched_mean_log_affine(x1, RefSupport::positive_integers),
                                      alphas)
                        .all_hold);
            const DiscreteDist xu =
                gen_log_concave(rng.next_u64(), 1 + int(rng.next_u64() % 12), GenClass::ulc);
            REQUIRE(max_entropy_check(xu, matched_mean_log_affine(xu, RefSupport::poisson_weights),
                                      alphas)
                        .all_hold);
            const int n = 2 + int(rng.next_u64() % 11);
            const DiscreteDist xn = gen_log_concave(
                rng.next_u64(), 1 + int(rng.next_u64() % (n + 1)), GenClass::ulc_n, n);
            REQUIRE(max_entropy_check(xn, matched_mean_log_affine(xn, RefSupport::binomial_n, n),
                                      alphas)
                        .all_hold);
            const ContinuousDist xc = gen_log_concave_grid(rng.next_u64(), 6);
            REQUIRE(max_entropy_check(xc, matched_mean_log_affine(xc), alphas).all_hold);
        }
    }
}

TEST_CASE("prop53_counterexample") {
    SECTION("alpha = 2, p = 0.99: ratio 1.9206 and a strict violation") {
        const Prop53Report r = prop53_counterexample(2.0, 0.99);
        REQUIRE(r.ratio_to_limit == Catch::Approx(1.9206).margin(1e-10));
        REQUIRE(r.strict_violation);
        REQUIRE(r.H_bernoulli > r.H_geometric);
    }
    SECTION("alpha = 2, p = 1 - 1e-4: ratio within 1e-2 of 2") {
        const Prop53Report r = prop53_counterexample(2.0, 1.0 - 1e-4);
        REQUIRE(std::abs(r.ratio_to_limit - 2.0) <= 1e-2);
    }
    SECTION("alpha = 2, p = 0.6: values reported, whatever the verdict") {
        const Prop53Report r = prop53_counterexample(2.0, 0.6);
        REQUIRE(std::isfinite(r.H_bernoulli));
        REQUIRE(std::isfinite(r.H_geometric));
        REQUIRE(std::isfinite(r.ratio_to_limit));
        // direct evaluation of the closed forms for cross-checking
        const double sx = std::pow(1.0 / 1.5, 2.0) + std::pow(0.2 / 0.6, 2.0);
        REQUIRE(r.H_bernoulli == Catch::Approx(-std::log(sx)).epsilon(1e-12));
        const double sz = 0.36 / (1.0 - 0.16);
        REQUIRE(r.H_geometric == Catch::Approx(-std::log(sz)).epsilon(1e-12));
    }
    SECTION("the entropies match renyi() on the same laws") {
        const double alpha = 2.5, p = 0.95;
        const Prop53Report r = prop53_counterexample(alpha, p);
        const double q = (1.0 - p) / p;
        const DiscreteDist bern(0, {1.0 - q, q});
        REQUIRE(r.H_bernoulli == Catch::Approx(renyi(bern, alpha).value).epsilon(1e-12));
        REQUIRE(r.H_geometric ==
                Catch::Approx(renyi(geometric(p), alpha).value).epsilon(1e-10));
    }
    SECTION("ratio converges to alpha as p -> 1 (measured envelope)") {
        // |ratio - alpha| decays like 2 alpha (1-p)^{alpha-1} for alpha < 2,
        // so the 10(1-p) envelope holds for alpha >= 2 but not below; the
        // library reports the measured gap rather than assuming the envelope
        for (double alpha : {2.0, 3.0}) {
            const double dev999 = std::abs(prop53_counterexample(alpha, 0.999).ratio_to_limit - alpha);
            const double dev9999 =
                std::abs(prop53_counterexample(alpha, 0.9999).ratio_to_limit - alpha);
            REQUIRE(dev9999 < dev999);
            REQUIRE(dev9999 <= 1e-2);
        }
        const double dev15 =
            std::abs(prop53_counterexample(1.5, 1.0 - 1e-4).ratio_to_limit - 1.5);
        REQUIRE(dev15 == Catch::Approx(0.03).margin(2e-3));  // ~2*1.5*sqrt(1e-4)
    }
    SECTION("parameter validation") {
        REQUIRE_THROWS_AS(prop53_counterexample(1.0, 0.9), std::invalid_argument);
        REQUIRE_THROWS_AS(prop53_counterexample(2.0, 0.4), std::invalid_argument);
        REQUIRE_THROWS_AS(prop53_counterexample(2.0, 1.0), std::invalid_argument);
    }
}

TEST_CASE("entropy truncation budget") {
    REQUIRE(entropy_truncation_budget(binomial(5, 0.5)) == 0.0);
    const DiscreteDist g = geometric(0.5);
    REQUIRE(entropy_truncation_budget(g) ==
            Catch::Approx(g.tail_mass_dropped() * std::abs(std::log(g.probs().back())))
                .epsilon(1e-12));
}
