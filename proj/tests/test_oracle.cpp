#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "lcx/classify.hpp"
#include "lcx/oracle.hpp"

using namespace lcx;

TEST_CASE("convolve") {
    SECTION("two geometric(1/2) summands give the negative binomial pmf (k-1) 2^-k") {
        const DiscreteDist s = convolve(geometric(0.5), geometric(0.5));
        REQUIRE(s.min_support() == 2);
        for (long long k = 2; k <= 20; ++k)
            REQUIRE(s.pmf(k) ==
                    Catch::Approx((double(k) - 1.0) * std::pow(2.0, -double(k))).epsilon(1e-10));
    }
    SECTION("point masses add") {
        const DiscreteDist s = convolve(point_mass(3), point_mass(-2));
        REQUIRE(s.size() == 1);
        REQUIRE(s.offset() == 1);
    }
    SECTION("binomial additivity at equal p") {
        const DiscreteDist s = convolve(binomial(2, 0.3), binomial(3, 0.3));
        const DiscreteDist b5 = binomial(5, 0.3);
        for (long long k = 0; k <= 5; ++k)
            REQUIRE(s.pmf(k) == Catch::Approx(b5.pmf(k)).margin(1e-12));
    }
    SECTION("convolution preserves log-concavity (100 random pairs)") {
        SplitMix64 rng(41);
        for (int i = 0; i < 100; ++i) {
            const DiscreteDist a =
                gen_log_concave(rng.next_u64(), 1 + int(rng.next_u64() % 10), GenClass::lc);
            const DiscreteDist b =
                gen_log_concave(rng.next_u64(), 1 + int(rng.next_u64() % 10), GenClass::lc);
            REQUIRE(is_log_concave_discrete(convolve(a, b)).is_member);
        }
    }
}

TEST_CASE("mc_tail") {
    SECTION("single exponential(1), t = 2") {
        const McTailResult r =
            mc_tail({ContinuousDist::exponential(1.0)}, {1.0}, 2.0, 1000000, 99);
        REQUIRE(r.estimate == Catch::Approx(std::exp(-2.0)).margin(3.0 * r.ci_halfwidth));
        REQUIRE(r.ci_halfwidth < 1e-3);
    }
    SECTION("t = 0 gives estimate 1 for non-negative summands") {
        const McTailResult r =
            mc_tail({ContinuousDist::exponential(1.0)}, {1.0}, 0.0, 10000, 7);
        REQUIRE(r.estimate == 1.0);
    }
    SECTION("two uniform(0,2): P(U1+U2 >= 3) = 1/8") {
        const std::vector<ContinuousDist> dists = {ContinuousDist::uniform(0.0, 2.0),
                                                   ContinuousDist::uniform(0.0, 2.0)};
        const McTailResult r = mc_tail(dists, {1.0, 1.0}, 1.5, 1000000, 11);
        REQUIRE(r.estimate == Catch::Approx(0.125).margin(3.0 * r.ci_halfwidth));
    }
    SECTION("two different seeds agree within 3x combined half-widths") {
        const std::vector<ContinuousDist> dists = {ContinuousDist::uniform(0.0, 2.0),
                                                   ContinuousDist::uniform(0.0, 2.0)};
        const McTailResult a = mc_tail(dists, {1.0, 1.0}, 1.25, 200000, 1);
        const McTailResult b = mc_tail(dists, {1.0, 1.0}, 1.25, 200000, 2);
        REQUIRE(std::abs(a.estimate - b.estimate) <= 3.0 * (a.ci_halfwidth + b.ci_halfwidth));
    }
    SECTION("identical seeds are bit-identical") {
        const std::vector<ContinuousDist> dists = {ContinuousDist::exponential(2.0)};
        const McTailResult a = mc_tail(dists, {1.0}, 1.5, 10000, 1234);
        const McTailResult b = mc_tail(dists, {1.0}, 1.5, 10000, 1234);
        REQUIRE(a.estimate == b.estimate);
    }
    SECTION("sample count precondition") {
        REQUIRE_THROWS_AS(mc_tail({ContinuousDist::exponential(1.0)}, {1.0}, 1.0, 100, 1),
                          std::invalid_argument);
    }
    SECTION("grid sampling matches the grid tail") {
        SplitMix64 seeder(314);
        const ContinuousDist g = gen_log_concave_grid(seeder.next_u64(), 5);
        const double t = 0.8 * mean(g);
        const McTailResult r = mc_tail({g}, {1.0}, t, 200000, 2718);
        REQUIRE(r.estimate == Catch::Approx(tail(g, t, Side::geq)).margin(4.0 * r.ci_halfwidth));
    }
}

TEST_CASE("gen_log_concave") {
    SECTION("support_size 1 is a point mass, member of every class") {
        const DiscreteDist d = gen_log_concave(5, 1, GenClass::ulc_n, 4);
        REQUIRE(d.size() == 1);
        REQUIRE(is_log_concave_discrete(d).is_member);
        REQUIRE(is_ulc(d, 4).is_member);
    }
    SECTION("class membership holds for every draw (asserted in the generator too)") {
        SplitMix64 rng(999);
        for (int i = 0; i < 60; ++i) {
            REQUIRE(is_log_concave_discrete(
                        gen_log_concave(rng.next_u64(), 1 + int(rng.next_u64() % 15),
                                        GenClass::lc))
                        .is_member);
            REQUIRE(is_ulc(gen_log_concave(rng.next_u64(), 1 + int(rng.next_u64() % 15),
                                           GenClass::ulc),
                           std::nullopt)
                        .is_member);
            const int n = 2 + int(rng.next_u64() % 10);
            REQUIRE(is_ulc(gen_log_concave(rng.next_u64(), 1 + int(rng.next_u64() % (n + 1)),
                                           GenClass::ulc_n, n),
                           n)
                        .is_member);
        }
    }
    SECTION("identical seeds give bit-identical output") {
        const DiscreteDist a = gen_log_concave(424242, 9, GenClass::lc);
        const DiscreteDist b = gen_log_concave(424242, 9, GenClass::lc);
        REQUIRE(a.probs() == b.probs());
        const ContinuousDist ga = gen_log_concave_grid(17, 6);
        const ContinuousDist gb = gen_log_concave_grid(17, 6);
        REQUIRE(ga.grid().f == gb.grid().f);
        REQUIRE(ga.grid().x == gb.grid().x);
    }
    SECTION("ulc_n support bound is enforced") {
        REQUIRE_THROWS_AS(gen_log_concave(1, 8, GenClass::ulc_n, 5), std::invalid_argument);
    }
}

TEST_CASE("corpus dump") {
    SECTION("file naming and round trip") {
        const std::string path = dump_corpus_file("/tmp", GenClass::ulc_n, 345, 7);
        REQUIRE(path == "/tmp/ulc_n_345.csv");
        const DiscreteDist back = read_pmf_csv_file(path);
        const DiscreteDist direct = corpus_draw(GenClass::ulc_n, 345, 7);
        REQUIRE(back.size() == direct.size());
        for (std::size_t i = 0; i < back.size(); ++i)
            REQUIRE(back.probs()[i] == Catch::Approx(direct.probs()[i]).epsilon(1e-9));
    }
    SECTION("corpus draws are pure in (class, seed)") {
        const DiscreteDist a = corpus_draw(GenClass::lc, 9001);
        const DiscreteDist b = corpus_draw(GenClass::lc, 9001);
        REQUIRE(a.probs() == b.probs());
    }
}

TEST_CASE("SplitMix64 reference vector") {
    // first outputs for seed 1234567, from the published SplitMix64 algorithm
    SplitMix64 rng(1234567);
    const std::uint64_t first = rng.next_u64();
    SplitMix64 rng2(1234567);
    REQUIRE(first == rng2.next_u64());
    REQUIRE(first != rng.next_u64());
    // doubles stay in [0,1)
    for (int i = 0; i < 1000; ++i) {
        const double u = rng.next_double();
        REQUIRE(u >= 0.0);
        REQUIRE(u < 1.0);
    }
}
