#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "polarkit/channel.hpp"
#include "polarkit/error.hpp"

using namespace polarkit;

TEST_CASE("BSC constructor and measures")
{
    const auto noiseless = make_bsc(0.0);
    CHECK(noiseless.p0()[0] == 1.0);
    CHECK(noiseless.p0()[1] == 0.0);
    CHECK(noiseless.p1()[1] == 1.0);
    CHECK(symmetric_capacity(noiseless) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(bhattacharyya(noiseless) == 0.0);

    CHECK(symmetric_capacity(make_bsc(0.5)) == doctest::Approx(0.0).epsilon(1e-15));
    // 1 - h(0.11), mpmath at 40 digits.
    CHECK(std::fabs(symmetric_capacity(make_bsc(0.11)) - 0.50008404183547200436) < 1e-14);
    CHECK(std::fabs(symmetric_capacity(make_bsc(0.11)) - (1.0 - binary_entropy(0.11))) < 1e-14);

    for (double eps : {0.01, 0.11, 0.25, 0.4}) {
        CHECK(std::fabs(bhattacharyya(make_bsc(eps)) - 2.0 * std::sqrt(eps * (1.0 - eps))) < 1e-15);
    }
    CHECK_THROWS_AS(make_bsc(-0.1), InvalidArgument);
    CHECK_THROWS_AS(make_bsc(0.6), InvalidArgument);
}

TEST_CASE("BEC constructor and measures")
{
    CHECK(symmetric_capacity(make_bec(0.0)) == 1.0);
    CHECK(bhattacharyya(make_bec(0.0)) == 0.0);
    CHECK(symmetric_capacity(make_bec(1.0)) == 0.0);
    CHECK(bhattacharyya(make_bec(1.0)) == 1.0);
    CHECK(bhattacharyya(make_bec(0.3)) == doctest::Approx(0.3).epsilon(1e-15));
    for (double eps : {0.1, 0.37, 0.5, 0.9})
        CHECK(std::fabs(symmetric_capacity(make_bec(eps)) - (1.0 - eps)) < 1e-15);
    CHECK(*make_bec(0.4).symmetry() == Permutation{2, 1, 0});
    CHECK_THROWS_AS(make_bec(1.5), InvalidArgument);
}

TEST_CASE("channel validation")
{
    CHECK_THROWS_AS(BinaryChannel({0.5, 0.5}, {1.0}), InvalidArgument);
    CHECK_THROWS_AS(BinaryChannel({0.5, 0.6}, {0.5, 0.5}), InvalidArgument);
    CHECK_THROWS_AS(BinaryChannel({1.5, -0.5}, {0.5, 0.5}), InvalidArgument);
    // Witness must be an involution mapping row 0 onto row 1.
    CHECK_THROWS_AS(BinaryChannel({0.7, 0.3}, {0.3, 0.7}, Permutation{0, 1}), InvalidArgument);
    CHECK_THROWS_AS(BinaryChannel({0.7, 0.3, 0.0}, {0.3, 0.0, 0.7}, Permutation{1, 2, 0}), InvalidArgument);
    CHECK_NOTHROW(BinaryChannel({0.7, 0.3}, {0.3, 0.7}, Permutation{1, 0}));
}

TEST_CASE("is_symmetric")
{
    CHECK(*is_symmetric(make_bsc(0.3)) == Permutation{1, 0});
    CHECK(*is_symmetric(make_bec(0.4)) == Permutation{2, 1, 0});
    // Both permutations of two outputs fail: 0.7 != 0.6 and 0.7 != 0.4.
    CHECK_FALSE(is_symmetric(BinaryChannel({0.7, 0.3}, {0.6, 0.4})).has_value());

    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const auto w = random_symmetric_channel(seed, 1 + seed % 6);
        const auto pi = is_symmetric(w);
        REQUIRE(pi.has_value());
        for (std::size_t y = 0; y < w.output_count(); ++y)
            CHECK(std::fabs(w.p0()[y] - w.p1()[(*pi)[y]]) <= 1e-12);
    }
}

TEST_CASE("with_symmetry makes a near-symmetric channel exactly mirrored")
{
    const BinaryChannel w({0.6, 0.1, 0.3}, {0.3, 0.1, 0.6});
    const auto s = with_symmetry(w);
    REQUIRE(s.has_value());
    REQUIRE(s->symmetry().has_value());
    CHECK(*s->symmetry() == Permutation{2, 1, 0});
    CHECK_FALSE(with_symmetry(BinaryChannel({0.7, 0.3}, {0.6, 0.4})).has_value());
}

TEST_CASE("product channel")
{
    const auto w = make_bsc(0.2);
    CHECK(product_channel(w, 1) == w);

    for (double eps : {0.1, 0.3, 0.5, 0.8})
        CHECK(std::fabs(symmetric_capacity(product_channel(make_bec(eps), 2)) - (1.0 - eps * eps)) < 1e-14);

    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const auto r = random_symmetric_channel(seed, 3);
        const double z = bhattacharyya(r);
        for (std::size_t k = 1; k <= 4; ++k) {
            const auto wk = product_channel(r, k);
            CHECK(std::fabs(bhattacharyya(wk) - std::pow(z, static_cast<double>(k))) < 1e-10);
            CHECK(wk.symmetry().has_value());
        }
    }
    CHECK_THROWS_AS(product_channel(make_bec(0.5), 13), CapacityError);
    CHECK_THROWS_AS(product_channel(make_bec(0.5), 0), InvalidArgument);
}

TEST_CASE("capacity of products is nondecreasing in k")
{
    for (std::uint64_t seed = 3; seed <= 12; ++seed) {
        const auto w = random_symmetric_channel(seed, 2);
        double previous = symmetric_capacity(w);
        for (std::size_t k = 2; k <= 5; ++k) {
            const double now = symmetric_capacity(merge_equivalent_outputs(product_channel(w, k)));
            CHECK(now >= previous - 1e-12);
            previous = now;
        }
    }
}

TEST_CASE("merge_equivalent_outputs")
{
    SUBCASE("duplicate column")
    {
        const BinaryChannel w({0.4, 0.4, 0.2}, {0.1, 0.1, 0.8});
        const auto merged = merge_equivalent_outputs(w);
        CHECK(merged.output_count() == 2);
        CHECK(std::fabs(symmetric_capacity(merged) - symmetric_capacity(w)) < 1e-12);
        CHECK(std::fabs(bhattacharyya(merged) - bhattacharyya(w)) < 1e-12);
    }
    SUBCASE("BEC squared collapses to three likelihood classes")
    {
        // Of the 9 tuples, (0,1) and (1,0) have probability zero; the rest
        // are "known 0", "known 1" or "both erased".
        const auto w = product_channel(make_bec(0.3), 2);
        CHECK(w.output_count() == 9);
        const auto merged = merge_equivalent_outputs(w);
        CHECK(merged.output_count() == 3);
        CHECK(merged.output_count() <= 5);
        CHECK(std::fabs(symmetric_capacity(merged) - (1.0 - 0.09)) < 1e-14);
        CHECK(merged.symmetry().has_value());
    }
    SUBCASE("already minimal")
    {
        const auto w = make_bsc(0.2);
        const auto merged = merge_equivalent_outputs(w);
        CHECK(merged.output_count() == 2);
        CHECK(symmetric_capacity(merged) == symmetric_capacity(w));
        CHECK(bhattacharyya(merged) == bhattacharyya(w));
    }
    SUBCASE("lossless and idempotent on random products")
    {
        for (std::uint64_t seed = 1; seed <= 15; ++seed) {
            const auto w = product_channel(random_symmetric_channel(seed, 1 + seed % 4), 2);
            const auto once = merge_equivalent_outputs(w);
            const auto twice = merge_equivalent_outputs(once);
            CHECK(std::fabs(symmetric_capacity(once) - symmetric_capacity(w)) < 1e-12);
            CHECK(std::fabs(bhattacharyya(once) - bhattacharyya(w)) < 1e-12);
            CHECK(twice == once);
            CHECK(once.symmetry().has_value());
        }
    }
}

TEST_CASE("binary entropy and inverse")
{
    CHECK(binary_entropy(0.5) == 1.0);
    CHECK(binary_entropy(0.0) == 0.0);
    CHECK(binary_entropy(1.0) == 0.0);
    CHECK(inverse_binary_entropy(1.0) == 0.5);
    CHECK(inverse_binary_entropy(0.0) == 0.0);
    CHECK(std::fabs(inverse_binary_entropy(binary_entropy(0.2)) - 0.2) < 1e-10);
    CHECK(std::fabs(inverse_binary_entropy(0.5) - 0.11002786443835955126) < 1e-12);
    for (int k = 1; k < 50; ++k) {
        const double p = k / 100.0;
        CHECK(std::fabs(inverse_binary_entropy(binary_entropy(p)) - p) < 1e-12);
    }
    CHECK_THROWS_AS(binary_entropy(1.1), InvalidArgument);
    CHECK_THROWS_AS(inverse_binary_entropy(-0.1), InvalidArgument);
}

TEST_CASE("BSC pair capacity matches the exact 4-output product")
{
    CHECK(bsc_pair_capacity(0.0) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(std::fabs(bsc_pair_capacity(0.5)) < 1e-15);
    // mpmath, 40 digits.
    CHECK(std::fabs(bsc_pair_capacity(0.11) - 0.71361622766034000435) < 1e-14);
    for (int k = 1; k < 50; ++k) {
        const double eps = k / 100.0;
        const auto pair = product_channel(make_bsc(eps), 2);
        const std::vector<double> p0(pair.p0().begin(), pair.p0().end());
        const std::vector<double> p1(pair.p1().begin(), pair.p1().end());
        CHECK(std::fabs(bsc_pair_capacity(eps) - oracle::measures(p0, p1).info) < 1e-10);
    }
    CHECK_THROWS_AS(bsc_pair_capacity(0.7), InvalidArgument);
}

TEST_CASE("capacity gap lower bound")
{
    CHECK(std::fabs(capacity_gap_lower_bound(0.5) - 0.21353672856597825171) < 1e-11);
    CHECK(capacity_gap_lower_bound(1.0 - 1e-9) < 1e-6);
    for (int k = 1; k <= 9; ++k)
        CHECK(capacity_gap_lower_bound(k / 10.0) > 0.0);
    CHECK_THROWS_AS(capacity_gap_lower_bound(0.0), InvalidArgument);
    CHECK_THROWS_AS(capacity_gap_lower_bound(1.0), InvalidArgument);
}

TEST_CASE("random symmetric channels")
{
    const auto single = random_symmetric_channel(7, 1);
    REQUIRE(single.output_count() == 2);
    const double eps = single.p0()[1];
    CHECK(single == make_bsc(eps));

    CHECK(random_symmetric_channel(42, 5) == random_symmetric_channel(42, 5));
    CHECK_FALSE(random_symmetric_channel(42, 5) == random_symmetric_channel(43, 5));

    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const auto w = random_symmetric_channel(seed, 1 + seed % 7);
        CHECK(is_symmetric(w).has_value());
        const InfoPair info = info_pair(w);
        CHECK(info.within_bounds());
        // Independent evaluation.
        const std::vector<double> p0(w.p0().begin(), w.p0().end());
        const std::vector<double> p1(w.p1().begin(), w.p1().end());
        const auto ref = oracle::measures(p0, p1);
        CHECK(std::fabs(ref.info - info.mutual_info) < 1e-12);
        CHECK(std::fabs(ref.z - info.bhattacharyya) < 1e-12);
    }
    CHECK_THROWS_AS(random_symmetric_channel(1, 0), InvalidArgument);
}

TEST_CASE("two-use information bounds on random symmetric channels")
{
    for (std::uint64_t seed = 100; seed < 150; ++seed) {
        const auto w = random_symmetric_channel(seed, 1 + seed % 5);
        const double info = symmetric_capacity(w);
        const double pair = symmetric_capacity(product_channel(w, 2));
        CHECK(pair >= bsc_pair_capacity(inverse_binary_entropy(1.0 - info)) - 1e-9);
        if (info > 0.05 && info < 0.95)
            for (std::size_t k = 2; k <= 3; ++k)
                CHECK(symmetric_capacity(product_channel(w, k)) - info >= capacity_gap_lower_bound(info) - 1e-9);
    }
}

TEST_CASE("as_bec recognizes erasure channels")
{
    CHECK(*as_bec(make_bec(0.25)) == 0.25);
    CHECK(*as_bec(make_bsc(0.0)) == 0.0);
    CHECK_FALSE(as_bec(make_bsc(0.1)).has_value());
    const auto merged = merge_equivalent_outputs(product_channel(make_bec(0.3), 2));
    CHECK(std::fabs(*as_bec(merged) - 0.09) < 1e-15);
}
