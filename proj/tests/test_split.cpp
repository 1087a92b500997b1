#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "polarkit/bec.hpp"
#include "polarkit/error.hpp"
#include "polarkit/split.hpp"

using namespace polarkit;

namespace {

const BitMatrix kG2 = BitMatrix::from_rows({"10", "11"});
const BitMatrix kG3 = BitMatrix::from_rows({"100", "110", "101"});

}  // namespace

TEST_CASE("G2 split of a BEC")
{
    for (double eps : {0.1, 0.3, 0.5, 0.8}) {
        const BinaryChannel w = make_bec(eps);
        CHECK(symmetric_capacity(split_tilde(w, kG2, 0)) == doctest::Approx(1.0 - (2 * eps - eps * eps)).epsilon(1e-12));
        CHECK(symmetric_capacity(split_tilde(w, kG2, 1)) == doctest::Approx(1.0 - eps * eps).epsilon(1e-12));
        CHECK(bhattacharyya(split_tilde(w, kG2, 0)) == doctest::Approx(2 * eps - eps * eps).epsilon(1e-12));
        CHECK(bhattacharyya(split_tilde(w, kG2, 1)) == doctest::Approx(eps * eps).epsilon(1e-12));
    }
}

TEST_CASE("G2 split of BSC(0.11)")
{
    const SplitResult r = split_all(make_bsc(0.11), kG2);
    REQUIRE(r.info.size() == 2);
    CHECK(r.info[0].mutual_info == doctest::Approx(0.28655185601060400437).epsilon(1e-12));
    CHECK(r.info[0].bhattacharyya == doctest::Approx(0.79363054376706041693).epsilon(1e-12));
    CHECK(r.info[1].mutual_info == doctest::Approx(0.71361622766034000435).epsilon(1e-12));
    // W^(2) is two independent uses of W.
    CHECK(r.info[1].bhattacharyya == doctest::Approx(4 * 0.11 * 0.89).epsilon(1e-12));
}

TEST_CASE("tilde and joint splits agree with the definition")
{
    const std::vector<BinaryChannel> channels{make_bsc(0.07), make_bec(0.35), random_symmetric_channel(3, 2),
                                              random_symmetric_channel(11, 3)};
    const std::vector<BitMatrix> kernels{kG2, kG3, BitMatrix::from_rows({"011", "100", "110"}),
                                         BitMatrix::from_rows({"1000", "1100", "1010", "1111"})};
    for (const auto& w : channels)
        for (const auto& g : kernels) {
            if (std::pow(static_cast<double>(w.output_count()), static_cast<double>(g.rows())) > 5000)
                continue;
            for (std::size_t i = 0; i < g.rows(); ++i) {
                const oracle::Measures expected = oracle::joint_split(w, g, i);
                const InfoPair tilde = info_pair(split_tilde(w, g, i));
                const InfoPair joint = info_pair(split_joint(w, g, i));
                CHECK(tilde.mutual_info == doctest::Approx(expected.info).epsilon(1e-10));
                CHECK(tilde.bhattacharyya == doctest::Approx(expected.z).epsilon(1e-10));
                CHECK(joint.mutual_info == doctest::Approx(expected.info).epsilon(1e-10));
                CHECK(joint.bhattacharyya == doctest::Approx(expected.z).epsilon(1e-10));
            }
        }
}

TEST_CASE("split_joint layout")
{
    const BinaryChannel w = make_bsc(0.2);
    const BinaryChannel j = split_joint(w, kG2, 1);
    CHECK(j.output_count() == 8);
    // Output 0 is u_0 = 0 and y = (0, 0); x = (u_1, u_1).
    double total = 0.0;
    for (double p : j.p0())
        total += p;
    CHECK(total == doctest::Approx(1.0));
    CHECK(j.p0()[0] == doctest::Approx(0.5 * 0.8 * 0.8));
    CHECK(j.p1()[0] == doctest::Approx(0.5 * 0.2 * 0.2));
}

TEST_CASE("split_all")
{
    for (const auto& g : {kG2, kG3, BitMatrix::from_rows({"1000", "1100", "1010", "1111"})}) {
        const BinaryChannel w = random_symmetric_channel(21, 3);
        const SplitResult r = split_all(w, g);
        REQUIRE(r.subchannels.size() == g.rows());
        double mean = 0.0;
        for (const auto& p : r.info) {
            mean += p.mutual_info / static_cast<double>(g.rows());
            CHECK(p.within_bounds());
        }
        CHECK(mean == doctest::Approx(symmetric_capacity(w)).epsilon(1e-9));
        for (const auto& s : r.subchannels)
            CHECK(s.symmetry().has_value());
    }
}

TEST_CASE("column permutations do not change the split")
{
    const BinaryChannel w = make_bsc(0.15);
    const BitMatrix g = BitMatrix::from_rows({"100", "110", "111"});
    const SplitResult base = split_all(w, g);
    const BitMatrix permuted = permute_columns(g, ColumnPermutation{{2, 0, 1}});
    const SplitResult other = split_all(w, permuted);
    for (std::size_t i = 0; i < 3; ++i) {
        CHECK(other.info[i].mutual_info == doctest::Approx(base.info[i].mutual_info).epsilon(1e-12));
        CHECK(other.info[i].bhattacharyya == doctest::Approx(base.info[i].bhattacharyya).epsilon(1e-12));
    }
}

TEST_CASE("the last reduction row is k uses of W")
{
    const BinaryChannel w = make_bsc(0.11);
    for (const auto& g : {kG2, kG3, BitMatrix::from_rows({"100", "010", "111"})}) {
        const ReductionWeight rw = last_reduction_weight(g);
        const InfoPair sub = info_pair(split_tilde(w, g, rw.index));
        const InfoPair copies = info_pair(product_channel(w, rw.weight));
        CHECK(sub.mutual_info == doctest::Approx(copies.mutual_info).epsilon(1e-12));
        CHECK(sub.bhattacharyya == doctest::Approx(copies.bhattacharyya).epsilon(1e-12));
    }
}

TEST_CASE("Z of a synthesized channel lies between Z^l-type bounds")
{
    const BinaryChannel w = random_symmetric_channel(8, 2);
    const double z = bhattacharyya(w);
    const SplitResult r = split_all(w, kG3);
    for (const auto& p : r.info) {
        CHECK(p.bhattacharyya <= 3 * z + 1e-9);
        CHECK(p.bhattacharyya >= z * z * z - 1e-12);
    }
}

TEST_CASE("split preconditions")
{
    const BinaryChannel asym({0.9, 0.1}, {0.3, 0.7});
    CHECK_THROWS_AS(split_tilde(asym, kG2, 0), PreconditionError);
    CHECK_NOTHROW(split_joint(asym, kG2, 0));
    CHECK_THROWS_AS(split_tilde(make_bsc(0.1), kG2, 2), InvalidArgument);
    CHECK_THROWS_AS(split_tilde(make_bsc(0.1), BitMatrix::from_rows({"11", "11"}), 0), PreconditionError);
    CHECK_THROWS_AS(split_tilde(random_symmetric_channel(1, 10), kG3, 2, 1000), CapacityError);
}

TEST_CASE("recursive_polarize")
{
    SUBCASE("BEC matches the erasure recursion")
    {
        const auto leaves = recursive_polarize(make_bec(0.5), kG2, 2);
        const std::vector<double> expected{0.9375, 0.5625, 0.4375, 0.0625};
        REQUIRE(leaves.size() == 4);
        for (std::size_t k = 0; k < 4; ++k)
            CHECK(leaves[k].bhattacharyya == doctest::Approx(expected[k]).epsilon(1e-12));

        const std::vector<BitMatrix> mixed{kG3, kG2};
        const auto mixed_leaves = recursive_polarize(make_bec(0.3), mixed);
        const ErasureVector ev = bec_polarize(mixed, 0.3);
        REQUIRE(mixed_leaves.size() == ev.size());
        for (std::size_t k = 0; k < ev.size(); ++k)
            CHECK(mixed_leaves[k].mutual_info == doctest::Approx(1.0 - ev.eps[k]).epsilon(1e-12));
    }
    SUBCASE("mean information is conserved")
    {
        const BinaryChannel w = make_bsc(0.11);
        const auto leaves = recursive_polarize(w, kG2, 4);
        double mean = 0.0;
        for (const auto& p : leaves)
            mean += p.mutual_info / static_cast<double>(leaves.size());
        CHECK(mean == doctest::Approx(symmetric_capacity(w)).epsilon(1e-9));
    }
    SUBCASE("capacity error reports the completed depth")
    {
        try {
            recursive_polarize(random_symmetric_channel(4, 6), kG3, 4, 2000);
            FAIL("expected CapacityError");
        } catch (const CapacityError& e) {
            REQUIRE(e.achieved_level().has_value());
            CHECK(*e.achieved_level() < 4);
        }
    }
}
