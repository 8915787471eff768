#include <catch2/catch_amalgamated.hpp>

#include <frq/bitvec.hpp>

#include "testutil.hpp"

using frq::bitvec;
using frq::u64;

TEST_CASE("rank and select on a small handmade vector", "[bitvec]") {
    bitvec v = bitvec::from_bits({1, 0, 1, 1, 0, 1, 0});
    REQUIRE(v.size() == 7);
    REQUIRE(v.ones() == 4);
    REQUIRE(v.rank1(7) == 4);
    REQUIRE(v.rank1(4) == 3);
    REQUIRE(v.rank1(0) == 0);
    REQUIRE(v.select1(3) == 4);
    REQUIRE(v.select1(1) == 1);
    REQUIRE(v.select1(4) == 6);
    REQUIRE_THROWS_AS(v.select1(5), std::out_of_range);
    REQUIRE_THROWS_AS(v.select1(0), std::out_of_range);
    REQUIRE(v.select0(1) == 2);
    REQUIRE(v.select0(2) == 5);
    REQUIRE(v.select0(3) == 7);
    REQUIRE_THROWS_AS(v.select0(4), std::out_of_range);
    REQUIRE(v.bit(1));
    REQUIRE_FALSE(v.bit(2));
    REQUIRE_THROWS_AS(v.bit(0), std::out_of_range);
    REQUIRE_THROWS_AS(v.bit(8), std::out_of_range);
    REQUIRE_THROWS_AS(v.rank1(8), std::out_of_range);
}

TEST_CASE("word-aligned boundaries", "[bitvec]") {
    bitvec ones = bitvec::from_bits(std::vector<bool>(64, true));
    REQUIRE(ones.select1(64) == 64);
    REQUIRE(ones.rank1(64) == 64);
    REQUIRE(ones.zeros() == 0);

    bitvec zeros = bitvec::from_bits(std::vector<bool>(128, false));
    REQUIRE(zeros.ones() == 0);
    REQUIRE(zeros.select0(128) == 128);
    REQUIRE(zeros.rank1(128) == 0);

    bitvec empty;
    REQUIRE(empty.size() == 0);
    REQUIRE(empty.ones() == 0);
    REQUIRE(empty.rank1(0) == 0);
    REQUIRE_THROWS_AS(empty.select1(1), std::out_of_range);
}

TEST_CASE("agrees with a prefix-sum oracle on random data", "[bitvec]") {
    auto rng = tst::make_rng(41);
    for (u64 m : {1u, 63u, 64u, 65u, 511u, 512u, 513u, 70000u, 131072u}) {
        std::vector<bool> bits(m);
        std::bernoulli_distribution d(0.37);
        for (u64 k = 0; k < m; ++k) bits[k] = d(rng);
        bitvec v = bitvec::from_bits(bits);

        std::vector<u64> pre(m + 1, 0);
        for (u64 k = 0; k < m; ++k) pre[k + 1] = pre[k] + (bits[k] ? 1 : 0);

        for (u64 k = 0; k <= m; ++k) {
            REQUIRE(v.rank1(k) == pre[k]);
            REQUIRE(v.rank0(k) + v.rank1(k) == k);
        }
        u64 r1 = 0, r0 = 0;
        for (u64 k = 1; k <= m; ++k) {
            if (bits[k - 1]) REQUIRE(v.select1(++r1) == k);
            else REQUIRE(v.select0(++r0) == k);
        }
        REQUIRE(r1 == v.ones());
        REQUIRE(r0 == v.zeros());
    }
}

TEST_CASE("rebuilding from raw words reproduces the vector", "[bitvec]") {
    auto rng = tst::make_rng(42);
    std::vector<bool> bits(777);
    std::bernoulli_distribution d(0.5);
    for (auto&& b : bits) b = d(rng);
    bitvec v = bitvec::from_bits(bits);
    bitvec w(v.size(), v.raw_words());
    REQUIRE(v == w);
    REQUIRE(w.rank1(777) == v.ones());
}

TEST_CASE("raw word constructor validates its input", "[bitvec]") {
    REQUIRE_THROWS_AS(bitvec(65, std::vector<frq::u64>{0}),
                      std::invalid_argument);
    REQUIRE_THROWS_AS(bitvec(3, std::vector<frq::u64>{0xF0}),
                      std::invalid_argument);
    REQUIRE_NOTHROW(bitvec(3, std::vector<frq::u64>{0x5}));
}

TEST_CASE("directory overhead stays under half the bit count", "[bitvec]") {
    for (u64 m : {10000u, 100000u}) {
        bitvec v = bitvec::from_bits(std::vector<bool>(m, true));
        REQUIRE(v.directory_bits() * 2 <= m);
    }
}

TEST_CASE("builder matches from_bits", "[bitvec]") {
    auto rng = tst::make_rng(43);
    std::vector<bool> bits(1500);
    std::bernoulli_distribution d(0.2);
    for (auto&& b : bits) b = d(rng);

    frq::bit_builder bld;
    for (bool b : bits) bld.push_back(b);
    bitvec v = std::move(bld).build();
    REQUIRE(v == bitvec::from_bits(bits));

    frq::bit_builder bld2;
    bld2.push_back(true);
    bld2.append_zeros(200);
    bld2.push_back(true);
    bitvec w = std::move(bld2).build();
    REQUIRE(w.size() == 202);
    REQUIRE(w.ones() == 2);
    REQUIRE(w.select1(2) == 202);
}
