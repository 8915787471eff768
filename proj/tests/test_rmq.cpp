#include <catch2/catch_amalgamated.hpp>

#include <frq/rmq.hpp>

#include "testutil.hpp"

using frq::rmq_index;
using frq::sparse_rmq_index;
using frq::u32;
using frq::u64;

TEST_CASE("leftmost minimum on worked arrays", "[rmq]") {
    rmq_index<u32> r({0, 0, 1, 0, 3, 2, 5});
    REQUIRE(r.query(2, 6) == 2);
    REQUIRE(r.query(3, 6) == 4);
    REQUIRE(r.query(1, 7) == 1);
    REQUIRE(r.query(5, 5) == 5);
    REQUIRE(r.value_at(5) == 3);

    rmq_index<u32> t({3, 1, 1});
    REQUIRE(t.query(1, 3) == 2);
    REQUIRE(t.query(2, 3) == 2);

    REQUIRE_THROWS_AS(r.query(0, 3), std::out_of_range);
    REQUIRE_THROWS_AS(r.query(3, 8), std::out_of_range);
    REQUIRE_THROWS_AS(r.query(5, 4), std::out_of_range);
}

TEST_CASE("agrees with linear scan across block boundaries", "[rmq]") {
    auto rng = tst::make_rng(11);
    for (u64 n : {1u, 31u, 32u, 33u, 64u, 100u, 1000u}) {
        std::uniform_int_distribution<u32> d(0, 9);
        std::vector<u32> v(n);
        for (auto& x : v) x = d(rng);
        rmq_index<u32> r(v);
        std::uniform_int_distribution<u64> pick(1, n);
        for (int q = 0; q < 2000; ++q) {
            u64 a = pick(rng), b = pick(rng);
            if (a > b) std::swap(a, b);
            u64 best = a;
            for (u64 k = a + 1; k <= b; ++k)
                if (v[k - 1] < v[best - 1]) best = k;
            frq::query_stats st;
            REQUIRE(r.query(a, b, &st) == best);
            REQUIRE(st.rmq_queries == 1);
        }
    }
}

TEST_CASE("block-granular index picks the leftmost best block", "[rmq]") {
    // values [0,0,1, 0,3,2, 5] with f = 3: block minima 0,0,5 at
    // leftmost positions 1, 4, 7.
    sparse_rmq_index s({0, 0, 1, 0, 3, 2, 5}, 3);
    REQUIRE(s.block_count() == 3);
    REQUIRE(s.query_blocks(0, 2) == std::pair<u64, u64>{0, 1});
    REQUIRE(s.query_blocks(1, 2) == std::pair<u64, u64>{1, 4});
    REQUIRE(s.query_blocks(2, 2) == std::pair<u64, u64>{2, 7});
    REQUIRE(s.block_min(2) == 5);
    REQUIRE_THROWS_AS(s.query_blocks(1, 3), std::out_of_range);
    REQUIRE_THROWS_AS(sparse_rmq_index({1u}, 0), std::invalid_argument);
}

TEST_CASE("block-granular index agrees with scan", "[rmq]") {
    auto rng = tst::make_rng(12);
    std::uniform_int_distribution<u32> d(0, 20);
    std::vector<u32> v(257);
    for (auto& x : v) x = d(rng);
    for (u64 f : {1u, 2u, 7u, 16u, 300u}) {
        sparse_rmq_index s(v, f);
        u64 nb = (v.size() + f - 1) / f;
        REQUIRE(s.block_count() == nb);
        std::uniform_int_distribution<u64> pick(0, nb - 1);
        for (int q = 0; q < 500; ++q) {
            u64 a = pick(rng), b = pick(rng);
            if (a > b) std::swap(a, b);
            u64 bb = a, bp = 0, bv = UINT32_MAX + u64(1);
            for (u64 blk = a; blk <= b; ++blk) {
                u64 lo = blk * f, hi = std::min<u64>(v.size(), lo + f);
                for (u64 k = lo; k < hi; ++k)
                    if (v[k] < bv) { bv = v[k]; bb = blk; bp = k + 1; }
            }
            REQUIRE(s.query_blocks(a, b) == std::pair<u64, u64>{bb, bp});
        }
    }
}
