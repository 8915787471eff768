#include <catch2/catch_amalgamated.hpp>

#include <frq/listing.hpp>
#include <frq/oracle.hpp>

#include "testutil.hpp"

using frq::distinct_item;
using frq::list_distinct;
using frq::list_distinct_sparse;
using frq::mark_set;
using frq::prev_occ_array;
using frq::rmq_index;
using frq::sequence;
using frq::sparse_rmq_index;
using frq::symbol_t;
using frq::u32;
using frq::u64;

namespace {

const std::vector<symbol_t> EX = {1, 2, 1, 3, 1, 2, 1};

struct fixture {
    std::vector<symbol_t> s;
    u64 sigma;
    sequence seq;
    rmq_index<u32> crmq;

    fixture(std::vector<symbol_t> data, u64 sg)
        : s(std::move(data)), sigma(sg), seq(s, sigma),
          crmq(prev_occ_array(s, sigma)) {}
};

} // namespace

TEST_CASE("prev-occurrence links on the worked example", "[listing]") {
    REQUIRE(prev_occ_array(EX, 3) ==
            std::vector<u32>{0, 0, 1, 0, 3, 2, 5});
    REQUIRE_THROWS_AS(prev_occ_array({1, 5}, 3), std::invalid_argument);
}

TEST_CASE("distinct listing on the worked example", "[listing]") {
    fixture fx(EX, 3);
    auto got = list_distinct(fx.seq, fx.crmq, 2, 6, 10);
    REQUIRE(got == std::vector<distinct_item>{{2, 2}, {1, 3}, {3, 4}});
    got = list_distinct(fx.seq, fx.crmq, 1, 7, 10);
    REQUIRE(got == std::vector<distinct_item>{{1, 1}, {2, 2}, {3, 4}});
    got = list_distinct(fx.seq, fx.crmq, 1, 7, 2);
    REQUIRE(got == std::vector<distinct_item>{{1, 1}, {2, 2}});
    REQUIRE(list_distinct(fx.seq, fx.crmq, 5, 5, 10) ==
            std::vector<distinct_item>{{1, 5}});
    REQUIRE(list_distinct(fx.seq, fx.crmq, 2, 6, 0).empty());
    REQUIRE_THROWS_AS(list_distinct(fx.seq, fx.crmq, 0, 6, 1),
                      std::out_of_range);
}

TEST_CASE("distinct listing matches the oracle exhaustively", "[listing]") {
    for (u64 len = 1; len <= 6; ++len) {
        tst::seq_enumerator en(len, 3);
        std::vector<symbol_t> s;
        while (en.next(s)) {
            fixture fx(s, 3);
            for (u64 i = 1; i <= len; ++i)
                for (u64 j = i; j <= len; ++j)
                    for (u64 lim : {0u, 1u, 2u, 4u})
                        REQUIRE(list_distinct(fx.seq, fx.crmq, i, j, lim) ==
                                frq::oracle::list_distinct(s, i, j, lim));
        }
    }
}

TEST_CASE("distinct listing is online on random data", "[listing]") {
    auto rng = tst::make_rng(21);
    auto s = tst::random_seq(rng, 2000, 50);
    fixture fx(s, 50);
    std::uniform_int_distribution<u64> pick(1, s.size());
    for (int q = 0; q < 300; ++q) {
        u64 a = pick(rng), b = pick(rng);
        if (a > b) std::swap(a, b);
        for (u64 lim : {1u, 2u, 5u, 50u}) {
            frq::query_stats st;
            auto got = list_distinct(fx.seq, fx.crmq, a, b, lim, &st);
            REQUIRE(got == frq::oracle::list_distinct(s, a, b, lim));
            REQUIRE(st.rmq_queries <= 16 * got.size() + 16);
        }
    }
}

TEST_CASE("sparse listing matches the oracle exhaustively", "[listing]") {
    mark_set marks(3);
    for (u64 len = 1; len <= 6; ++len) {
        tst::seq_enumerator en(len, 3);
        std::vector<symbol_t> s;
        while (en.next(s)) {
            sequence seq(s, 3);
            auto c = prev_occ_array(s, 3);
            for (u64 f : {1u, 2u, 3u}) {
                sparse_rmq_index srmq(c, f);
                for (u64 i = 1; i <= len; ++i)
                    for (u64 j = i; j <= len; ++j)
                        for (u64 lim : {1u, 3u, 9u}) {
                            auto got = list_distinct_sparse(seq, srmq, i, j,
                                                            lim, marks);
                            REQUIRE(got ==
                                    frq::oracle::list_distinct(s, i, j, lim));
                            REQUIRE(marks.all_clear());
                        }
            }
        }
    }
}

TEST_CASE("sparse listing touches at most f cells per item plus tails",
          "[listing]") {
    auto rng = tst::make_rng(22);
    auto s = tst::skewed_seq(rng, 3000, 40);
    sequence seq(s, 40);
    auto c = prev_occ_array(s, 40);
    mark_set marks(40);
    std::uniform_int_distribution<u64> pick(1, s.size());
    for (u64 f : {2u, 8u, 12u, 64u}) {
        sparse_rmq_index srmq(c, f);
        for (int q = 0; q < 400; ++q) {
            u64 a = pick(rng), b = pick(rng);
            if (a > b) std::swap(a, b);
            for (u64 lim : {1u, 4u, 40u}) {
                frq::query_stats st;
                auto got =
                    list_distinct_sparse(seq, srmq, a, b, lim, marks, &st);
                REQUIRE(got == frq::oracle::list_distinct(s, a, b, lim));
                REQUIRE(st.cells_scanned <= f * got.size() + 2 * f);
            }
        }
    }
}

TEST_CASE("flagged-subsequence walk emits each leftmost link once",
          "[listing]") {
    // Subsequence links: value 0 means no earlier flagged twin. Window
    // [2..6] over links [0,0,1,2,0,3,4]: emittable are exactly the
    // entries with link < 2, here indices 2, 3, 5.
    rmq_index<u32> subc({0, 0, 1, 2, 0, 3, 4});
    std::vector<u64> hits;
    frq::walk_flagged(subc, 2, 6, [&](u64 m) {
        hits.push_back(m);
        return true;
    });
    std::sort(hits.begin(), hits.end());
    REQUIRE(hits == std::vector<u64>{2, 3, 5});

    // Early stop after the first emission.
    hits.clear();
    frq::query_stats st;
    frq::walk_flagged(
        subc, 1, 7,
        [&](u64 m) {
            hits.push_back(m);
            return hits.size() < 2;
        },
        &st);
    REQUIRE(hits.size() == 2);
    REQUIRE(st.rmq_queries <= 2 * 2 + 1);
}

TEST_CASE("flagged walk agrees with direct filtering on random links",
          "[listing]") {
    auto rng = tst::make_rng(23);
    for (int iter = 0; iter < 50; ++iter) {
        std::uniform_int_distribution<u64> nlen(1, 60);
        u64 n = nlen(rng);
        std::vector<u32> links(n);
        for (u64 k = 0; k < n; ++k)
            links[k] = std::uniform_int_distribution<u32>(0, u32(k))(rng);
        rmq_index<u32> subc(links);
        std::uniform_int_distribution<u64> pick(1, n);
        for (int q = 0; q < 50; ++q) {
            u64 a = pick(rng), b = pick(rng);
            if (a > b) std::swap(a, b);
            std::vector<u64> want;
            for (u64 m = a; m <= b; ++m)
                if (links[m - 1] < a) want.push_back(m);
            std::vector<u64> got;
            frq::query_stats st;
            frq::walk_flagged(
                subc, a, b,
                [&](u64 m) {
                    got.push_back(m);
                    return true;
                },
                &st);
            std::sort(got.begin(), got.end());
            REQUIRE(got == want);
            REQUIRE(st.rmq_queries <= 2 * got.size() + 1);
        }
    }
}
