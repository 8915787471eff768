#pragma once

#include <algorithm>

#include "common.hpp"
#include "listing.hpp"
#include "majority.hpp"
#include "query_stats.hpp"
#include "rmq.hpp"
#include "sequence.hpp"

namespace frq {

struct minority_answer {
    bool found;
    symbol_t sym;
    u64 pos;   // leftmost occurrence inside the query range
    u64 count; // exact occurrence count inside the query range
    bool operator==(const minority_answer&) const = default;
};

namespace detail {

template <typename Items>
minority_answer first_minority(const sequence& seq, const Items& cands, u64 i,
                               u64 j, u64 need, query_stats* st) {
    for (const auto& it : cands) {
        auto cr = check_candidate(seq, it.pos, i, j, need, st);
        if (!cr.is_majority)
            return {true, it.sym, it.pos,
                    count_from(seq, it.sym, cr.partial_rank, j)};
    }
    return {false, 0, 0, 0};
}

} // namespace detail

// Leftmost-starting symbol of [i..j] that occurs but stays below
// ceil(tau * (j-i+1)) occurrences. Only min(floor(1/tau) + 1, sigma)
// distinct symbols are listed: if every symbol of the range cleared the
// threshold with that many distinct present, their counts would exceed
// the range length.
inline minority_answer query_minority(const sequence& seq,
                                      const rmq_index<u32>& crmq, u64 i, u64 j,
                                      tau t, query_stats* st = nullptr) {
    check_range(i, j, seq.size());
    u64 need = t.threshold(j - i + 1);
    u64 budget = std::min(t.inv_floor() + 1, seq.sigma());
    auto cands = list_distinct(seq, crmq, i, j, budget, st);
    return detail::first_minority(seq, cands, i, j, need, st);
}

// Same answer through the block-granular listing.
inline minority_answer query_minority_sparse(const sequence& seq,
                                             const sparse_rmq_index& srmq,
                                             mark_set& marks, u64 i, u64 j,
                                             tau t, query_stats* st = nullptr) {
    check_range(i, j, seq.size());
    u64 need = t.threshold(j - i + 1);
    u64 budget = std::min(t.inv_floor() + 1, seq.sigma());
    auto cands = list_distinct_sparse(seq, srmq, i, j, budget, marks, st);
    return detail::first_minority(seq, cands, i, j, need, st);
}

} // namespace frq
