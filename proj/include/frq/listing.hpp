#pragma once

#include <cstdint>
#include <vector>

#include "common.hpp"
#include "query_stats.hpp"
#include "rmq.hpp"
#include "sequence.hpp"

namespace frq {

// Reusable "have I seen this symbol" scratch. Marking is O(1) and clear()
// touches only what was marked, so one instance can serve many queries.
class mark_set {
public:
    explicit mark_set(u64 sigma) : seen_(sigma + 1, 0) {}

    bool marked(symbol_t c) const { return seen_[c] != 0; }

    void mark(symbol_t c) {
        if (!seen_[c]) {
            seen_[c] = 1;
            touched_.push_back(c);
        }
    }

    void clear() {
        for (symbol_t c : touched_) seen_[c] = 0;
        touched_.clear();
    }

    bool all_clear() const {
        for (auto b : seen_)
            if (b) return false;
        return true;
    }

private:
    std::vector<std::uint8_t> seen_;
    std::vector<symbol_t> touched_;
};

struct distinct_item {
    symbol_t sym;
    u64 pos; // leftmost occurrence inside the queried range, 1-based

    bool operator==(const distinct_item&) const = default;
};

// C[k] = position of the previous occurrence of data[k], 0 if none.
inline std::vector<u32> prev_occ_array(const std::vector<symbol_t>& data,
                                       u64 sigma) {
    if (data.size() >= u64(UINT32_MAX))
        throw std::invalid_argument("prev_occ_array: length above 2^32-2");
    std::vector<u32> last(sigma + 1, 0), c(data.size());
    for (u64 k = 0; k < data.size(); ++k) {
        if (data[k] < 1 || u64(data[k]) > sigma)
            throw std::invalid_argument("prev_occ_array: symbol out of range");
        c[k] = last[data[k]];
        last[data[k]] = u32(k + 1);
    }
    return c;
}

// Distinct symbols of S[i..j] in increasing order of first occurrence,
// at most `limit` of them. A position is the first occurrence of its
// symbol exactly when its prev-occurrence link falls before i, so the
// walk recurses on the minimum link: left subtree, report, right
// subtree, and prunes any range whose minimum link is >= i.
inline std::vector<distinct_item> list_distinct(const sequence& seq,
                                                const rmq_index<u32>& crmq,
                                                u64 i, u64 j, u64 limit,
                                                query_stats* st = nullptr) {
    check_range(i, j, seq.size());
    std::vector<distinct_item> out;
    if (limit == 0) return out;
    struct frame {
        u64 l, r, m;
        bool expanded;
    };
    std::vector<frame> stack{{i, j, 0, false}};
    while (!stack.empty()) {
        frame f = stack.back();
        stack.pop_back();
        if (!f.expanded) {
            if (f.l > f.r) continue;
            u64 m = crmq.query(f.l, f.r, st);
            if (crmq.value_at(m) >= i) continue;
            stack.push_back({f.l, f.r, m, true});
            stack.push_back({f.l, m - 1, 0, false});
        } else {
            if (st) ++st->cells_scanned;
            out.push_back({seq.access(f.m), f.m});
            if (out.size() >= limit) break;
            stack.push_back({f.m + 1, f.r, 0, false});
        }
    }
    return out;
}

// Same output set as list_distinct, but built to touch few cells: only
// the two partial boundary blocks are scanned unconditionally, and a
// fully covered block is scanned only when the block-minimum link
// proves it holds a first occurrence, so every scanned middle block
// yields at least one new symbol. Output keeps first-occurrence order.
inline std::vector<distinct_item> list_distinct_sparse(
    const sequence& seq, const sparse_rmq_index& srmq, u64 i, u64 j,
    u64 limit, mark_set& marks, query_stats* st = nullptr) {
    check_range(i, j, seq.size());
    u64 f = srmq.block_len();
    std::vector<distinct_item> out;
    if (limit == 0) return out;

    auto scan = [&](u64 a, u64 b) { // inclusive cell range, clipped by caller
        for (u64 k = a; k <= b && out.size() < limit; ++k) {
            if (st) ++st->cells_scanned;
            symbol_t c = seq.access(k);
            if (!marks.marked(c)) {
                marks.mark(c);
                out.push_back({c, k});
            }
        }
    };

    u64 bi = (i - 1) / f, bj = (j - 1) / f;
    if (bi == bj) {
        scan(i, j);
        marks.clear();
        return out;
    }

    scan(i, (bi + 1) * f); // left tail, up to the block boundary

    // Middle blocks, leftmost-minimum recursion. A span whose minimum
    // link is >= i holds no unseen symbol: following links from any
    // cell strictly decreases position while staying >= i, so the
    // chain must leave the unscanned region and land on a marked cell.
    struct frame {
        u64 lb, rb, mb;
        bool expanded;
    };
    std::vector<frame> stack;
    if (bi + 1 <= bj - 1) stack.push_back({bi + 1, bj - 1, 0, false});
    while (!stack.empty() && out.size() < limit) {
        frame fr = stack.back();
        stack.pop_back();
        if (!fr.expanded) {
            if (fr.lb > fr.rb) continue;
            auto [mb, kpos] = srmq.query_blocks(fr.lb, fr.rb, st);
            (void)kpos;
            if (srmq.block_min(mb) >= i) continue;
            stack.push_back({fr.lb, fr.rb, mb, true});
            if (mb > fr.lb) stack.push_back({fr.lb, mb - 1, 0, false});
        } else {
            u64 lo = fr.mb * f + 1;
            scan(lo, lo + f - 1);
            stack.push_back({fr.mb + 1, fr.rb, 0, false});
        }
    }

    if (out.size() < limit) scan(bj * f + 1, j); // right tail
    marks.clear();
    return out;
}

// Preorder walk over a subsequence-local prev-occurrence rmq: calls
// emit(m) for every subsequence index m in [lo, hi] whose link falls
// before lo, i.e. for the leftmost in-window occurrence of each
// distinct flagged symbol. emit returns false to stop early. Work is
// at most 2e+1 rmq probes for e emitted items.
template <typename EmitFn>
inline void walk_flagged(const rmq_index<u32>& subc, u64 lo, u64 hi,
                         EmitFn emit, query_stats* st = nullptr) {
    if (lo > hi) return;
    std::vector<std::pair<u64, u64>> stack{{lo, hi}};
    while (!stack.empty()) {
        auto [l, r] = stack.back();
        stack.pop_back();
        if (l > r) continue;
        u64 m = subc.query(l, r, st);
        if (subc.value_at(m) >= lo) continue;
        if (!emit(m)) return;
        if (m < r) stack.push_back({m + 1, r});
        if (l < m) stack.push_back({l, m - 1});
    }
}

} // namespace frq
