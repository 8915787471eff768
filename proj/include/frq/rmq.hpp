#pragma once

#include <cstdint>
#include <vector>
#include <stdexcept>
#include <utility>

#include "common.hpp"
#include "query_stats.hpp"

namespace frq {

// Range-minimum index returning the LEFTMOST position of the minimum.
// Blocks of 32 values carry their in-block leftmost argmin; a sparse
// table over block minima answers the middle part, and the two partial
// blocks are scanned directly. O(1) query, about n/2 words of tables
// instead of the n log n words a plain per-position sparse table needs.
template <typename T>
class rmq_index {
public:
    static constexpr u64 B = 32;

    rmq_index() = default;

    explicit rmq_index(std::vector<T> values) : values_(std::move(values)) {
        u64 n = values_.size();
        u64 nb = (n + B - 1) / B;
        blk_off_.resize(nb);
        blk_min_.resize(nb);
        for (u64 b = 0; b < nb; ++b) {
            u64 lo = b * B, hi = std::min(n, lo + B);
            u64 best = lo;
            for (u64 k = lo + 1; k < hi; ++k)
                if (values_[k] < values_[best]) best = k;
            blk_off_[b] = static_cast<std::uint8_t>(best - lo);
            blk_min_[b] = values_[best];
        }
        if (nb > 0) {
            u64 lev = floor_log2(nb) + 1;
            table_.assign(lev, std::vector<u32>(nb));
            for (u64 b = 0; b < nb; ++b) table_[0][b] = u32(b);
            for (u64 j = 1; j < lev; ++j) {
                u64 half = u64(1) << (j - 1);
                for (u64 b = 0; b + (u64(1) << j) <= nb; ++b) {
                    u32 x = table_[j - 1][b], y = table_[j - 1][b + half];
                    table_[j][b] = blk_min_[y] < blk_min_[x] ? y : x;
                }
            }
        }
    }

    u64 size() const { return values_.size(); }

    // 1-based.
    const T& value_at(u64 pos) const {
        if (pos < 1 || pos > values_.size())
            throw std::out_of_range("rmq_index::value_at");
        return values_[pos - 1];
    }

    // Leftmost position of the minimum of values[l..r], 1-based inclusive.
    u64 query(u64 l, u64 r, query_stats* st = nullptr) const {
        check_range(l, r, values_.size());
        if (st) ++st->rmq_queries;
        u64 lo = l - 1, hi = r - 1;
        u64 bl = lo / B, bh = hi / B;
        if (bl == bh) {
            u64 best = lo;
            for (u64 k = lo + 1; k <= hi; ++k)
                if (values_[k] < values_[best]) best = k;
            return best + 1;
        }
        u64 best = lo;
        for (u64 k = lo + 1; k < (bl + 1) * B; ++k)
            if (values_[k] < values_[best]) best = k;
        if (bl + 1 <= bh - 1) {
            u64 span = bh - 1 - (bl + 1) + 1;
            u64 j = floor_log2(span);
            u32 x = table_[j][bl + 1];
            u32 y = table_[j][bh - (u64(1) << j)];
            u32 cb = blk_min_[y] < blk_min_[x] ? y : x;
            u64 cand = u64(cb) * B + blk_off_[cb];
            if (values_[cand] < values_[best]) best = cand;
        }
        for (u64 k = bh * B; k <= hi; ++k)
            if (values_[k] < values_[best]) best = k;
        return best + 1;
    }

private:
    std::vector<T> values_;
    std::vector<std::uint8_t> blk_off_;
    std::vector<T> blk_min_;
    std::vector<std::vector<u32>> table_;
};

// Block-granular range-minimum over a fixed partition into blocks of
// length f: stores, per block, the minimum and the global position of
// its leftmost occurrence, plus an rmq over the block minima. Queries
// identify the best block without touching the underlying values.
class sparse_rmq_index {
public:
    sparse_rmq_index() = default;

    sparse_rmq_index(const std::vector<u32>& values, u64 f) : f_(f) {
        if (f == 0) throw std::invalid_argument("sparse_rmq_index: f zero");
        u64 n = values.size();
        u64 nb = (n + f - 1) / f;
        pos_.resize(nb);
        std::vector<u32> mins(nb);
        for (u64 b = 0; b < nb; ++b) {
            u64 lo = b * f, hi = std::min(n, lo + f);
            u64 best = lo;
            for (u64 k = lo + 1; k < hi; ++k)
                if (values[k] < values[best]) best = k;
            pos_[b] = u32(best + 1);
            mins[b] = values[best];
        }
        inner_ = rmq_index<u32>(std::move(mins));
    }

    u64 block_len() const { return f_; }
    u64 block_count() const { return inner_.size(); }

    // Leftmost block holding the minimum among blocks [bl, br], 0-based
    // inclusive; returns that block and the global 1-based position of
    // its in-block leftmost minimum.
    std::pair<u64, u64> query_blocks(u64 bl, u64 br,
                                     query_stats* st = nullptr) const {
        if (bl > br || br >= inner_.size())
            throw std::out_of_range("sparse_rmq_index::query_blocks");
        u64 b = inner_.query(bl + 1, br + 1, st) - 1;
        return {b, pos_[b]};
    }

    u32 block_min(u64 b) const { return inner_.value_at(b + 1); }

private:
    u64 f_ = 0;
    std::vector<u32> pos_;
    rmq_index<u32> inner_;
};

} // namespace frq
