#pragma once

#include <cstdint>
#include <vector>
#include <bit>
#include <stdexcept>
#include <string>

#if defined(__BMI2__)
#include <immintrin.h>
#endif

#include "common.hpp"

namespace frq {

// Plain bitvector with O(1) rank and binary-search select.
// Layout: raw 64-bit words (LSB-first), a superblock directory of
// cumulative ranks every 65536 bits, and a 16-bit block directory
// every 512 bits relative to the enclosing superblock. The directories
// are derived data and are rebuilt when loading from raw words.
class bitvec {
public:
    static constexpr u64 SB_BITS = 65536;
    static constexpr u64 BLK_BITS = 512;
    static constexpr u64 WORDS_PER_BLK = BLK_BITS / 64;
    static constexpr u64 SEL_SAMPLE = 512;

    bitvec() { build_directories(); }

    bitvec(u64 nbits, std::vector<u64> raw_words)
        : m_(nbits), words_(std::move(raw_words)) {
        u64 need = (m_ + 63) / 64;
        if (words_.size() != need)
            throw std::invalid_argument("bitvec: word count mismatch");
        if (m_ % 64 != 0 && !words_.empty() &&
            (words_.back() >> (m_ % 64)) != 0)
            throw std::invalid_argument("bitvec: nonzero padding bits");
        build_directories();
    }

    static bitvec from_bits(const std::vector<bool>& bits) {
        std::vector<u64> w((bits.size() + 63) / 64, 0);
        for (u64 k = 0; k < bits.size(); ++k)
            if (bits[k]) w[k / 64] |= u64(1) << (k % 64);
        return bitvec(bits.size(), std::move(w));
    }

    u64 size() const { return m_; }
    u64 ones() const { return sb_rank_.back(); }
    u64 zeros() const { return m_ - ones(); }
    const std::vector<u64>& raw_words() const { return words_; }

    // Visit every set bit in ascending order; fn receives 1-based positions.
    template <typename Fn>
    void for_each_one(Fn&& fn) const {
        for (u64 wi = 0; wi < words_.size(); ++wi) {
            u64 w = words_[wi];
            while (w) {
                u64 b = u64(std::countr_zero(w));
                fn(wi * 64 + b + 1);
                w &= w - 1;
            }
        }
    }

    // 1-based bit access.
    bool bit(u64 k) const {
        if (k < 1 || k > m_) throw std::out_of_range("bitvec::bit");
        return (words_[(k - 1) / 64] >> ((k - 1) % 64)) & 1u;
    }

    // Ones among the first k bits, k in [0, m].
    u64 rank1(u64 k) const {
        if (k > m_) throw std::out_of_range("bitvec::rank1");
        if (k == 0) return 0;
        u64 r = sb_rank_[k / SB_BITS] + blk_rank_[k / BLK_BITS];
        u64 w = (k / BLK_BITS) * WORDS_PER_BLK;
        while ((w + 1) * 64 <= k) r += u64(std::popcount(words_[w++]));
        if (u64 rem = k - w * 64; rem > 0)
            r += u64(std::popcount(words_[w] & ((u64(1) << rem) - 1)));
        return r;
    }

    u64 rank0(u64 k) const {
        if (k > m_) throw std::out_of_range("bitvec::rank0");
        return k - rank1(k);
    }

    // Position (1-based) of the r-th one, r in [1, ones()].
    u64 select1(u64 r) const {
        if (r < 1 || r > ones()) throw std::out_of_range("bitvec::select1");
        auto blk_ones = [&](u64 b) {
            return sb_rank_[b / (SB_BITS / BLK_BITS)] + blk_rank_[b];
        };
        u64 h = (r - 1) / SEL_SAMPLE;
        u64 blo = sel1_[h];
        u64 bhi = h + 1 < sel1_.size() ? sel1_[h + 1] : blk_rank_.size() - 2;
        while (blo < bhi) {
            u64 mid = (blo + bhi + 1) / 2;
            if (blk_ones(mid) < r) blo = mid;
            else bhi = mid - 1;
        }
        u64 rr = r - blk_ones(blo);
        u64 w = blo * WORDS_PER_BLK;
        for (;; ++w) {
            u64 c = u64(std::popcount(words_[w]));
            if (c >= rr) break;
            rr -= c;
        }
        return w * 64 + select_in_word(words_[w], rr) + 1;
    }

    // Position (1-based) of the r-th zero, r in [1, zeros()].
    u64 select0(u64 r) const {
        if (r < 1 || r > zeros()) throw std::out_of_range("bitvec::select0");
        auto blk_zeros = [&](u64 b) {
            return b * BLK_BITS - sb_rank_[b / (SB_BITS / BLK_BITS)] -
                   blk_rank_[b];
        };
        u64 h = (r - 1) / SEL_SAMPLE;
        u64 blo = sel0_[h];
        u64 bhi = h + 1 < sel0_.size() ? sel0_[h + 1] : blk_rank_.size() - 2;
        while (blo < bhi) {
            u64 mid = (blo + bhi + 1) / 2;
            if (blk_zeros(mid) < r) blo = mid;
            else bhi = mid - 1;
        }
        u64 rr = r - blk_zeros(blo);
        u64 w = blo * WORDS_PER_BLK;
        for (;; ++w) {
            u64 c = u64(std::popcount(~words_[w]));
            if (c >= rr) break;
            rr -= c;
        }
        return w * 64 + select_in_word(~words_[w], rr) + 1;
    }

    // Directory footprint, for space accounting.
    u64 directory_bits() const {
        return 64 * sb_rank_.size() + 16 * blk_rank_.size() +
               32 * (sel1_.size() + sel0_.size());
    }

    bool operator==(const bitvec& o) const {
        return m_ == o.m_ && words_ == o.words_;
    }

private:
    u64 m_ = 0;
    std::vector<u64> words_;
    std::vector<u64> sb_rank_;   // nsb + 1 entries, cumulative
    std::vector<std::uint16_t> blk_rank_; // per block, relative to superblock
    std::vector<u32> sel1_; // block of every (h*SEL_SAMPLE + 1)-th one
    std::vector<u32> sel0_; // block of every (h*SEL_SAMPLE + 1)-th zero

    // Index of the r-th set bit of `word` (r >= 1, guaranteed present).
    static u64 select_in_word(u64 word, u64 r) {
#if defined(__BMI2__)
        return u64(std::countr_zero(_pdep_u64(u64(1) << (r - 1), word)));
#else
        // Narrow to a byte by popcount halving, then walk the few bits left.
        u64 base = 0;
        u64 c = u64(std::popcount(word & 0xffffffffu));
        if (c < r) {
            r -= c;
            word >>= 32;
            base = 32;
        }
        c = u64(std::popcount(word & 0xffffu));
        if (c < r) {
            r -= c;
            word >>= 16;
            base += 16;
        }
        c = u64(std::popcount(word & 0xffu));
        if (c < r) {
            r -= c;
            word >>= 8;
            base += 8;
        }
        for (u64 i = 1; i < r; ++i) word &= word - 1;
        return base + u64(std::countr_zero(word));
#endif
    }

    void build_directories() {
        u64 nsb = (m_ + SB_BITS - 1) / SB_BITS;
        u64 nblk = (m_ + BLK_BITS - 1) / BLK_BITS;
        sb_rank_.assign(nsb + 1, 0);
        blk_rank_.assign(nblk + 1, 0); // sentinel entry for k == m
        sel1_.clear();
        sel0_.clear();
        u64 total = 0, sb_base = 0;
        for (u64 b = 0; b <= nblk; ++b) {
            if (b % (SB_BITS / BLK_BITS) == 0) {
                u64 s = b / (SB_BITS / BLK_BITS);
                if (s < sb_rank_.size()) sb_rank_[s] = total;
                sb_base = total;
            }
            blk_rank_[b] = static_cast<std::uint16_t>(total - sb_base);
            if (b == nblk) break;
            u64 w0 = b * WORDS_PER_BLK;
            u64 w1 = std::min<u64>(words_.size(), w0 + WORDS_PER_BLK);
            for (u64 w = w0; w < w1; ++w)
                total += u64(std::popcount(words_[w]));
            while (sel1_.size() * SEL_SAMPLE < total)
                sel1_.push_back(u32(b));
            u64 zeros_done = std::min((b + 1) * BLK_BITS, m_) - total;
            while (sel0_.size() * SEL_SAMPLE < zeros_done)
                sel0_.push_back(u32(b));
        }
        sb_rank_[nsb] = total;
    }
};

// Incremental builder for append-style construction.
class bit_builder {
public:
    void push_back(bool b) {
        if (m_ % 64 == 0) words_.push_back(0);
        if (b) words_.back() |= u64(1) << (m_ % 64);
        ++m_;
    }

    void append_zeros(u64 count) {
        m_ += count;
        words_.resize((m_ + 63) / 64, 0);
    }

    u64 size() const { return m_; }

    bitvec build() && { return bitvec(m_, std::move(words_)); }

private:
    u64 m_ = 0;
    std::vector<u64> words_;
};

} // namespace frq
