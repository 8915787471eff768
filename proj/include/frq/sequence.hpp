#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <vector>
#include <stdexcept>

#include "bitvec.hpp"
#include "common.hpp"

namespace frq {

// Balanced wavelet tree over symbols 1..sigma, stored levelwise: one
// bitvector per code bit, most significant bit first. Each level is the
// concatenation of that level's node bitmaps in left-to-right node order,
// produced by a stable counting sort on code prefixes during construction.
// Positions are 1-based; rank takes a prefix length.
class sequence {
public:
    static constexpr u64 SIGMA_CAP = u64(1) << 22;

    struct pos_info {
        symbol_t sym;
        u64 partial_rank; // occurrences of sym in the prefix ending at k
        u64 prev;         // previous occurrence of sym, 0 if none
    };

    sequence(const std::vector<symbol_t>& data, u64 sigma) {
        validate_params(data.size(), sigma);
        n_ = data.size();
        sigma_ = sigma;
        width_ = sigma_ >= 2 ? u32(std::bit_width(sigma_ - 1)) : 0;
        for (symbol_t c : data)
            if (c < 1 || u64(c) > sigma_)
                throw std::invalid_argument("sequence: symbol out of range");
        build_levels(data);
        tally_counts(data);
    }

    // Reassembles a sequence from its level bitmaps (the serialized payload).
    sequence(u64 n, u64 sigma, std::vector<bitvec> levels) {
        validate_params(n, sigma);
        n_ = n;
        sigma_ = sigma;
        width_ = sigma_ >= 2 ? u32(std::bit_width(sigma_ - 1)) : 0;
        if (levels.size() != width_)
            throw std::invalid_argument("sequence: level count mismatch");
        for (const auto& lv : levels)
            if (lv.size() != n_)
                throw std::invalid_argument("sequence: level length mismatch");
        levels_ = std::move(levels);
        tally_counts(decode());
    }

    u64 size() const { return n_; }
    u64 sigma() const { return sigma_; }
    u32 width() const { return width_; }
    const std::vector<bitvec>& levels() const { return levels_; }

    u64 count(symbol_t c) const {
        check_symbol(c);
        return counts_[c];
    }
    const std::vector<u64>& counts() const { return counts_; }

    // 1-based access.
    symbol_t access(u64 k) const { return info(k).sym; }

    // Occurrences of c among the first k positions, k in [0, n].
    u64 rank(symbol_t c, u64 k) const {
        check_symbol(c);
        if (k > n_) throw std::out_of_range("sequence::rank");
        if (width_ == 0) return k;
        u64 code = c - 1;
        u64 lo = 0, hi = n_, p = k;
        for (u32 l = 0; l < width_; ++l) {
            const bitvec& lv = levels_[l];
            u64 z = lv.rank0(hi) - lv.rank0(lo);
            if ((code >> (width_ - 1 - l)) & 1u) {
                p = lv.rank1(lo + p) - lv.rank1(lo);
                lo += z;
            } else {
                p = lv.rank0(lo + p) - lv.rank0(lo);
                hi = lo + z;
            }
        }
        return p;
    }

    // Position of the r-th occurrence of c, r in [1, count(c)].
    u64 select(symbol_t c, u64 r) const {
        check_symbol(c);
        if (r < 1 || r > counts_[c]) throw std::out_of_range("sequence::select");
        if (width_ == 0) return r;
        u64 code = c - 1;
        std::array<u64, 24> los{};
        u64 lo = 0, hi = n_;
        for (u32 l = 0; l < width_; ++l) {
            los[l] = lo;
            const bitvec& lv = levels_[l];
            u64 z = lv.rank0(hi) - lv.rank0(lo);
            if ((code >> (width_ - 1 - l)) & 1u) lo += z;
            else hi = lo + z;
        }
        for (u32 l = width_; l-- > 0;) {
            const bitvec& lv = levels_[l];
            if ((code >> (width_ - 1 - l)) & 1u)
                r = lv.select1(lv.rank1(los[l]) + r) - los[l];
            else
                r = lv.select0(lv.rank0(los[l]) + r) - los[l];
        }
        return r;
    }

    // Symbol at k, its prefix count, and its previous occurrence,
    // all from one downward walk.
    pos_info info(u64 k) const {
        if (k < 1 || k > n_) throw std::out_of_range("sequence::info");
        if (width_ == 0) return {1, k, k - 1};
        u64 lo = 0, hi = n_, p = k - 1, code = 0;
        for (u32 l = 0; l < width_; ++l) {
            const bitvec& lv = levels_[l];
            u64 z = lv.rank0(hi) - lv.rank0(lo);
            u64 g = lo + p + 1;
            if (lv.bit(g)) {
                code = (code << 1) | 1u;
                p = lv.rank1(g) - lv.rank1(lo) - 1;
                lo += z;
            } else {
                code <<= 1;
                p = lv.rank0(g) - lv.rank0(lo) - 1;
                hi = lo + z;
            }
        }
        symbol_t sym = symbol_t(code + 1);
        u64 pr = p + 1;
        return {sym, pr, pr > 1 ? select(sym, pr - 1) : 0};
    }

    // Symbol at k and its prefix count, skipping the prev lookup.
    std::pair<symbol_t, u64> sym_and_rank(u64 k) const {
        if (k < 1 || k > n_) throw std::out_of_range("sequence::sym_and_rank");
        if (width_ == 0) return {1, k};
        u64 lo = 0, hi = n_, p = k - 1, code = 0;
        for (u32 l = 0; l < width_; ++l) {
            const bitvec& lv = levels_[l];
            u64 z = lv.rank0(hi) - lv.rank0(lo);
            u64 g = lo + p + 1;
            if (lv.bit(g)) {
                code = (code << 1) | 1u;
                p = lv.rank1(g) - lv.rank1(lo) - 1;
                lo += z;
            } else {
                code <<= 1;
                p = lv.rank0(g) - lv.rank0(lo) - 1;
                hi = lo + z;
            }
        }
        return {symbol_t(code + 1), p + 1};
    }

    // rank(S[k], k) without knowing S[k] in advance.
    u64 partial_rank(u64 k) const { return info(k).partial_rank; }

    // Previous position holding the same symbol, 0 when k is the first.
    u64 prev_occurrence(u64 k) const { return info(k).prev; }

    std::vector<symbol_t> decode() const {
        std::vector<symbol_t> out(n_);
        if (width_ == 0) {
            for (auto& x : out) x = 1;
            return out;
        }
        // Replay the construction: walk each level's nodes once, pushing
        // entries to their child nodes, so decoding is O(n * width).
        std::vector<u64> idx(n_);   // original position of each entry, in
        for (u64 k = 0; k < n_; ++k) idx[k] = k; // current level order
        std::vector<u64> codes(n_, 0);
        std::vector<u64> nxt(n_);
        std::vector<u64> starts{0, n_}; // node boundaries at current level
        for (u32 l = 0; l < width_; ++l) {
            const bitvec& lv = levels_[l];
            std::vector<u64> nstarts;
            nstarts.reserve(starts.size() * 2);
            u64 w = 0;
            std::vector<std::pair<u64, u64>> spans; // (ones start, count)
            for (size_t s = 0; s + 1 < starts.size(); ++s) {
                u64 lo = starts[s], hi = starts[s + 1];
                u64 z = lv.rank0(hi) - lv.rank0(lo);
                nstarts.push_back(w);
                nstarts.push_back(w + z);
                u64 zp = w, op = w + z;
                for (u64 g = lo; g < hi; ++g) {
                    bool b = lv.bit(g + 1);
                    codes[idx[g]] = (codes[idx[g]] << 1) | (b ? 1u : 0u);
                    nxt[b ? op++ : zp++] = idx[g];
                }
                w = hi;
            }
            nstarts.push_back(n_);
            starts = std::move(nstarts);
            std::swap(idx, nxt);
        }
        for (u64 k = 0; k < n_; ++k) out[k] = symbol_t(codes[k] + 1);
        return out;
    }

    // Empirical entropy in bits per symbol.
    double entropy() const {
        double h = 0;
        for (u64 c = 1; c <= sigma_; ++c) {
            if (counts_[c] == 0) continue;
            double p = double(counts_[c]) / double(n_);
            h -= p * std::log2(p);
        }
        return h;
    }

private:
    u64 n_ = 0;
    u64 sigma_ = 0;
    u32 width_ = 0;
    std::vector<bitvec> levels_;
    std::vector<u64> counts_;

    static void validate_params(u64 n, u64 sigma) {
        if (n == 0) throw std::invalid_argument("sequence: empty input");
        if (sigma == 0) throw std::invalid_argument("sequence: sigma zero");
        if (sigma > SIGMA_CAP)
            throw std::invalid_argument("sequence: sigma above cap 2^22");
    }

    void check_symbol(symbol_t c) const {
        if (c < 1 || u64(c) > sigma_)
            throw std::out_of_range("sequence: symbol out of range");
    }

    void build_levels(const std::vector<symbol_t>& data) {
        levels_.reserve(width_);
        std::vector<u64> cur(n_), nxt(n_);
        for (u64 k = 0; k < n_; ++k) cur[k] = data[k] - 1;
        for (u32 l = 0; l < width_; ++l) {
            u32 shift = width_ - 1 - l;
            bit_builder bb;
            for (u64 k = 0; k < n_; ++k)
                bb.push_back((cur[k] >> shift) & 1u);
            levels_.push_back(std::move(bb).build());
            if (l + 1 == width_) break;
            // Stable counting sort by the top l+1 code bits gives the
            // node order of the next level.
            u64 nbuckets = u64(1) << (l + 1);
            std::vector<u64> cnt(nbuckets + 1, 0);
            for (u64 k = 0; k < n_; ++k) ++cnt[(cur[k] >> shift) + 1];
            for (u64 b = 1; b <= nbuckets; ++b) cnt[b] += cnt[b - 1];
            for (u64 k = 0; k < n_; ++k) nxt[cnt[cur[k] >> shift]++] = cur[k];
            std::swap(cur, nxt);
        }
    }

    void tally_counts(const std::vector<symbol_t>& data) {
        counts_.assign(sigma_ + 1, 0);
        for (symbol_t c : data) ++counts_[c];
    }
};

} // namespace frq
