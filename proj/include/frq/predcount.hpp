#pragma once

#include <algorithm>
#include <cstdint>
#include <memory>
#include <optional>
#include <unordered_map>
#include <vector>

#include "bitvec.hpp"
#include "common.hpp"
#include "query_stats.hpp"
#include "sequence.hpp"

namespace frq {

struct pred_result {
    u64 value; // the point itself
    u64 rank;  // its 1-based rank in the whole set

    bool operator==(const pred_result&) const = default;
};

struct reach_result {
    bool reaches;  // count >= need (meaningful only when exact)
    bool exact;    // count field holds the true range count
    u64 count;     // exact range count when exact, else unused
    bool aborted;  // a cheap upper bound settled the question early
};

// A static set of distinct positions in [1, universe] with queries whose
// cost tracks the query range, not the set size: predecessor-in-range,
// range counting, and range emptiness with witness.
//
// Predecessor uses doubly exponential levels: level l covers the line
// with overlapping intervals of length 2*2^(2^l) every 2^(2^l), so a
// range of length len fits entirely inside one interval of the level
// with 2^(2^l) >= len. Sparse intervals are finished by binary search;
// populated ones carry a sampled prefix dictionary over the interval
// offsets, searched by longest matching prefix.
//
// Counting uses plain exponential levels (length 2^l every 2^(l-1)) and,
// per nonempty interval, a unary prefix-count bitmap over subintervals
// sized so that one subinterval holds O(1) points on average; a range
// count is two boundary resolutions, each either read off the bitmap or
// delegated to a predecessor query within one subinterval.
class point_set {
public:
    static constexpr u64 UNIVERSE_CAP = u64(1) << 62;

    point_set() = default;

    point_set(std::vector<u64> pts, u64 universe) : U_(universe) {
        if (universe == 0 || universe > UNIVERSE_CAP)
            throw std::invalid_argument("point_set: universe out of range");
        std::sort(pts.begin(), pts.end());
        for (u64 r = 0; r < pts.size(); ++r) {
            if (pts[r] < 1 || pts[r] > universe)
                throw std::invalid_argument("point_set: point outside universe");
            if (r > 0 && pts[r] == pts[r - 1])
                throw std::invalid_argument("point_set: duplicate point");
        }
        if (pts.size() >= u64(UINT32_MAX))
            throw std::invalid_argument("point_set: too many points");
        xs_ = std::move(pts);
        build_emptiness();
        build_pred_levels();
        build_count_levels();
    }

    u64 size() const { return xs_.size(); }
    u64 universe() const { return U_; }
    const std::vector<u64>& points() const { return xs_; }

    // Smallest point in [i, j], if any.
    std::optional<u64> first_in_range(u64 i, u64 j,
                                      query_stats* st = nullptr) const {
        check_range(i, j, U_);
        if (xs_.empty()) return std::nullopt;
        if (dense_) {
            if (st) st->dict_probes += 2;
            u64 r = univ_.rank1(i - 1);
            if (r >= univ_.ones()) return std::nullopt;
            u64 w = univ_.select1(r + 1);
            return w <= j ? std::optional<u64>(w) : std::nullopt;
        }
        u64 lo = 0, hi = xs_.size(); // first index with xs_ >= i
        while (lo < hi) {
            if (st) ++st->binsearch_steps;
            u64 mid = (lo + hi) / 2;
            if (xs_[mid] < i) lo = mid + 1;
            else hi = mid;
        }
        if (lo < xs_.size() && xs_[lo] <= j) return xs_[lo];
        return std::nullopt;
    }

    bool empty_range(u64 i, u64 j, query_stats* st = nullptr) const {
        return !first_in_range(i, j, st).has_value();
    }

    // Largest point in [i, j] with its global rank, if any.
    std::optional<pred_result> pred_in_range(u64 i, u64 j,
                                             query_stats* st = nullptr) const {
        check_range(i, j, U_);
        if (xs_.empty()) return std::nullopt;
        u64 len = j - i + 1;
        const pred_level& L = pred_levels_[pred_level_for(len)];
        u64 k = (i - 1) / L.G;
        if (k >= 1 && j <= (k + 1) * L.G) --k; // smaller id also covers it
        if (st) ++st->dict_probes;
        auto it = L.ivs.find(k);
        if (it == L.ivs.end()) return std::nullopt;
        const pred_interval& iv = it->second;
        u64 idx; // 0-based index into xs_ of the largest point <= j
        if (!iv.heavy) {
            if (!search_le(iv.xlo - 1, iv.xhi - 1, j, idx, st))
                return std::nullopt;
        } else {
            u64 base = k * L.G + 1;
            u64 r = heavy_pred_sample(*iv.heavy, L.wbits, j - base, st);
            if (r == 0) return std::nullopt;
            u64 wlo = (iv.xlo - 1) + (r - 1) * iv.heavy->stride;
            u64 whi = std::min<u64>(iv.xhi - 1, wlo + iv.heavy->stride - 1);
            if (!search_le(wlo, whi, j, idx, st)) return std::nullopt;
        }
        if (xs_[idx] < i) return std::nullopt;
        return pred_result{xs_[idx], idx + 1};
    }

    // Exact |P intersect [i, j]|.
    u64 count(u64 i, u64 j, query_stats* st = nullptr) const {
        check_range(i, j, U_);
        if (xs_.empty()) return 0;
        const cnt_level& L = cnt_levels_[cnt_level_for(j - i + 1)];
        if (st) ++st->dict_probes;
        auto it = L.ivs.find((i - 1) >> L.lg_stride);
        if (it == L.ivs.end()) return 0;
        u64 istart = ((i - 1) >> L.lg_stride << L.lg_stride) + 1;
        return boundary_count(L, it->second, istart, j, st) -
               boundary_count(L, it->second, istart, i - 1, st);
    }

    // Decides count(i, j) >= need, giving up early (aborted = true) when
    // interval occupancy already bounds the count below need.
    reach_result count_reaches(u64 need, u64 i, u64 j,
                               query_stats* st = nullptr) const {
        check_range(i, j, U_);
        if (need == 0) return {true, false, 0, false};
        if (xs_.size() < need) return {false, false, 0, true};
        const cnt_level& L = cnt_levels_[cnt_level_for(j - i + 1)];
        if (st) ++st->dict_probes;
        auto it = L.ivs.find((i - 1) >> L.lg_stride);
        if (it == L.ivs.end()) return {false, true, 0, false};
        const cnt_interval& iv = it->second;
        u64 nk = iv.xhi - iv.xlo + 1;
        if (nk < need) return {false, false, 0, true};
        u64 istart = ((i - 1) >> L.lg_stride << L.lg_stride) + 1;
        u64 s0 = (i - istart) / iv.sub_size;
        u64 s1 = (j - istart) / iv.sub_size;
        u64 ub = unary_prefix(L, iv, s1, st) -
                 (s0 == 0 ? 0 : unary_prefix(L, iv, s0 - 1, st));
        if (ub < need) return {false, false, 0, true};
        u64 occ = boundary_count(L, iv, istart, j, st) -
                  boundary_count(L, iv, istart, i - 1, st);
        return {occ >= need, true, occ, false};
    }

private:
    // ---- predecessor levels ----
    struct heavy_dict {
        u64 stride; // sample stride in points
        // by_len[d]: offset prefix of length d -> (lo, hi) sample ranks
        std::vector<std::unordered_map<u64, std::pair<u32, u32>>> by_len;
    };
    struct pred_interval {
        u32 xlo, xhi; // 1-based index range in xs_
        std::unique_ptr<heavy_dict> heavy;
    };
    struct pred_level {
        u64 G;     // stride; intervals [kG+1, (k+2)G]
        u64 wbits; // bits of an in-interval offset
        std::unordered_map<u64, pred_interval> ivs;
    };

    // ---- counting levels ----
    struct cnt_interval {
        u32 xlo, xhi;
        u64 sub_size;
        u64 bit_off;     // first bit of this interval in the level bitmap
        u64 ones_before; // ones before that bit
    };
    struct cnt_level {
        u32 lg_stride; // stride 2^lg_stride, interval length 2^(lg_stride+1)
        std::unordered_map<u64, cnt_interval> ivs;
        bitvec unary; // per subinterval: one 0 per point, then a 1
    };

    u64 U_ = 0;
    std::vector<u64> xs_;
    bool dense_ = false;
    bitvec univ_;
    std::vector<pred_level> pred_levels_; // index l-2
    std::vector<cnt_level> cnt_levels_;   // index l-2

    static u64 pow2(u64 e) { return u64(1) << e; }

    void build_emptiness() {
        dense_ = U_ <= 64 * std::max<u64>(xs_.size(), 1) && !xs_.empty();
        if (!dense_) return;
        bit_builder bb;
        u64 prev = 0;
        for (u64 x : xs_) {
            bb.append_zeros(x - prev - 1);
            bb.push_back(true);
            prev = x;
        }
        bb.append_zeros(U_ - prev);
        univ_ = std::move(bb).build();
    }

    // Smallest stored level whose stride covers len (clamped to the top).
    u64 pred_level_for(u64 len) const {
        for (u64 idx = 0; idx + 1 < pred_levels_.size(); ++idx)
            if (pred_levels_[idx].G >= len) return idx;
        return pred_levels_.size() - 1;
    }

    u64 cnt_level_for(u64 len) const {
        u64 l = len <= 2 ? 2 : ceil_log2(len) + 1;
        u64 top = cnt_levels_.size() + 1; // levels are 2..top
        if (l > top) l = top;
        return l - 2;
    }

    // Largest idx in [lo, hi] (0-based) with xs_[idx] <= x; binary search.
    bool search_le(u64 lo, u64 hi, u64 x, u64& idx,
                   query_stats* st) const {
        if (xs_[lo] > x) {
            if (st) ++st->binsearch_steps;
            return false;
        }
        while (lo < hi) {
            if (st) ++st->binsearch_steps;
            u64 mid = (lo + hi + 1) / 2;
            if (xs_[mid] <= x) lo = mid;
            else hi = mid - 1;
        }
        idx = lo;
        return true;
    }

    void build_pred_levels() {
        u64 l = 2;
        for (;; ++l) {
            pred_level L;
            L.G = pow2(std::min<u64>(pow2(l), 62));
            L.wbits = u64(std::bit_width(2 * L.G - 1));
            std::vector<u64> ks;
            for (u64 x : xs_) {
                u64 k = (x - 1) / L.G;
                ks.push_back(k);
                if (k >= 1) ks.push_back(k - 1);
            }
            std::sort(ks.begin(), ks.end());
            ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
            for (u64 k : ks) {
                pred_interval iv;
                auto lo =
                    std::lower_bound(xs_.begin(), xs_.end(), k * L.G + 1);
                auto hi =
                    std::upper_bound(xs_.begin(), xs_.end(), (k + 2) * L.G);
                if (lo == hi) continue;
                iv.xlo = u32(lo - xs_.begin()) + 1;
                iv.xhi = u32(hi - xs_.begin());
                u64 cnt = iv.xhi - iv.xlo + 1;
                if (l <= 15 && cnt > pow2(4 * l))
                    iv.heavy = build_heavy(iv, k * L.G + 1, l, L.wbits);
                L.ivs.emplace(k, std::move(iv));
            }
            bool covers = L.G >= U_;
            pred_levels_.push_back(std::move(L));
            if (covers) break;
        }
    }

    std::unique_ptr<heavy_dict> build_heavy(const pred_interval& iv, u64 base,
                                            u64 l, u64 wbits) const {
        auto hd = std::make_unique<heavy_dict>();
        hd->stride = pow2(l);
        hd->by_len.resize(wbits + 1);
        u64 cnt = iv.xhi - iv.xlo + 1;
        u64 ns = (cnt + hd->stride - 1) / hd->stride;
        for (u64 r = 1; r <= ns; ++r) {
            u64 key = xs_[(iv.xlo - 1) + (r - 1) * hd->stride] - base;
            for (u64 d = 0; d <= wbits; ++d) { // wbits <= 63, shift is safe
                u64 p = key >> (wbits - d);
                auto [it, fresh] =
                    hd->by_len[d].try_emplace(p, std::pair<u32, u32>{u32(r), u32(r)});
                if (!fresh) it->second.second = u32(r);
            }
        }
        return hd;
    }

    // Rank of the largest sample <= off, 0 if none: longest-prefix walk.
    u64 heavy_pred_sample(const heavy_dict& hd, u64 wbits, u64 off,
                          query_stats* st) const {
        u64 lo = 0, hi = wbits; // largest d whose off-prefix exists
        while (lo < hi) {
            u64 d = (lo + hi + 1) / 2;
            if (st) ++st->dict_probes;
            if (hd.by_len[d].count(off >> (wbits - d))) lo = d;
            else hi = d - 1;
        }
        if (lo == wbits) // off is a sample itself
            return hd.by_len[wbits].at(off).second;
        auto node = hd.by_len[lo].at(off >> (wbits - lo));
        if ((off >> (wbits - lo - 1)) & 1u) {
            // off branches right where only a left child exists; the
            // predecessor sample is the largest one under that child.
            if (st) ++st->dict_probes;
            return hd.by_len[lo + 1].at((off >> (wbits - lo)) << 1).second;
        }
        // off branches left where only a right child exists; everything
        // under this node is larger, so step to the sample before it.
        return node.first - 1;
    }

    void build_count_levels() {
        u64 top = std::max<u64>(2, U_ <= 2 ? 2 : ceil_log2(U_) + 1);
        for (u64 l = 2; l <= top; ++l) {
            cnt_level L;
            L.lg_stride = u32(l - 1);
            std::vector<u64> ks;
            for (u64 x : xs_) {
                u64 k = (x - 1) >> L.lg_stride;
                ks.push_back(k);
                if (k >= 1) ks.push_back(k - 1);
            }
            std::sort(ks.begin(), ks.end());
            ks.erase(std::unique(ks.begin(), ks.end()), ks.end());
            bit_builder bb;
            u64 ones = 0;
            for (u64 k : ks) {
                u64 istart = (k << L.lg_stride) + 1;
                auto lo = std::lower_bound(xs_.begin(), xs_.end(), istart);
                auto hi = std::upper_bound(xs_.begin(), xs_.end(),
                                           std::min(U_, istart + pow2(l) - 1));
                if (lo == hi) continue;
                cnt_interval iv;
                iv.xlo = u32(lo - xs_.begin()) + 1;
                iv.xhi = u32(hi - xs_.begin());
                u64 nk = iv.xhi - iv.xlo + 1;
                iv.sub_size = (pow2(l) + nk - 1) / nk;
                iv.bit_off = bb.size();
                iv.ones_before = ones;
                u64 span = std::min(U_ - istart + 1, pow2(l));
                u64 nsub = (span + iv.sub_size - 1) / iv.sub_size;
                auto p = lo;
                for (u64 s = 0; s < nsub; ++s) {
                    u64 send = istart + std::min(span, (s + 1) * iv.sub_size) - 1;
                    while (p != hi && *p <= send) {
                        bb.push_back(false);
                        ++p;
                    }
                    bb.push_back(true);
                    ++ones;
                }
                L.ivs.emplace(k, iv);
            }
            L.unary = std::move(bb).build();
            cnt_levels_.push_back(std::move(L));
        }
    }

    // Points of the interval lying in subintervals 0..s.
    u64 unary_prefix(const cnt_level& L, const cnt_interval& iv, u64 s,
                     query_stats* st) const {
        if (st) ++st->dict_probes;
        return L.unary.select1(iv.ones_before + s + 1) - iv.bit_off - (s + 1);
    }

    // Points of the interval in [istart, x]; x may be istart-1.
    u64 boundary_count(const cnt_level& L, const cnt_interval& iv, u64 istart,
                       u64 x, query_stats* st) const {
        if (x < istart) return 0;
        u64 off = x - istart;
        u64 s = off / iv.sub_size;
        u64 cum_prev = s == 0 ? 0 : unary_prefix(L, iv, s - 1, st);
        if (off % iv.sub_size == iv.sub_size - 1 || x == U_)
            return unary_prefix(L, iv, s, st);
        u64 sub_start = istart + s * iv.sub_size;
        if (empty_range(sub_start, x, st)) return cum_prev;
        auto pr = pred_in_range(sub_start, x, st);
        return pr->rank - (iv.xlo - 1);
    }
};

// Per-symbol occurrence counting with early abort. Symbols occurring at
// least min_count times get their own point_set, whose count_reaches can
// dismiss a below-threshold symbol from interval occupancy alone;
// everything else falls back to two wavelet-tree ranks after a global
// count check.
class symbol_counts {
public:
    symbol_counts() = default;

    symbol_counts(const sequence& seq, const std::vector<symbol_t>& data,
                  u64 min_count)
        : seq_(&seq), min_count_(min_count) {
        if (data.size() != seq.size())
            throw std::invalid_argument("symbol_counts: data length mismatch");
        std::vector<std::vector<u64>> occ;
        for (u64 k = 0; k < data.size(); ++k) {
            symbol_t c = data[k];
            if (seq.count(c) < min_count_) continue;
            if (occ.size() <= c) occ.resize(u64(c) + 1);
            occ[c].push_back(k + 1);
        }
        for (symbol_t c = 0; c < occ.size(); ++c)
            if (!occ[c].empty())
                sets_.emplace(c, point_set(std::move(occ[c]), seq.size()));
    }

    u64 min_count() const { return min_count_; }
    bool has_point_set(symbol_t c) const { return sets_.count(c) != 0; }

    // Decides occ(c, [i..j]) >= need; aborted results skipped the exact
    // count because a cheaper bound already ruled it out.
    reach_result count_reaches(symbol_t c, u64 i, u64 j, u64 need,
                               query_stats* st = nullptr) const {
        check_range(i, j, seq_->size());
        if (need == 0) return note({true, false, 0, false}, st);
        if (st) ++st->dict_probes;
        if (seq_->count(c) < need) return note({false, false, 0, true}, st);
        auto it = sets_.find(c);
        if (it != sets_.end())
            return note(it->second.count_reaches(need, i, j, st), st);
        if (st) st->dict_probes += 2;
        u64 occ = seq_->rank(c, j) - seq_->rank(c, i - 1);
        return note({occ >= need, true, occ, false}, st);
    }

private:
    const sequence* seq_ = nullptr;
    u64 min_count_ = 1;
    std::unordered_map<symbol_t, point_set> sets_;

    static reach_result note(reach_result r, query_stats* st) {
        if (st && r.aborted) ++st->checks_aborted;
        return r;
    }
};

} // namespace frq
