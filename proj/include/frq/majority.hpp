#pragma once

#include <algorithm>
#include <stdexcept>
#include <unordered_map>
#include <utility>
#include <vector>

#include "bitvec.hpp"
#include "common.hpp"
#include "listing.hpp"
#include "predcount.hpp"
#include "query_stats.hpp"
#include "rmq.hpp"
#include "sequence.hpp"

namespace frq {

struct majority_item {
    symbol_t sym;
    u64 pos;   // leftmost occurrence inside the query range
    u64 count; // exact occurrence count inside the query range
    bool operator==(const majority_item&) const = default;
};

struct check_result {
    bool is_majority;
    symbol_t sym;
    u64 partial_rank;
};

// Decide whether seq[k] occurs at least `need` times in [k..j] using one
// symbol walk plus at most one select. Exact when k is the leftmost
// occurrence of its symbol in [i..j]; for a later occurrence it can only
// under-report, so it never certifies a false majority.
inline check_result check_candidate(const sequence& seq, u64 k, u64 i, u64 j,
                                    u64 need, query_stats* st = nullptr) {
    check_range(i, j, seq.size());
    if (k < i || k > j) throw std::out_of_range("check_candidate: k");
    if (st) ++st->candidates_checked;
    auto [a, pr] = seq.sym_and_rank(k);
    u64 target = pr + need - 1;
    if (target > seq.count(a)) return {false, a, pr};
    return {seq.rank(a, j) >= target, a, pr};
}

// Occurrences of `a` in [k..j] given rank(a, k) = partial_rank.
inline u64 count_from(const sequence& seq, symbol_t a, u64 partial_rank,
                      u64 j) {
    return seq.rank(a, j) - partial_rank + 1;
}

namespace detail {

// One descent step remembered on the way down, enough to map a leaf-level
// index back to the parent level: node start `lo`, zeros before it `zlo`,
// the taken child's start `clo`, and which child was taken.
struct descent_step {
    u64 lo, zlo, clo;
    bool right;
};

inline void threshold_dfs(const sequence& seq, u64 level, u64 lo, u64 hi,
                          u64 ql, u64 qh, symbol_t code, u64 need,
                          std::vector<descent_step>& path,
                          std::vector<majority_item>& out, query_stats* st) {
    if (level == seq.width()) {
        if (st) ++st->candidates_checked;
        // Map the leftmost in-range element of this leaf back to a root
        // position along the recorded path; cheaper than a fresh select,
        // which would repeat the downward rank walk we just did.
        u64 idx = ql;
        for (u64 l = path.size(); l-- > 0;) {
            const bitvec& bv = seq.levels()[l];
            u64 q = idx - path[l].clo;
            idx = path[l].right
                      ? bv.select1(path[l].lo - path[l].zlo + q + 1) - 1
                      : bv.select0(path[l].zlo + q + 1) - 1;
        }
        out.push_back({symbol_t(code + 1), idx + 1, qh - ql});
        return;
    }
    const bitvec& bv = seq.levels()[level];
    u64 zlo = bv.rank0(lo), zhi = bv.rank0(hi);
    u64 zql = bv.rank0(ql), zqh = bv.rank0(qh);
    u64 z = zhi - zlo;
    u64 ll = lo + (zql - zlo), lh = lo + (zqh - zlo);
    u64 rl = lo + z + (ql - lo) - (zql - zlo);
    u64 rh = lo + z + (qh - lo) - (zqh - zlo);
    if (lh - ll >= need) {
        path.push_back({lo, zlo, lo, false});
        threshold_dfs(seq, level + 1, lo, lo + z, ll, lh, symbol_t(code << 1),
                      need, path, out, st);
        path.pop_back();
    }
    if (rh - rl >= need) {
        path.push_back({lo, zlo, lo + z, true});
        threshold_dfs(seq, level + 1, lo + z, hi, rl, rh,
                      symbol_t(code << 1 | 1), need, path, out, st);
        path.pop_back();
    }
}

} // namespace detail

// Every symbol occurring at least `need` times in [i..j], with its exact
// count and leftmost in-range position. One walk down the sequence levels,
// pruning any node whose mapped range is already shorter than `need`, so
// rejected symbols only pay for the prefix they share with survivors.
// Result comes out in symbol order.
inline std::vector<majority_item> threshold_report(const sequence& seq, u64 i,
                                                   u64 j, u64 need,
                                                   query_stats* st = nullptr) {
    check_range(i, j, seq.size());
    if (need == 0) throw std::invalid_argument("threshold_report: need");
    std::vector<majority_item> out;
    if (j - i + 1 < need) return out;
    if (seq.width() == 0) {
        if (st) ++st->candidates_checked;
        out.push_back({1, i, j - i + 1});
        return out;
    }
    std::vector<detail::descent_step> path;
    path.reserve(seq.width());
    detail::threshold_dfs(seq, 0, 0, seq.size(), i - 1, j, 0, need, path, out,
                          st);
    return out;
}

namespace detail {

inline void sort_by_pos(std::vector<majority_item>& items) {
    std::sort(items.begin(), items.end(),
              [](const majority_item& x, const majority_item& y) {
                  return x.pos < y.pos;
              });
}

inline std::vector<std::vector<u32>> occurrence_lists(
    const std::vector<symbol_t>& data, u64 sigma) {
    if (data.size() >= UINT32_MAX - 1)
        throw std::invalid_argument("occurrence_lists: sequence too long");
    std::vector<std::vector<u32>> occ(sigma + 1);
    for (u64 k = 0; k < data.size(); ++k) {
        if (data[k] < 1 || data[k] > sigma)
            throw std::invalid_argument("occurrence_lists: symbol range");
        occ[data[k]].push_back(u32(k + 1));
    }
    return occ;
}

// out[k-1] = occurrences of data[k-1] in [k, min(n, k+w-1)].
inline void forward_window_counts(const std::vector<std::vector<u32>>& occ,
                                  u64 n, u64 w, std::vector<u32>& out) {
    out.assign(n, 0);
    for (const auto& lst : occ) {
        u64 e = 0;
        for (u64 q = 0; q < lst.size(); ++q) {
            u64 last = u64(lst[q]) + w - 1;
            while (e < lst.size() && lst[e] <= last) ++e;
            out[lst[q] - 1] = u32(e - q);
        }
    }
}

// out[k-1] = occurrences of data[k-1] in [max(1, k-r), min(n, k+r)].
inline void centered_window_counts(const std::vector<std::vector<u32>>& occ,
                                   u64 n, u64 r, std::vector<u32>& out) {
    out.assign(n, 0);
    for (const auto& lst : occ) {
        u64 lo = 0, e = 0;
        for (u64 q = 0; q < lst.size(); ++q) {
            u64 p = lst[q];
            u64 from = p > r ? p - r : 1;
            while (lo < lst.size() && lst[lo] < from) ++lo;
            while (e < lst.size() && u64(lst[e]) <= p + r) ++e;
            out[p - 1] = u32(e - lo);
        }
    }
}

// Links of the flagged subsequence: for each set bit of `flags` in order,
// the rank (within the subsequence) of the previous set bit holding the
// same symbol, 0 if none. `last_seen` must be sigma+1 zeros and is left
// zeroed again on return.
inline rmq_index<u32> build_subc(const bitvec& flags,
                                 const std::vector<symbol_t>& data,
                                 std::vector<u32>& last_seen,
                                 std::vector<symbol_t>& touched) {
    std::vector<u32> links;
    links.reserve(flags.ones());
    flags.for_each_one([&](u64 k) {
        symbol_t c = data[k - 1];
        if (last_seen[c] == 0) touched.push_back(c);
        links.push_back(last_seen[c]);
        last_seen[c] = u32(links.size());
    });
    for (symbol_t c : touched) last_seen[c] = 0;
    touched.clear();
    return rmq_index<u32>(std::move(links));
}

} // namespace detail

// Exact threshold majorities of data[i..j]: counter elimination with
// floor(1/tau) counters, then a recount pass over the survivors.
inline std::vector<majority_item> misra_gries(const std::vector<symbol_t>& data,
                                              u64 i, u64 j, tau t) {
    check_range(i, j, data.size());
    u64 budget = t.inv_floor();
    std::vector<std::pair<symbol_t, u64>> ctr;
    for (u64 k = i; k <= j; ++k) {
        symbol_t c = data[k - 1];
        auto it = std::find_if(ctr.begin(), ctr.end(),
                               [&](const auto& p) { return p.first == c; });
        if (it != ctr.end()) {
            ++it->second;
        } else if (ctr.size() < budget) {
            ctr.push_back({c, 1});
        } else {
            for (auto& p : ctr) --p.second;
            std::erase_if(ctr, [](const auto& p) { return p.second == 0; });
        }
    }
    u64 need = t.threshold(j - i + 1);
    std::vector<majority_item> out;
    for (const auto& [c, unused] : ctr) {
        u64 occ = 0, first = 0;
        for (u64 k = i; k <= j; ++k)
            if (data[k - 1] == c) {
                if (occ == 0) first = k;
                ++occ;
            }
        if (occ >= need) out.push_back({c, first, occ});
    }
    detail::sort_by_pos(out);
    return out;
}

// Same over an indexed sequence; the recount pass uses rank differences.
inline std::vector<majority_item> misra_gries(const sequence& seq, u64 i,
                                              u64 j, tau t,
                                              query_stats* st = nullptr) {
    check_range(i, j, seq.size());
    u64 budget = t.inv_floor();
    std::vector<std::pair<symbol_t, u64>> ctr;
    for (u64 k = i; k <= j; ++k) {
        symbol_t c = seq.access(k);
        if (st) ++st->cells_scanned;
        auto it = std::find_if(ctr.begin(), ctr.end(),
                               [&](const auto& p) { return p.first == c; });
        if (it != ctr.end()) {
            ++it->second;
        } else if (ctr.size() < budget) {
            ctr.push_back({c, 1});
        } else {
            for (auto& p : ctr) --p.second;
            std::erase_if(ctr, [](const auto& p) { return p.second == 0; });
        }
    }
    u64 need = t.threshold(j - i + 1);
    std::vector<majority_item> out;
    for (const auto& [c, unused] : ctr) {
        if (st) ++st->candidates_checked;
        u64 before = seq.rank(c, i - 1);
        u64 occ = seq.rank(c, j) - before;
        if (occ >= need) out.push_back({c, seq.select(c, before + 1), occ});
    }
    detail::sort_by_pos(out);
    return out;
}

// Majorities for one threshold fixed at build time. Level b flags the
// positions whose symbol repeats at least tau * 2^b times in the forward
// window of length 2^(b+1); a query walks the first in-window flagged
// occurrence of each flagged symbol and verifies it.
class fixed_majority_index {
public:
    fixed_majority_index(const sequence& seq, const std::vector<symbol_t>& data,
                         tau t)
        : seq_(&seq), tau_(t) {
        build(data);
    }

    // Rebuild the query-side tables from previously stored flag levels.
    fixed_majority_index(const sequence& seq, tau t,
                         std::vector<bitvec> flag_levels)
        : seq_(&seq), tau_(t) {
        u64 want = floor_log2(seq.size()) + 1;
        if (flag_levels.size() != want)
            throw std::invalid_argument("fixed_majority_index: level count");
        for (const auto& f : flag_levels)
            if (f.size() != seq.size())
                throw std::invalid_argument("fixed_majority_index: level size");
        adopt(seq.decode(), std::move(flag_levels));
    }

    u64 levels() const { return lv_.size(); }
    const bitvec& flags(u64 b) const { return lv_.at(b).flags; }
    tau threshold() const { return tau_; }

    std::vector<majority_item> query(u64 i, u64 j,
                                     query_stats* st = nullptr) const {
        check_range(i, j, seq_->size());
        u64 need = tau_.threshold(j - i + 1);
        const level& L = lv_[floor_log2(j - i + 1)];
        std::vector<majority_item> out;
        u64 lo = L.flags.rank1(i - 1) + 1, hi = L.flags.rank1(j);
        walk_flagged(
            L.subc, lo, hi,
            [&](u64 m) {
                u64 k = L.flags.select1(m);
                auto cr = check_candidate(*seq_, k, i, j, need, st);
                if (cr.is_majority)
                    out.push_back(
                        {cr.sym, k, count_from(*seq_, cr.sym, cr.partial_rank, j)});
                return true;
            },
            st);
        detail::sort_by_pos(out);
        return out;
    }

private:
    struct level {
        bitvec flags;
        rmq_index<u32> subc;
    };

    const sequence* seq_;
    tau tau_;
    std::vector<level> lv_;

    void build(const std::vector<symbol_t>& data) {
        u64 n = seq_->size();
        auto occ = detail::occurrence_lists(data, seq_->sigma());
        std::vector<bitvec> flag_levels;
        std::vector<u32> cnt;
        for (u64 b = 0; b <= floor_log2(n); ++b) {
            detail::forward_window_counts(occ, n, u64(1) << (b + 1), cnt);
            bit_builder bb;
            for (u64 k = 0; k < n; ++k) bb.push_back(tau_.meets_pow2(cnt[k], b));
            flag_levels.push_back(std::move(bb).build());
        }
        adopt(data, std::move(flag_levels));
    }

    void adopt(const std::vector<symbol_t>& data, std::vector<bitvec> levels) {
        std::vector<u32> last_seen(seq_->sigma() + 1, 0);
        std::vector<symbol_t> touched;
        lv_.reserve(levels.size());
        for (auto& f : levels) {
            auto subc = detail::build_subc(f, data, last_seen, touched);
            lv_.push_back({std::move(f), std::move(subc)});
        }
    }
};

// Majorities for a threshold chosen at query time. Per window scale b,
// every position gets one band code recording how often its symbol
// repeats in the forward window of length 2^(b+1): band 0 for counts of
// at least 2^b, band t in [1, band_limit] for counts in
// [2^(b-t), 2^(b-t+1)), and a sentinel below that. A query consults
// bands 0..min(ceil(log2(1/tau)), band_limit) and verifies the first
// in-window flagged occurrence of every flagged symbol; thresholds below
// 1/sigma skip the bands and list every distinct symbol instead.
class variable_majority_index {
public:
    variable_majority_index(const sequence& seq,
                            const std::vector<symbol_t>& data)
        : seq_(&seq) {
        init();
        auto occ = detail::occurrence_lists(data, seq_->sigma());
        crmq_ = rmq_index<u32>(prev_occ_array(data, seq_->sigma()));
        std::vector<u32> cnt;
        std::vector<u32> last_seen(seq_->sigma() + 1, 0);
        std::vector<symbol_t> touched;
        for (u64 b = 0; b <= bmax_; ++b) {
            detail::forward_window_counts(occ, n_, u64(1) << (b + 1), cnt);
            std::vector<symbol_t> codes(n_);
            for (u64 k = 0; k < n_; ++k) codes[k] = band_code(cnt[k], b);
            sequence cs(codes, tmax_ + 2);
            add_level(data, codes, std::move(cs), last_seen, touched);
        }
    }

    // Rebuild the query-side tables from previously stored band levels.
    variable_majority_index(const sequence& seq,
                            std::vector<sequence> band_levels)
        : seq_(&seq) {
        init();
        if (band_levels.size() != bmax_ + 1)
            throw std::invalid_argument("variable_majority_index: level count");
        for (const auto& lv : band_levels)
            if (lv.size() != n_ || lv.sigma() != tmax_ + 2)
                throw std::invalid_argument("variable_majority_index: level shape");
        std::vector<symbol_t> data = seq.decode();
        crmq_ = rmq_index<u32>(prev_occ_array(data, seq_->sigma()));
        std::vector<u32> last_seen(seq_->sigma() + 1, 0);
        std::vector<symbol_t> touched;
        for (auto& lv : band_levels) {
            std::vector<symbol_t> codes = lv.decode();
            add_level(data, codes, std::move(lv), last_seen, touched);
        }
    }

    u64 levels() const { return lv_.size(); }
    u64 band_limit() const { return tmax_; }
    const sequence& band_seq(u64 b) const { return lv_.at(b).codes; }
    const bitvec& band_flags(u64 b, u64 t) const {
        return lv_.at(b).bands.at(t).flags;
    }
    const rmq_index<u32>& first_occ_links() const { return crmq_; }

    // Distinct verification candidates with the smallest flagged position
    // seen for each; for a true majority that position is its leftmost
    // occurrence in [i..j].
    std::vector<std::pair<symbol_t, u64>> candidates(
        u64 i, u64 j, tau t, query_stats* st = nullptr) const {
        check_range(i, j, n_);
        std::vector<std::pair<symbol_t, u64>> out;
        if (t.ge_inv_sigma(seq_->sigma())) {
            for (const auto& it :
                 list_distinct(*seq_, crmq_, i, j, seq_->sigma(), st))
                out.push_back({it.sym, it.pos});
            return out;
        }
        u64 tq = std::min(t.inv_ceil_log2(), tmax_);
        const level& L = lv_[floor_log2(j - i + 1)];
        std::unordered_map<symbol_t, u64> at;
        for (u64 tp = 0; tp <= tq; ++tp) {
            const band& B = L.bands[tp];
            u64 lo = B.flags.rank1(i - 1) + 1, hi = B.flags.rank1(j);
            if (lo > hi) continue;
            walk_flagged(
                B.subc, lo, hi,
                [&](u64 m) {
                    u64 k = B.flags.select1(m);
                    symbol_t c = seq_->access(k);
                    auto [it, fresh] = at.try_emplace(c, out.size());
                    if (fresh)
                        out.push_back({c, k});
                    else if (k < out[it->second].second)
                        out[it->second].second = k;
                    return true;
                },
                st);
        }
        return out;
    }

    std::vector<majority_item> query(u64 i, u64 j, tau t,
                                     query_stats* st = nullptr) const {
        check_range(i, j, n_);
        u64 need = t.threshold(j - i + 1);
        if (t.ge_inv_sigma(seq_->sigma())) {
            auto out = threshold_report(*seq_, i, j, need, st);
            detail::sort_by_pos(out);
            return out;
        }
        std::vector<majority_item> out;
        for (const auto& [c, k] : candidates(i, j, t, st)) {
            auto cr = check_candidate(*seq_, k, i, j, need, st);
            if (cr.is_majority)
                out.push_back({c, k, count_from(*seq_, c, cr.partial_rank, j)});
        }
        detail::sort_by_pos(out);
        return out;
    }

private:
    struct band {
        bitvec flags;
        rmq_index<u32> subc;
    };
    struct level {
        sequence codes;
        std::vector<band> bands;
    };

    const sequence* seq_;
    u64 n_ = 0, bmax_ = 0, tmax_ = 0;
    std::vector<level> lv_;
    rmq_index<u32> crmq_;

    void init() {
        n_ = seq_->size();
        bmax_ = floor_log2(n_);
        tmax_ = ceil_log2(seq_->sigma());
        lv_.reserve(bmax_ + 1);
    }

    symbol_t band_code(u64 cnt, u64 b) const {
        if (cnt >> b) return 2; // band 0, count >= 2^b
        u64 t = b - floor_log2(cnt);
        return t <= tmax_ ? symbol_t(t + 2) : symbol_t(1);
    }

    void add_level(const std::vector<symbol_t>& data,
                   const std::vector<symbol_t>& codes, sequence codes_seq,
                   std::vector<u32>& last_seen,
                   std::vector<symbol_t>& touched) {
        std::vector<band> bands;
        bands.reserve(tmax_ + 1);
        for (u64 t = 0; t <= tmax_; ++t) {
            bit_builder bb;
            symbol_t code = symbol_t(t + 2);
            for (u64 k = 0; k < n_; ++k) bb.push_back(codes[k] == code);
            bitvec f = std::move(bb).build();
            auto subc = detail::build_subc(f, data, last_seen, touched);
            bands.push_back({std::move(f), std::move(subc)});
        }
        lv_.push_back({std::move(codes_seq), std::move(bands)});
    }
};

// Majorities for a threshold chosen at query time, organised so that one
// flag row answers each query. Row (t, b) flags positions whose symbol
// repeats at least 2^(b-t) times in the centered window of radius
// 2^(b+1) and which are the first or last occurrence of that symbol in
// their aligned block of length 2^(b-1). Rows exist for
// b >= t + floor(log2(slack)); shorter ranges fall back to a two-pass
// counter scan, and thresholds below 1/sigma list every distinct symbol.
// Verification uses rank differences, so any flagged occurrence of a
// symbol certifies it.
class block_majority_index {
public:
    block_majority_index(const sequence& seq, const std::vector<symbol_t>& data,
                         u64 slack = 4)
        : seq_(&seq), g_(slack) {
        init();
        auto occ = detail::occurrence_lists(data, seq_->sigma());
        std::vector<u32> prev = prev_occ_array(data, seq_->sigma());
        crmq_ = rmq_index<u32>(std::vector<u32>(prev));
        std::vector<u32> next(n_);
        {
            std::vector<u32> seen(seq_->sigma() + 1, u32(n_ + 1));
            for (u64 k = n_; k >= 1; --k) {
                next[k - 1] = seen[data[k - 1]];
                seen[data[k - 1]] = u32(k);
            }
        }
        std::vector<u32> cnt;
        std::vector<u32> last_seen(seq_->sigma() + 1, 0);
        std::vector<symbol_t> touched;
        for (u64 b = bmin(0); b <= bmax_; ++b) {
            detail::centered_window_counts(occ, n_, u64(1) << (b + 1), cnt);
            u64 blk = b >= 1 ? u64(1) << (b - 1) : 1;
            for (u64 t = 0; t <= std::min(tmax_, b - bmin(0)); ++t) {
                u64 need = u64(1) << (b - t);
                bit_builder bb;
                for (u64 k = 1; k <= n_; ++k) {
                    u64 s = ((k - 1) / blk) * blk + 1;
                    bool edge = prev[k - 1] < s || next[k - 1] > s + blk - 1;
                    bb.push_back(edge && cnt[k - 1] >= need);
                }
                bitvec f = std::move(bb).build();
                auto subc = detail::build_subc(f, data, last_seen, touched);
                rows_[t].push_back({std::move(f), std::move(subc)});
            }
        }
    }

    // Rebuild the query-side tables from previously stored flag rows.
    block_majority_index(const sequence& seq, u64 slack,
                         std::vector<std::vector<bitvec>> flag_rows)
        : seq_(&seq), g_(slack) {
        init();
        if (flag_rows.size() != tmax_ + 1)
            throw std::invalid_argument("block_majority_index: row count");
        for (u64 t = 0; t <= tmax_; ++t) {
            if (flag_rows[t].size() != row_count(t))
                throw std::invalid_argument("block_majority_index: row length");
            for (const auto& f : flag_rows[t])
                if (f.size() != n_)
                    throw std::invalid_argument("block_majority_index: row size");
        }
        std::vector<symbol_t> data = seq.decode();
        crmq_ = rmq_index<u32>(prev_occ_array(data, seq_->sigma()));
        std::vector<u32> last_seen(seq_->sigma() + 1, 0);
        std::vector<symbol_t> touched;
        for (u64 t = 0; t <= tmax_; ++t)
            for (auto& f : flag_rows[t]) {
                auto subc = detail::build_subc(f, data, last_seen, touched);
                rows_[t].push_back({std::move(f), std::move(subc)});
            }
    }

    u64 slack() const { return g_; }
    u64 band_limit() const { return tmax_; }
    u64 bmin(u64 t) const { return t + glog_; }
    u64 row_count(u64 t) const {
        return bmin(t) > bmax_ ? 0 : bmax_ - bmin(t) + 1;
    }
    const bitvec& flags(u64 t, u64 b) const {
        return rows_.at(t).at(b - bmin(t)).flags;
    }

    std::vector<majority_item> query(u64 i, u64 j, tau t,
                                     query_stats* st = nullptr) const {
        check_range(i, j, n_);
        u64 need = t.threshold(j - i + 1);
        std::vector<majority_item> out;
        if (t.ge_inv_sigma(seq_->sigma())) {
            out = threshold_report(*seq_, i, j, need, st);
            detail::sort_by_pos(out);
            return out;
        }
        u64 b = floor_log2(j - i + 1), tq = t.inv_ceil_log2();
        if (b < bmin(tq)) return misra_gries(*seq_, i, j, t, st);
        const row& R = rows_[tq][b - bmin(tq)];
        u64 lo = R.flags.rank1(i - 1) + 1, hi = R.flags.rank1(j);
        std::vector<symbol_t> cand;
        walk_flagged(
            R.subc, lo, hi,
            [&](u64 m) {
                cand.push_back(seq_->access(R.flags.select1(m)));
                return true;
            },
            st);
        std::sort(cand.begin(), cand.end());
        cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
        for (symbol_t c : cand) {
            if (st) ++st->candidates_checked;
            u64 before = seq_->rank(c, i - 1);
            u64 occ = seq_->rank(c, j) - before;
            if (occ >= need)
                out.push_back({c, seq_->select(c, before + 1), occ});
        }
        detail::sort_by_pos(out);
        return out;
    }

private:
    struct row {
        bitvec flags;
        rmq_index<u32> subc;
    };

    const sequence* seq_;
    u64 g_;
    u64 n_ = 0, bmax_ = 0, tmax_ = 0, glog_ = 0;
    std::vector<std::vector<row>> rows_;
    rmq_index<u32> crmq_;

    void init() {
        if (g_ == 0) throw std::invalid_argument("block_majority_index: slack");
        n_ = seq_->size();
        bmax_ = floor_log2(n_);
        tmax_ = ceil_log2(seq_->sigma());
        glog_ = floor_log2(g_);
        rows_.assign(tmax_ + 1, {});
    }
};

// Mode of the range provided its relative frequency is at least 1/2^T
// for a small T: halve the threshold until some majority shows up, then
// take the best verified count. Ties resolve to the symbol appearing
// first in the range.
inline majority_item query_mode_frequent(const variable_majority_index& vi,
                                         u64 i, u64 j,
                                         query_stats* st = nullptr) {
    for (u64 T = 0; T < 64; ++T) {
        auto items = vi.query(i, j, tau{1, u64(1) << T}, st);
        if (items.empty()) continue;
        majority_item best = items.front();
        for (const auto& it : items)
            if (it.count > best.count ||
                (it.count == best.count && it.pos < best.pos))
                best = it;
        return best;
    }
    throw std::logic_error("query_mode_frequent: unreachable");
}

// Variable-threshold majorities verified through per-symbol position
// counting instead of select probes; sparse symbols abort their check
// early and are reported through stats.checks_aborted.
inline std::vector<majority_item> query_majority_sensitive(
    const variable_majority_index& vi, const symbol_counts& sc, u64 i, u64 j,
    tau t, query_stats* st = nullptr) {
    auto cands = vi.candidates(i, j, t, st);
    u64 need = t.threshold(j - i + 1);
    std::vector<majority_item> out;
    for (const auto& [c, k] : cands) {
        if (st) ++st->candidates_checked;
        auto rr = sc.count_reaches(c, i, j, need, st);
        if (rr.reaches) out.push_back({c, k, rr.count});
    }
    detail::sort_by_pos(out);
    return out;
}

} // namespace frq
