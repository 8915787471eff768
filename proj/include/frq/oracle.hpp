#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

#include "common.hpp"
#include "listing.hpp"

namespace frq::oracle {

// Linear-scan reference implementations. Everything here is written for
// obviousness, not speed; tests and the verify tool compare the real
// structures against these.

struct sym_count {
    symbol_t sym;
    u64 count;

    bool operator==(const sym_count&) const = default;
};

inline std::vector<u64> counts_in_range(const std::vector<symbol_t>& s,
                                        u64 sigma, u64 i, u64 j) {
    check_range(i, j, s.size());
    std::vector<u64> cnt(sigma + 1, 0);
    for (u64 k = i; k <= j; ++k) ++cnt[s[k - 1]];
    return cnt;
}

// Symbols whose count reaches ceil(t * (j-i+1)), ascending by symbol.
inline std::vector<sym_count> majorities(const std::vector<symbol_t>& s,
                                         u64 sigma, u64 i, u64 j, tau t) {
    auto cnt = counts_in_range(s, sigma, i, j);
    u64 need = t.threshold(j - i + 1);
    std::vector<sym_count> out;
    for (u64 c = 1; c <= sigma; ++c)
        if (cnt[c] >= need) out.push_back({symbol_t(c), cnt[c]});
    return out;
}

// Symbols present in the range but below the threshold, ascending.
inline std::vector<sym_count> minorities(const std::vector<symbol_t>& s,
                                         u64 sigma, u64 i, u64 j, tau t) {
    auto cnt = counts_in_range(s, sigma, i, j);
    u64 need = t.threshold(j - i + 1);
    std::vector<sym_count> out;
    for (u64 c = 1; c <= sigma; ++c)
        if (cnt[c] > 0 && cnt[c] < need) out.push_back({symbol_t(c), cnt[c]});
    return out;
}

// Most frequent symbol; ties go to the one appearing first in the range.
inline sym_count mode(const std::vector<symbol_t>& s, u64 sigma, u64 i,
                      u64 j) {
    auto cnt = counts_in_range(s, sigma, i, j);
    symbol_t best = 0;
    u64 bestc = 0;
    for (u64 k = i; k <= j; ++k) { // scan order makes ties go leftmost
        symbol_t c = s[k - 1];
        if (cnt[c] > bestc) {
            best = c;
            bestc = cnt[c];
        }
    }
    return {best, bestc};
}

inline std::vector<distinct_item> list_distinct(
    const std::vector<symbol_t>& s, u64 i, u64 j, u64 limit) {
    check_range(i, j, s.size());
    std::vector<distinct_item> out;
    std::vector<symbol_t> seen;
    for (u64 k = i; k <= j && out.size() < limit; ++k) {
        symbol_t c = s[k - 1];
        if (std::find(seen.begin(), seen.end(), c) == seen.end()) {
            seen.push_back(c);
            out.push_back({c, k});
        }
    }
    return out;
}

// Predecessor of j among points in [i, j], with its 1-based rank in P.
// P must be strictly increasing.
inline std::optional<std::pair<u64, u64>> pred_in_range(
    const std::vector<u64>& pts, u64 i, u64 j) {
    std::optional<std::pair<u64, u64>> best;
    for (u64 r = 0; r < pts.size(); ++r)
        if (pts[r] >= i && pts[r] <= j) best = {pts[r], r + 1};
    return best;
}

inline u64 count_in_range(const std::vector<u64>& pts, u64 i, u64 j) {
    u64 c = 0;
    for (u64 x : pts) c += (x >= i && x <= j) ? 1 : 0;
    return c;
}

inline std::optional<u64> first_in_range(const std::vector<u64>& pts, u64 i,
                                         u64 j) {
    for (u64 x : pts)
        if (x >= i && x <= j) return x;
    return std::nullopt;
}

} // namespace frq::oracle
