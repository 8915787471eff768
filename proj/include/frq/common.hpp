#pragma once

#include <cstdint>
#include <bit>
#include <stdexcept>
#include <string>
#include <string_view>
#include <numeric>

namespace frq {

using symbol_t = std::uint32_t;
using u64 = std::uint64_t;
using u32 = std::uint32_t;

inline u64 floor_log2(u64 x) {
    if (x == 0) throw std::invalid_argument("floor_log2: zero");
    return 63u - static_cast<u64>(std::countl_zero(x));
}

inline u64 ceil_log2(u64 x) {
    if (x == 0) throw std::invalid_argument("ceil_log2: zero");
    if (x == 1) return 0;
    return floor_log2(x - 1) + 1;
}

// Frequency threshold as an exact rational num/den with 0 < num <= den.
// All comparisons use 128-bit products, so no rounding ever occurs.
struct tau {
    u64 num = 1;
    u64 den = 2;

    tau() = default;
    tau(u64 n, u64 d) : num(n), den(d) {
        if (n == 0 || d == 0 || n > d)
            throw std::invalid_argument("tau: need 0 < num <= den");
        u64 g = std::gcd(num, den);
        num /= g;
        den /= g;
    }

    // Accepts "p/q" or a decimal like "0.25" / ".5" / "1".
    static tau parse(std::string_view s) {
        if (s.empty()) throw std::invalid_argument("tau: empty string");
        auto digits = [](std::string_view v) {
            if (v.empty()) return false;
            for (char c : v)
                if (c < '0' || c > '9') return false;
            return true;
        };
        auto to_u64 = [](std::string_view v) {
            u64 r = 0;
            for (char c : v) {
                if (r > (UINT64_MAX - 9) / 10)
                    throw std::invalid_argument("tau: overflow");
                r = r * 10 + static_cast<u64>(c - '0');
            }
            return r;
        };
        if (auto slash = s.find('/'); slash != std::string_view::npos) {
            auto p = s.substr(0, slash), q = s.substr(slash + 1);
            if (!digits(p) || !digits(q))
                throw std::invalid_argument("tau: bad fraction '" + std::string(s) + "'");
            return tau(to_u64(p), to_u64(q));
        }
        if (auto dot = s.find('.'); dot != std::string_view::npos) {
            auto ip = s.substr(0, dot), fp = s.substr(dot + 1);
            if ((!ip.empty() && !digits(ip)) || !digits(fp) || (ip.empty() && fp.empty()))
                throw std::invalid_argument("tau: bad decimal '" + std::string(s) + "'");
            if (fp.size() > 18) throw std::invalid_argument("tau: too many decimals");
            u64 den = 1;
            for (size_t i = 0; i < fp.size(); ++i) den *= 10;
            u64 whole = ip.empty() ? 0 : to_u64(ip);
            return tau(whole * den + to_u64(fp), den);
        }
        if (!digits(s)) throw std::invalid_argument("tau: bad value '" + std::string(s) + "'");
        return tau(to_u64(s), 1);
    }

    // ceil(tau * len): the occurrence count a tau-majority must reach.
    u64 threshold(u64 len) const {
        unsigned __int128 t = static_cast<unsigned __int128>(num) * len;
        return static_cast<u64>((t + den - 1) / den);
    }

    // count >= tau * len, exactly.
    bool count_meets(u64 count, u64 len) const {
        return static_cast<unsigned __int128>(count) * den >=
               static_cast<unsigned __int128>(num) * len;
    }

    // count >= tau * 2^b, exactly.
    bool meets_pow2(u64 count, u64 b) const {
        return static_cast<unsigned __int128>(count) * den >=
               (static_cast<unsigned __int128>(num) << b);
    }

    // floor(1/tau)
    u64 inv_floor() const { return den / num; }

    // smallest t >= 0 with 2^t >= 1/tau, i.e. num * 2^t >= den.
    u64 inv_ceil_log2() const {
        u64 t = 0;
        unsigned __int128 v = num;
        while (v < den) {
            v <<= 1;
            ++t;
        }
        return t;
    }

    // 1/tau >= sigma, i.e. den >= num * sigma.
    bool ge_inv_sigma(u64 sigma) const {
        return static_cast<unsigned __int128>(den) >=
               static_cast<unsigned __int128>(num) * sigma;
    }

    std::string str() const {
        return std::to_string(num) + "/" + std::to_string(den);
    }

    bool operator==(const tau&) const = default;
};

// Validates a 1-based inclusive range over a sequence of length n.
inline void check_range(u64 i, u64 j, u64 n) {
    if (i < 1 || j < i || j > n)
        throw std::out_of_range("range [" + std::to_string(i) + "," +
                                std::to_string(j) + "] invalid for length " +
                                std::to_string(n));
}

} // namespace frq
