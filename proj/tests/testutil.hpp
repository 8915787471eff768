#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include <frq/common.hpp>

namespace tst {

// Deterministic RNG so every run exercises identical cases.
inline std::mt19937_64 make_rng(std::uint64_t seed) {
    return std::mt19937_64(seed);
}

inline std::vector<frq::symbol_t> random_seq(std::mt19937_64& rng,
                                             std::size_t n,
                                             frq::symbol_t sigma) {
    std::uniform_int_distribution<frq::symbol_t> d(1, sigma);
    std::vector<frq::symbol_t> s(n);
    for (auto& x : s) x = d(rng);
    return s;
}

// Zipf-like skew: symbol k with weight 1/k.
inline std::vector<frq::symbol_t> skewed_seq(std::mt19937_64& rng,
                                             std::size_t n,
                                             frq::symbol_t sigma) {
    std::vector<double> w(sigma);
    for (frq::symbol_t k = 0; k < sigma; ++k) w[k] = 1.0 / double(k + 1);
    std::discrete_distribution<frq::symbol_t> d(w.begin(), w.end());
    std::vector<frq::symbol_t> s(n);
    for (auto& x : s) x = d(rng) + 1;
    return s;
}

// Enumerates all sequences of a given length over symbols 1..sigma.
struct seq_enumerator {
    std::size_t len;
    frq::symbol_t sigma;
    std::vector<frq::symbol_t> cur;
    bool done = false;

    seq_enumerator(std::size_t l, frq::symbol_t s)
        : len(l), sigma(s), cur(l, 1) {}

    bool next(std::vector<frq::symbol_t>& out) {
        if (done) return false;
        out = cur;
        for (std::size_t k = len; k-- > 0;) {
            if (cur[k] < sigma) {
                ++cur[k];
                return true;
            }
            cur[k] = 1;
        }
        done = true;
        return true;
    }
};

} // namespace tst
