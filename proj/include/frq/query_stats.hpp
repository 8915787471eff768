#pragma once

#include <cstdint>

namespace frq {

// Work counters shared by all query paths. Callers pass a pointer
// (or nullptr) and read the fields after the call; queries only add,
// so one struct can accumulate across several calls.
struct query_stats {
    std::uint64_t dict_probes = 0;       // hash/bitvector directory lookups
    std::uint64_t binsearch_steps = 0;   // halving steps in binary searches
    std::uint64_t cells_scanned = 0;     // raw sequence cells touched
    std::uint64_t rmq_queries = 0;       // range-minimum probes
    std::uint64_t candidates_checked = 0; // per-candidate verifications started
    std::uint64_t checks_aborted = 0;    // verifications cut short by a bound

    void reset() { *this = query_stats{}; }
};

} // namespace frq
