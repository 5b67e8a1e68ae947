#pragma once

#include <cstdint>

namespace qmin {

/// Oracle-call and comparison counters. Both only ever increase within a run.
struct QueryLedger {
    std::uint64_t oracle_queries = 0;
    std::uint64_t comparisons = 0;
};

}  // namespace qmin
