#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qmin/errors.hpp"
#include "qmin/ledger.hpp"
#include "qmin/qms.hpp"
#include "qmin/qram.hpp"
#include "qmin/rng.hpp"

namespace qmin {

/// Linear scan; ties resolve to the first index. Exactly N - 1 comparisons.
inline std::pair<std::uint64_t, std::size_t> classical_min_scan(std::span<const std::uint64_t> values,
                                                                QueryLedger& ledger) {
    if (values.empty()) throw InputError("minimum of an empty list");
    std::size_t best = 0;
    for (std::size_t i = 1; i < values.size(); ++i) {
        ++ledger.comparisons;
        if (values[i] < values[best]) best = i;
    }
    return {values[best], best};
}

/// Simultaneous min and max by pairs: ceil(3N/2) - 2 comparisons.
inline std::pair<std::uint64_t, std::uint64_t> classical_minmax_pairwise(std::span<const std::uint64_t> values,
                                                                         QueryLedger& ledger) {
    if (values.empty()) throw InputError("min/max of an empty list");
    std::uint64_t lo = values[0];
    std::uint64_t hi = values[0];
    std::size_t i = 1;
    if (values.size() % 2 == 0) {
        ++ledger.comparisons;
        if (values[1] < values[0]) lo = values[1];
        else hi = values[1];
        i = 2;
    }
    for (; i + 1 < values.size(); i += 2) {
        auto a = values[i];
        auto b = values[i + 1];
        ++ledger.comparisons;
        if (b < a) std::swap(a, b);
        ledger.comparisons += 2;
        lo = std::min(lo, a);
        hi = std::max(hi, b);
    }
    return {lo, hi};
}

inline std::uint64_t pairwise_comparison_count(std::uint64_t N) {
    return N <= 1 ? 0 : (3 * N + 1) / 2 - 2;
}

/// Query-count model of Durr-Hoyer minimum finding. Each round charges
/// ceil(sqrt(N / t)) oracle queries, t being the number of values below the
/// current threshold, and moves the threshold to a uniformly drawn one of
/// them (what an ideal Grover search would return).
inline std::uint64_t durr_hoyer_reference(std::span<const std::uint64_t> values, std::size_t first_guess,
                                          Rng& rng, QueryLedger& ledger) {
    if (values.empty()) throw InputError("minimum of an empty list");
    detail::require(first_guess < values.size(), "first guess out of range");
    const double N = static_cast<double>(values.size());
    std::uint64_t threshold = values[first_guess];
    std::vector<std::uint64_t> below;
    for (;;) {
        below.clear();
        for (auto v : values)
            if (v < threshold) below.push_back(v);
        if (below.empty()) return threshold;
        ledger.oracle_queries += static_cast<std::uint64_t>(std::ceil(std::sqrt(N / static_cast<double>(below.size()))));
        threshold = below[uniform_below(rng, below.size())];
    }
}

inline std::uint64_t durr_hoyer_reference(std::span<const std::uint64_t> values, std::uint64_t seed,
                                          QueryLedger& ledger) {
    if (values.empty()) throw InputError("minimum of an empty list");
    Rng rng(derive_seed(seed, "durr-hoyer"));
    const auto first = static_cast<std::size_t>(uniform_below(rng, values.size()));
    return durr_hoyer_reference(values, first, rng, ledger);
}

struct BenchRecord {
    std::uint64_t N = 0;
    unsigned m = 0;
    std::uint64_t classical_lo = 0;
    std::uint64_t classical_hi = 0;
    double quantum_queries = 0.0;  ///< mean over trials
    unsigned c_q = 0;
};

struct BenchMeta {
    std::uint64_t seed = 0;
    unsigned trials = 0;
    unsigned retries = 0;
};

inline constexpr unsigned kBenchRetries = 3;

/// Uniform random m-bit datasets of size 2^n for every n in `n_range`; QMS
/// runs in RandomizedBBHT mode. Records come back sorted by N.
inline std::vector<BenchRecord> bench_sweep(std::span<const unsigned> n_range, unsigned m, unsigned trials,
                                            std::uint64_t seed) {
    if (n_range.empty()) throw InputError("empty address-width range");
    if (trials < 1) throw InputError("need at least one trial");
    if (m < 1 || m > 63) throw InputError("bit width must be in 1..63");
    for (unsigned n : n_range) {
        if (n < 1) throw InputError("address width must be at least 1");
        if (n + m + 1 > kMaxQubits)
            throw ResourceError("n = " + std::to_string(n) + " needs " + std::to_string(n + m + 1) +
                                " qubits, above the " + std::to_string(kMaxQubits) + "-qubit cap");
    }

    std::vector<unsigned> widths(n_range.begin(), n_range.end());
    std::sort(widths.begin(), widths.end());
    widths.erase(std::unique(widths.begin(), widths.end()), widths.end());

    std::vector<BenchRecord> records;
    for (unsigned n : widths) {
        const std::uint64_t N = std::uint64_t{1} << n;
        BenchRecord rec{N, m, 0, 0, 0.0, m};
        std::uint64_t total = 0;
        for (unsigned trial = 0; trial < trials; ++trial) {
            Rng rng(derive_seed(seed, "bench-trial", (std::uint64_t{n} << 32) | trial));
            std::vector<std::uint64_t> values(N);
            for (auto& v : values) v = rng() >> (64 - m);

            QueryLedger lo, hi;
            classical_min_scan(values, lo);
            classical_minmax_pairwise(values, hi);
            rec.classical_lo = lo.comparisons;
            rec.classical_hi = hi.comparisons;

            QmsConfig cfg;
            cfg.mode = IterationMode::RandomizedBBHT;
            cfg.retries = kBenchRetries;
            cfg.seed = rng();
            total += run_descent(plan_dataset(values, m), cfg).total_queries;
        }
        rec.quantum_queries = static_cast<double>(total) / static_cast<double>(trials);
        records.push_back(rec);
    }
    return records;
}

/// Header `N,m,classical_lo,classical_hi,quantum_queries,c_q`, preceded by a
/// `#` metadata line when `meta` is given.
inline void emit_bench_csv(std::span<const BenchRecord> records, const std::string& path,
                           const std::optional<BenchMeta>& meta = std::nullopt) {
    if (records.empty()) throw InputError("no benchmark records to write");
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open " + path + " for writing");
    if (meta)
        out << "# seed=" << meta->seed << ",trials=" << meta->trials << ",retries=" << meta->retries
            << ",mode=bbht,distribution=uniform-m-bit\n";
    out << "N,m,classical_lo,classical_hi,quantum_queries,c_q\n";
    char buf[64];
    for (const auto& r : records) {
        std::snprintf(buf, sizeof buf, "%.4f", r.quantum_queries);
        out << r.N << ',' << r.m << ',' << r.classical_lo << ',' << r.classical_hi << ',' << buf << ','
            << r.c_q << '\n';
    }
    if (!out) throw IoError("failed writing " + path);
}

}  // namespace qmin
