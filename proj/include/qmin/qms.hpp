#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qmin/errors.hpp"
#include "qmin/ledger.hpp"
#include "qmin/qram.hpp"
#include "qmin/rng.hpp"
#include "qmin/statevector.hpp"

namespace qmin {

/// Most-significant-first bit string over the data register, length 0..63.
class Prefix {
public:
    Prefix() = default;

    static Prefix from_string(std::string_view s) {
        Prefix p;
        for (char c : s) {
            if (c != '0' && c != '1') throw InputError("prefix must be a string of 0/1");
            p = p.extended(c == '1');
        }
        return p;
    }

    /// The full m-bit representation of `value`.
    static Prefix of_value(std::uint64_t value, unsigned m) {
        detail::require(m <= 63, "prefix longer than 63 bits");
        Prefix p;
        p.bits_ = value & ((std::uint64_t{1} << m) - 1);
        p.length_ = m;
        return p;
    }

    unsigned length() const noexcept { return length_; }
    bool empty() const noexcept { return length_ == 0; }
    std::uint64_t bits() const noexcept { return bits_; }

    /// Bit i counted from the most significant end.
    bool bit(unsigned i) const { return (bits_ >> (length_ - 1 - i)) & 1U; }

    Prefix extended(bool one) const {
        detail::require(length_ < 63, "prefix longer than 63 bits");
        Prefix p;
        p.bits_ = (bits_ << 1) | (one ? 1U : 0U);
        p.length_ = length_ + 1;
        return p;
    }

    /// Whether the m-bit `value` starts with this prefix.
    bool matches(std::uint64_t value, unsigned m) const {
        detail::require(length_ <= m, "prefix longer than the data register");
        return (value >> (m - length_)) == bits_;
    }

    std::string to_string() const {
        std::string s(length_, '0');
        for (unsigned i = 0; i < length_; ++i) s[i] = bit(i) ? '1' : '0';
        return s;
    }

    friend bool operator==(const Prefix&, const Prefix&) = default;

private:
    std::uint64_t bits_ = 0;
    unsigned length_ = 0;
};

enum class IterationMode { SingleIteration, OptimalForKnownT, RandomizedBBHT };

struct QmsConfig {
    /// Consecutive failed prefix checks before the descent takes the 1-branch.
    /// In RandomizedBBHT mode only attempts made once the iteration bound has
    /// saturated at sqrt(N) count against this.
    unsigned retries = 3;
    IterationMode mode = IterationMode::RandomizedBBHT;
    std::uint64_t seed = 0;
    /// Optional classical first guess y_i; must be one of the dataset values.
    std::optional<std::uint64_t> warm_start;
};

enum class Branch { Accept0, Fallback1 };

struct DescentStep {
    Prefix tried_prefix;
    std::uint64_t marked_count = 0;      ///< t, computed classically for the trace
    std::uint64_t grover_iterations = 0; ///< k of the final attempt
    std::uint64_t measured_address = 0;  ///< last measurement of the step
    std::uint64_t measured_value = 0;
    Branch branch = Branch::Fallback1;
    std::uint64_t oracle_queries = 0;    ///< summed over attempts
    unsigned attempts = 0;
};

struct DescentTrace {
    std::vector<DescentStep> steps;
    std::uint64_t result_value = 0;
    /// Occupied addresses holding result_value, ascending. Empty when the
    /// descent settled on a value that is not in the dataset.
    std::vector<std::uint64_t> result_addresses;
    std::uint64_t total_queries = 0;
    Prefix start_prefix;
    /// Set when every stored value equals the padding sentinel.
    bool all_padding = false;
    QmsConfig config;
    unsigned n = 1;
    unsigned m = 1;
};

/// Phase oracle: one MCX onto the |-> ancilla, conditioned on the most
/// significant data qubits spelling `prefix`.
inline std::vector<GateOp> build_prefix_oracle(const Prefix& prefix, unsigned n, unsigned m) {
    if (prefix.empty()) throw ContractViolation("empty prefix would mark every state");
    detail::require(prefix.length() <= m, "prefix longer than the data register");
    std::vector<ControlSpec> controls;
    controls.reserve(prefix.length());
    for (unsigned i = 0; i < prefix.length(); ++i)
        controls.push_back({n + i, prefix.bit(i) ? Polarity::ControlOnOne : Polarity::ControlOnZero});
    return {GateOp::mcx(std::move(controls), ancilla_qubit(n, m))};
}

/// Reflection about the uniform address state. With the ancilla in |-> the
/// zero-controlled MCX flips the phase of |0...0>, so the sequence realises
/// -(2|s><s| - I); the global sign is unobservable.
inline std::vector<GateOp> build_diffuser(unsigned n, unsigned ancilla) {
    detail::require(n >= 1, "diffuser needs at least one address qubit");
    detail::require(ancilla >= n, "ancilla overlaps the address register");
    std::vector<GateOp> ops;
    ops.reserve(2 * n + 1);
    for (unsigned q = 0; q < n; ++q) ops.push_back(GateOp::h(q));
    std::vector<ControlSpec> controls;
    for (unsigned q = 0; q < n; ++q) controls.push_back({q, Polarity::ControlOnZero});
    ops.push_back(GateOp::mcx(std::move(controls), ancilla));
    for (unsigned q = 0; q < n; ++q) ops.push_back(GateOp::h(q));
    return ops;
}

/// Reflection about the encoded state |psi_1> = U_X |psi_0>: U_X, address
/// reflection, U_X (U_X is its own inverse). The address reflection alone is
/// not enough once the data register is entangled with the address.
inline std::vector<GateOp> build_qram_diffuser(const QramCircuit& ux) {
    auto ops = ux.ops;
    const auto reflect = build_diffuser(ux.n, ancilla_qubit(ux.n, ux.m));
    ops.insert(ops.end(), reflect.begin(), reflect.end());
    ops.insert(ops.end(), ux.ops.begin(), ux.ops.end());
    return ops;
}

inline void grover_iteration(StateVector& state, const std::vector<GateOp>& oracle,
                             const std::vector<GateOp>& diffuser, QueryLedger& ledger) {
    state.apply_all(oracle);
    state.apply_all(diffuser);
    ++ledger.oracle_queries;
}

/// sin^2((2k+1) arcsin(sqrt(t/N))).
inline double success_probability(std::uint64_t t, std::uint64_t N, std::uint64_t k) {
    detail::require(N >= 1 && t <= N, "need 0 <= t <= N and N >= 1");
    if (t == 0) return 0.0;
    const double theta = std::asin(std::sqrt(static_cast<double>(t) / static_cast<double>(N)));
    const double s = std::sin(static_cast<double>(2 * k + 1) * theta);
    return s * s;
}

/// Iteration count for a known number of marked states: the k in
/// [0, ceil(pi/4 sqrt(N/t))] with the largest success probability. Ties go to
/// the smallest k >= 1; k = 0 is returned only when t = 0 or when plain
/// sampling strictly beats every amplified count (t/N > 1/2).
inline std::uint64_t optimal_iterations(std::uint64_t t, std::uint64_t N) {
    detail::require(N >= 1 && t <= N, "need 0 <= t <= N and N >= 1");
    if (t == 0) return 0;
    const double upper = std::numbers::pi / 4.0 * std::sqrt(static_cast<double>(N) / static_cast<double>(t));
    const auto k_max = std::max<std::uint64_t>(1, static_cast<std::uint64_t>(std::ceil(upper)));
    std::uint64_t best = 1;
    double best_p = success_probability(t, N, 1);
    for (std::uint64_t k = 2; k <= k_max; ++k) {
        const double p = success_probability(t, N, k);
        if (p > best_p + 1e-12) {
            best = k;
            best_p = p;
        }
    }
    if (success_probability(t, N, 0) > best_p + 1e-12) return 0;
    return best;
}

inline constexpr double kBbhtGrowth = 6.0 / 5.0;

/// Exclusive upper bound on k for BBHT attempt `retry`: ceil(min(lambda^retry, sqrt(N))).
inline std::uint64_t bbht_bound(unsigned retry, std::uint64_t N) {
    const double grown = std::pow(kBbhtGrowth, static_cast<double>(retry));
    return static_cast<std::uint64_t>(std::ceil(std::min(grown, std::sqrt(static_cast<double>(N)))));
}

inline bool bbht_saturated(unsigned retry, std::uint64_t N) {
    return std::pow(kBbhtGrowth, static_cast<double>(retry)) >= std::sqrt(static_cast<double>(N));
}

/// Grover iterations for one attempt. `t` is only consulted in
/// OptimalForKnownT mode, `rng` only in RandomizedBBHT mode.
inline std::uint64_t iteration_count(IterationMode mode, std::uint64_t t, std::uint64_t N,
                                     unsigned retry, Rng& rng) {
    detail::require(N >= 1, "N must be positive");
    switch (mode) {
        case IterationMode::SingleIteration:
            return 1;
        case IterationMode::OptimalForKnownT:
            return optimal_iterations(t, N);
        case IterationMode::RandomizedBBHT:
            return uniform_below(rng, bbht_bound(retry, N));
    }
    return 1;
}

/// Number of addresses (padding included) whose value starts with `prefix`.
inline std::uint64_t count_marked(const Dataset& ds, const Prefix& prefix) {
    std::uint64_t t = 0;
    for (std::uint64_t x = 0; x < ds.address_count(); ++x)
        if (prefix.matches(ds.value_at(x), ds.m)) ++t;
    return t;
}

namespace detail {

struct SearchContext {
    const Dataset& ds;
    const QramCircuit& ux;
    const std::vector<GateOp>& diffuser;
    const QmsConfig& cfg;
    Rng& rng;
    QueryLedger& ledger;
};

/// Amplify-measure-check until the measured value carries `prefix` or the
/// retry budget is spent. The state is rebuilt from scratch before every
/// attempt because a measurement destroys it.
inline DescentStep search_prefix(SearchContext& ctx, const Prefix& prefix) {
    const Dataset& ds = ctx.ds;
    const std::uint64_t N = ds.address_count();
    const auto oracle = build_prefix_oracle(prefix, ds.n, ds.m);

    DescentStep step;
    step.tried_prefix = prefix;
    step.marked_count = count_marked(ds, prefix);

    unsigned failures = 0;
    for (unsigned retry = 0;; ++retry) {
        const std::uint64_t k = iteration_count(ctx.cfg.mode, step.marked_count, N, retry, ctx.rng);
        auto state = prepare_encoded(ds, ctx.ux);
        for (std::uint64_t i = 0; i < k; ++i) grover_iteration(state, oracle, ctx.diffuser, ctx.ledger);
        const auto readout = decode_index(measure_all(state, ctx.rng), ds.m);

        ++step.attempts;
        step.grover_iterations = k;
        step.oracle_queries += k;
        step.measured_address = readout.address;
        step.measured_value = readout.data;
        if (prefix.matches(readout.data, ds.m)) {
            step.branch = Branch::Accept0;
            return step;
        }
        const bool counts = ctx.cfg.mode != IterationMode::RandomizedBBHT || bbht_saturated(retry, N);
        if (counts && ++failures >= ctx.cfg.retries) {
            step.branch = Branch::Fallback1;
            return step;
        }
    }
}

}  // namespace detail

/// Minimum search by most-significant-bit descent: at every bit position try
/// to extend the accepted prefix with 0 via Grover search over the QRAM, and
/// fall back to 1 once the 0-extension has failed `cfg.retries` times.
inline DescentTrace run_descent(const Dataset& ds, const QmsConfig& cfg) {
    if (cfg.retries < 1) throw ContractViolation("retries must be at least 1");
    detail::require(ds.m <= 63, "data register wider than 63 bits");

    DescentTrace trace;
    trace.config = cfg;
    trace.n = ds.n;
    trace.m = ds.m;
    trace.all_padding = std::all_of(ds.values.begin(), ds.values.end(),
                                    [&](std::uint64_t v) { return v == ds.pad_value; });

    Prefix accepted;
    if (cfg.warm_start) {
        const auto y = *cfg.warm_start;
        if (std::find(ds.values.begin(), ds.values.end(), y) == ds.values.end())
            throw InputError("warm start " + std::to_string(y) + " is not a dataset value");
        // min <= y, so the leading zeros of y are leading zeros of the minimum.
        const unsigned zeros = ds.m - static_cast<unsigned>(std::bit_width(y));
        for (unsigned i = 0; i < zeros; ++i) accepted = accepted.extended(false);
    }
    trace.start_prefix = accepted;

    const auto ux = build_ux(ds);
    const auto diffuser = build_qram_diffuser(ux);
    Rng rng(derive_seed(cfg.seed, "descent"));
    QueryLedger ledger;
    detail::SearchContext ctx{ds, ux, diffuser, cfg, rng, ledger};

    while (accepted.length() < ds.m) {
        const Prefix candidate = accepted.extended(false);
        auto step = detail::search_prefix(ctx, candidate);
        accepted = step.branch == Branch::Accept0 ? candidate : accepted.extended(true);
        trace.steps.push_back(step);
    }

    trace.result_value = accepted.bits();
    for (std::uint64_t x = 0; x < ds.values.size(); ++x)
        if (ds.values[x] == trace.result_value) trace.result_addresses.push_back(x);
    trace.total_queries = ledger.oracle_queries;
    return trace;
}

/// Grover search for the exact m-bit `value`; true iff some attempt measures
/// an address holding it.
inline bool verify_membership(const Dataset& ds, std::uint64_t value, const QmsConfig& cfg) {
    if (cfg.retries < 1) throw ContractViolation("retries must be at least 1");
    detail::require(value <= ds.data_mask(), "value does not fit the data register");
    const auto ux = build_ux(ds);
    const auto diffuser = build_qram_diffuser(ux);
    Rng rng(derive_seed(cfg.seed, "membership"));
    QueryLedger ledger;
    detail::SearchContext ctx{ds, ux, diffuser, cfg, rng, ledger};
    return detail::search_prefix(ctx, Prefix::of_value(value, ds.m)).branch == Branch::Accept0;
}

inline std::string_view to_string(IterationMode mode) {
    switch (mode) {
        case IterationMode::SingleIteration: return "single";
        case IterationMode::OptimalForKnownT: return "optimal";
        case IterationMode::RandomizedBBHT: return "bbht";
    }
    return "?";
}

inline std::optional<IterationMode> parse_iteration_mode(std::string_view s) {
    if (s == "single") return IterationMode::SingleIteration;
    if (s == "optimal") return IterationMode::OptimalForKnownT;
    if (s == "bbht") return IterationMode::RandomizedBBHT;
    return std::nullopt;
}

inline std::string_view to_string(Branch b) { return b == Branch::Accept0 ? "accept0" : "fallback1"; }

}  // namespace qmin
