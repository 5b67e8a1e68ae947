#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qmin/errors.hpp"
#include "qmin/rng.hpp"

namespace qmin {

using Amplitude = std::complex<double>;

/// Widest register the simulator will allocate (2^26 amplitudes = 1 GiB).
inline constexpr unsigned kMaxQubits = 26;

enum class Polarity { ControlOnOne, ControlOnZero };

struct ControlSpec {
    unsigned qubit = 0;
    Polarity polarity = Polarity::ControlOnOne;

    friend bool operator==(const ControlSpec&, const ControlSpec&) = default;
};

enum class GateKind { H, X, MCX };

struct GateOp {
    GateKind kind = GateKind::X;
    unsigned target = 0;
    std::vector<ControlSpec> controls;

    static GateOp h(unsigned q) { return {GateKind::H, q, {}}; }
    static GateOp x(unsigned q) { return {GateKind::X, q, {}}; }
    static GateOp mcx(std::vector<ControlSpec> controls, unsigned target) {
        return {GateKind::MCX, target, std::move(controls)};
    }

    friend bool operator==(const GateOp&, const GateOp&) = default;
};

/// Dense statevector. Qubit 0 is the most significant bit of the basis index.
class StateVector {
public:
    /// |0...0> over `num_qubits` qubits.
    explicit StateVector(unsigned num_qubits) : num_qubits_(num_qubits) {
        if (num_qubits == 0) throw ContractViolation("statevector needs at least one qubit");
        if (num_qubits > kMaxQubits)
            throw ResourceError("statevector of " + std::to_string(num_qubits) +
                                " qubits exceeds the " + std::to_string(kMaxQubits) +
                                "-qubit cap");
        amps_.assign(std::size_t{1} << num_qubits, Amplitude{0.0, 0.0});
        amps_[0] = 1.0;
    }

    static StateVector basis(unsigned num_qubits, std::uint64_t index) {
        StateVector s(num_qubits);
        detail::require(index < s.dimension(), "basis index out of range");
        s.amps_[0] = 0.0;
        s.amps_[index] = 1.0;
        return s;
    }

    unsigned num_qubits() const noexcept { return num_qubits_; }
    std::size_t dimension() const noexcept { return amps_.size(); }

    std::span<const Amplitude> amplitudes() const noexcept { return amps_; }
    std::span<Amplitude> amplitudes() noexcept { return amps_; }
    const Amplitude& operator[](std::size_t i) const { return amps_[i]; }
    Amplitude& operator[](std::size_t i) { return amps_[i]; }

    /// Bit of the basis index that holds qubit `q`.
    std::uint64_t bit_of(unsigned q) const noexcept {
        return std::uint64_t{1} << (num_qubits_ - 1 - q);
    }

    double norm_squared() const noexcept {
        double acc = 0.0;
        for (const auto& a : amps_) acc += std::norm(a);
        return acc;
    }

    void apply(const GateOp& op);

    template <class Range>
    void apply_all(const Range& ops) {
        for (const auto& op : ops) apply(op);
    }

private:
    void check_qubit(unsigned q) const {
        if (q >= num_qubits_)
            throw ContractViolation("qubit index " + std::to_string(q) + " out of range for " +
                                    std::to_string(num_qubits_) + " qubits");
    }

    void apply_h(unsigned q);
    void apply_mcx(std::span<const ControlSpec> controls, unsigned target);

    unsigned num_qubits_;
    std::vector<Amplitude> amps_;
};

inline void StateVector::apply(const GateOp& op) {
    check_qubit(op.target);
    switch (op.kind) {
        case GateKind::H:
            detail::require(op.controls.empty(), "H takes no controls");
            apply_h(op.target);
            break;
        case GateKind::X:
            detail::require(op.controls.empty(), "X takes no controls");
            apply_mcx({}, op.target);
            break;
        case GateKind::MCX:
            apply_mcx(op.controls, op.target);
            break;
    }
}

inline void StateVector::apply_h(unsigned q) {
    const std::uint64_t stride = bit_of(q);
    const double r = 1.0 / std::sqrt(2.0);
    const std::size_t dim = amps_.size();
    for (std::size_t base = 0; base < dim; base += 2 * stride) {
        for (std::size_t i = base; i < base + stride; ++i) {
            const Amplitude a = amps_[i];
            const Amplitude b = amps_[i + stride];
            amps_[i] = (a + b) * r;
            amps_[i + stride] = (a - b) * r;
        }
    }
}

// Only the 2^(free bits) indices that satisfy the controls are visited, so a
// fully address-controlled MCX costs O(2^(n_qubits - n_controls - 1)).
inline void StateVector::apply_mcx(std::span<const ControlSpec> controls, unsigned target) {
    std::uint64_t ctrl_mask = 0;
    std::uint64_t ctrl_value = 0;
    for (const auto& c : controls) {
        check_qubit(c.qubit);
        if (c.qubit == target) throw ContractViolation("MCX target is also a control");
        const std::uint64_t bit = bit_of(c.qubit);
        if (ctrl_mask & bit) throw ContractViolation("duplicate control qubit in MCX");
        ctrl_mask |= bit;
        if (c.polarity == Polarity::ControlOnOne) ctrl_value |= bit;
    }
    const std::uint64_t tbit = bit_of(target);
    const std::uint64_t free_mask = (amps_.size() - 1) & ~ctrl_mask & ~tbit;
    std::uint64_t sub = 0;
    do {
        const std::uint64_t i = sub | ctrl_value;
        std::swap(amps_[i], amps_[i | tbit]);
        sub = (sub - free_mask) & free_mask;
    } while (sub != 0);
}

/// (1/sqrt(2^n)) sum_x |x> (x) |0>^m (x) |->, register layout [address | data | ancilla].
inline StateVector new_uniform_with_ancilla(unsigned n, unsigned m) {
    if (n < 1 || m < 1) throw ContractViolation("address and data widths must be at least 1");
    const unsigned total = n + m + 1;
    if (total > kMaxQubits)
        throw ResourceError("n + m + 1 = " + std::to_string(total) + " qubits exceeds the " +
                            std::to_string(kMaxQubits) + "-qubit cap");
    StateVector s(total);
    const double amp = 1.0 / std::sqrt(static_cast<double>(std::uint64_t{1} << (n + 1)));
    auto a = s.amplitudes();
    a[0] = 0.0;
    // Address x sits in the top n bits; the ancilla is the lowest bit.
    for (std::uint64_t x = 0; x < (std::uint64_t{1} << n); ++x) {
        const std::uint64_t base = x << (m + 1);
        a[base] = amp;
        a[base | 1] = -amp;
    }
    return s;
}

/// Samples a basis index with probability |amp|^2 and collapses the state onto it.
inline std::uint64_t measure_all(StateVector& state, Rng& rng) {
    const double total = state.norm_squared();
    if (std::abs(total - 1.0) > 1e-8)
        throw ContractViolation("measurement of an unnormalized state (norm^2 = " +
                                std::to_string(total) + ")");
    const double r = uniform_unit(rng) * total;
    auto amps = state.amplitudes();
    std::uint64_t chosen = amps.size() - 1;
    double acc = 0.0;
    for (std::size_t i = 0; i < amps.size(); ++i) {
        acc += std::norm(amps[i]);
        if (r < acc) {
            chosen = i;
            break;
        }
    }
    // Guard the rounding tail: land on the last nonzero amplitude.
    while (std::norm(amps[chosen]) == 0.0 && chosen > 0) --chosen;
    std::fill(amps.begin(), amps.end(), Amplitude{0.0, 0.0});
    amps[chosen] = 1.0;
    return chosen;
}

inline std::pair<std::uint64_t, StateVector> measure_all(StateVector state, std::uint64_t seed) {
    Rng rng(seed);
    const auto idx = measure_all(state, rng);
    return {idx, std::move(state)};
}

/// Marginal distribution over `qubits`; qubits[0] is the most significant
/// bit of the outcome index.
inline std::vector<double> probabilities(const StateVector& state, std::span<const unsigned> qubits) {
    detail::require(qubits.size() <= 30, "marginal over too many qubits");
    std::uint64_t seen = 0;
    for (unsigned q : qubits) {
        detail::require(q < state.num_qubits(), "qubit index out of range");
        detail::require(!(seen & state.bit_of(q)), "duplicate qubit in marginal");
        seen |= state.bit_of(q);
    }
    std::vector<double> table(std::size_t{1} << qubits.size(), 0.0);
    const auto amps = state.amplitudes();
    for (std::size_t i = 0; i < amps.size(); ++i) {
        const double p = std::norm(amps[i]);
        if (p == 0.0) continue;
        std::size_t outcome = 0;
        for (unsigned q : qubits) outcome = (outcome << 1) | ((i & state.bit_of(q)) ? 1 : 0);
        table[outcome] += p;
    }
    return table;
}

inline std::vector<double> probabilities(const StateVector& state, std::initializer_list<unsigned> qubits) {
    return probabilities(state, std::span<const unsigned>(qubits.begin(), qubits.size()));
}

}  // namespace qmin
