#pragma once

#include <bit>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "qmin/errors.hpp"
#include "qmin/statevector.hpp"

namespace qmin {

/// Classical values to be written into the data register, plus register widths.
///
/// Addresses at or beyond `values.size()` hold `pad_value`, which defaults to
/// the all-ones sentinel 2^m - 1 so that padding never beats a real value in a
/// minimum search.
struct Dataset {
    std::vector<std::uint64_t> values;
    unsigned m = 1;  ///< data bit-width
    unsigned n = 1;  ///< address bit-width
    std::uint64_t pad_value = 1;

    std::uint64_t address_count() const noexcept { return std::uint64_t{1} << n; }
    std::uint64_t data_mask() const noexcept {
        return m >= 64 ? ~std::uint64_t{0} : (std::uint64_t{1} << m) - 1;
    }

    /// y_x, including padded slots.
    std::uint64_t value_at(std::uint64_t address) const {
        return address < values.size() ? values[address] : pad_value;
    }

    bool occupied(std::uint64_t address) const noexcept { return address < values.size(); }
};

inline unsigned bit_width_min1(std::uint64_t v) noexcept {
    const auto w = static_cast<unsigned>(std::bit_width(v));
    return w == 0 ? 1 : w;
}

/// Derives widths from the raw values: m from the maximum, n = ceil(log2(len)),
/// both at least 1. `m_override` widens the data register (it may not narrow it
/// below the maximum value).
inline Dataset plan_dataset(std::span<const std::uint64_t> raw,
                            std::optional<unsigned> m_override = std::nullopt) {
    if (raw.empty()) throw InputError("dataset is empty");
    Dataset ds;
    ds.values.assign(raw.begin(), raw.end());
    std::uint64_t max = 0;
    for (auto v : raw) max = std::max(max, v);
    ds.m = bit_width_min1(max);
    if (m_override) {
        if (*m_override < ds.m || *m_override > 63)
            throw InputError("bit width " + std::to_string(*m_override) +
                             " cannot represent the dataset maximum " + std::to_string(max));
        ds.m = *m_override;
    }
    ds.n = raw.size() <= 2 ? 1 : static_cast<unsigned>(std::bit_width(raw.size() - 1));
    if (ds.n > 62) throw ResourceError("dataset too large to address");
    ds.pad_value = ds.data_mask();
    return ds;
}

inline Dataset plan_dataset(std::initializer_list<std::uint64_t> raw,
                            std::optional<unsigned> m_override = std::nullopt) {
    return plan_dataset(std::span<const std::uint64_t>(raw.begin(), raw.size()), m_override);
}

/// The U_X operator: one address-controlled MCX per set bit of every y_x.
struct QramCircuit {
    unsigned n = 1;
    unsigned m = 1;
    std::vector<GateOp> ops;
};

/// Qubit index of data bit `b` (b = 0 is the least significant value bit).
inline unsigned data_qubit(unsigned n, unsigned m, unsigned b) { return n + (m - 1 - b); }

inline unsigned ancilla_qubit(unsigned n, unsigned m) { return n + m; }

/// Controls that fire exactly on address |x>.
inline std::vector<ControlSpec> address_controls(unsigned n, std::uint64_t x) {
    std::vector<ControlSpec> controls;
    controls.reserve(n);
    for (unsigned q = 0; q < n; ++q) {
        const bool one = (x >> (n - 1 - q)) & 1U;
        controls.push_back({q, one ? Polarity::ControlOnOne : Polarity::ControlOnZero});
    }
    return controls;
}

inline QramCircuit build_ux(const Dataset& ds) {
    QramCircuit circ{ds.n, ds.m, {}};
    for (std::uint64_t x = 0; x < ds.address_count(); ++x) {
        const std::uint64_t y = ds.value_at(x);
        if (y == 0) continue;
        const auto controls = address_controls(ds.n, x);
        for (unsigned b = ds.m; b-- > 0;) {
            if ((y >> b) & 1U) circ.ops.push_back(GateOp::mcx(controls, data_qubit(ds.n, ds.m, b)));
        }
    }
    return circ;
}

inline void encode(StateVector& state, const QramCircuit& circ) {
    detail::require(state.num_qubits() == circ.n + circ.m + 1,
                    "state width does not match the QRAM circuit registers");
    state.apply_all(circ.ops);
}

/// Eq.-(1) initialisation followed by U_X.
inline StateVector prepare_encoded(const Dataset& ds, const QramCircuit& circ) {
    auto state = new_uniform_with_ancilla(ds.n, ds.m);
    encode(state, circ);
    return state;
}

/// Splits a basis index into its address and data fields.
struct RegisterReadout {
    std::uint64_t address = 0;
    std::uint64_t data = 0;
};

inline RegisterReadout decode_index(std::uint64_t index, unsigned m) {
    return {index >> (m + 1), (index >> 1) & ((std::uint64_t{1} << m) - 1)};
}

/// True iff every address branch carries its stored value with conditional
/// probability above 1 - 1e-10.
inline bool verify_roundtrip(const StateVector& state, const Dataset& ds) {
    if (state.num_qubits() != ds.n + ds.m + 1) return false;
    std::vector<double> branch(ds.address_count(), 0.0);
    std::vector<double> hit(ds.address_count(), 0.0);
    const auto amps = state.amplitudes();
    for (std::size_t i = 0; i < amps.size(); ++i) {
        const double p = std::norm(amps[i]);
        if (p == 0.0) continue;
        const auto r = decode_index(i, ds.m);
        branch[r.address] += p;
        if (r.data == ds.value_at(r.address)) hit[r.address] += p;
    }
    for (std::uint64_t x = 0; x < ds.address_count(); ++x) {
        if (branch[x] <= 0.0) return false;
        if (hit[x] / branch[x] <= 1.0 - 1e-10) return false;
    }
    return true;
}

}  // namespace qmin
