#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <vector>

namespace qcemu {

using Index = std::uint64_t;
using Qubit = unsigned;

inline constexpr Index bit(Qubit q) noexcept { return Index{1} << q; }

inline constexpr bool test_bit(Index i, Qubit q) noexcept { return (i >> q) & 1U; }

/// Insert a 0 bit at position `q`, shifting higher bits up by one.
inline constexpr Index insert_zero_bit(Index i, Qubit q) noexcept {
    const Index low = i & (bit(q) - 1);
    return ((i >> q) << (q + 1)) | low;
}

/// Sorted copy of `qubits`, used as the insertion order for `spread_bits`.
inline std::vector<Qubit> sorted_qubits(std::span<const Qubit> qubits) {
    std::vector<Qubit> out(qubits.begin(), qubits.end());
    std::sort(out.begin(), out.end());
    return out;
}

/// Map a compact counter onto the index subspace where the `sorted` positions are 0.
/// Iterating k over [0, 2^(n - |sorted|)) enumerates that subspace exactly once.
inline Index spread_bits(Index k, std::span<const Qubit> sorted) noexcept {
    for (Qubit q : sorted) {
        k = insert_zero_bit(k, q);
    }
    return k;
}

/// Deposit the low bits of `value` onto `qubits` (value bit j -> qubit qubits[j]).
inline Index deposit_bits(Index value, std::span<const Qubit> qubits) noexcept {
    Index out = 0;
    for (std::size_t j = 0; j < qubits.size(); ++j) {
        out |= ((value >> j) & 1U) << qubits[j];
    }
    return out;
}

/// Inverse of deposit_bits: gather qubits[j] of `index` into bit j of the result.
inline Index extract_bits(Index index, std::span<const Qubit> qubits) noexcept {
    Index out = 0;
    for (std::size_t j = 0; j < qubits.size(); ++j) {
        out |= ((index >> qubits[j]) & 1U) << j;
    }
    return out;
}

inline Index mask_of(std::span<const Qubit> qubits) noexcept {
    Index m = 0;
    for (Qubit q : qubits) {
        m |= bit(q);
    }
    return m;
}

}  // namespace qcemu
