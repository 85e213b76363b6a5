#pragma once

#include <vector>

#include "qcemu/circuit.hpp"

namespace qcemu {

/// Placement of the integer registers a, b, c and work qubits on a qubit register.
/// Position 0 of each list is the least significant bit.
struct RegisterLayout {
    unsigned m = 0;
    std::vector<Qubit> a;
    std::vector<Qubit> b;
    std::vector<Qubit> c;
    std::vector<Qubit> ancilla;

    /// a = [0, m), b = [m, 2m), c = [2m, 3m) when `with_c`, then the ancillas.
    static RegisterLayout standard(unsigned m, unsigned ancillas, bool with_c = true);

    /// One more than the largest qubit index used.
    unsigned num_qubits() const noexcept;

    /// Throws IndexError on overlapping lists or registers whose width is not m.
    void validate() const;

    Index encode(Index a_val, Index b_val, Index c_val = 0) const noexcept;
    Index a_of(Index i) const noexcept { return extract_bits(i, a); }
    Index b_of(Index i) const noexcept { return extract_bits(i, b); }
    Index c_of(Index i) const noexcept { return extract_bits(i, c); }
    Index ancilla_of(Index i) const noexcept { return extract_bits(i, ancilla); }
};

enum class ArithOp { Add, Mul, Div };

/// Work qubits the corresponding builder needs for m-bit registers:
/// add 1 (carry), mul m + 1 (partial-product buffer, carry), div 2m + 2 (m sign-extension
/// bits, m add-back buffer, carry, divisor-is-zero flag).
unsigned ancilla_count(ArithOp op, unsigned m);

/// Standard layout with exactly the ancillas `op` requires. Add has no c register.
RegisterLayout layout_for(ArithOp op, unsigned m);

/// Cuccaro ripple-carry adder, modular: (a, b, 0) -> (a, a + b mod 2^m, 0).
Circuit build_adder(const RegisterLayout& layout);

/// Shift-and-add multiplier: (a, b, 0) -> (a, b, a*b mod 2^m).
Circuit build_multiplier(const RegisterLayout& layout);

/// Restoring divider: (a, b, 0) -> (a mod b, b, a / b) for b != 0, identity for b == 0.
Circuit build_divider(const RegisterLayout& layout);

}  // namespace qcemu
