#include "qcemu/arithmetic.hpp"

#include <algorithm>
#include <optional>
#include <string>

#include "qcemu/errors.hpp"

namespace qcemu {

RegisterLayout RegisterLayout::standard(unsigned m, unsigned ancillas, bool with_c) {
    if (m < 1) {
        throw PreconditionError("registers need at least one bit");
    }
    RegisterLayout l;
    l.m = m;
    Qubit next = 0;
    auto take = [&next](std::vector<Qubit>& reg, unsigned count) {
        for (unsigned i = 0; i < count; ++i) {
            reg.push_back(next++);
        }
    };
    take(l.a, m);
    take(l.b, m);
    if (with_c) {
        take(l.c, m);
    }
    take(l.ancilla, ancillas);
    return l;
}

unsigned RegisterLayout::num_qubits() const noexcept {
    unsigned n = 0;
    for (const auto* reg : {&a, &b, &c, &ancilla}) {
        for (Qubit q : *reg) {
            n = std::max(n, q + 1);
        }
    }
    return n;
}

void RegisterLayout::validate() const {
    if (a.size() != m || b.size() != m || (!c.empty() && c.size() != m)) {
        throw IndexError("register widths do not match m = " + std::to_string(m));
    }
    std::vector<Qubit> all;
    for (const auto* reg : {&a, &b, &c, &ancilla}) {
        all.insert(all.end(), reg->begin(), reg->end());
    }
    std::sort(all.begin(), all.end());
    if (std::adjacent_find(all.begin(), all.end()) != all.end()) {
        throw IndexError("register layout reuses a qubit");
    }
}

Index RegisterLayout::encode(Index a_val, Index b_val, Index c_val) const noexcept {
    return deposit_bits(a_val, a) | deposit_bits(b_val, b) | deposit_bits(c_val, c);
}

unsigned ancilla_count(ArithOp op, unsigned m) {
    switch (op) {
        case ArithOp::Add: return 1;
        case ArithOp::Mul: return m + 1;
        case ArithOp::Div: return 2 * m + 2;
    }
    return 0;
}

RegisterLayout layout_for(ArithOp op, unsigned m) {
    return RegisterLayout::standard(m, ancilla_count(op, m), op != ArithOp::Add);
}

namespace {

using Qubits = std::vector<Qubit>;

void require_ancillas(const RegisterLayout& l, ArithOp op, const char* what) {
    l.validate();
    const unsigned need = ancilla_count(op, l.m);
    if (l.ancilla.size() < need) {
        throw PreconditionError(std::string(what) + " needs " + std::to_string(need) + " ancilla qubits, layout has " +
                                std::to_string(l.ancilla.size()));
    }
    if (op != ArithOp::Add && l.c.size() != l.m) {
        throw PreconditionError(std::string(what) + " needs a c register");
    }
}

// Cuccaro MAJ: leaves carry-out in `a`, a^b in `b`, a^c in `c`.
void maj(Circuit& circ, Qubit c, Qubit b, Qubit a) {
    circ.add(Gate::cnot(a, b));
    circ.add(Gate::cnot(a, c));
    circ.add(Gate::toffoli(c, b, a));
}

// Two-CNOT UnMajority-and-Add: restores a and c, writes the sum bit into b.
void uma(Circuit& circ, Qubit c, Qubit b, Qubit a) {
    circ.add(Gate::toffoli(c, b, a));
    circ.add(Gate::cnot(a, c));
    circ.add(Gate::cnot(c, b));
}

/// target <- target + addend (mod 2^w, w = addend.size()); with `carry_out`, that qubit is
/// xored with the final carry so (target, carry_out) is added mod 2^(w+1).
void add_into(Circuit& circ, const Qubits& addend, const Qubits& target, Qubit carry,
              std::optional<Qubit> carry_out = std::nullopt) {
    const std::size_t w = addend.size();
    maj(circ, carry, target[0], addend[0]);
    for (std::size_t i = 1; i < w; ++i) {
        maj(circ, addend[i - 1], target[i], addend[i]);
    }
    if (carry_out) {
        circ.add(Gate::cnot(addend[w - 1], *carry_out));
    }
    for (std::size_t i = w; i-- > 1;) {
        uma(circ, addend[i - 1], target[i], addend[i]);
    }
    uma(circ, carry, target[0], addend[0]);
}

/// Exact inverse of add_into: every gate is self-inverse, so reverse the sequence.
void subtract_from(Circuit& circ, const Qubits& subtrahend, const Qubits& target, Qubit carry,
                   std::optional<Qubit> borrow_out = std::nullopt) {
    Circuit tmp(circ.num_qubits());
    add_into(tmp, subtrahend, target, carry, borrow_out);
    const auto g = tmp.gates();
    for (auto it = g.rbegin(); it != g.rend(); ++it) {
        circ.add(*it);
    }
}

/// Toggle `flag` iff the register `reg` is all zero, using `scratch` (>= reg.size() - 2
/// clean qubits) which is returned clean. The block is its own inverse.
void toggle_if_zero(Circuit& circ, const Qubits& reg, const Qubits& scratch, Qubit flag) {
    const std::size_t m = reg.size();
    for (Qubit q : reg) {
        circ.add(Gate::x(q));
    }
    if (m == 1) {
        circ.add(Gate::cnot(reg[0], flag));
    } else if (m == 2) {
        circ.add(Gate::toffoli(reg[0], reg[1], flag));
    } else {
        // AND ladder: scratch[k] = !reg[0] & ... & !reg[k+1].
        Circuit ladder(circ.num_qubits());
        ladder.add(Gate::toffoli(reg[0], reg[1], scratch[0]));
        for (std::size_t k = 2; k + 1 < m; ++k) {
            ladder.add(Gate::toffoli(scratch[k - 2], reg[k], scratch[k - 1]));
        }
        circ.append(ladder);
        circ.add(Gate::toffoli(scratch[m - 3], reg[m - 1], flag));
        circ.append(inverse(ladder));
    }
    for (Qubit q : reg) {
        circ.add(Gate::x(q));
    }
}

}  // namespace

Circuit build_adder(const RegisterLayout& layout) {
    require_ancillas(layout, ArithOp::Add, "adder");
    Circuit circ(layout.num_qubits(), "add");
    add_into(circ, layout.a, layout.b, layout.ancilla[0]);
    return circ;
}

Circuit build_multiplier(const RegisterLayout& layout) {
    require_ancillas(layout, ArithOp::Mul, "multiplier");
    const unsigned m = layout.m;
    const Qubits buf(layout.ancilla.begin(), layout.ancilla.begin() + m);
    const Qubit carry = layout.ancilla[m];

    Circuit circ(layout.num_qubits(), "mul");
    for (unsigned i = 0; i < m; ++i) {
        // c[i..m) += b_i * a[0..m-i), i.e. c += b_i * (a << i) mod 2^m.
        const unsigned w = m - i;
        const Qubits part(buf.begin(), buf.begin() + w);
        const Qubits target(layout.c.begin() + i, layout.c.end());
        for (unsigned j = 0; j < w; ++j) {
            circ.add(Gate::toffoli(layout.b[i], layout.a[j], part[j]));
        }
        add_into(circ, part, target, carry);
        for (unsigned j = 0; j < w; ++j) {
            circ.add(Gate::toffoli(layout.b[i], layout.a[j], part[j]));
        }
    }
    return circ;
}

Circuit build_divider(const RegisterLayout& layout) {
    require_ancillas(layout, ArithOp::Div, "divider");
    const unsigned m = layout.m;
    const auto anc = layout.ancilla.begin();
    const Qubits ext(anc, anc + m);
    const Qubits buf(anc + m, anc + 2 * m);
    const Qubit carry = layout.ancilla[2 * m];
    const Qubit b_zero = layout.ancilla[2 * m + 1];

    Circuit circ(layout.num_qubits(), "div");
    toggle_if_zero(circ, layout.b, buf, b_zero);

    for (unsigned i = m; i-- > 0;) {
        // Working value: a[i..m) extended by ext[0..i) to m bits, with ext[i] as sign bit.
        Qubits rem(layout.a.begin() + i, layout.a.end());
        rem.insert(rem.end(), ext.begin(), ext.begin() + i);
        const Qubit sign = ext[i];
        const Qubit q = layout.c[i];

        subtract_from(circ, layout.b, rem, carry, sign);

        // q_i = !sign & !(b == 0)
        circ.add(Gate::x(sign));
        circ.add(Gate::x(b_zero));
        circ.add(Gate::toffoli(sign, b_zero, q));
        circ.add(Gate::x(b_zero));
        circ.add(Gate::x(sign));

        // Restore when q_i == 0: add back b, copied through the buffer under control of !q_i.
        circ.add(Gate::x(q));
        for (unsigned j = 0; j < m; ++j) {
            circ.add(Gate::toffoli(q, layout.b[j], buf[j]));
        }
        add_into(circ, buf, rem, carry, sign);
        for (unsigned j = 0; j < m; ++j) {
            circ.add(Gate::toffoli(q, layout.b[j], buf[j]));
        }
        circ.add(Gate::x(q));
    }

    toggle_if_zero(circ, layout.b, buf, b_zero);
    return circ;
}

}  // namespace qcemu
