#pragma once

#include <array>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qcemu/statevector.hpp"

namespace qcemu {

/// Row-major 2x2 complex matrix.
using Matrix2 = std::array<Complex, 4>;

enum class GateKind { X, Y, Z, H, S, T, Rz, Rx, CNOT, CR, Toffoli, Swap, Custom };

std::string_view gate_name(GateKind kind) noexcept;

/// One gate of the library: a kind plus the qubits it acts on.
///
/// Control counts are fixed by kind: CNOT and CR take one control, Toffoli two, all
/// others none. Swap uses `target` and `partner`. `theta` is read by Rz, Rx and CR;
/// `custom` by Custom only.
struct Gate {
    GateKind kind = GateKind::X;
    Qubit target = 0;
    std::vector<Qubit> controls;
    double theta = 0.0;
    Qubit partner = 0;
    Matrix2 custom{};

    static Gate x(Qubit q) { return make(GateKind::X, q); }
    static Gate y(Qubit q) { return make(GateKind::Y, q); }
    static Gate z(Qubit q) { return make(GateKind::Z, q); }
    static Gate h(Qubit q) { return make(GateKind::H, q); }
    static Gate s(Qubit q) { return make(GateKind::S, q); }
    static Gate t(Qubit q) { return make(GateKind::T, q); }
    static Gate rz(double theta, Qubit q) { return make(GateKind::Rz, q, {}, theta); }
    static Gate rx(double theta, Qubit q) { return make(GateKind::Rx, q, {}, theta); }
    static Gate cnot(Qubit control, Qubit target) { return make(GateKind::CNOT, target, {control}); }
    static Gate cr(double theta, Qubit control, Qubit target) { return make(GateKind::CR, target, {control}, theta); }
    static Gate toffoli(Qubit c1, Qubit c2, Qubit target) { return make(GateKind::Toffoli, target, {c1, c2}); }
    static Gate swap(Qubit q1, Qubit q2) { return make(GateKind::Swap, q1, {}, 0.0, q2); }
    static Gate custom_2x2(const Matrix2& m, Qubit q) {
        Gate g = make(GateKind::Custom, q);
        g.custom = m;
        return g;
    }
    static Gate make(GateKind kind, Qubit target, std::vector<Qubit> controls = {}, double theta = 0.0,
                     Qubit partner = 0) {
        Gate g;
        g.kind = kind;
        g.target = target;
        g.controls = std::move(controls);
        g.theta = theta;
        g.partner = partner;
        return g;
    }

    /// Every qubit the gate touches, controls first.
    std::vector<Qubit> qubits() const;

    bool operator==(const Gate&) const = default;
};

/// Check control arity and index distinctness; with `n > 0` also that indices are < n.
/// Throws IndexError.
void validate(const Gate& gate, unsigned n = 0);

/// Dense matrix of a gate: 2x2 for single-qubit kinds, 4x4 for CNOT, CR and Swap,
/// 8x8 for Toffoli. Row-major.
///
/// Two- and three-qubit matrices use the local index (q_0 q_1 ...) with the first listed
/// qubit most significant: controls first, then target; for Swap (target, partner).
struct GateMatrix {
    unsigned dim = 2;
    std::vector<Complex> entries;

    Complex operator()(unsigned r, unsigned c) const { return entries[r * dim + c]; }
};

GateMatrix matrix_of(const Gate& gate);

/// The 2x2 operator applied to the target once all controls are satisfied.
Matrix2 target_matrix(const Gate& gate);

Matrix2 rx_matrix(double theta) noexcept;
Matrix2 rz_matrix(double theta) noexcept;
Matrix2 phase_matrix(double theta) noexcept;
Matrix2 adjoint(const Matrix2& m) noexcept;

/// Inverse gate. Self-inverse kinds are returned unchanged; S and T become Custom.
Gate adjoint(const Gate& gate);

// Kernels. All mutate `state` in place and return it for chaining.

/// (a_i0, a_i1) <- u (a_i0, a_i1) for every index pair differing only in bit `target`.
StateVector& apply_single_qubit(StateVector& state, const Matrix2& u, Qubit target);

/// `u` on `target` restricted to indices whose `controls` bits are all 1.
StateVector& apply_controlled(StateVector& state, const Matrix2& u, Qubit target,
                              std::span<const Qubit> controls);

/// a_i <- e^{i theta} a_i where bits q1 and q2 are both set. Visits only those 2^(n-2) entries.
StateVector& apply_controlled_phase(StateVector& state, double theta, Qubit q1, Qubit q2);

/// Exchange qubits q1 and q2, optionally under controls.
StateVector& apply_swap(StateVector& state, Qubit q1, Qubit q2, std::span<const Qubit> controls = {});

/// Dispatch a Gate to its kernel, adding `extra_controls` on top of the gate's own.
StateVector& apply_gate(StateVector& state, const Gate& gate, std::span<const Qubit> extra_controls = {});

/// Registers below this size run kernels sequentially.
inline constexpr unsigned kParallelThresholdQubits = 14;

namespace instrument {

/// Number of amplitudes written by kernels since the last reset. Always 0 unless the
/// library is compiled with QCEMU_COUNT_AMPLITUDE_TOUCHES.
std::uint64_t amplitudes_touched() noexcept;
void reset() noexcept;

}  // namespace instrument

}  // namespace qcemu
