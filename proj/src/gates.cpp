#include "qcemu/gates.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <string>

#include "qcemu/errors.hpp"

namespace qcemu {

namespace instrument {

namespace {
std::atomic<std::uint64_t> g_touched{0};
}

std::uint64_t amplitudes_touched() noexcept { return g_touched.load(std::memory_order_relaxed); }
void reset() noexcept { g_touched.store(0, std::memory_order_relaxed); }

}  // namespace instrument

namespace {

#ifdef QCEMU_COUNT_AMPLITUDE_TOUCHES
inline void count_touch(std::uint64_t k) noexcept {
    instrument::g_touched.fetch_add(k, std::memory_order_relaxed);
}
#else
inline void count_touch(std::uint64_t) noexcept {}
#endif

constexpr Complex kI{0.0, 1.0};

void check_qubit(const StateVector& state, Qubit q, const char* what) {
    if (q >= state.num_qubits()) {
        throw IndexError(std::string(what) + ": qubit " + std::to_string(q) + " out of range for " +
                         std::to_string(state.num_qubits()) + " qubits");
    }
}

void check_distinct(std::span<const Qubit> qubits, const char* what) {
    for (std::size_t i = 0; i < qubits.size(); ++i) {
        for (std::size_t j = i + 1; j < qubits.size(); ++j) {
            if (qubits[i] == qubits[j]) {
                throw IndexError(std::string(what) + ": qubit " + std::to_string(qubits[i]) +
                                 " used more than once");
            }
        }
    }
}

/// Calls f(base) for every index whose `fixed` bits equal `set_mask`; `fixed` must be sorted.
template <class F>
void for_each_in_subspace(const StateVector& state, std::span<const Qubit> fixed, Index set_mask, F&& f) {
    const std::int64_t count = static_cast<std::int64_t>(state.size() >> fixed.size());
    const bool parallel = state.num_qubits() >= kParallelThresholdQubits;
#pragma omp parallel for if (parallel) schedule(static)
    for (std::int64_t k = 0; k < count; ++k) {
        f(spread_bits(static_cast<Index>(k), fixed) | set_mask);
    }
    count_touch(static_cast<std::uint64_t>(count));
}

bool is_diagonal(const Matrix2& u) noexcept { return u[1] == 0.0 && u[2] == 0.0; }

StateVector& apply_pairs(StateVector& state, const Matrix2& u, Qubit target, std::span<const Qubit> controls) {
    std::vector<Qubit> fixed(controls.begin(), controls.end());
    fixed.push_back(target);
    std::sort(fixed.begin(), fixed.end());
    const Index cmask = mask_of(controls);
    const Index tbit = bit(target);
    Complex* a = state.amplitudes().data();

    if (is_diagonal(u)) {
        const Complex d0 = u[0];
        const Complex d1 = u[3];
        if (d0 == 1.0) {
            // Only the |1> half changes.
            for_each_in_subspace(state, fixed, cmask | tbit, [=](Index i) { a[i] *= d1; });
        } else {
            for_each_in_subspace(state, fixed, cmask, [=](Index i0) {
                a[i0] *= d0;
                a[i0 | tbit] *= d1;
            });
            count_touch(state.size() >> fixed.size());
        }
        return state;
    }

    const Complex u00 = u[0], u01 = u[1], u10 = u[2], u11 = u[3];
    for_each_in_subspace(state, fixed, cmask, [=](Index i0) {
        const Index i1 = i0 | tbit;
        const Complex x0 = a[i0];
        const Complex x1 = a[i1];
        a[i0] = u00 * x0 + u01 * x1;
        a[i1] = u10 * x0 + u11 * x1;
    });
    count_touch(state.size() >> fixed.size());
    return state;
}

}  // namespace

std::string_view gate_name(GateKind kind) noexcept {
    switch (kind) {
        case GateKind::X: return "x";
        case GateKind::Y: return "y";
        case GateKind::Z: return "z";
        case GateKind::H: return "h";
        case GateKind::S: return "s";
        case GateKind::T: return "t";
        case GateKind::Rz: return "rz";
        case GateKind::Rx: return "rx";
        case GateKind::CNOT: return "cnot";
        case GateKind::CR: return "cr";
        case GateKind::Toffoli: return "toffoli";
        case GateKind::Swap: return "swap";
        case GateKind::Custom: return "custom";
    }
    return "?";
}

std::vector<Qubit> Gate::qubits() const {
    std::vector<Qubit> out = controls;
    out.push_back(target);
    if (kind == GateKind::Swap) {
        out.push_back(partner);
    }
    return out;
}

void validate(const Gate& gate, unsigned n) {
    std::size_t want_controls = 0;
    switch (gate.kind) {
        case GateKind::CNOT:
        case GateKind::CR: want_controls = 1; break;
        case GateKind::Toffoli: want_controls = 2; break;
        default: break;
    }
    if (gate.controls.size() != want_controls) {
        throw IndexError(std::string(gate_name(gate.kind)) + " takes " + std::to_string(want_controls) +
                         " control(s), got " + std::to_string(gate.controls.size()));
    }
    const auto qs = gate.qubits();
    check_distinct(qs, gate_name(gate.kind).data());
    if (n > 0) {
        for (Qubit q : qs) {
            if (q >= n) {
                throw IndexError(std::string(gate_name(gate.kind)) + ": qubit " + std::to_string(q) +
                                 " out of range for " + std::to_string(n) + " qubits");
            }
        }
    }
}

Matrix2 rx_matrix(double theta) noexcept {
    const double c = std::cos(theta / 2);
    const double s = std::sin(theta / 2);
    return {Complex(c, 0), Complex(0, -s), Complex(0, -s), Complex(c, 0)};
}

Matrix2 rz_matrix(double theta) noexcept {
    return {std::exp(-kI * (theta / 2)), 0.0, 0.0, std::exp(kI * (theta / 2))};
}

Matrix2 phase_matrix(double theta) noexcept { return {1.0, 0.0, 0.0, std::exp(kI * theta)}; }

Matrix2 adjoint(const Matrix2& m) noexcept {
    return {std::conj(m[0]), std::conj(m[2]), std::conj(m[1]), std::conj(m[3])};
}

Matrix2 target_matrix(const Gate& gate) {
    const double r = 1.0 / std::numbers::sqrt2;
    switch (gate.kind) {
        case GateKind::X:
        case GateKind::CNOT:
        case GateKind::Toffoli: return {0.0, 1.0, 1.0, 0.0};
        case GateKind::Y: return {0.0, -kI, kI, 0.0};
        case GateKind::Z: return {1.0, 0.0, 0.0, -1.0};
        case GateKind::H: return {r, r, r, -r};
        case GateKind::S: return {1.0, 0.0, 0.0, kI};
        case GateKind::T: return phase_matrix(std::numbers::pi / 4);
        case GateKind::Rz: return rz_matrix(gate.theta);
        case GateKind::Rx: return rx_matrix(gate.theta);
        case GateKind::CR: return phase_matrix(gate.theta);
        case GateKind::Custom: return gate.custom;
        case GateKind::Swap: break;
    }
    throw PreconditionError("swap has no single-target matrix");
}

GateMatrix matrix_of(const Gate& gate) {
    validate(gate);
    if (gate.kind == GateKind::Swap) {
        GateMatrix m{4, std::vector<Complex>(16, 0.0)};
        const unsigned perm[4] = {0, 2, 1, 3};
        for (unsigned r = 0; r < 4; ++r) {
            m.entries[r * 4 + perm[r]] = 1.0;
        }
        return m;
    }
    const Matrix2 u = target_matrix(gate);
    const unsigned nc = static_cast<unsigned>(gate.controls.size());
    const unsigned dim = 2U << nc;
    GateMatrix m{dim, std::vector<Complex>(dim * dim, 0.0)};
    // Target is the least significant local bit; the block with all controls set is the last 2x2.
    for (unsigned r = 0; r + 2 < dim; ++r) {
        m.entries[r * dim + r] = 1.0;
    }
    const unsigned o = dim - 2;
    m.entries[o * dim + o] = u[0];
    m.entries[o * dim + o + 1] = u[1];
    m.entries[(o + 1) * dim + o] = u[2];
    m.entries[(o + 1) * dim + o + 1] = u[3];
    return m;
}

Gate adjoint(const Gate& gate) {
    Gate g = gate;
    switch (gate.kind) {
        case GateKind::Rz:
        case GateKind::Rx:
        case GateKind::CR: g.theta = -gate.theta; break;
        case GateKind::S:
        case GateKind::T:
        case GateKind::Custom:
            g.kind = GateKind::Custom;
            g.custom = adjoint(target_matrix(gate));
            break;
        default: break;
    }
    return g;
}

StateVector& apply_single_qubit(StateVector& state, const Matrix2& u, Qubit target) {
    check_qubit(state, target, "apply_single_qubit");
    return apply_pairs(state, u, target, {});
}

StateVector& apply_controlled(StateVector& state, const Matrix2& u, Qubit target,
                              std::span<const Qubit> controls) {
    check_qubit(state, target, "apply_controlled");
    for (Qubit c : controls) {
        check_qubit(state, c, "apply_controlled");
    }
    std::vector<Qubit> all(controls.begin(), controls.end());
    all.push_back(target);
    check_distinct(all, "apply_controlled");
    return apply_pairs(state, u, target, controls);
}

StateVector& apply_controlled_phase(StateVector& state, double theta, Qubit q1, Qubit q2) {
    check_qubit(state, q1, "apply_controlled_phase");
    check_qubit(state, q2, "apply_controlled_phase");
    if (q1 == q2) {
        throw IndexError("apply_controlled_phase: q1 == q2 == " + std::to_string(q1));
    }
    const Qubit fixed[2] = {std::min(q1, q2), std::max(q1, q2)};
    const Complex phase = std::exp(kI * theta);
    Complex* a = state.amplitudes().data();
    for_each_in_subspace(state, fixed, bit(q1) | bit(q2), [=](Index i) { a[i] *= phase; });
    return state;
}

StateVector& apply_swap(StateVector& state, Qubit q1, Qubit q2, std::span<const Qubit> controls) {
    check_qubit(state, q1, "apply_swap");
    check_qubit(state, q2, "apply_swap");
    std::vector<Qubit> fixed(controls.begin(), controls.end());
    for (Qubit c : controls) {
        check_qubit(state, c, "apply_swap");
    }
    fixed.push_back(q1);
    fixed.push_back(q2);
    check_distinct(fixed, "apply_swap");
    std::sort(fixed.begin(), fixed.end());
    const Index cmask = mask_of(controls);
    const Index b1 = bit(q1);
    const Index b2 = bit(q2);
    Complex* a = state.amplitudes().data();
    // Pairs |..1..0..> <-> |..0..1..>.
    for_each_in_subspace(state, fixed, cmask | b1, [=](Index i) { std::swap(a[i], a[i ^ b1 ^ b2]); });
    count_touch(state.size() >> fixed.size());
    return state;
}

StateVector& apply_gate(StateVector& state, const Gate& gate, std::span<const Qubit> extra_controls) {
    validate(gate, state.num_qubits());
    if (gate.kind == GateKind::Swap) {
        return apply_swap(state, gate.target, gate.partner, extra_controls);
    }
    if (extra_controls.empty()) {
        switch (gate.kind) {
            case GateKind::CR: return apply_controlled_phase(state, gate.theta, gate.controls[0], gate.target);
            case GateKind::CNOT:
            case GateKind::Toffoli: return apply_controlled(state, target_matrix(gate), gate.target, gate.controls);
            default: return apply_single_qubit(state, target_matrix(gate), gate.target);
        }
    }
    std::vector<Qubit> controls = gate.controls;
    controls.insert(controls.end(), extra_controls.begin(), extra_controls.end());
    return apply_controlled(state, target_matrix(gate), gate.target, controls);
}

}  // namespace qcemu
