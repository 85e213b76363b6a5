#include "doctest.h"

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "qcemu/errors.hpp"
#include "qcemu/gates.hpp"

using namespace qcemu;

namespace {

constexpr double kPi = std::numbers::pi;

bool is_unitary(const GateMatrix& m, double tol = 1e-14) {
    for (unsigned i = 0; i < m.dim; ++i) {
        for (unsigned j = 0; j < m.dim; ++j) {
            Complex acc = 0.0;
            for (unsigned k = 0; k < m.dim; ++k) acc += std::conj(m(k, i)) * m(k, j);
            if (std::abs(acc - (i == j ? 1.0 : 0.0)) > tol) return false;
        }
    }
    return true;
}

std::vector<Gate> sample_gates() {
    const Matrix2 u = {Complex(0.6, 0.0), Complex(0.0, 0.8), Complex(0.0, 0.8), Complex(0.6, 0.0)};
    return {Gate::x(1),          Gate::y(0),          Gate::z(2),          Gate::h(3),
            Gate::s(1),          Gate::t(0),          Gate::rz(0.7, 2),    Gate::rx(-1.3, 1),
            Gate::cnot(3, 0),    Gate::cr(0.4, 0, 2), Gate::toffoli(0, 3, 1), Gate::swap(1, 3),
            Gate::custom_2x2(u, 2)};
}

}  // namespace

TEST_CASE("gate matrices") {
    const auto x = matrix_of(Gate::x(0));
    CHECK(x.dim == 2);
    CHECK(x(0, 1) == Complex(1));
    CHECK(x(1, 0) == Complex(1));
    CHECK(x(0, 0) == Complex(0));

    const auto rz = matrix_of(Gate::rz(kPi / 2, 0));
    CHECK(std::abs(rz(0, 0) - std::polar(1.0, -kPi / 4)) < 1e-15);
    CHECK(std::abs(rz(1, 1) - std::polar(1.0, kPi / 4)) < 1e-15);

    const auto cr = matrix_of(Gate::cr(kPi / 4, 0, 1));
    CHECK(cr.dim == 4);
    for (unsigned i = 0; i < 4; ++i) {
        for (unsigned j = 0; j < 4; ++j) {
            const Complex want = i != j ? 0.0 : (i == 3 ? std::polar(1.0, kPi / 4) : 1.0);
            CHECK(std::abs(cr(i, j) - want) < 1e-15);
        }
    }

    const auto cnot = matrix_of(Gate::cnot(0, 1));
    const int want_cnot[4][4] = {{1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 0, 1}, {0, 0, 1, 0}};
    for (unsigned i = 0; i < 4; ++i)
        for (unsigned j = 0; j < 4; ++j) CHECK(cnot(i, j) == Complex(want_cnot[i][j]));

    CHECK(matrix_of(Gate::toffoli(0, 1, 2)).dim == 8);
    for (const Gate& g : sample_gates()) {
        CAPTURE(gate_name(g.kind));
        CHECK(is_unitary(matrix_of(g)));
    }
}

TEST_CASE("single-qubit gates on basis states") {
    auto s = new_basis_state(1, 0);
    apply_gate(s, Gate::h(0));
    const double r = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(s[0] - r) < 1e-15);
    CHECK(std::abs(s[1] - r) < 1e-15);

    auto t = new_basis_state(2, 0);
    apply_gate(t, Gate::x(0));
    CHECK(distance(t, new_basis_state(2, 1)) == 0.0);
}

TEST_CASE("X on the first textbook qubit is X (x) 1") {
    // Textbook order puts qubit 0 in the most significant position; here that is qubit n-1.
    const Matrix2 xm = target_matrix(Gate::x(0));
    const int want[4][4] = {{0, 0, 1, 0}, {0, 0, 0, 1}, {1, 0, 0, 0}, {0, 1, 0, 0}};
    const auto ref = oracle::kron_single_qubit(2, xm, 0, /*msb_first=*/true);
    for (Index col = 0; col < 4; ++col) {
        auto s = new_basis_state(2, col);
        apply_single_qubit(s, xm, 1);
        for (Index row = 0; row < 4; ++row) {
            CHECK(s[row] == Complex(want[row][col]));
            CHECK(ref[row][col] == Complex(want[row][col]));
        }
    }
}

TEST_CASE("single-qubit kernel matches the Kronecker product for n <= 6") {
    Rng rng(99);
    const Matrix2 mats[] = {target_matrix(Gate::h(0)), rx_matrix(0.37), rz_matrix(-2.1),
                            target_matrix(Gate::y(0))};
    for (unsigned n = 1; n <= 6; ++n) {
        for (unsigned q = 0; q < n; ++q) {
            for (const Matrix2& u : mats) {
                auto s = StateVector::random(n, rng);
                const auto want = oracle::matvec(oracle::kron_single_qubit(n, u, q, false), s.amplitudes());
                apply_single_qubit(s, u, q);
                double err = 0.0;
                for (Index i = 0; i < s.size(); ++i) err = std::max(err, std::abs(s[i] - want[i]));
                CHECK(err < 1e-14);
            }
        }
    }
}

TEST_CASE("controlled gates") {
    // |01> with qubit 0 set: control fires.
    auto s = new_basis_state(2, 0b01);
    apply_gate(s, Gate::cnot(0, 1));
    CHECK(distance(s, new_basis_state(2, 0b11)) == 0.0);

    auto clear = new_basis_state(2, 0b10);
    apply_gate(clear, Gate::cnot(0, 1));
    CHECK(distance(clear, new_basis_state(2, 0b10)) == 0.0);

    auto t = new_basis_state(3, 0b110);
    apply_gate(t, Gate::toffoli(1, 2, 0));
    CHECK(distance(t, new_basis_state(3, 0b111)) == 0.0);

    auto u = new_basis_state(3, 0b010);
    apply_gate(u, Gate::toffoli(1, 2, 0));
    CHECK(distance(u, new_basis_state(3, 0b010)) == 0.0);
}

TEST_CASE("controlled phase") {
    auto s = new_basis_state(2, 3);
    apply_controlled_phase(s, kPi, 0, 1);
    CHECK(std::abs(s[3] + 1.0) < 1e-15);

    auto t = new_basis_state(2, 1);
    apply_controlled_phase(t, kPi, 0, 1);
    CHECK(t[1] == Complex(1));

    Rng rng(4);
    for (Qubit a = 0; a < 6; ++a) {
        for (Qubit b = 0; b < 6; ++b) {
            if (a == b) continue;
            auto fast = StateVector::random(6, rng);
            auto slow = fast;
            apply_controlled_phase(fast, 0.9, a, b);
            const Qubit ctl[] = {a};
            apply_controlled(slow, phase_matrix(0.9), b, ctl);
            double err = 0.0;
            for (Index i = 0; i < fast.size(); ++i) err = std::max(err, std::abs(fast[i] - slow[i]));
            CHECK(err < 1e-14);
        }
    }
}

TEST_CASE("swap exchanges bits") {
    auto s = new_basis_state(3, 0b001);
    apply_gate(s, Gate::swap(0, 2));
    CHECK(distance(s, new_basis_state(3, 0b100)) == 0.0);
}

TEST_CASE("extra controls") {
    const Qubit ctl[] = {2};
    auto off = new_basis_state(3, 0b000);
    apply_gate(off, Gate::x(0), ctl);
    CHECK(distance(off, new_basis_state(3, 0)) == 0.0);
    auto on = new_basis_state(3, 0b100);
    apply_gate(on, Gate::x(0), ctl);
    CHECK(distance(on, new_basis_state(3, 0b101)) == 0.0);

    auto sw = new_basis_state(3, 0b101);
    apply_gate(sw, Gate::swap(0, 1), ctl);
    CHECK(distance(sw, new_basis_state(3, 0b110)) == 0.0);

    auto cr = new_basis_state(3, 0b111);
    const Qubit ctl0[] = {0};
    apply_gate(cr, Gate::cr(kPi / 2, 1, 2), ctl0);
    CHECK(std::abs(cr[7] - Complex(0, 1)) < 1e-15);
}

TEST_CASE("every kernel preserves the norm and is undone by its adjoint") {
    Rng rng(8);
    for (const Gate& g : sample_gates()) {
        CAPTURE(gate_name(g.kind));
        const auto s0 = StateVector::random(5, rng);
        auto s = s0;
        apply_gate(s, g);
        CHECK(std::abs(norm_sq(s) - 1.0) < 1e-13);
        apply_gate(s, adjoint(g));
        CHECK(distance(s, s0) < 1e-12);
    }
}

TEST_CASE("invalid gates are rejected") {
    auto s = new_basis_state(2, 0);
    CHECK_THROWS_AS(apply_gate(s, Gate::x(2)), IndexError);
    CHECK_THROWS_AS(apply_gate(s, Gate::cnot(1, 1)), IndexError);
    CHECK_THROWS_AS(apply_gate(s, Gate::swap(0, 0)), IndexError);
    CHECK_THROWS_AS(validate(Gate::toffoli(0, 0, 1)), IndexError);
    Gate bad = Gate::cnot(0, 1);
    bad.controls.clear();
    CHECK_THROWS_AS(validate(bad), IndexError);
    const Qubit ctl[] = {0};
    CHECK_THROWS_AS(apply_gate(s, Gate::x(0), ctl), IndexError);
    CHECK_THROWS_AS(apply_controlled_phase(s, 1.0, 0, 0), IndexError);
}
