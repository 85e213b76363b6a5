#include "doctest.h"

#include <cmath>
#include <numbers>
#include <sstream>

#include "oracles.hpp"
#include "qcemu/circuit.hpp"
#include "qcemu/errors.hpp"

using namespace qcemu;

namespace {

double max_abs_diff(const StateVector& a, std::span<const Complex> b) {
    double err = 0.0;
    for (Index i = 0; i < a.size(); ++i) err = std::max(err, std::abs(a[i] - b[i]));
    return err;
}

Circuit random_circuit(unsigned n, unsigned gates, Rng& rng) {
    Circuit c(n, "random");
    std::uniform_int_distribution<unsigned> q(0, n - 1);
    std::uniform_real_distribution<double> ang(-3.0, 3.0);
    for (unsigned i = 0; i < gates; ++i) {
        const Qubit a = q(rng);
        const Qubit b = (a + 1 + q(rng) % (n - 1)) % n;
        switch (i % 6) {
            case 0: c.add(Gate::h(a)); break;
            case 1: c.add(Gate::cr(ang(rng), a, b)); break;
            case 2: c.add(Gate::cnot(a, b)); break;
            case 3: c.add(Gate::t(b)); break;
            case 4: c.add(Gate::rx(ang(rng), a)); break;
            default: c.add(Gate::swap(a, b)); break;
        }
    }
    return c;
}

}  // namespace

TEST_CASE("QFT gate counts") {
    CHECK(build_qft(1).gate_count() == 1);
    CHECK(build_qft(1).gates()[0] == Gate::h(0));
    for (unsigned n = 1; n <= 12; ++n) {
        const auto c = build_qft(n);
        CHECK(c.count(GateKind::H) == n);
        CHECK(c.count(GateKind::CR) == n * (n - 1) / 2);
        CHECK(c.count(GateKind::Swap) == n / 2);
    }
    CHECK(build_qft(4).gate_count() == 12);
}

TEST_CASE("QFT of |0> is uniform") {
    auto s = new_basis_state(3, 0);
    apply_circuit(s, build_qft(3));
    for (Index i = 0; i < 8; ++i) CHECK(std::abs(s[i] - 1.0 / std::sqrt(8.0)) < 1e-15);
}

TEST_CASE("QFT circuit agrees with the direct DFT sum for n <= 6") {
    Rng rng(31);
    for (unsigned n = 1; n <= 6; ++n) {
        auto s = StateVector::random(n, rng);
        const std::vector<Complex> in(s.amplitudes().begin(), s.amplitudes().end());
        apply_circuit(s, build_qft(n));
        CHECK(max_abs_diff(s, oracle::dft(in)) < 1e-12);

        const auto dense = to_dense_matrix(build_qft(n));
        double err = 0.0;
        for (Index l = 0; l < dense.dim(); ++l)
            for (Index k = 0; k < dense.dim(); ++k)
                err = std::max(err, std::abs(dense.matrix(l, k) - oracle::dft_entry(l, k, dense.dim())));
        CHECK(err < 1e-12);
    }
}

TEST_CASE("QFT on a qubit subset") {
    Rng rng(32);
    auto s = StateVector::random(5, rng);
    const Qubit qs[] = {3, 1, 4};
    auto t = s;
    apply_circuit(t, build_qft_on(5, qs));
    apply_circuit(t, inverse(build_qft_on(5, qs)));
    CHECK(distance(s, t) < 1e-12);
    CHECK(build_qft_on(5, qs).gate_count() == 3 + 3 + 1);
}

TEST_CASE("entangler") {
    auto bell = new_basis_state(2, 0);
    apply_circuit(bell, build_entangler(2));
    const double r = 1.0 / std::sqrt(2.0);
    CHECK(std::abs(bell[0] - r) < 1e-15);
    CHECK(std::abs(bell[3] - r) < 1e-15);
    CHECK(std::abs(bell[1]) == 0.0);

    auto ghz = new_basis_state(3, 0);
    apply_circuit(ghz, build_entangler(3));
    CHECK(std::abs(ghz[0] - r) < 1e-15);
    CHECK(std::abs(ghz[7] - r) < 1e-15);
    for (unsigned n = 2; n <= 10; ++n) CHECK(build_entangler(n).gate_count() == n);
    CHECK_THROWS_AS(build_entangler(1), PreconditionError);
}

TEST_CASE("TFIM Trotter step") {
    CHECK(build_tfim_trotter(8).gate_count() == 29);
    CHECK(build_tfim_trotter(14).gate_count() == 53);
    for (unsigned n = 2; n <= 20; ++n) {
        const auto c = build_tfim_trotter(n);
        CHECK(c.gate_count() == 4 * n - 3);
        CHECK(c.count(GateKind::Rx) == n);
        CHECK(c.count(GateKind::CNOT) == 2 * (n - 1));
        CHECK(c.count(GateKind::Rz) == n - 1);
    }
    Rng rng(6);
    const auto s = StateVector::random(6, rng);
    auto t = s;
    apply_circuit(t, build_tfim_trotter(6, {0.0, 1.0, 1.0}));
    CHECK(distance(s, t) < 1e-14);
}

TEST_CASE("inverse undoes a circuit") {
    Rng rng(7);
    for (unsigned n = 2; n <= 6; ++n) {
        const auto c = random_circuit(n, 40, rng);
        const auto s = StateVector::random(n, rng);
        auto t = s;
        apply_circuit(t, c);
        apply_circuit(t, inverse(c));
        CHECK(distance(s, t) < 1e-12);
    }
}

TEST_CASE("dense matrices") {
    Circuit x(1);
    x.add(Gate::x(0));
    const auto dx = to_dense_matrix(x);
    CHECK(dx.matrix(0, 1) == Complex(1));
    CHECK(dx.matrix(1, 0) == Complex(1));
    CHECK(dx.matrix(0, 0) == Complex(0));

    const auto q2 = to_dense_matrix(build_qft(2));
    const Complex want[4][4] = {{1, 1, 1, 1}, {1, {0, 1}, -1, {0, -1}}, {1, -1, 1, -1}, {1, {0, -1}, -1, {0, 1}}};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) CHECK(std::abs(q2.matrix(i, j) - want[i][j] / 2.0) < 1e-15);

    const auto id = to_dense_matrix(Circuit(3));
    CHECK((id.matrix - DenseMatrix::Identity(8, 8)).norm() == 0.0);

    CHECK_THROWS_AS(to_dense_matrix(Circuit(5), 4), AllocationError);
}

TEST_CASE("dense matrices are unitary and act like the circuit") {
    Rng rng(8);
    for (unsigned n = 2; n <= 8; ++n) {
        const Circuit circuits[] = {build_qft(n), build_tfim_trotter(n), build_entangler(n), random_circuit(n, 30, rng)};
        for (const auto& c : circuits) {
            const auto d = to_dense_matrix(c);
            CHECK(d.unitarity_error() < 1e-12);
            const auto s = StateVector::random(n, rng);
            auto t = s;
            apply_circuit(t, c);
            CHECK(distance(d.apply(s), t) < 1e-12);
        }
    }
}

TEST_CASE("text format round trip") {
    Rng rng(9);
    auto c = random_circuit(5, 50, rng);
    c.add(Gate::toffoli(0, 1, 2)).add(Gate::y(3)).add(Gate::z(4)).add(Gate::s(0)).add(Gate::rz(1e-7, 1));
    const auto text = to_text(c);
    CHECK(text.rfind("# random, 5 qubits, 55 gates\n", 0) == 0);
    const auto back = parse_circuit(text);
    CHECK(back.num_qubits() == 5);
    REQUIRE(back.gate_count() == c.gate_count());
    for (std::size_t i = 0; i < c.gate_count(); ++i) CHECK(back.gates()[i] == c.gates()[i]);
}

TEST_CASE("text format parsing") {
    const auto c = parse_circuit("# comment\nh 0\n\ncnot 0 2\ncr 0.5 1 2   # trailing\n");
    CHECK(c.num_qubits() == 3);
    REQUIRE(c.gate_count() == 3);
    CHECK(c.gates()[1] == Gate::cnot(0, 2));
    CHECK(c.gates()[2] == Gate::cr(0.5, 1, 2));
    CHECK(parse_circuit("x 0\n", 4).num_qubits() == 4);

    auto line_of = [](const std::string& text) {
        try {
            parse_circuit(text);
        } catch (const ParseError& e) {
            return e.line();
        }
        return std::size_t{0};
    };
    CHECK(line_of("h 0\nx 1\nfoo 2\n") == 3);
    CHECK(line_of("h 0\ncnot 1\n") == 2);
    CHECK(line_of("rz abc 0\n") == 1);
    CHECK(line_of("h 0\nh 1\ncnot 1 1\n") == 3);
    CHECK(line_of("x -1\n") == 1);
    CHECK_THROWS_AS(parse_circuit("x 5\n", 3), ParseError);
}
