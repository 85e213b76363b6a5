#include "doctest.h"

#include <set>

#include "oracles.hpp"
#include "qcemu/arithmetic.hpp"
#include "qcemu/errors.hpp"

using namespace qcemu;

namespace {

// Run `c` on the basis state `in` through the statevector and return the single output index.
Index run_basis(const Circuit& c, Index in) {
    auto s = new_basis_state(c.num_qubits(), in);
    apply_circuit(s, c);
    Index out = 0;
    int hits = 0;
    for (Index i = 0; i < s.size(); ++i) {
        if (std::abs(s[i]) > 0.5) {
            out = i;
            ++hits;
        }
    }
    REQUIRE(hits == 1);
    CHECK(std::abs(std::abs(s[out]) - 1.0) < 1e-12);
    return out;
}

}  // namespace

TEST_CASE("ancilla counts") {
    for (unsigned m = 1; m <= 8; ++m) {
        CHECK(ancilla_count(ArithOp::Add, m) == 1);
        CHECK(ancilla_count(ArithOp::Mul, m) == m + 1);
        CHECK(ancilla_count(ArithOp::Div, m) == 2 * m + 2);
        CHECK(ancilla_count(ArithOp::Div, m) > ancilla_count(ArithOp::Mul, m));
    }
    CHECK(layout_for(ArithOp::Add, 3).num_qubits() == 7);
    CHECK(layout_for(ArithOp::Mul, 3).num_qubits() == 13);
    CHECK(layout_for(ArithOp::Div, 3).num_qubits() == 17);
}

TEST_CASE("layout encode and decode") {
    const auto l = RegisterLayout::standard(3, 2);
    const Index i = l.encode(5, 6, 7);
    CHECK(i == (5 | (6 << 3) | (7 << 6)));
    CHECK(l.a_of(i) == 5);
    CHECK(l.b_of(i) == 6);
    CHECK(l.c_of(i) == 7);
    CHECK(l.ancilla_of(i) == 0);

    RegisterLayout bad = l;
    bad.b[0] = bad.a[0];
    CHECK_THROWS_AS(bad.validate(), IndexError);
}

TEST_CASE("adder examples") {
    const auto l = layout_for(ArithOp::Add, 2);
    const auto c = build_adder(l);
    CHECK(run_basis(c, l.encode(1, 1)) == l.encode(1, 2));
    CHECK(run_basis(c, l.encode(3, 1)) == l.encode(3, 0));

    const auto l3 = layout_for(ArithOp::Add, 3);
    const auto c3 = build_adder(l3);
    for (Index a = 0; a < 8; ++a)
        for (Index b = 0; b < 8; ++b) CHECK(run_basis(c3, l3.encode(a, b)) == l3.encode(a, (a + b) % 8));
}

TEST_CASE("adder on a superposition") {
    const auto l = layout_for(ArithOp::Add, 2);
    const Index in[] = {l.encode(0, 0), l.encode(1, 2)};
    std::vector<Complex> amps(Index{1} << l.num_qubits(), 0.0);
    amps[in[0]] = amps[in[1]] = 1.0 / std::sqrt(2.0);
    StateVector s(amps);
    apply_circuit(s, build_adder(l));
    CHECK(std::abs(s[l.encode(0, 0)] - 1.0 / std::sqrt(2.0)) < 1e-15);
    CHECK(std::abs(s[l.encode(1, 3)] - 1.0 / std::sqrt(2.0)) < 1e-15);
}

TEST_CASE("multiplier examples") {
    const auto l = layout_for(ArithOp::Mul, 2);
    const auto c = build_multiplier(l);
    CHECK(run_basis(c, l.encode(2, 3)) == l.encode(2, 3, 2));
    CHECK(run_basis(c, l.encode(0, 3)) == l.encode(0, 3, 0));
    CHECK(run_basis(c, l.encode(3, 3)) == l.encode(3, 3, 1));
}

TEST_CASE("divider examples") {
    const auto l = layout_for(ArithOp::Div, 3);
    const auto c = build_divider(l);
    CHECK(run_basis(c, l.encode(7, 2)) == l.encode(1, 2, 3));
    CHECK(run_basis(c, l.encode(5, 0)) == l.encode(5, 0, 0));
    CHECK(run_basis(c, l.encode(6, 3)) == l.encode(0, 3, 2));
}

TEST_CASE("arithmetic circuits are bijective with clean ancillas for m <= 3") {
    for (unsigned m = 1; m <= 3; ++m) {
        CAPTURE(m);
        const Index M = Index{1} << m;
        for (ArithOp op : {ArithOp::Add, ArithOp::Mul, ArithOp::Div}) {
            const auto l = layout_for(op, m);
            const auto c = op == ArithOp::Add ? build_adder(l) : op == ArithOp::Mul ? build_multiplier(l) : build_divider(l);
            std::set<Index> seen;
            for (Index a = 0; a < M; ++a) {
                for (Index b = 0; b < M; ++b) {
                    const Index out = run_basis(c, l.encode(a, b));
                    CHECK(l.ancilla_of(out) == 0);
                    CHECK(seen.insert(out).second);
                    switch (op) {
                        case ArithOp::Add: CHECK(out == l.encode(a, (a + b) % M)); break;
                        case ArithOp::Mul: CHECK(out == l.encode(a, b, (a * b) % M)); break;
                        case ArithOp::Div: CHECK(out == (b == 0 ? l.encode(a, 0) : l.encode(a % b, b, a / b))); break;
                    }
                }
            }
        }
    }
}

TEST_CASE("arithmetic circuits at m = 4..6 by classical evaluation") {
    for (unsigned m = 4; m <= 6; ++m) {
        CAPTURE(m);
        const Index M = Index{1} << m;
        const auto lm = layout_for(ArithOp::Mul, m);
        const auto ld = layout_for(ArithOp::Div, m);
        const auto mul = build_multiplier(lm);
        const auto div = build_divider(ld);
        for (Index a = 0; a < M; ++a) {
            for (Index b = 0; b < M; ++b) {
                CHECK(oracle::classical_eval(mul, lm.encode(a, b)) == lm.encode(a, b, (a * b) % M));
                CHECK(oracle::classical_eval(div, ld.encode(a, b)) ==
                      (b == 0 ? ld.encode(a, 0) : ld.encode(a % b, b, a / b)));
            }
        }
    }
}

TEST_CASE("arithmetic circuits run on any valid layout") {
    // Registers interleaved and ancillas in front.
    RegisterLayout l;
    l.m = 2;
    l.ancilla = {0, 1, 2};
    l.a = {3, 6};
    l.b = {4, 7};
    l.c = {5, 8};
    const auto c = build_multiplier(l);
    CHECK(c.num_qubits() == 9);
    for (Index a = 0; a < 4; ++a)
        for (Index b = 0; b < 4; ++b) CHECK(oracle::classical_eval(c, l.encode(a, b)) == l.encode(a, b, (a * b) % 4));
}

TEST_CASE("builders reject short ancilla lists") {
    CHECK_THROWS_AS(build_multiplier(RegisterLayout::standard(3, 2)), PreconditionError);
    CHECK_THROWS_AS(build_divider(RegisterLayout::standard(3, 7)), PreconditionError);
    CHECK_THROWS_AS(build_adder(RegisterLayout::standard(3, 0, false)), PreconditionError);
}

TEST_CASE("gate counts are locked") {
    CHECK(build_adder(layout_for(ArithOp::Add, 4)).gate_count() == 24);
    CHECK(build_multiplier(layout_for(ArithOp::Mul, 4)).gate_count() == 80);
    CHECK(build_divider(layout_for(ArithOp::Div, 4)).gate_count() == 286);
    CHECK(build_multiplier(layout_for(ArithOp::Mul, 5)).gate_count() == 120);
    CHECK(build_divider(layout_for(ArithOp::Div, 5)).gate_count() == 429);
}
