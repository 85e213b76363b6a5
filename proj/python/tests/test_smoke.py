import math

import numpy as np
import pytest

import qcemu


def test_qft_paths_agree():
    s = qcemu.random_state(8, seed=4)
    sim, emu = qcemu.simulate_and_emulate_qft(8, s)
    assert qcemu.distance(sim, emu) < 1e-10
    # Against numpy's inverse FFT, which has the same sign convention.
    ref = np.fft.ifft(s) * math.sqrt(len(s))
    assert np.allclose(emu, ref, atol=1e-12)


def test_qft_on_subset_and_inverse():
    s = qcemu.random_state(6, seed=1)
    t = qcemu.emulate_qft(s, qubits=[1, 3, 4])
    back = qcemu.emulate_qft(t, qubits=[1, 3, 4], inverse=True)
    assert qcemu.distance(back, s) < 1e-12


def test_circuit_building_and_text():
    c = qcemu.Circuit(2)
    c.add(qcemu.Gate.h(0)).add(qcemu.Gate.cnot(0, 1))
    assert c.gate_count() == 2
    out = qcemu.apply_circuit(c, qcemu.basis_state(2))
    assert np.allclose(qcemu.full_distribution(out), [0.5, 0, 0, 0.5])
    again = qcemu.parse_circuit(c.to_text())
    assert again.gate_count() == 2
    assert qcemu.build_qft(5).gate_count() == 17


def test_parse_error_is_raised():
    with pytest.raises(qcemu.ParseError, match="line 2"):
        qcemu.parse_circuit("h 0\nbogus 1\n")
    with pytest.raises(qcemu.Error):
        qcemu.parse_circuit("h 0\nbogus 1\n")


def test_arithmetic():
    lay = qcemu.layout_for(qcemu.ArithOp.Mul, 3)
    assert lay.num_qubits == 9 + qcemu.ancilla_count(qcemu.ArithOp.Mul, 3)
    circ = qcemu.build_multiplier(lay)
    inp = qcemu.basis_state(lay.num_qubits, lay.encode(5, 3))
    out = qcemu.apply_circuit(circ, inp)
    k = int(np.argmax(np.abs(out)))
    assert lay.c_of(k) == 15 % 8
    assert qcemu.distance(out, qcemu.emulate_multiply(inp, lay)) < 1e-12

    d = qcemu.layout_for(qcemu.ArithOp.Div, 3)
    out = qcemu.emulate_divide(qcemu.basis_state(d.num_qubits, d.encode(7, 2)), d)
    k = int(np.argmax(np.abs(out)))
    assert (d.a_of(k), d.c_of(k)) == (1, 3)


def test_phase_estimation():
    u = qcemu.Circuit(1)
    u.add(qcemu.Gate.t(0))
    est = qcemu.simulate_qpe(u, qcemu.basis_state(1, 1), 3)
    assert est.phi == 0.125
    assert est.distribution[1] == pytest.approx(1.0)

    tfim = qcemu.build_tfim_trotter(3)
    pairs = qcemu.emulate_qpe_eigen(tfim)
    assert len(pairs) == 8
    v = np.asarray(pairs[0].vector)
    sq = qcemu.emulate_qpe_squaring(tfim, v, 6)
    assert min(abs(sq.phi - pairs[0].phase), 1 - abs(sq.phi - pairs[0].phase)) <= 2 ** -6

    dist = qcemu.qpe_outcome_distribution(pairs, qcemu.basis_state(3), 4)
    sim = qcemu.simulate_qpe(tfim, qcemu.basis_state(3), 4)
    assert np.allclose(dist, sim.distribution, atol=1e-9)

    m = qcemu.to_dense_matrix(tfim)
    assert np.allclose(m.conj().T @ m, np.eye(8), atol=1e-12)


def test_cost_model():
    assert qcemu.select_strategy(8, 2, 29, False) == qcemu.Strategy.Simulate
    assert qcemu.select_strategy(8, 10, 29, True) == qcemu.Strategy.Eigen
    b = qcemu.crossover_bits(10, 37, qcemu.EmulationPath.Square, False)
    assert b == 20
    m = qcemu.MachineParams()
    m.b_net = math.inf
    assert qcemu.t_qft(28, m) / qcemu.t_fft(28, m) == pytest.approx(11.2)
    assert qcemu.single_node_speedup_estimate(28, m) == pytest.approx(14.0)

    truth = qcemu.MachineParams()
    truth.b_mem = 9e9
    samples = [("qft", n, qcemu.t_qft(n, truth)) for n in range(8, 14)]
    fit = qcemu.calibrate(samples)
    assert fit.params.b_mem == pytest.approx(9e9, rel=1e-9)
