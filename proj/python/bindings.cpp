#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <sstream>

#include "qcemu/arithmetic.hpp"
#include "qcemu/circuit.hpp"
#include "qcemu/costmodel.hpp"
#include "qcemu/emulator.hpp"
#include "qcemu/errors.hpp"
#include "qcemu/qpe.hpp"

namespace py = pybind11;
using namespace qcemu;

namespace {

using CArray = py::array_t<Complex, py::array::c_style | py::array::forcecast>;

StateVector to_state(const CArray& a) {
    if (a.ndim() != 1) throw DimensionError("state must be a 1-d array");
    const auto* p = a.data();
    return StateVector(std::vector<Complex>(p, p + a.size()));
}

CArray to_array(const StateVector& s) {
    const auto amps = s.amplitudes();
    CArray out(static_cast<py::ssize_t>(amps.size()));
    std::copy(amps.begin(), amps.end(), out.mutable_data());
    return out;
}

py::array_t<double> probs_of(const DistributionTable& t) {
    py::array_t<double> out(static_cast<py::ssize_t>(t.probs.size()));
    std::copy(t.probs.begin(), t.probs.end(), out.mutable_data());
    return out;
}

std::vector<Qubit> all_qubits(const StateVector& s) {
    std::vector<Qubit> q(s.num_qubits());
    for (Qubit i = 0; i < s.num_qubits(); ++i) q[i] = i;
    return q;
}

}  // namespace

PYBIND11_MODULE(_qcemu, m) {
    m.doc() = "State-vector simulation and emulation shortcuts for quantum circuits";

    // Error first so the others can derive from it on the Python side.
    static py::exception<Error> error(m, "Error");
    py::register_exception<DimensionError>(m, "DimensionError", error.ptr());
    py::register_exception<IndexError>(m, "QubitIndexError", error.ptr());
    py::register_exception<PreconditionError>(m, "PreconditionError", error.ptr());
    py::register_exception<AllocationError>(m, "AllocationError", error.ptr());
    py::register_exception<ConvergenceError>(m, "ConvergenceError", error.ptr());
    py::register_exception<ParseError>(m, "ParseError", error.ptr());

    py::enum_<GateKind>(m, "GateKind")
        .value("X", GateKind::X)
        .value("Y", GateKind::Y)
        .value("Z", GateKind::Z)
        .value("H", GateKind::H)
        .value("S", GateKind::S)
        .value("T", GateKind::T)
        .value("Rz", GateKind::Rz)
        .value("Rx", GateKind::Rx)
        .value("CNOT", GateKind::CNOT)
        .value("CR", GateKind::CR)
        .value("Toffoli", GateKind::Toffoli)
        .value("Swap", GateKind::Swap)
        .value("Custom", GateKind::Custom);

    py::class_<Gate>(m, "Gate")
        .def_readonly("kind", &Gate::kind)
        .def_readonly("target", &Gate::target)
        .def_readonly("controls", &Gate::controls)
        .def_readonly("theta", &Gate::theta)
        .def("qubits", &Gate::qubits)
        .def_static("x", &Gate::x)
        .def_static("y", &Gate::y)
        .def_static("z", &Gate::z)
        .def_static("h", &Gate::h)
        .def_static("s", &Gate::s)
        .def_static("t", &Gate::t)
        .def_static("rz", &Gate::rz, py::arg("theta"), py::arg("q"))
        .def_static("rx", &Gate::rx, py::arg("theta"), py::arg("q"))
        .def_static("cnot", &Gate::cnot, py::arg("control"), py::arg("target"))
        .def_static("cr", &Gate::cr, py::arg("theta"), py::arg("control"), py::arg("target"))
        .def_static("toffoli", &Gate::toffoli)
        .def_static("swap", &Gate::swap)
        .def("__repr__", [](const Gate& g) { return "<Gate " + std::string(gate_name(g.kind)) + ">"; });

    py::class_<Circuit>(m, "Circuit")
        .def(py::init<unsigned, std::string>(), py::arg("n"), py::arg("label") = "")
        .def_property_readonly("num_qubits", &Circuit::num_qubits)
        .def_property_readonly("label", &Circuit::label)
        .def("gate_count", &Circuit::gate_count)
        .def("count", &Circuit::count)
        .def("add", &Circuit::add, py::return_value_policy::reference_internal)
        .def("append", &Circuit::append, py::return_value_policy::reference_internal)
        .def_property_readonly("gates",
                               [](const Circuit& c) { return std::vector<Gate>(c.gates().begin(), c.gates().end()); })
        .def("to_text", [](const Circuit& c) { return to_text(c); })
        .def("__len__", &Circuit::gate_count);

    py::class_<TfimParams>(m, "TfimParams")
        .def(py::init<>())
        .def_readwrite("dt", &TfimParams::dt)
        .def_readwrite("h", &TfimParams::h)
        .def_readwrite("J", &TfimParams::J);

    m.def("build_qft", &build_qft, py::arg("n"));
    m.def("build_entangler", &build_entangler, py::arg("n"));
    m.def("build_tfim_trotter", &build_tfim_trotter, py::arg("n"), py::arg("params") = TfimParams{});
    m.def("inverse", &inverse);
    m.def("parse_circuit", py::overload_cast<const std::string&, unsigned>(&parse_circuit), py::arg("text"),
          py::arg("n") = 0);

    m.def(
        "apply_circuit", [](const Circuit& c, const CArray& state) {
            auto s = to_state(state);
            {
                py::gil_scoped_release release;
                apply_circuit(s, c);
            }
            return to_array(s);
        },
        py::arg("circuit"), py::arg("state"), "Run the circuit gate by gate on a copy of the state");
    m.def(
        "basis_state", [](unsigned n, Index i) { return to_array(new_basis_state(n, i)); }, py::arg("n"),
        py::arg("index") = 0);
    m.def(
        "random_state",
        [](unsigned n, std::uint64_t seed) {
            Rng rng(seed);
            return to_array(StateVector::random(n, rng));
        },
        py::arg("n"), py::arg("seed") = 0);
    m.def("distance", [](const CArray& a, const CArray& b) { return distance(to_state(a), to_state(b)); });
    m.def(
        "full_distribution",
        [](const CArray& state, std::optional<std::vector<Qubit>> qubits) {
            const auto s = to_state(state);
            return probs_of(full_distribution(s, qubits ? *qubits : all_qubits(s)));
        },
        py::arg("state"), py::arg("qubits") = py::none());

    m.def(
        "emulate_qft",
        [](const CArray& state, std::optional<std::vector<Qubit>> qubits, bool inverse) {
            auto s = to_state(state);
            {
                py::gil_scoped_release release;
                if (qubits) {
                    emulate_qft(s, std::span<const Qubit>(*qubits), inverse);
                } else {
                    emulate_qft(s, inverse);
                }
            }
            return to_array(s);
        },
        py::arg("state"), py::arg("qubits") = py::none(), py::arg("inverse") = false);

    py::enum_<ArithOp>(m, "ArithOp").value("Add", ArithOp::Add).value("Mul", ArithOp::Mul).value("Div", ArithOp::Div);

    py::class_<RegisterLayout>(m, "RegisterLayout")
        .def_static("standard", &RegisterLayout::standard, py::arg("m"), py::arg("ancillas"), py::arg("with_c") = true)
        .def_readonly("m", &RegisterLayout::m)
        .def_readonly("a", &RegisterLayout::a)
        .def_readonly("b", &RegisterLayout::b)
        .def_readonly("c", &RegisterLayout::c)
        .def_readonly("ancilla", &RegisterLayout::ancilla)
        .def_property_readonly("num_qubits", &RegisterLayout::num_qubits)
        .def("encode", &RegisterLayout::encode, py::arg("a"), py::arg("b"), py::arg("c") = 0)
        .def("a_of", &RegisterLayout::a_of)
        .def("b_of", &RegisterLayout::b_of)
        .def("c_of", &RegisterLayout::c_of)
        .def("ancilla_of", &RegisterLayout::ancilla_of);

    m.def("ancilla_count", &ancilla_count);
    m.def("layout_for", &layout_for, py::arg("op"), py::arg("m"));
    m.def("build_adder", &build_adder);
    m.def("build_multiplier", &build_multiplier);
    m.def("build_divider", &build_divider);
    m.def("emulate_multiply", [](const CArray& state, const RegisterLayout& l) {
        return to_array(emulate_multiply(to_state(state), l));
    });
    m.def("emulate_divide", [](const CArray& state, const RegisterLayout& l) {
        return to_array(emulate_divide(to_state(state), l));
    });

    m.def(
        "to_dense_matrix", [](const Circuit& c, unsigned limit) { return to_dense_matrix(c, limit).matrix; },
        py::arg("circuit"), py::arg("limit") = kDefaultDenseLimit);

    // Phase estimation.
    py::class_<PhaseEstimate>(m, "PhaseEstimate")
        .def_readonly("phi", &PhaseEstimate::phi)
        .def_readonly("bits", &PhaseEstimate::bits)
        .def_readonly("outcome", &PhaseEstimate::outcome)
        .def_property_readonly("distribution", [](const PhaseEstimate& e) -> py::object {
            if (!e.distribution) return py::none();
            return probs_of(*e.distribution);
        });

    py::class_<Eigenpair>(m, "Eigenpair")
        .def_readonly("phase", &Eigenpair::phase)
        .def_readonly("eigenvalue", &Eigenpair::eigenvalue)
        .def_readonly("vector", &Eigenpair::vector)
        .def_readonly("residual", &Eigenpair::residual);

    m.def(
        "simulate_qpe",
        [](const Circuit& u, const CArray& system, unsigned b) { return simulate_qpe(u, to_state(system), b); },
        py::arg("u"), py::arg("system"), py::arg("b"));
    m.def(
        "simulate_qpe", [](const Circuit& u, const Circuit& prep, unsigned b) { return simulate_qpe(u, prep, b); },
        py::arg("u"), py::arg("prep"), py::arg("b"));
    m.def(
        "emulate_qpe_squaring",
        [](const Circuit& u, const CArray& v, unsigned b) {
            return emulate_qpe_squaring(to_dense_matrix(u), to_state(v), b);
        },
        py::arg("u"), py::arg("eigenvector"), py::arg("b"));
    m.def(
        "emulate_qpe_eigen", [](const Circuit& u) { return emulate_qpe_eigen(to_dense_matrix(u)); }, py::arg("u"));
    m.def(
        "qpe_outcome_distribution",
        [](const std::vector<Eigenpair>& pairs, const CArray& state, unsigned b) {
            return probs_of(qpe_outcome_distribution(pairs, to_state(state), b));
        },
        py::arg("pairs"), py::arg("state"), py::arg("b"));

    py::enum_<Strategy>(m, "Strategy")
        .value("Simulate", Strategy::Simulate)
        .value("Square", Strategy::Square)
        .value("Eigen", Strategy::Eigen);

    py::class_<CostWeights>(m, "CostWeights")
        .def(py::init<>())
        .def(py::init<double, double, double>(), py::arg("simulate"), py::arg("square"), py::arg("eigen"))
        .def_readwrite("simulate", &CostWeights::simulate)
        .def_readwrite("square", &CostWeights::square)
        .def_readwrite("eigen", &CostWeights::eigen);

    m.def("select_strategy", &select_strategy, py::arg("n"), py::arg("b"), py::arg("G"), py::arg("coherent"),
          py::arg("weights") = CostWeights{});

    py::class_<QpeCosts>(m, "QpeCosts")
        .def_readonly("simulate", &QpeCosts::simulate)
        .def_readonly("square", &QpeCosts::square)
        .def_readonly("eigen", &QpeCosts::eigen);
    m.def("qpe_costs", &qpe_costs, py::arg("n"), py::arg("b"), py::arg("G"), py::arg("coherent"),
          py::arg("strassen") = false, py::arg("weights") = CostWeights{});
    m.def("qpe_log2_costs", &qpe_log2_costs, py::arg("n"), py::arg("b"), py::arg("G"), py::arg("coherent"),
          py::arg("strassen") = false, py::arg("weights") = CostWeights{});

    py::enum_<EmulationPath>(m, "EmulationPath")
        .value("Square", EmulationPath::Square)
        .value("Eigen", EmulationPath::Eigen);
    m.def("crossover_bits", &crossover_bits, py::arg("n"), py::arg("G"), py::arg("path"), py::arg("coherent"),
          py::arg("strassen") = false, py::arg("weights") = CostWeights{}, py::arg("b_max") = 1024);

    // FFT/QFT time models.
    py::class_<MachineParams>(m, "MachineParams")
        .def(py::init<>())
        .def_readwrite("flops_peak", &MachineParams::flops_peak)
        .def_readwrite("eff_fft", &MachineParams::eff_fft)
        .def_readwrite("b_mem", &MachineParams::b_mem)
        .def_readwrite("b_net", &MachineParams::b_net)
        .def_readwrite("p", &MachineParams::p)
        .def("flops_achieved", &MachineParams::flops_achieved)
        .def("validate", &MachineParams::validate)
        .def("__repr__", [](const MachineParams& p) {
            std::ostringstream os;
            write_machine_params(os, p);
            return os.str();
        });
    m.def("t_fft", &t_fft, py::arg("n"), py::arg("machine") = MachineParams{});
    m.def("t_qft", &t_qft, py::arg("n"), py::arg("machine") = MachineParams{});
    m.def("single_node_speedup_estimate", &single_node_speedup_estimate, py::arg("n"),
          py::arg("machine") = MachineParams{});
    m.def("parse_machine_params", [](const std::string& text) {
        std::istringstream is(text);
        return parse_machine_params(is);
    });

    py::class_<CalibrationResult>(m, "CalibrationResult")
        .def_readonly("params", &CalibrationResult::params)
        .def_readonly("fft_fitted", &CalibrationResult::fft_fitted)
        .def_readonly("mem_fitted", &CalibrationResult::mem_fitted)
        .def_readonly("net_fitted", &CalibrationResult::net_fitted)
        .def_readonly("residuals", &CalibrationResult::residuals);
    m.def(
        "calibrate",
        [](const std::vector<std::tuple<std::string, unsigned, double>>& rows, const MachineParams& base,
           bool fit_network) {
            std::vector<TimingSample> samples;
            for (const auto& [path, n, seconds] : rows) {
                if (path != "fft" && path != "qft") throw PreconditionError("sample path must be 'fft' or 'qft'");
                samples.push_back({path == "fft" ? TimingSample::Path::Fft : TimingSample::Path::Qft, n, seconds});
            }
            return calibrate(samples, base, fit_network);
        },
        py::arg("samples"), py::arg("base") = MachineParams{}, py::arg("fit_network") = true,
        "samples: (path, n, seconds) with path 'fft' or 'qft'");
}
