#include "qcemu/circuit.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <iomanip>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

#include "qcemu/errors.hpp"

namespace qcemu {

Circuit::Circuit(unsigned n, std::string label) : n_(n), label_(std::move(label)) {
    if (n < 1) {
        throw PreconditionError("circuit needs at least one qubit");
    }
}

Circuit& Circuit::add(Gate gate) {
    validate(gate, n_);
    gates_.push_back(std::move(gate));
    return *this;
}

Circuit& Circuit::append(const Circuit& other) {
    if (other.n_ > n_) {
        throw DimensionError("cannot append a " + std::to_string(other.n_) + "-qubit circuit to a " +
                             std::to_string(n_) + "-qubit one");
    }
    gates_.insert(gates_.end(), other.gates_.begin(), other.gates_.end());
    return *this;
}

std::size_t Circuit::count(GateKind kind) const {
    return static_cast<std::size_t>(
        std::count_if(gates_.begin(), gates_.end(), [kind](const Gate& g) { return g.kind == kind; }));
}

Circuit build_qft_on(unsigned n, std::span<const Qubit> qubits) {
    Circuit c(n, "qft");
    const std::size_t k = qubits.size();
    for (std::size_t j = k; j-- > 0;) {
        c.add(Gate::h(qubits[j]));
        for (std::size_t i = j; i-- > 0;) {
            const double theta = std::numbers::pi / static_cast<double>(Index{1} << (j - i));
            c.add(Gate::cr(theta, qubits[i], qubits[j]));
        }
    }
    for (std::size_t i = 0; i < k / 2; ++i) {
        c.add(Gate::swap(qubits[i], qubits[k - 1 - i]));
    }
    return c;
}

Circuit build_qft(unsigned n) {
    std::vector<Qubit> qubits(n);
    for (unsigned q = 0; q < n; ++q) {
        qubits[q] = q;
    }
    return build_qft_on(n, qubits);
}

Circuit build_entangler(unsigned n) {
    if (n < 2) {
        throw PreconditionError("entangler needs at least 2 qubits");
    }
    Circuit c(n, "entangler");
    c.add(Gate::h(0));
    for (Qubit j = 1; j < n; ++j) {
        c.add(Gate::cnot(0, j));
    }
    return c;
}

Circuit build_tfim_trotter(unsigned n, const TfimParams& params) {
    if (n < 2) {
        throw PreconditionError("TFIM chain needs at least 2 sites");
    }
    Circuit c(n, "tfim");
    for (Qubit q = 0; q < n; ++q) {
        c.add(Gate::rx(2.0 * params.h * params.dt, q));
    }
    // exp(-i J dt Z_q Z_{q+1}) up to global phase.
    for (Qubit q = 0; q + 1 < n; ++q) {
        c.add(Gate::cnot(q, q + 1));
        c.add(Gate::rz(2.0 * params.J * params.dt, q + 1));
        c.add(Gate::cnot(q, q + 1));
    }
    return c;
}

Circuit inverse(const Circuit& c) {
    Circuit out(c.num_qubits(), c.label().empty() ? std::string{} : c.label() + "^-1");
    const auto gates = c.gates();
    for (auto it = gates.rbegin(); it != gates.rend(); ++it) {
        out.add(adjoint(*it));
    }
    return out;
}

StateVector& apply_circuit(StateVector& state, const Circuit& c) {
    if (state.num_qubits() != c.num_qubits()) {
        throw DimensionError("apply_circuit: state has " + std::to_string(state.num_qubits()) +
                             " qubits, circuit " + std::to_string(c.num_qubits()));
    }
    for (const Gate& g : c.gates()) {
        apply_gate(state, g);
    }
    return state;
}

double DenseUnitary::unitarity_error() const {
    const DenseMatrix prod = matrix.adjoint() * matrix;
    return (prod - DenseMatrix::Identity(prod.rows(), prod.cols())).cwiseAbs().maxCoeff();
}

StateVector DenseUnitary::apply(const StateVector& state) const {
    if (state.num_qubits() != n) {
        throw DimensionError("DenseUnitary::apply: dimension mismatch");
    }
    const auto in = state.amplitudes();
    Eigen::Map<const Eigen::VectorXcd> v(in.data(), static_cast<Eigen::Index>(in.size()));
    const Eigen::VectorXcd w = matrix * v;
    return StateVector(std::vector<Complex>(w.data(), w.data() + w.size()));
}

DenseUnitary to_dense_matrix(const Circuit& c, unsigned limit) {
    const unsigned n = c.num_qubits();
    if (n > limit) {
        throw AllocationError("dense matrix of " + std::to_string(n) + " qubits exceeds the limit of " +
                              std::to_string(limit));
    }
    const auto dim = static_cast<Eigen::Index>(Index{1} << n);
    DenseUnitary out;
    out.n = n;
    try {
        out.matrix.resize(dim, dim);
    } catch (const std::bad_alloc&) {
        throw AllocationError("out of memory for a " + std::to_string(dim) + "^2 dense matrix");
    }
#pragma omp parallel for if (n >= 8) schedule(dynamic)
    for (Eigen::Index col = 0; col < dim; ++col) {
        StateVector s = StateVector::basis(n, static_cast<Index>(col));
        apply_circuit(s, c);
        const auto amps = s.amplitudes();
        for (Eigen::Index row = 0; row < dim; ++row) {
            out.matrix(row, col) = amps[static_cast<std::size_t>(row)];
        }
    }
    return out;
}

void write_text(std::ostream& os, const Circuit& c) {
    const auto old_prec = os.precision();
    os << std::setprecision(17);
    if (!c.label().empty()) {
        os << "# " << c.label() << ", " << c.num_qubits() << " qubits, " << c.gate_count() << " gates\n";
    }
    for (const Gate& g : c.gates()) {
        switch (g.kind) {
            case GateKind::Custom:
                throw PreconditionError("custom gates have no text representation");
            case GateKind::Swap: os << "swap " << g.target << ' ' << g.partner; break;
            case GateKind::Rz:
            case GateKind::Rx: os << gate_name(g.kind) << ' ' << g.theta << ' ' << g.target; break;
            case GateKind::CR: os << "cr " << g.theta << ' ' << g.controls[0] << ' ' << g.target; break;
            case GateKind::CNOT: os << "cnot " << g.controls[0] << ' ' << g.target; break;
            case GateKind::Toffoli:
                os << "toffoli " << g.controls[0] << ' ' << g.controls[1] << ' ' << g.target;
                break;
            default: os << gate_name(g.kind) << ' ' << g.target; break;
        }
        os << '\n';
    }
    os.precision(old_prec);
}

std::string to_text(const Circuit& c) {
    std::ostringstream os;
    write_text(os, c);
    return os.str();
}

namespace {

Qubit parse_qubit(const std::string& tok, std::size_t line) {
    Qubit q = 0;
    const auto* end = tok.data() + tok.size();
    const auto [ptr, ec] = std::from_chars(tok.data(), end, q);
    if (ec != std::errc{} || ptr != end) {
        throw ParseError(line, "bad qubit index '" + tok + "'");
    }
    return q;
}

double parse_angle(const std::string& tok, std::size_t line) {
    // std::from_chars for double is unavailable in libstdc++ 11.
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(tok, &used);
    } catch (const std::exception&) {
        throw ParseError(line, "bad angle '" + tok + "'");
    }
    if (used != tok.size() || !std::isfinite(v)) {
        throw ParseError(line, "bad angle '" + tok + "'");
    }
    return v;
}

Gate parse_gate(const std::vector<std::string>& tok, std::size_t line) {
    const std::string& op = tok[0];
    auto want = [&](std::size_t args) {
        if (tok.size() != args + 1) {
            throw ParseError(line, "'" + op + "' takes " + std::to_string(args) + " argument(s), got " +
                                       std::to_string(tok.size() - 1));
        }
    };
    auto q = [&](std::size_t i) { return parse_qubit(tok[i], line); };

    if (op == "h" || op == "x" || op == "y" || op == "z" || op == "s" || op == "t") {
        want(1);
        static const std::pair<const char*, GateKind> kinds[] = {{"h", GateKind::H}, {"x", GateKind::X},
                                                                 {"y", GateKind::Y}, {"z", GateKind::Z},
                                                                 {"s", GateKind::S}, {"t", GateKind::T}};
        for (const auto& [name, kind] : kinds) {
            if (op == name) {
                return Gate::make(kind, q(1));
            }
        }
    }
    if (op == "rz") {
        want(2);
        return Gate::rz(parse_angle(tok[1], line), q(2));
    }
    if (op == "rx") {
        want(2);
        return Gate::rx(parse_angle(tok[1], line), q(2));
    }
    if (op == "cnot") {
        want(2);
        return Gate::cnot(q(1), q(2));
    }
    if (op == "cr") {
        want(3);
        return Gate::cr(parse_angle(tok[1], line), q(2), q(3));
    }
    if (op == "toffoli") {
        want(3);
        return Gate::toffoli(q(1), q(2), q(3));
    }
    if (op == "swap") {
        want(2);
        return Gate::swap(q(1), q(2));
    }
    throw ParseError(line, "unknown gate '" + op + "'");
}

}  // namespace

Circuit parse_circuit(std::istream& is, unsigned n) {
    std::vector<Gate> gates;
    std::string text;
    std::size_t line = 0;
    unsigned width = 0;
    while (std::getline(is, text)) {
        ++line;
        if (const auto hash = text.find('#'); hash != std::string::npos) {
            text.erase(hash);
        }
        std::istringstream ls(text);
        std::vector<std::string> tok;
        for (std::string t; ls >> t;) {
            tok.push_back(std::move(t));
        }
        if (tok.empty()) {
            continue;
        }
        Gate g = parse_gate(tok, line);
        try {
            validate(g, n);
        } catch (const IndexError& e) {
            throw ParseError(line, e.what());
        }
        for (Qubit qb : g.qubits()) {
            width = std::max(width, qb + 1);
        }
        gates.push_back(std::move(g));
    }
    Circuit c(n > 0 ? n : std::max(width, 1U));
    for (auto& g : gates) {
        c.add(std::move(g));
    }
    return c;
}

Circuit parse_circuit(const std::string& text, unsigned n) {
    std::istringstream is(text);
    return parse_circuit(is, n);
}

}  // namespace qcemu
