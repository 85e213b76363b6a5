#pragma once

#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "qcemu/dense.hpp"
#include "qcemu/gates.hpp"

namespace qcemu {

/// Ordered gate sequence over `n` qubits.
class Circuit {
public:
    explicit Circuit(unsigned n, std::string label = {});

    unsigned num_qubits() const noexcept { return n_; }
    const std::string& label() const noexcept { return label_; }
    void set_label(std::string label) { label_ = std::move(label); }

    std::span<const Gate> gates() const noexcept { return gates_; }
    std::size_t gate_count() const noexcept { return gates_.size(); }

    /// Validates the gate against this circuit's width before appending.
    Circuit& add(Gate gate);
    Circuit& append(const Circuit& other);

    std::size_t count(GateKind kind) const;

private:
    unsigned n_;
    std::string label_;
    std::vector<Gate> gates_;
};

/// QFT realizing a_l -> 2^{-n/2} sum_k a_k exp(+2 pi i k l / 2^n), including the final swaps.
Circuit build_qft(unsigned n);

/// Same transform on an arbitrary qubit list of a wider register; qubits[0] is the
/// least significant bit of the transformed index.
Circuit build_qft_on(unsigned n, std::span<const Qubit> qubits);

/// H(0) then CNOT(0 -> j) for j = 1..n-1.
Circuit build_entangler(unsigned n);

struct TfimParams {
    double dt = 0.1;
    double h = 1.0;
    double J = 1.0;
};

/// One first-order Trotter step of the open transverse-field Ising chain:
/// Rx(2 h dt) on every site, then CNOT . Rz(2 J dt) . CNOT per bond. 4n - 3 gates.
Circuit build_tfim_trotter(unsigned n, const TfimParams& params = {});

/// Adjoint circuit: reversed order, each gate inverted.
Circuit inverse(const Circuit& c);

StateVector& apply_circuit(StateVector& state, const Circuit& c);

/// Column i is apply_circuit(|i>, c). Throws AllocationError above `limit` qubits.
DenseUnitary to_dense_matrix(const Circuit& c, unsigned limit = kDefaultDenseLimit);

/// One gate per line, e.g. `cr 0.785398 0 2`. Custom gates have no text form.
std::string to_text(const Circuit& c);
void write_text(std::ostream& os, const Circuit& c);

/// Parse the text format. The register width is `n` when given, otherwise one more than
/// the largest qubit index seen. Throws ParseError with a 1-based line number.
Circuit parse_circuit(std::istream& is, unsigned n = 0);
Circuit parse_circuit(const std::string& text, unsigned n = 0);

}  // namespace qcemu
