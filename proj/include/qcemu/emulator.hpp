#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

#include "qcemu/arithmetic.hpp"
#include "qcemu/statevector.hpp"

namespace qcemu {

/// Amplitudes at or below this magnitude are treated as round-off when checking that a
/// target register is clear.
inline constexpr double kSupportTolerance = 1e-12;

/// Outcome probabilities of measuring `qubits` (outcome bit j <-> qubits[j]).
struct DistributionTable {
    std::vector<Qubit> qubits;
    std::vector<double> probs;

    Index most_likely() const;
};

/// Basis-index map used by the permutation shortcuts.
using IndexMap = std::function<Index(Index)>;

/// Move every amplitude at index i to f(i). Amplitudes must lie in the c = 0 subspace of
/// `layout` (none when layout.c is empty); sub-tolerance strays outside it are dropped.
/// Throws PreconditionError if f sends two occupied indices to the same place.
StateVector emulate_classical_function(const StateVector& state, const RegisterLayout& layout, const IndexMap& f);

/// (a, b, 0) -> (a, b, a*b mod 2^m) as one permutation of the amplitude array.
StateVector emulate_multiply(const StateVector& state, const RegisterLayout& layout);

/// (a, b, 0) -> (a mod b, b, a / b); b == 0 entries stay put.
StateVector emulate_divide(const StateVector& state, const RegisterLayout& layout);

/// Fourier transform on the sub-register `qubits` (qubits[0] least significant) with
/// sign +1 and 2^{-k/2} normalization, via FFT. `inverse` flips the sign.
StateVector& emulate_qft(StateVector& state, std::span<const Qubit> qubits, bool inverse = false);

/// Full-register transform.
StateVector& emulate_qft(StateVector& state, bool inverse = false);
/// Qubit arrays would otherwise decay to the `bool` overload above.
template <std::size_t K>
StateVector& emulate_qft(StateVector& state, const Qubit (&qubits)[K], bool inverse = false) {
    return emulate_qft(state, std::span<const Qubit>(qubits), inverse);
}

/// Exact measurement distribution of `qubits`, one pass over the state.
DistributionTable full_distribution(const StateVector& state, std::span<const Qubit> qubits);

/// sum_o P(o) * observable[o] for a diagonal observable over the 2^k outcomes of `qubits`.
double expectation(const StateVector& state, std::span<const double> observable, std::span<const Qubit> qubits);

/// `outcome,probability` CSV with 17 significant digits.
void write_distribution_csv(std::ostream& os, const DistributionTable& table);

}  // namespace qcemu
