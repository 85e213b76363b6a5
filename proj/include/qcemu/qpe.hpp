#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "qcemu/circuit.hpp"
#include "qcemu/costmodel.hpp"
#include "qcemu/dense.hpp"
#include "qcemu/emulator.hpp"

namespace qcemu {

/// Result of a phase estimation. Eigenvalues are written e^{2 pi i phi}, phi in [0, 1).
struct PhaseEstimate {
    double phi = 0.0;
    unsigned bits = 0;
    Index outcome = 0;  // b-bit integer, phi = outcome / 2^b
    std::optional<DistributionTable> distribution;  // simulation path only
};

struct QpeOptions {
    /// Run the inverse QFT on the ancillas as gates instead of the FFT shortcut.
    bool gate_level_inverse_qft = false;
};

/// Coherent phase estimation with b ancillas, gate by gate. The system register is qubits
/// [0, n) and ancilla j is qubit n + j; controlled-U^{2^j} repeats every gate of `u`
/// 2^j times under control of ancilla j.
PhaseEstimate simulate_qpe(const Circuit& u, const Circuit& prep, unsigned b, const QpeOptions& opts = {});

/// As above with an explicit initial system state instead of a preparation circuit.
PhaseEstimate simulate_qpe(const Circuit& u, const StateVector& system, unsigned b, const QpeOptions& opts = {});

/// U^{2^j} for j = 0..b-1 by repeated squaring; the eigenphase of `v` is read from the
/// Rayleigh quotient at each stage and assembled into a b-bit estimate.
/// Throws PreconditionError if `v` is not an eigenvector within 1e-6.
PhaseEstimate emulate_qpe_squaring(const DenseUnitary& u, const StateVector& v, unsigned b);

/// `times` successive squarings: U^{2^times}.
DenseMatrix repeated_square(const DenseMatrix& u, unsigned times);

struct Eigenpair {
    double phase = 0.0;  // in [0, 1)
    Complex eigenvalue;
    Eigen::VectorXcd vector;  // unit norm
    double residual = 0.0;  // |U v - lambda v|
};

/// Full eigendecomposition through Hessenberg reduction and shifted QR (complex Schur form).
/// Throws ConvergenceError when the QR iteration exceeds 100 * dim sweeps, and
/// PreconditionError if a residual exceeds 1e-8 (the matrix is not unitary).
std::vector<Eigenpair> emulate_qpe_eigen(const DenseUnitary& u);

/// Eigenvector whose overlap |<v_k, state>| is largest.
const Eigenpair& best_overlap(const std::vector<Eigenpair>& pairs, const StateVector& state);

/// Largest b for which qpe_outcome_distribution builds a table.
inline constexpr unsigned kMaxDistributionBits = 24;

struct WeightedPhase {
    double phase = 0.0;
    double weight = 0.0;
};

/// Ancilla outcome distribution of ideal b-bit phase estimation on a state with eigenphases
/// phi_k of weight w_k: P(x) = sum_k w_k sin^2(pi 2^b d) / (4^b sin^2(pi d)), d = phi_k - x/2^b.
/// Qubits are labelled first_ancilla .. first_ancilla + b - 1.
DistributionTable qpe_outcome_distribution(const std::vector<WeightedPhase>& phases, unsigned b,
                                           Qubit first_ancilla = 0);

/// Same, with weights |<v_k, state>|^2 from a full eigendecomposition.
DistributionTable qpe_outcome_distribution(const std::vector<Eigenpair>& pairs, const StateVector& state,
                                           unsigned b);

enum class Strategy { Simulate, Square, Eigen };

std::string_view strategy_name(Strategy s) noexcept;

/// argmin of the three QPE cost expressions; ties prefer Simulate, then Square.
Strategy select_strategy(unsigned n, unsigned b, unsigned G, bool coherent, const CostWeights& w = {});

/// Phase of a unit complex number as a fraction of a turn, in [0, 1).
double phase_of(Complex z) noexcept;

/// Distance between two phases on the unit circle, in [0, 0.5].
double circular_distance(double phi1, double phi2) noexcept;

/// Round phi to the nearest multiple of 2^{-b} (mod 1).
Index round_phase(double phi, unsigned b) noexcept;

}  // namespace qcemu
