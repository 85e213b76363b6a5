#pragma once

#include <complex>
#include <cstdint>
#include <iosfwd>
#include <random>
#include <span>
#include <vector>

#include "qcemu/bits.hpp"

namespace qcemu {

using Complex = std::complex<double>;

/// Largest register the library will attempt to allocate. Beyond this the index
/// type itself would overflow; practical limits are enforced by callers.
inline constexpr unsigned kMaxQubits = 40;

/// Pseudo-random generator used for every stochastic operation.
using Rng = std::mt19937_64;

/// Dense wave function of `n` qubits: 2^n double-precision amplitudes.
///
/// Qubit k is bit k of the amplitude index, with qubit 0 the least significant bit.
class StateVector {
public:
    /// |0...0> on n qubits. Throws AllocationError when 2^n amplitudes cannot be held.
    explicit StateVector(unsigned n);

    /// Adopt an amplitude array; its length must be a power of two >= 2.
    explicit StateVector(std::vector<Complex> amps);

    static StateVector basis(unsigned n, Index i);

    /// Equal superposition over all 2^n basis states.
    static StateVector uniform(unsigned n);

    /// Haar-like random state: i.i.d. complex Gaussians, normalized.
    static StateVector random(unsigned n, Rng& rng);

    unsigned num_qubits() const noexcept { return n_; }
    Index size() const noexcept { return static_cast<Index>(amps_.size()); }

    std::span<Complex> amplitudes() noexcept { return amps_; }
    std::span<const Complex> amplitudes() const noexcept { return amps_; }

    Complex& operator[](Index i) noexcept { return amps_[i]; }
    const Complex& operator[](Index i) const noexcept { return amps_[i]; }

    double norm_sq() const noexcept;

    /// Rescale to unit norm. Throws PreconditionError for a (numerically) zero vector.
    void normalize();

private:
    unsigned n_;
    std::vector<Complex> amps_;
};

struct MeasurementOutcome {
    Index bits;
    double probability;
};

/// Unit vector with amplitude 1 at `i`.
StateVector new_basis_state(unsigned n, Index i);

double norm_sq(const StateVector& state) noexcept;

/// max_i |a_i - e^{i phi} b_i| with phi chosen to maximize Re<a, e^{i phi} b>.
double distance(const StateVector& a, const StateVector& b);

/// Draw one full-register outcome with probability |amp|^2. Does not collapse.
MeasurementOutcome sample_all(const StateVector& state, Rng& rng);

/// Project onto `outcome` for the listed qubits (outcome bit j <-> qubits[j]) and renormalize.
StateVector collapse(const StateVector& state, std::span<const Qubit> qubits, Index outcome);

/// CSV dump `index,re,im`, one row per amplitude with |amp| > 1e-14.
void write_state_csv(std::ostream& os, const StateVector& state);

/// Random normalized state supported on the given basis indices only.
StateVector random_superposition(unsigned n, std::span<const Index> support, Rng& rng);

}  // namespace qcemu
