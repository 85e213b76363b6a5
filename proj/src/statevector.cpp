#include "qcemu/statevector.hpp"

#include <bit>
#include <cmath>
#include <iomanip>
#include <new>
#include <ostream>
#include <string>

#include "qcemu/errors.hpp"

namespace qcemu {

namespace {

std::vector<Complex> allocate_amplitudes(unsigned n) {
    if (n < 1) {
        throw PreconditionError("state vector needs at least one qubit");
    }
    if (n > kMaxQubits) {
        throw AllocationError("cannot allocate " + std::to_string(n) + " qubits (limit " +
                              std::to_string(kMaxQubits) + ")");
    }
    try {
        return std::vector<Complex>(Index{1} << n);
    } catch (const std::bad_alloc&) {
        throw AllocationError("out of memory allocating 2^" + std::to_string(n) + " amplitudes");
    } catch (const std::length_error&) {
        throw AllocationError("2^" + std::to_string(n) + " amplitudes exceed the maximum vector size");
    }
}

unsigned log2_exact(std::size_t len) {
    if (len < 2 || (len & (len - 1)) != 0) {
        throw DimensionError("amplitude count " + std::to_string(len) + " is not a power of two >= 2");
    }
    unsigned n = 0;
    while ((std::size_t{1} << n) < len) {
        ++n;
    }
    return n;
}

}  // namespace

StateVector::StateVector(unsigned n) : n_(n), amps_(allocate_amplitudes(n)) { amps_[0] = 1.0; }

StateVector::StateVector(std::vector<Complex> amps) : n_(log2_exact(amps.size())), amps_(std::move(amps)) {}

StateVector StateVector::basis(unsigned n, Index i) {
    StateVector s(n);
    if (i >= s.size()) {
        throw IndexError("basis index " + std::to_string(i) + " out of range for " + std::to_string(n) +
                         " qubits");
    }
    s.amps_[0] = 0.0;
    s.amps_[i] = 1.0;
    return s;
}

StateVector StateVector::uniform(unsigned n) {
    StateVector s(n);
    const double a = 1.0 / std::sqrt(static_cast<double>(s.size()));
    for (auto& x : s.amps_) {
        x = a;
    }
    return s;
}

StateVector StateVector::random(unsigned n, Rng& rng) {
    StateVector s(n);
    std::normal_distribution<double> g(0.0, 1.0);
    for (auto& x : s.amps_) {
        const double re = g(rng);
        const double im = g(rng);
        x = Complex(re, im);
    }
    s.normalize();
    return s;
}

double StateVector::norm_sq() const noexcept {
    double acc = 0.0;
    for (const auto& x : amps_) {
        acc += std::norm(x);
    }
    return acc;
}

void StateVector::normalize() {
    const double nrm = std::sqrt(norm_sq());
    if (nrm < 1e-300) {
        throw PreconditionError("cannot normalize a zero vector");
    }
    const double inv = 1.0 / nrm;
    for (auto& x : amps_) {
        x *= inv;
    }
}

StateVector new_basis_state(unsigned n, Index i) { return StateVector::basis(n, i); }

double norm_sq(const StateVector& state) noexcept { return state.norm_sq(); }

double distance(const StateVector& a, const StateVector& b) {
    if (a.num_qubits() != b.num_qubits()) {
        throw DimensionError("distance: " + std::to_string(a.num_qubits()) + " vs " +
                             std::to_string(b.num_qubits()) + " qubits");
    }
    const auto av = a.amplitudes();
    const auto bv = b.amplitudes();

    Complex inner = 0.0;
    for (Index i = 0; i < a.size(); ++i) {
        inner += std::conj(av[i]) * bv[i];
    }
    // The unit phase maximizing Re<a, e^{i phi} b> is conj(inner)/|inner|.
    Complex phase = 1.0;
    const double mag = std::abs(inner);
    if (mag > 1e-300 && b.norm_sq() > 1e-300) {
        phase = std::conj(inner) / mag;
    }

    double worst = 0.0;
    for (Index i = 0; i < a.size(); ++i) {
        worst = std::max(worst, std::abs(av[i] - phase * bv[i]));
    }
    return worst;
}

MeasurementOutcome sample_all(const StateVector& state, Rng& rng) {
    const double total = state.norm_sq();
    if (std::abs(total - 1.0) > 1e-6) {
        throw PreconditionError("sample_all: state norm^2 is " + std::to_string(total));
    }
    std::uniform_real_distribution<double> u(0.0, total);
    const double r = u(rng);
    const auto amps = state.amplitudes();
    double cum = 0.0;
    Index last_nonzero = 0;
    for (Index i = 0; i < state.size(); ++i) {
        const double p = std::norm(amps[i]);
        if (p > 0.0) {
            last_nonzero = i;
        }
        cum += p;
        if (r < cum) {
            return {i, p};
        }
    }
    // r landed in the rounding gap at the top of the cumulative sum.
    return {last_nonzero, std::norm(amps[last_nonzero])};
}

StateVector collapse(const StateVector& state, std::span<const Qubit> qubits, Index outcome) {
    const Index mask = mask_of(qubits);
    for (Qubit q : qubits) {
        if (q >= state.num_qubits()) {
            throw IndexError("collapse: qubit " + std::to_string(q) + " out of range");
        }
    }
    if (std::popcount(mask) != static_cast<int>(qubits.size())) {
        throw IndexError("collapse: duplicate qubit indices");
    }
    const Index want = deposit_bits(outcome, qubits);

    StateVector out = state;
    auto amps = out.amplitudes();
    double kept = 0.0;
    for (Index i = 0; i < out.size(); ++i) {
        if ((i & mask) == want) {
            kept += std::norm(amps[i]);
        } else {
            amps[i] = 0.0;
        }
    }
    if (kept <= 1e-12) {
        throw PreconditionError("collapse: outcome " + std::to_string(outcome) + " has probability " +
                                std::to_string(kept));
    }
    const double inv = 1.0 / std::sqrt(kept);
    for (auto& x : amps) {
        x *= inv;
    }
    return out;
}

void write_state_csv(std::ostream& os, const StateVector& state) {
    os << "index,re,im\n";
    const auto amps = state.amplitudes();
    const auto old_flags = os.flags();
    const auto old_prec = os.precision();
    os << std::setprecision(17);
    for (Index i = 0; i < state.size(); ++i) {
        if (std::abs(amps[i]) > 1e-14) {
            os << i << ',' << amps[i].real() << ',' << amps[i].imag() << '\n';
        }
    }
    os.flags(old_flags);
    os.precision(old_prec);
}

StateVector random_superposition(unsigned n, std::span<const Index> support, Rng& rng) {
    StateVector s(n);
    s[0] = 0.0;
    std::normal_distribution<double> g(0.0, 1.0);
    for (Index i : support) {
        if (i >= s.size()) {
            throw IndexError("random_superposition: index " + std::to_string(i) + " out of range");
        }
        const double re = g(rng);
        const double im = g(rng);
        s[i] = Complex(re, im);
    }
    s.normalize();
    return s;
}

}  // namespace qcemu
