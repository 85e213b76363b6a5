#include "qcemu/qpe.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <numbers>
#include <string>

#include "qcemu/errors.hpp"

namespace qcemu {

double phase_of(Complex z) noexcept {
    double phi = std::atan2(z.imag(), z.real()) / (2.0 * std::numbers::pi);
    if (phi < 0.0) {
        phi += 1.0;
    }
    return phi >= 1.0 ? 0.0 : phi;
}

double circular_distance(double phi1, double phi2) noexcept {
    double d = std::fmod(std::abs(phi1 - phi2), 1.0);
    return std::min(d, 1.0 - d);
}

Index round_phase(double phi, unsigned b) noexcept {
    const double scaled = std::round(phi * std::ldexp(1.0, static_cast<int>(b)));
    const Index mask = (Index{1} << b) - 1;
    return static_cast<Index>(static_cast<std::int64_t>(scaled)) & mask;
}

std::string_view strategy_name(Strategy s) noexcept {
    switch (s) {
        case Strategy::Simulate: return "simulate";
        case Strategy::Square: return "square";
        case Strategy::Eigen: return "eigen";
    }
    return "?";
}

PhaseEstimate simulate_qpe(const Circuit& u, const StateVector& system, unsigned b, const QpeOptions& opts) {
    const unsigned n = u.num_qubits();
    if (b < 1) {
        throw PreconditionError("phase estimation needs at least one ancilla bit");
    }
    if (system.num_qubits() != n) {
        throw DimensionError("initial state has " + std::to_string(system.num_qubits()) + " qubits, U acts on " +
                             std::to_string(n));
    }
    if (n + b > kMaxQubits) {
        throw AllocationError("joint register of " + std::to_string(n + b) + " qubits is too large");
    }

    StateVector state(n + b);
    auto amps = state.amplitudes();
    amps[0] = 0.0;
    const auto sys = system.amplitudes();
    std::copy(sys.begin(), sys.end(), amps.begin());

    std::vector<Qubit> ancillas(b);
    for (unsigned j = 0; j < b; ++j) {
        ancillas[j] = n + j;
        apply_gate(state, Gate::h(n + j));
    }
    for (unsigned j = 0; j < b; ++j) {
        const Qubit control[1] = {ancillas[j]};
        const Index reps = Index{1} << j;
        for (Index r = 0; r < reps; ++r) {
            for (const Gate& g : u.gates()) {
                apply_gate(state, g, control);
            }
        }
    }
    if (opts.gate_level_inverse_qft) {
        apply_circuit(state, inverse(build_qft_on(n + b, ancillas)));
    } else {
        emulate_qft(state, ancillas, /*inverse=*/true);
    }

    PhaseEstimate est;
    est.bits = b;
    est.distribution = full_distribution(state, ancillas);
    est.outcome = est.distribution->most_likely();
    est.phi = static_cast<double>(est.outcome) / std::ldexp(1.0, static_cast<int>(b));
    return est;
}

PhaseEstimate simulate_qpe(const Circuit& u, const Circuit& prep, unsigned b, const QpeOptions& opts) {
    StateVector system(u.num_qubits());
    apply_circuit(system, prep);
    return simulate_qpe(u, system, b, opts);
}

DenseMatrix repeated_square(const DenseMatrix& u, unsigned times) {
    DenseMatrix m = u;
    for (unsigned i = 0; i < times; ++i) {
        m = (m * m).eval();
    }
    return m;
}

namespace {

Eigen::VectorXcd as_vector(const StateVector& s) {
    const auto a = s.amplitudes();
    return Eigen::Map<const Eigen::VectorXcd>(a.data(), static_cast<Eigen::Index>(a.size()));
}

}  // namespace

PhaseEstimate emulate_qpe_squaring(const DenseUnitary& u, const StateVector& v, unsigned b) {
    if (b < 1) {
        throw PreconditionError("phase estimation needs at least one bit");
    }
    if (v.num_qubits() != u.n) {
        throw DimensionError("eigenvector candidate has the wrong number of qubits");
    }
    Eigen::VectorXcd x = as_vector(v);
    const double nrm = x.norm();
    if (nrm < 1e-300) {
        throw PreconditionError("eigenvector candidate is zero");
    }
    x /= nrm;

    DenseMatrix m = u.matrix;
    std::vector<double> stage(b);  // frac(2^j phi)
    for (unsigned j = 0; j < b; ++j) {
        const Eigen::VectorXcd mx = m * x;
        const Complex lambda = x.dot(mx);  // x^dagger M x
        if (j == 0) {
            const double residual = (mx - lambda * x).norm();
            if (residual > 1e-6 || std::abs(std::abs(lambda) - 1.0) > 1e-6) {
                throw PreconditionError("not an eigenvector: |Uv - lambda v| = " + std::to_string(residual));
            }
        }
        stage[j] = phase_of(lambda);
        if (j + 1 < b) {
            m = (m * m).eval();
        }
    }

    // Unwind from the most-squared stage: frac(2^j phi) is one of (x + {0,1}) / 2.
    double acc = stage[b - 1];
    for (unsigned j = b - 1; j-- > 0;) {
        const double lo = acc / 2.0;
        const double hi = (acc + 1.0) / 2.0;
        acc = circular_distance(lo, stage[j]) <= circular_distance(hi, stage[j]) ? lo : hi;
    }

    PhaseEstimate est;
    est.bits = b;
    est.outcome = round_phase(acc, b);
    est.phi = static_cast<double>(est.outcome) / std::ldexp(1.0, static_cast<int>(b));
    return est;
}

std::vector<Eigenpair> emulate_qpe_eigen(const DenseUnitary& u) {
    const auto dim = u.matrix.rows();
    if (u.matrix.cols() != dim || dim != static_cast<Eigen::Index>(u.dim())) {
        throw DimensionError("dense unitary is not 2^n x 2^n");
    }
    // For a normal matrix the Schur form is diagonal, so the Schur vectors are an
    // orthonormal eigenbasis.
    Eigen::ComplexSchur<DenseMatrix> schur(dim);
    schur.setMaxIterations(100 * dim);
    schur.compute(u.matrix, /*computeU=*/true);
    if (schur.info() != Eigen::Success) {
        throw ConvergenceError("QR iteration did not converge within " + std::to_string(100 * dim) + " sweeps");
    }
    const DenseMatrix& t = schur.matrixT();
    const DenseMatrix& q = schur.matrixU();

    std::vector<Eigenpair> out(static_cast<std::size_t>(dim));
    for (Eigen::Index k = 0; k < dim; ++k) {
        Eigenpair& e = out[static_cast<std::size_t>(k)];
        e.eigenvalue = t(k, k);
        e.vector = q.col(k);
        e.phase = phase_of(e.eigenvalue);
        e.residual = (u.matrix * e.vector - e.eigenvalue * e.vector).norm();
        if (e.residual > 1e-8) {
            throw PreconditionError("eigenvector residual " + std::to_string(e.residual) +
                                    " too large; is the matrix unitary?");
        }
    }
    return out;
}

const Eigenpair& best_overlap(const std::vector<Eigenpair>& pairs, const StateVector& state) {
    if (pairs.empty()) {
        throw PreconditionError("best_overlap: no eigenpairs");
    }
    const Eigen::VectorXcd s = as_vector(state);
    std::size_t best = 0;
    double best_mag = -1.0;
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        if (pairs[k].vector.size() != s.size()) {
            throw DimensionError("best_overlap: dimension mismatch");
        }
        const double mag = std::abs(pairs[k].vector.dot(s));
        if (mag > best_mag) {
            best_mag = mag;
            best = k;
        }
    }
    return pairs[best];
}

Strategy select_strategy(unsigned n, unsigned b, unsigned G, bool coherent, const CostWeights& w) {
    const QpeCosts c = qpe_log2_costs(n, b, G, coherent, false, w);
    Strategy best = Strategy::Simulate;
    double best_cost = c.simulate;
    if (c.square < best_cost) {
        best = Strategy::Square;
        best_cost = c.square;
    }
    if (c.eigen < best_cost) {
        best = Strategy::Eigen;
    }
    return best;
}

DistributionTable qpe_outcome_distribution(const std::vector<WeightedPhase>& phases, unsigned b,
                                           Qubit first_ancilla) {
    if (b == 0 || b > kMaxDistributionBits) {
        throw PreconditionError("qpe_outcome_distribution: b must be in 1.." + std::to_string(kMaxDistributionBits));
    }
    const Index M = Index{1} << b;
    const double Md = static_cast<double>(M);
    DistributionTable t;
    for (unsigned j = 0; j < b; ++j) t.qubits.push_back(first_ancilla + j);
    t.probs.assign(M, 0.0);
    for (const auto& p : phases) {
        if (p.weight <= 0.0) continue;
        for (Index x = 0; x < M; ++x) {
            double d = p.phase - static_cast<double>(x) / Md;
            d -= std::round(d);
            const double den = std::sin(std::numbers::pi * d);
            double f = 1.0;
            if (std::abs(den) > 1e-300 && std::abs(d) * Md > 1e-12) {
                const double num = std::sin(std::numbers::pi * Md * d);
                f = (num * num) / (Md * Md * den * den);
            }
            t.probs[x] += p.weight * f;
        }
    }
    return t;
}

DistributionTable qpe_outcome_distribution(const std::vector<Eigenpair>& pairs, const StateVector& state,
                                           unsigned b) {
    const auto amps = state.amplitudes();
    const Eigen::Map<const Eigen::VectorXcd> psi(amps.data(), static_cast<Eigen::Index>(amps.size()));
    std::vector<WeightedPhase> phases;
    for (const auto& e : pairs) {
        if (e.vector.size() != psi.size()) {
            throw DimensionError("qpe_outcome_distribution: eigenvector and state sizes differ");
        }
        phases.push_back({e.phase, std::norm(e.vector.dot(psi))});
    }
    return qpe_outcome_distribution(phases, b, state.num_qubits());
}

}  // namespace qcemu
