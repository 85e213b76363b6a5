#include "qcemu/emulator.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <iomanip>
#include <map>
#include <memory>
#include <mutex>
#include <ostream>
#include <string>
#include <utility>

#include "qcemu/errors.hpp"
#include "qcemu/fft.hpp"

namespace qcemu {

namespace {

void check_qubit_list(const StateVector& state, std::span<const Qubit> qubits, const char* what) {
    for (Qubit q : qubits) {
        if (q >= state.num_qubits()) {
            throw IndexError(std::string(what) + ": qubit " + std::to_string(q) + " out of range");
        }
    }
    if (std::popcount(mask_of(qubits)) != static_cast<int>(qubits.size())) {
        throw IndexError(std::string(what) + ": duplicate qubit indices");
    }
}

void check_layout_fits(const StateVector& state, const RegisterLayout& layout) {
    layout.validate();
    if (layout.num_qubits() > state.num_qubits()) {
        throw DimensionError("register layout needs " + std::to_string(layout.num_qubits()) +
                             " qubits, state has " + std::to_string(state.num_qubits()));
    }
}

}  // namespace

Index DistributionTable::most_likely() const {
    return static_cast<Index>(std::max_element(probs.begin(), probs.end()) - probs.begin());
}

StateVector emulate_classical_function(const StateVector& state, const RegisterLayout& layout, const IndexMap& f) {
    check_layout_fits(state, layout);
    const Index cmask = mask_of(layout.c);
    const auto in = state.amplitudes();

    // Precondition: nothing above round-off outside the c = 0 subspace.
    Index worst = 0;
    double worst_mag = 0.0;
    for (Index i = 0; i < state.size(); ++i) {
        if ((i & cmask) != 0) {
            const double mag = std::abs(in[i]);
            if (mag > worst_mag) {
                worst_mag = mag;
                worst = i;
            }
        }
    }
    if (worst_mag > kSupportTolerance) {
        throw PreconditionError("target register not clear: index " + std::to_string(worst) + " has |amp| = " +
                                std::to_string(worst_mag));
    }

    StateVector out(state.num_qubits());
    auto dst = out.amplitudes();
    dst[0] = 0.0;
    std::vector<std::uint8_t> taken(state.size(), 0);
    for (Index i = 0; i < state.size(); ++i) {
        if ((i & cmask) != 0 || in[i] == 0.0) {
            continue;
        }
        const Index j = f(i);
        if (j >= state.size()) {
            throw PreconditionError("classical function maps " + std::to_string(i) + " outside the register");
        }
        if (taken[j]) {
            throw PreconditionError("classical function is not injective: two indices map to " + std::to_string(j));
        }
        taken[j] = 1;
        dst[j] = in[i];
    }
    return out;
}

StateVector emulate_multiply(const StateVector& state, const RegisterLayout& layout) {
    if (layout.c.size() != layout.m) {
        throw PreconditionError("emulate_multiply needs a c register");
    }
    const Index mod_mask = (Index{1} << layout.m) - 1;
    return emulate_classical_function(state, layout, [&layout, mod_mask](Index i) {
        const Index prod = (layout.a_of(i) * layout.b_of(i)) & mod_mask;
        return i | deposit_bits(prod, layout.c);
    });
}

StateVector emulate_divide(const StateVector& state, const RegisterLayout& layout) {
    if (layout.c.size() != layout.m) {
        throw PreconditionError("emulate_divide needs a c register");
    }
    const Index amask = mask_of(layout.a);
    return emulate_classical_function(state, layout, [&layout, amask](Index i) {
        const Index a = layout.a_of(i);
        const Index b = layout.b_of(i);
        if (b == 0) {
            return i;
        }
        return (i & ~amask) | deposit_bits(a % b, layout.a) | deposit_bits(a / b, layout.c);
    });
}

namespace {

// Plans up to this size are kept; bigger ones would pin memory the size of the state.
constexpr unsigned kMaxCachedPlan = 22;

std::shared_ptr<const Radix2Fft> fft_plan(unsigned k, int sign) {
    if (k > kMaxCachedPlan) {
        return std::make_shared<const Radix2Fft>(k, sign);
    }
    static std::mutex mu;
    static std::map<std::pair<unsigned, int>, std::shared_ptr<const Radix2Fft>> plans;
    const std::lock_guard lock(mu);
    auto& slot = plans[{k, sign}];
    if (!slot) {
        slot = std::make_shared<const Radix2Fft>(k, sign);
    }
    return slot;
}

}  // namespace

StateVector& emulate_qft(StateVector& state, std::span<const Qubit> qubits, bool inverse) {
    check_qubit_list(state, qubits, "emulate_qft");
    const auto k = static_cast<unsigned>(qubits.size());
    if (k == 0) {
        return state;
    }
    const auto plan = fft_plan(k, inverse ? -1 : +1);
    const Radix2Fft& fft = *plan;
    const double scale = 1.0 / std::sqrt(static_cast<double>(Index{1} << k));
    const Index block = Index{1} << k;
    const Index cosets = state.size() >> k;
    auto amps = state.amplitudes();
    const bool parallel = state.num_qubits() >= kParallelThresholdQubits;

    bool low_contiguous = true;
    for (unsigned j = 0; j < k; ++j) {
        low_contiguous = low_contiguous && qubits[j] == j;
    }

    if (low_contiguous) {
#pragma omp parallel for if (parallel) schedule(static)
        for (std::int64_t c = 0; c < static_cast<std::int64_t>(cosets); ++c) {
            auto blk = amps.subspan(static_cast<std::size_t>(c) * block, block);
            fft(blk);
            for (auto& x : blk) {
                x *= scale;
            }
        }
        return state;
    }

    std::vector<Index> offset(block);
    for (Index x = 0; x < block; ++x) {
        offset[x] = deposit_bits(x, qubits);
    }
    const auto fixed = sorted_qubits(qubits);
#pragma omp parallel if (parallel)
    {
        std::vector<Complex> buf(block);
#pragma omp for schedule(static)
        for (std::int64_t c = 0; c < static_cast<std::int64_t>(cosets); ++c) {
            const Index base = spread_bits(static_cast<Index>(c), fixed);
            for (Index x = 0; x < block; ++x) {
                buf[x] = amps[base | offset[x]];
            }
            fft(buf);
            for (Index x = 0; x < block; ++x) {
                amps[base | offset[x]] = buf[x] * scale;
            }
        }
    }
    return state;
}

StateVector& emulate_qft(StateVector& state, bool inverse) {
    std::vector<Qubit> all(state.num_qubits());
    for (Qubit q = 0; q < state.num_qubits(); ++q) {
        all[q] = q;
    }
    return emulate_qft(state, all, inverse);
}

DistributionTable full_distribution(const StateVector& state, std::span<const Qubit> qubits) {
    check_qubit_list(state, qubits, "full_distribution");
    DistributionTable t;
    t.qubits.assign(qubits.begin(), qubits.end());
    t.probs.assign(Index{1} << qubits.size(), 0.0);
    const auto amps = state.amplitudes();
    for (Index i = 0; i < state.size(); ++i) {
        t.probs[extract_bits(i, qubits)] += std::norm(amps[i]);
    }
    return t;
}

double expectation(const StateVector& state, std::span<const double> observable, std::span<const Qubit> qubits) {
    const DistributionTable t = full_distribution(state, qubits);
    if (observable.size() != t.probs.size()) {
        throw DimensionError("observable has " + std::to_string(observable.size()) + " entries, expected " +
                             std::to_string(t.probs.size()));
    }
    double acc = 0.0;
    for (std::size_t o = 0; o < t.probs.size(); ++o) {
        acc += t.probs[o] * observable[o];
    }
    return acc;
}

void write_distribution_csv(std::ostream& os, const DistributionTable& table) {
    os << "outcome,probability\n";
    const auto old_prec = os.precision();
    os << std::setprecision(17);
    for (std::size_t o = 0; o < table.probs.size(); ++o) {
        os << o << ',' << table.probs[o] << '\n';
    }
    os.precision(old_prec);
}

}  // namespace qcemu
