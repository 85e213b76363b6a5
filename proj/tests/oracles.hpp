#pragma once

// Reference implementations used only by the tests. Each one is deliberately the slow,
// obvious computation and shares no code path with the library routine it checks.

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "qcemu/circuit.hpp"
#include "qcemu/statevector.hpp"

namespace qcemu::oracle {

/// y_l = N^{-1/2} sum_k x_k exp(sign 2 pi i k l / N), angles reduced exactly mod N.
inline std::vector<Complex> dft(const std::vector<Complex>& x, int sign = +1) {
    const std::size_t n = x.size();
    std::vector<Complex> y(n, 0.0);
    const double norm = 1.0 / std::sqrt(static_cast<double>(n));
    for (std::size_t l = 0; l < n; ++l) {
        Complex acc = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const std::size_t r = (k * l) % n;
            const double angle = sign * 2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(n);
            acc += x[k] * Complex(std::cos(angle), std::sin(angle));
        }
        y[l] = acc * norm;
    }
    return y;
}

/// DFT matrix entry F[l][k] = N^{-1/2} exp(+2 pi i k l / N).
inline Complex dft_entry(std::size_t l, std::size_t k, std::size_t n) {
    const std::size_t r = (k * l) % n;
    const double angle = 2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(n);
    return Complex(std::cos(angle), std::sin(angle)) / std::sqrt(static_cast<double>(n));
}

using Dense = std::vector<std::vector<Complex>>;

inline Dense kron(const Dense& a, const Dense& b) {
    const std::size_t ra = a.size(), rb = b.size();
    Dense out(ra * rb, std::vector<Complex>(ra * rb, 0.0));
    for (std::size_t i = 0; i < ra; ++i)
        for (std::size_t j = 0; j < ra; ++j)
            for (std::size_t k = 0; k < rb; ++k)
                for (std::size_t l = 0; l < rb; ++l)
                    out[i * rb + k][j * rb + l] = a[i][j] * b[k][l];
    return out;
}

/// Full 2^n matrix of a single-qubit gate as m_{first} (x) ... (x) m_{last}, where the
/// leftmost factor is the most significant index bit. With `msb_first` the leftmost factor
/// is qubit 0 (textbook order); otherwise it is qubit n-1 (this library's LSB-first order).
inline Dense kron_single_qubit(unsigned n, const std::array<Complex, 4>& u, unsigned target, bool msb_first) {
    const Dense id = {{1.0, 0.0}, {0.0, 1.0}};
    const Dense g = {{u[0], u[1]}, {u[2], u[3]}};
    Dense out = {{1.0}};
    for (unsigned pos = 0; pos < n; ++pos) {
        const unsigned qubit = msb_first ? pos : n - 1 - pos;
        out = kron(out, qubit == target ? g : id);
    }
    return out;
}

inline std::vector<Complex> matvec(const Dense& m, std::span<const Complex> v) {
    std::vector<Complex> out(m.size(), 0.0);
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < v.size(); ++j)
            out[i] += m[i][j] * v[j];
    return out;
}

/// Run a circuit built only from X, CNOT, Toffoli and Swap on a classical bit string.
inline Index classical_eval(const Circuit& c, Index bits) {
    for (const Gate& g : c.gates()) {
        bool fire = true;
        for (Qubit q : g.controls) {
            fire = fire && ((bits >> q) & 1U);
        }
        if (!fire) continue;
        switch (g.kind) {
            case GateKind::X:
            case GateKind::CNOT:
            case GateKind::Toffoli: bits ^= Index{1} << g.target; break;
            case GateKind::Swap: {
                const Index b1 = (bits >> g.target) & 1U, b2 = (bits >> g.partner) & 1U;
                if (b1 != b2) bits ^= (Index{1} << g.target) | (Index{1} << g.partner);
                break;
            }
            default: throw std::logic_error("classical_eval: non-classical gate");
        }
    }
    return bits;
}

}  // namespace qcemu::oracle
