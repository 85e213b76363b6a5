#pragma once

#include <span>
#include <vector>

#include "qcemu/statevector.hpp"

namespace qcemu {

/// In-place iterative radix-2 FFT of a fixed power-of-two length.
///
/// Computes y_l = sum_k x_k exp(sign * 2 pi i k l / N), unnormalized. Twiddles and the
/// bit-reversal permutation are tabulated once so a plan can be reused across cosets.
class Radix2Fft {
public:
    Radix2Fft(unsigned log2_size, int sign);

    std::size_t size() const noexcept { return std::size_t{1} << log2_size_; }
    int sign() const noexcept { return sign_; }

    void operator()(std::span<Complex> data) const;

private:
    unsigned log2_size_;
    int sign_;
    std::vector<Complex> twiddles_;  // per-stage tables, see the constructor
    std::vector<std::uint32_t> bitrev_;
};

}  // namespace qcemu
