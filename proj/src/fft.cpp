#include "qcemu/fft.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <utility>

#include "qcemu/errors.hpp"

namespace qcemu {

namespace {

// Stages up to this span run block by block so they stay in cache.
constexpr std::size_t kCacheBlock = std::size_t{1} << 11;

// One radix-2 stage of span `len` over data[0, count). Twiddles for the stage are tw[0, len/2).
void stage(Complex* data, std::size_t count, std::size_t len, const Complex* tw) {
    const std::size_t half = len / 2;
    for (std::size_t start = 0; start < count; start += len) {
        Complex* lo = data + start;
        Complex* hi = lo + half;
        for (std::size_t k = 0; k < half; ++k) {
            // Written out to avoid the NaN-recovery path of std::complex multiplication.
            const double wr = tw[k].real(), wi = tw[k].imag();
            const double hr = hi[k].real(), hi_i = hi[k].imag();
            const double vr = hr * wr - hi_i * wi;
            const double vi = hr * wi + hi_i * wr;
            const double ur = lo[k].real(), ui = lo[k].imag();
            lo[k] = Complex(ur + vr, ui + vi);
            hi[k] = Complex(ur - vr, ui - vi);
        }
    }
}

}  // namespace

Radix2Fft::Radix2Fft(unsigned log2_size, int sign) : log2_size_(log2_size), sign_(sign >= 0 ? 1 : -1) {
    if (log2_size > 31) {
        throw AllocationError("FFT length 2^" + std::to_string(log2_size) + " is too large");
    }
    const std::size_t n = size();
    // Stage with half-span h keeps its twiddles exp(sign 2 pi i k / 2h), k < h, at [h, 2h).
    // The widest stage is computed directly; narrower stages subsample it.
    twiddles_.resize(std::max<std::size_t>(n, 2));
    const std::size_t top = n / 2;
    for (std::size_t k = 0; k < top; ++k) {
        const double angle = sign_ * std::numbers::pi * static_cast<double>(k) / static_cast<double>(top);
        twiddles_[top + k] = Complex(std::cos(angle), std::sin(angle));
    }
    for (std::size_t h = top / 2; h >= 1; h /= 2) {
        for (std::size_t k = 0; k < h; ++k) twiddles_[h + k] = twiddles_[2 * h + 2 * k];
    }
    bitrev_.assign(n, 0);
    for (std::size_t i = 1; i < n; ++i) {
        bitrev_[i] = (bitrev_[i >> 1] >> 1) | (static_cast<std::uint32_t>(i & 1U) << (log2_size - 1));
    }
}

void Radix2Fft::operator()(std::span<Complex> data) const {
    const std::size_t n = size();
    if (data.size() != n) {
        throw DimensionError("FFT plan of length " + std::to_string(n) + " applied to " +
                             std::to_string(data.size()) + " points");
    }
    for (std::size_t i = 0; i < n; ++i) {
        const std::size_t j = bitrev_[i];
        if (i < j) {
            std::swap(data[i], data[j]);
        }
    }
    Complex* d = data.data();
    const std::size_t block = std::min(n, kCacheBlock);
    for (std::size_t start = 0; start < n; start += block) {
        for (std::size_t len = 2; len <= block; len <<= 1) {
            stage(d + start, block, len, &twiddles_[len / 2]);
        }
    }
    for (std::size_t len = 2 * block; len <= n; len <<= 1) {
        stage(d, n, len, &twiddles_[len / 2]);
    }
}

}  // namespace qcemu
