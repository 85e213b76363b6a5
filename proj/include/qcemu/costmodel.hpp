#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

namespace qcemu {

/// Machine constants of the FFT/QFT time models.
///
/// Defaults: 20 GFLOP/s achieved by the FFT (100 GFLOP/s peak at 20% efficiency),
/// 40 GB/s memory bandwidth, 56 Gb/s FDR InfiniBand injection bandwidth, one node.
struct MachineParams {
    double flops_peak = 100e9;
    double eff_fft = 0.2;
    double b_mem = 40e9;
    double b_net = 56e9 / 8;
    double p = 1;

    double flops_achieved() const noexcept { return eff_fft * flops_peak; }

    /// Throws PreconditionError unless every field is > 0, eff_fft <= 1 and p >= 1.
    void validate() const;
};

/// Seconds for a distributed FFT of 2^n points: 5 N n / (eff * peak) + 3 * 16 N / b_net.
double t_fft(unsigned n, const MachineParams& m);

/// Seconds for the gate-level QFT: 4 N n^2 / b_mem + log2(p) * 16 N / b_net.
double t_qft(unsigned n, const MachineParams& m);

/// The communication parts of the two models, reported separately.
double t_fft_comm(unsigned n, const MachineParams& m);
double t_qft_comm(unsigned n, const MachineParams& m);

/// The quick single-node estimate n * FLOPS_achieved / b_mem of how much faster the FFT is.
double single_node_speedup_estimate(unsigned n, const MachineParams& m);

/// Per-path multipliers applied to the QPE operation counts (all 1 by default).
struct CostWeights {
    double simulate = 1.0;
    double square = 1.0;
    double eigen = 1.0;
};

/// Abstract operation counts of the three QPE routes.
struct QpeCosts {
    double simulate = 0;
    double square = 0;
    double eigen = 0;
};

/// simulate G 2^{n+b} (G 2^{n+2b} coherent); square G 2^{2n} + b 2^{3n} (2^{n log2 7} with
/// Strassen); eigen G 2^{2n} + 2^{3n}. Evaluated in log space so large n does not overflow;
/// the returned values are log2 of the counts.
QpeCosts qpe_log2_costs(unsigned n, unsigned b, unsigned G, bool coherent, bool strassen = false,
                        const CostWeights& w = {});

/// Same expressions as plain doubles (overflows to inf for very large exponents).
QpeCosts qpe_costs(unsigned n, unsigned b, unsigned G, bool coherent, bool strassen = false,
                   const CostWeights& w = {});

enum class EmulationPath { Square, Eigen };

/// Smallest precision b in [1, b_max] where the emulation path is strictly cheaper than
/// simulation, or nullopt if none.
std::optional<unsigned> crossover_bits(unsigned n, unsigned G, EmulationPath path, bool coherent,
                                       bool strassen = false, const CostWeights& w = {}, unsigned b_max = 1024);

/// One timing measurement for the calibration fit.
struct TimingSample {
    enum class Path { Fft, Qft } path;
    unsigned n;
    double seconds;
};

struct CalibrationResult {
    MachineParams params;
    bool fft_fitted = false;  // flops_peak (given eff_fft)
    bool mem_fitted = false;  // b_mem
    bool net_fitted = false;  // b_net
    std::vector<double> residuals;  // seconds, in sample order
};

/// Least-squares fit of 1/(eff*peak), 1/b_mem and 1/b_net to measured timings. Constants
/// without data keep their values from `base`. Throws PreconditionError if there are no
/// samples or fewer than two for a path present, and ConvergenceError for a singular system.
/// With `fit_network` false, b_net is held at base.b_net and only compute/memory rates are fitted.
/// Rows are weighted by 1/seconds. If any fitted rate comes out non-positive (single-node data
/// often can't separate the network from compute) the network is dropped, b_net set to
/// infinity and the rest refitted.
CalibrationResult calibrate(const std::vector<TimingSample>& samples, const MachineParams& base = {},
                            bool fit_network = true);

/// `key = value` lines with keys flops_peak, eff_fft, b_mem, b_net, p; '#' comments.
/// Missing keys keep their defaults. Throws ParseError.
MachineParams parse_machine_params(std::istream& is);
MachineParams load_machine_params(const std::string& path);
void write_machine_params(std::ostream& os, const MachineParams& m);

}  // namespace qcemu
