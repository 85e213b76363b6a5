// qcemu: run circuits, benchmark simulation against emulation, estimate phases.

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "qcemu/arithmetic.hpp"
#include "qcemu/circuit.hpp"
#include "qcemu/costmodel.hpp"
#include "qcemu/emulator.hpp"
#include "qcemu/errors.hpp"
#include "qcemu/qpe.hpp"

using namespace qcemu;
using json = nlohmann::ordered_json;

namespace {

enum ExitCode { kOk = 0, kMismatch = 1, kUsage = 2, kResource = 3 };

constexpr double kCompareTolerance = 1e-8;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};
struct ResourceError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

using Clock = std::chrono::steady_clock;

template <class F>
double seconds_of(F&& f) {
    const auto t0 = Clock::now();
    f();
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t k = v.size() / 2;
    return v.size() % 2 ? v[k] : 0.5 * (v[k - 1] + v[k]);
}

/// One warm-up call, then the median of `reps` timed calls. `setup` runs untimed before each.
template <class Setup, class Body>
double timed_median(unsigned reps, Setup&& setup, Body&& body) {
    setup();
    body();
    std::vector<double> t;
    for (unsigned r = 0; r < reps; ++r) {
        setup();
        t.push_back(seconds_of(body));
    }
    return median(std::move(t));
}

void check_ceiling(unsigned qubits, unsigned max_qubits, const std::string& what) {
    if (qubits > max_qubits) {
        throw ResourceError(what + " needs " + std::to_string(qubits) + " qubits, above --max-qubits " +
                            std::to_string(max_qubits));
    }
}

std::ofstream open_out(const std::string& path) {
    std::ofstream os(path);
    if (!os) {
        throw UsageError("cannot write '" + path + "'");
    }
    return os;
}

std::vector<Qubit> parse_qubit_list(const std::string& text) {
    std::vector<Qubit> out;
    std::stringstream ss(text);
    for (std::string tok; std::getline(ss, tok, ',');) {
        try {
            std::size_t used = 0;
            const unsigned long v = std::stoul(tok, &used);
            if (used != tok.size()) throw std::invalid_argument(tok);
            out.push_back(static_cast<Qubit>(v));
        } catch (const std::exception&) {
            throw UsageError("bad qubit list '" + text + "'");
        }
    }
    return out;
}

// ---------------------------------------------------------------------------- run

struct RunConfig {
    std::string builtin;
    std::string circuit_file;
    std::string mode = "simulate";
    std::string emulate_as;
    unsigned n = 0;
    unsigned m = 3;
    std::string init = "0";
    std::uint64_t seed = 1;
    std::string state_out;
    std::string dist_out;
    std::string measure;
    std::string dump_circuit;
    unsigned shots = 0;
    unsigned max_qubits = 26;
    TfimParams tfim;
};

enum class Shortcut { None, Qft, Mul, Div };

struct Workload {
    Circuit circuit{1};
    Shortcut shortcut = Shortcut::None;
    std::optional<RegisterLayout> layout;
};

Workload make_workload(const RunConfig& cfg) {
    Workload w;
    if (!cfg.circuit_file.empty()) {
        std::ifstream in(cfg.circuit_file);
        if (!in) {
            throw UsageError("cannot open circuit file '" + cfg.circuit_file + "'");
        }
        w.circuit = parse_circuit(in, cfg.n);
        w.circuit.set_label(cfg.circuit_file);
        if (cfg.emulate_as == "qft") {
            w.shortcut = Shortcut::Qft;
        } else if (cfg.emulate_as == "mul" || cfg.emulate_as == "div") {
            const ArithOp op = cfg.emulate_as == "mul" ? ArithOp::Mul : ArithOp::Div;
            w.layout = layout_for(op, cfg.m);
            if (w.layout->num_qubits() != w.circuit.num_qubits()) {
                throw UsageError("--emulate-as " + cfg.emulate_as + " with --m " + std::to_string(cfg.m) + " needs " +
                                 std::to_string(w.layout->num_qubits()) + " qubits, the circuit has " +
                                 std::to_string(w.circuit.num_qubits()));
            }
            w.shortcut = op == ArithOp::Mul ? Shortcut::Mul : Shortcut::Div;
        }
        return w;
    }
    const auto need_n = [&] {
        if (cfg.n == 0) throw UsageError("--builtin " + cfg.builtin + " needs --n");
        return cfg.n;
    };
    if (cfg.builtin == "qft") {
        w.circuit = build_qft(need_n());
        w.shortcut = Shortcut::Qft;
    } else if (cfg.builtin == "entangler") {
        w.circuit = build_entangler(need_n());
    } else if (cfg.builtin == "tfim") {
        w.circuit = build_tfim_trotter(need_n(), cfg.tfim);
    } else if (cfg.builtin == "mul" || cfg.builtin == "div") {
        const ArithOp op = cfg.builtin == "mul" ? ArithOp::Mul : ArithOp::Div;
        w.layout = layout_for(op, cfg.m);
        check_ceiling(w.layout->num_qubits(), cfg.max_qubits, cfg.builtin);
        w.circuit = op == ArithOp::Mul ? build_multiplier(*w.layout) : build_divider(*w.layout);
        w.shortcut = op == ArithOp::Mul ? Shortcut::Mul : Shortcut::Div;
    } else {
        throw UsageError("unknown builtin '" + cfg.builtin + "'");
    }
    return w;
}

StateVector initial_state(const RunConfig& cfg, const Workload& w) {
    const unsigned n = w.circuit.num_qubits();
    check_ceiling(n, cfg.max_qubits, "initial state");
    Rng rng(cfg.seed);
    if (w.layout && (cfg.init == "uniform" || cfg.init == "random")) {
        // Arithmetic inputs range over (a, b) with c and the ancillas clear.
        std::vector<Index> support;
        const Index M = Index{1} << w.layout->m;
        for (Index a = 0; a < M; ++a)
            for (Index b = 0; b < M; ++b) support.push_back(w.layout->encode(a, b));
        if (cfg.init == "random") {
            return random_superposition(n, support, rng);
        }
        std::vector<Complex> amps(Index{1} << n, 0.0);
        const double amp = 1.0 / std::sqrt(static_cast<double>(support.size()));
        for (Index i : support) amps[i] = amp;
        return StateVector(std::move(amps));
    }
    if (cfg.init == "uniform") return StateVector::uniform(n);
    if (cfg.init == "random") return StateVector::random(n, rng);
    Index index = 0;
    try {
        std::size_t used = 0;
        index = std::stoull(cfg.init, &used);
        if (used != cfg.init.size()) throw std::invalid_argument(cfg.init);
    } catch (const std::exception&) {
        throw UsageError("--init must be a basis index, 'uniform' or 'random'");
    }
    return new_basis_state(n, index);
}

StateVector emulate(const Workload& w, const StateVector& in) {
    switch (w.shortcut) {
        case Shortcut::Qft: {
            StateVector s = in;
            return emulate_qft(s);
        }
        case Shortcut::Mul: return emulate_multiply(in, *w.layout);
        case Shortcut::Div: return emulate_divide(in, *w.layout);
        case Shortcut::None: break;
    }
    throw UsageError("no emulation shortcut for this workload (qft, mul and div have one)");
}

int cmd_run(const RunConfig& cfg) {
    if (cfg.builtin.empty() == cfg.circuit_file.empty()) {
        throw UsageError("give exactly one of --builtin and --circuit");
    }
    const Workload w = make_workload(cfg);
    if (!cfg.dump_circuit.empty()) {
        auto os = open_out(cfg.dump_circuit);
        write_text(os, w.circuit);
    }
    if (cfg.mode != "simulate" && w.shortcut == Shortcut::None) {
        throw UsageError("mode '" + cfg.mode + "' needs an emulation shortcut (qft, mul, div)");
    }
    const StateVector input = initial_state(cfg, w);

    std::cout << "circuit: " << (w.circuit.label().empty() ? cfg.builtin : w.circuit.label()) << "\n"
              << "qubits: " << w.circuit.num_qubits() << "\n"
              << "gates: " << w.circuit.gate_count() << "\n"
              << "mode: " << cfg.mode << "\n";

    std::optional<StateVector> simulated;
    std::optional<StateVector> emulated;
    if (cfg.mode != "emulate") {
        StateVector s = input;
        const double t = seconds_of([&] { apply_circuit(s, w.circuit); });
        std::cout << "simulate_s: " << t << "\n";
        simulated = std::move(s);
    }
    if (cfg.mode != "simulate") {
        std::optional<StateVector> e;
        const double t = seconds_of([&] { e = emulate(w, input); });
        std::cout << "emulate_s: " << t << "\n";
        emulated = std::move(e);
    }
    const StateVector& result = emulated ? *emulated : *simulated;

    if (!cfg.state_out.empty()) {
        auto os = open_out(cfg.state_out);
        write_state_csv(os, result);
    }
    if (!cfg.dist_out.empty()) {
        std::vector<Qubit> qs = parse_qubit_list(cfg.measure);
        if (qs.empty()) {
            for (Qubit q = 0; q < result.num_qubits(); ++q) qs.push_back(q);
        }
        auto os = open_out(cfg.dist_out);
        write_distribution_csv(os, full_distribution(result, qs));
    }
    if (cfg.shots > 0) {
        Rng rng(cfg.seed ^ 0x9e3779b97f4a7c15ULL);
        std::map<Index, unsigned> counts;
        for (unsigned i = 0; i < cfg.shots; ++i) ++counts[sample_all(result, rng).bits];
        std::cout << "shots: " << cfg.shots << "\n";
        for (const auto& [outcome, count] : counts) std::cout << "  " << outcome << ": " << count << "\n";
    }
    if (simulated && emulated) {
        const double d = distance(*simulated, *emulated);
        std::cout << "distance: " << d << "\n";
        if (!(d <= kCompareTolerance)) {
            std::cerr << "error: simulated and emulated states differ (distance " << d << ")\n";
            return kMismatch;
        }
    }
    return kOk;
}

// Emulated QPE paths list their outcome distribution only up to this many bits.
constexpr unsigned kMaxJsonDistributionBits = 16;

// ---------------------------------------------------------------------------- bench

struct BenchConfig {
    std::string suite = "qft";
    unsigned min_size = 4;
    unsigned max_size = 12;
    unsigned step = 1;
    unsigned reps = 5;
    unsigned b = 8;
    std::uint64_t seed = 1;
    unsigned max_qubits = 26;
    std::string out;
};

struct BenchRow {
    std::string suite;
    unsigned size;
    std::string mode;
    double median_s;
    double speedup;
};

void write_row(std::ostream& os, const BenchRow& r) {
    os << r.suite << ',' << r.size << ',' << r.mode << ',' << std::setprecision(6) << r.median_s << ','
       << std::setprecision(6) << r.speedup << '\n';
}

void write_skip(std::ostream& os, const std::string& suite, unsigned size, const std::string& why) {
    std::cerr << "warning: skipping " << suite << " size " << size << ": " << why << "\n";
    os << suite << ',' << size << ",skipped,,\n";
}

/// Random superposition over all (a, b) pairs with everything else clear.
StateVector arithmetic_input(const RegisterLayout& l, unsigned n, Rng& rng) {
    std::vector<Index> support;
    const Index M = Index{1} << l.m;
    for (Index a = 0; a < M; ++a)
        for (Index b = 0; b < M; ++b) support.push_back(l.encode(a, b));
    return random_superposition(n, support, rng);
}

void bench_size(const BenchConfig& cfg, unsigned size, std::ostream& os) {
    Rng rng(cfg.seed + size);
    const std::string& suite = cfg.suite;
    if (suite == "qft") {
        if (size > cfg.max_qubits) return write_skip(os, suite, size, "above --max-qubits");
        const StateVector in = StateVector::random(size, rng);
        const Circuit c = build_qft(size);
        std::optional<StateVector> s;
        const double t_sim = timed_median(cfg.reps, [&] { s = in; }, [&] { apply_circuit(*s, c); });
        const double t_emu = timed_median(cfg.reps, [&] { s = in; }, [&] { emulate_qft(*s); });
        write_row(os, {suite, size, "simulate", t_sim, 1.0});
        write_row(os, {suite, size, "emulate", t_emu, t_sim / t_emu});
        return;
    }
    if (suite == "mul" || suite == "div") {
        const ArithOp op = suite == "mul" ? ArithOp::Mul : ArithOp::Div;
        const RegisterLayout sim_layout = layout_for(op, size);
        if (sim_layout.num_qubits() > cfg.max_qubits) return write_skip(os, suite, size, "above --max-qubits");
        const Circuit c = op == ArithOp::Mul ? build_multiplier(sim_layout) : build_divider(sim_layout);
        const StateVector sim_in = arithmetic_input(sim_layout, sim_layout.num_qubits(), rng);
        // The emulated path needs no work qubits.
        const RegisterLayout emu_layout = RegisterLayout::standard(size, 0);
        const StateVector emu_in = arithmetic_input(emu_layout, 3 * size, rng);
        std::optional<StateVector> s;
        const double t_sim = timed_median(cfg.reps, [&] { s = sim_in; }, [&] { apply_circuit(*s, c); });
        const double t_emu = timed_median(
            cfg.reps, [] {},
            [&] { s = op == ArithOp::Mul ? emulate_multiply(emu_in, emu_layout) : emulate_divide(emu_in, emu_layout); });
        write_row(os, {suite, size, "simulate", t_sim, 1.0});
        write_row(os, {suite, size, "emulate", t_emu, t_sim / t_emu});
        return;
    }
    if (suite == "qpe") {
        if (size + cfg.b > cfg.max_qubits) return write_skip(os, suite, size, "n + b above --max-qubits");
        if (size > kDefaultDenseLimit) return write_skip(os, suite, size, "dense U above the dense limit");
        const Circuit u = build_tfim_trotter(size);
        const DenseUnitary dense = to_dense_matrix(u);
        const auto pairs = emulate_qpe_eigen(dense);
        const auto& v = best_overlap(pairs, new_basis_state(size, 0));
        const StateVector prep(std::vector<Complex>(v.vector.data(), v.vector.data() + v.vector.size()));
        const double t_sim = timed_median(cfg.reps, [] {}, [&] { simulate_qpe(u, prep, cfg.b); });
        const double t_sq = timed_median(cfg.reps, [] {}, [&] { emulate_qpe_squaring(to_dense_matrix(u), prep, cfg.b); });
        const double t_eig = timed_median(cfg.reps, [] {}, [&] { emulate_qpe_eigen(to_dense_matrix(u)); });
        write_row(os, {suite, size, "simulate", t_sim, 1.0});
        write_row(os, {suite, size, "square", t_sq, t_sim / t_sq});
        write_row(os, {suite, size, "eigen", t_eig, t_sim / t_eig});
        return;
    }
    throw UsageError("unknown suite '" + suite + "'");
}

int cmd_bench(const BenchConfig& cfg) {
    if (cfg.reps < 5) throw UsageError("--reps must be at least 5");
    if (cfg.min_size < 1 || cfg.max_size < cfg.min_size || cfg.step < 1) throw UsageError("bad size range");
    std::ofstream file;
    if (!cfg.out.empty()) file = open_out(cfg.out);
    std::ostream& os = cfg.out.empty() ? std::cout : file;
    os << "suite,size,mode,median_s,speedup\n";
    for (unsigned size = cfg.min_size; size <= cfg.max_size; size += cfg.step) {
        bench_size(cfg, size, os);
        os.flush();
    }
    return kOk;
}

// ---------------------------------------------------------------------------- qpe

struct QpeConfig {
    std::string builtin = "tfim";
    std::string circuit_file;
    unsigned n = 4;
    unsigned b = 8;
    std::string strategy = "auto";
    bool coherent = true;
    double theta = 5 * std::numbers::pi / 4;
    TfimParams tfim;
    unsigned max_qubits = 26;
    std::string out;
};

int cmd_qpe(const QpeConfig& cfg) {
    const auto t_start = Clock::now();
    Circuit u(1);
    std::optional<StateVector> prep;
    if (!cfg.circuit_file.empty()) {
        std::ifstream in(cfg.circuit_file);
        if (!in) throw UsageError("cannot open circuit file '" + cfg.circuit_file + "'");
        u = parse_circuit(in);
    } else if (cfg.builtin == "t-gate" || cfg.builtin == "z-gate" || cfg.builtin == "rz") {
        u.add(cfg.builtin == "t-gate" ? Gate::t(0) : cfg.builtin == "z-gate" ? Gate::z(0) : Gate::rz(cfg.theta, 0));
        prep = new_basis_state(1, 1);
    } else if (cfg.builtin == "tfim") {
        u = build_tfim_trotter(cfg.n, cfg.tfim);
    } else {
        throw UsageError("unknown builtin '" + cfg.builtin + "'");
    }
    const unsigned n = u.num_qubits();
    const unsigned G = static_cast<unsigned>(u.gate_count());
    if (cfg.b < 1) throw UsageError("--b must be at least 1");

    Strategy strategy;
    if (cfg.strategy == "auto") {
        strategy = select_strategy(n, cfg.b, std::max(G, 1U), cfg.coherent);
    } else if (cfg.strategy == "simulate") {
        strategy = Strategy::Simulate;
    } else if (cfg.strategy == "square") {
        strategy = Strategy::Square;
    } else if (cfg.strategy == "eigen") {
        strategy = Strategy::Eigen;
    } else {
        throw UsageError("unknown strategy '" + cfg.strategy + "'");
    }

    json timings = json::object();
    {
        StateVector s(n);
        timings["apply_u_s"] = seconds_of([&] { apply_circuit(s, u); });
    }

    // Dense U is needed by both emulation paths, and to prepare an eigenvector when none is known.
    std::optional<DenseUnitary> dense;
    std::optional<std::vector<Eigenpair>> pairs;
    if (strategy != Strategy::Simulate || !prep) {
        if (n > kDefaultDenseLimit) throw ResourceError("dense U on " + std::to_string(n) + " qubits is too large");
        timings["dense_construction_s"] = seconds_of([&] { dense = to_dense_matrix(u); });
    }
    if (strategy == Strategy::Eigen || !prep) {
        timings["eigensolver_s"] = seconds_of([&] { pairs = emulate_qpe_eigen(*dense); });
    }
    std::optional<double> exact_phase;
    if (!prep) {
        const Eigenpair& e = best_overlap(*pairs, new_basis_state(n, 0));
        prep = StateVector(std::vector<Complex>(e.vector.data(), e.vector.data() + e.vector.size()));
    }

    json j;
    j["strategy"] = std::string(strategy_name(strategy));
    j["requested_strategy"] = cfg.strategy;
    j["coherent"] = cfg.coherent;
    j["n"] = n;
    j["G"] = G;

    PhaseEstimate est;
    switch (strategy) {
        case Strategy::Simulate:
            check_ceiling(n + cfg.b, cfg.max_qubits, "coherent phase estimation");
            timings["simulate_s"] = seconds_of([&] { est = simulate_qpe(u, *prep, cfg.b); });
            break;
        case Strategy::Square: {
            timings["squaring_s"] = seconds_of([&] { est = emulate_qpe_squaring(*dense, *prep, cfg.b); });
            if (cfg.b <= kMaxJsonDistributionBits) {
                const auto amps = prep->amplitudes();
                Complex rq = 0.0;
                const auto uv = dense->apply(*prep);
                for (std::size_t i = 0; i < amps.size(); ++i) rq += std::conj(amps[i]) * uv[i];
                est.distribution = qpe_outcome_distribution({{phase_of(rq), 1.0}}, cfg.b, n);
            }
            break;
        }
        case Strategy::Eigen: {
            const Eigenpair& e = best_overlap(*pairs, *prep);
            exact_phase = e.phase;
            est.bits = cfg.b;
            est.outcome = round_phase(e.phase, cfg.b);
            est.phi = static_cast<double>(est.outcome) / std::ldexp(1.0, static_cast<int>(cfg.b));
            if (cfg.b <= kMaxJsonDistributionBits) est.distribution = qpe_outcome_distribution(*pairs, *prep, cfg.b);
            break;
        }
    }

    j["phi"] = est.phi;
    j["bits"] = est.bits;
    j["outcome"] = est.outcome;
    if (exact_phase) j["phi_exact"] = *exact_phase;
    json dist = json::array();
    if (est.distribution) {
        for (std::size_t o = 0; o < est.distribution->probs.size(); ++o) {
            if (est.distribution->probs[o] > 1e-12) dist.push_back(json::array({o, est.distribution->probs[o]}));
        }
    }
    j["distribution"] = dist;
    j["wall_time_s"] = std::chrono::duration<double>(Clock::now() - t_start).count();
    j["timings"] = timings;

    if (cfg.out.empty()) {
        std::cout << j.dump(2) << "\n";
    } else {
        auto os = open_out(cfg.out);
        os << j.dump(2) << "\n";
    }
    return kOk;
}

// ---------------------------------------------------------------------------- crossover

struct CrossoverConfig {
    unsigned n_min = 8;
    unsigned n_max = 14;
    unsigned b_max = 1024;
    std::string mode = "analytic";
    bool strassen = false;
    bool coherent = false;
    unsigned reps = 5;
    unsigned max_qubits = 26;
    std::string out;
};

std::string cell(std::optional<unsigned> v) { return v ? std::to_string(*v) : std::string(); }

/// First b where the emulation path's measured time drops below coherent simulation's.
std::pair<std::optional<unsigned>, std::optional<unsigned>> measured_crossover(unsigned n, const CrossoverConfig& cfg) {
    if (n > kDefaultDenseLimit) throw ResourceError("dense U on " + std::to_string(n) + " qubits is too large");
    const Circuit u = build_tfim_trotter(n);
    const auto pairs = emulate_qpe_eigen(to_dense_matrix(u));
    const auto& v = best_overlap(pairs, new_basis_state(n, 0));
    const StateVector prep(std::vector<Complex>(v.vector.data(), v.vector.data() + v.vector.size()));
    const double t_eig = timed_median(cfg.reps, [] {}, [&] { emulate_qpe_eigen(to_dense_matrix(u)); });

    std::optional<unsigned> sq, eig;
    for (unsigned b = 1; b <= cfg.b_max && (!sq || !eig); ++b) {
        if (n + b > cfg.max_qubits) break;
        const double t_sim = timed_median(cfg.reps, [] {}, [&] { simulate_qpe(u, prep, b); });
        const double t_sq = timed_median(cfg.reps, [] {}, [&] { emulate_qpe_squaring(to_dense_matrix(u), prep, b); });
        if (!sq && t_sq < t_sim) sq = b;
        if (!eig && t_eig < t_sim) eig = b;
    }
    return {sq, eig};
}

int cmd_crossover(const CrossoverConfig& cfg) {
    if (cfg.n_min < 1 || cfg.n_max < cfg.n_min) throw UsageError("bad n range");
    if (cfg.mode != "analytic" && cfg.mode != "measured") throw UsageError("--mode is analytic or measured");
    if (cfg.mode == "measured") {
        check_ceiling(cfg.n_max + 1, cfg.max_qubits, "measured crossover");
    }
    std::ofstream file;
    if (!cfg.out.empty()) file = open_out(cfg.out);
    std::ostream& os = cfg.out.empty() ? std::cout : file;
    os << "n,crossover_bits_squaring,crossover_bits_eigen,mode\n";
    for (unsigned n = cfg.n_min; n <= cfg.n_max; ++n) {
        std::optional<unsigned> sq, eig;
        if (cfg.mode == "analytic") {
            const unsigned G = 4 * std::max(n, 2U) - 3;
            sq = crossover_bits(n, G, EmulationPath::Square, cfg.coherent, cfg.strassen, {}, cfg.b_max);
            eig = crossover_bits(n, G, EmulationPath::Eigen, cfg.coherent, cfg.strassen, {}, cfg.b_max);
        } else {
            std::tie(sq, eig) = measured_crossover(n, cfg);
        }
        os << n << ',' << cell(sq) << ',' << cell(eig) << ',' << cfg.mode << '\n';
        os.flush();
    }
    return kOk;
}

// ---------------------------------------------------------------------------- model, calibrate

int cmd_model(unsigned n_min, unsigned n_max, const std::string& machine) {
    const MachineParams m = machine.empty() ? MachineParams{} : load_machine_params(machine);
    std::cout << "n,t_fft_s,t_qft_s,ratio,single_node_estimate\n" << std::setprecision(6);
    for (unsigned n = n_min; n <= n_max; ++n) {
        const double f = t_fft(n, m);
        const double q = t_qft(n, m);
        std::cout << n << ',' << f << ',' << q << ',' << q / f << ',' << single_node_speedup_estimate(n, m) << '\n';
    }
    return kOk;
}

std::vector<TimingSample> read_bench_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw UsageError("cannot open bench CSV '" + path + "'");
    std::vector<TimingSample> samples;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (lineno == 1 || line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        for (std::string tok; std::getline(ss, tok, ',');) f.push_back(tok);
        if (f.size() < 4) throw ParseError(lineno, "expected suite,size,mode,median_s,speedup");
        if (f[0] != "qft" || f[2] == "skipped") continue;
        try {
            const auto n = static_cast<unsigned>(std::stoul(f[1]));
            const double s = std::stod(f[3]);
            samples.push_back({f[2] == "emulate" ? TimingSample::Path::Fft : TimingSample::Path::Qft, n, s});
        } catch (const std::exception&) {
            throw ParseError(lineno, "bad number");
        }
    }
    return samples;
}

int cmd_calibrate(const std::string& bench, const std::string& machine, const std::string& out, bool fit_network) {
    const MachineParams base = machine.empty() ? MachineParams{} : load_machine_params(machine);
    const auto samples = read_bench_csv(bench);
    const auto r = calibrate(samples, base, fit_network);
    double worst = 0.0;
    for (std::size_t i = 0; i < samples.size(); ++i) {
        worst = std::max(worst, std::abs(r.residuals[i]) / samples[i].seconds);
    }
    std::cerr << "calibrated from " << samples.size() << " samples, worst relative residual " << worst << "\n";
    if (out.empty()) {
        write_machine_params(std::cout, r.params);
    } else {
        auto os = open_out(out);
        write_machine_params(os, r.params);
    }
    return kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Quantum circuit simulation and emulation"};
    app.require_subcommand(1);

    RunConfig run;
    auto* run_cmd = app.add_subcommand("run", "Run a circuit by simulation, emulation or both");
    run_cmd->add_option("--builtin", run.builtin, "qft, entangler or tfim (size --n); mul or div (size --m)")
        ->check(CLI::IsMember({"qft", "entangler", "tfim", "mul", "div"}));
    run_cmd->add_option("--circuit", run.circuit_file, "Circuit text file");
    run_cmd->add_option("--mode", run.mode, "simulate, emulate or compare")
        ->check(CLI::IsMember({"simulate", "emulate", "compare"}));
    run_cmd->add_option("--emulate-as", run.emulate_as, "Shortcut for a --circuit file: qft, or mul/div in the standard layout")
        ->check(CLI::IsMember({"qft", "mul", "div"}));
    run_cmd->add_option("--n", run.n, "Qubits (qft, entangler, tfim; register width for --circuit)");
    run_cmd->add_option("--m", run.m, "Bits per register for mul/div (3m + ancilla qubits simulated)");
    run_cmd->add_option("--init", run.init, "Basis index, 'uniform' or 'random'");
    run_cmd->add_option("--seed", run.seed, "Seed for --init random and --shots");
    run_cmd->add_option("--state-out", run.state_out, "Write the final state as index,re,im CSV");
    run_cmd->add_option("--dist-out", run.dist_out, "Write the outcome distribution CSV");
    run_cmd->add_option("--measure", run.measure, "Comma-separated qubits for --dist-out (default all)");
    run_cmd->add_option("--shots", run.shots, "Sample this many full measurements and print counts");
    run_cmd->add_option("--dump-circuit", run.dump_circuit, "Write the circuit in text form");
    run_cmd->add_option("--max-qubits", run.max_qubits, "Refuse larger registers");
    run_cmd->add_option("--dt", run.tfim.dt, "TFIM time step");
    run_cmd->add_option("--field", run.tfim.h, "TFIM transverse field h");
    run_cmd->add_option("--coupling", run.tfim.J, "TFIM coupling J");

    BenchConfig bench;
    auto* bench_cmd = app.add_subcommand("bench", "Time simulation against emulation over a size range");
    bench_cmd->add_option("--suite", bench.suite, "qft (size n), mul/div (size m) or qpe (TFIM size n)")
        ->check(CLI::IsMember({"qft", "mul", "div", "qpe"}));
    bench_cmd->add_option("--min", bench.min_size, "Smallest size");
    bench_cmd->add_option("--max", bench.max_size, "Largest size");
    bench_cmd->add_option("--step", bench.step, "Size increment");
    bench_cmd->add_option("--reps", bench.reps, "Timed repetitions per point (>= 5, median reported)");
    bench_cmd->add_option("--b", bench.b, "Precision bits for the qpe suite");
    bench_cmd->add_option("--seed", bench.seed, "Input seed");
    bench_cmd->add_option("--max-qubits", bench.max_qubits, "Skip sizes above this");
    bench_cmd->add_option("--out", bench.out, "CSV path (default stdout)");

    QpeConfig qpe;
    auto* qpe_cmd = app.add_subcommand("qpe", "Phase estimation with a chosen or selected strategy");
    qpe_cmd->add_option("--builtin", qpe.builtin, "t-gate, z-gate, rz or tfim")
        ->check(CLI::IsMember({"t-gate", "z-gate", "rz", "tfim"}));
    qpe_cmd->add_option("--circuit", qpe.circuit_file, "Circuit text file for U");
    qpe_cmd->add_option("--n", qpe.n, "TFIM sites");
    qpe_cmd->add_option("--b", qpe.b, "Precision bits");
    qpe_cmd->add_option("--strategy", qpe.strategy, "simulate, square, eigen or auto")
        ->check(CLI::IsMember({"simulate", "square", "eigen", "auto"}));
    qpe_cmd->add_option("--coherent", qpe.coherent, "Cost auto selection as coherent QPE");
    qpe_cmd->add_option("--theta", qpe.theta, "Angle for --builtin rz");
    qpe_cmd->add_option("--dt", qpe.tfim.dt, "TFIM time step");
    qpe_cmd->add_option("--field", qpe.tfim.h, "TFIM transverse field h");
    qpe_cmd->add_option("--coupling", qpe.tfim.J, "TFIM coupling J");
    qpe_cmd->add_option("--max-qubits", qpe.max_qubits, "Refuse larger registers");
    qpe_cmd->add_option("--out", qpe.out, "JSON path (default stdout)");

    CrossoverConfig cross;
    auto* cross_cmd = app.add_subcommand("crossover", "Precision at which emulating QPE beats simulating it");
    cross_cmd->add_option("--n-min", cross.n_min, "Smallest n");
    cross_cmd->add_option("--n-max", cross.n_max, "Largest n");
    cross_cmd->add_option("--b-max", cross.b_max, "Largest precision searched");
    cross_cmd->add_option("--mode", cross.mode, "analytic or measured")->check(CLI::IsMember({"analytic", "measured"}));
    cross_cmd->add_flag("--strassen", cross.strassen, "Analytic squaring cost with the Strassen exponent");
    cross_cmd->add_flag("--coherent", cross.coherent, "Analytic simulation cost of coherent QPE");
    cross_cmd->add_option("--reps", cross.reps, "Timed repetitions per point in measured mode");
    cross_cmd->add_option("--max-qubits", cross.max_qubits, "Largest n + b simulated in measured mode");
    cross_cmd->add_option("--out", cross.out, "CSV path (default stdout)");

    unsigned model_min = 20, model_max = 32;
    std::string model_machine;
    auto* model_cmd = app.add_subcommand("model", "Tabulate the FFT and QFT time models");
    model_cmd->add_option("--n-min", model_min, "Smallest n");
    model_cmd->add_option("--n-max", model_max, "Largest n");
    model_cmd->add_option("--machine", model_machine, "Machine config file");

    std::string cal_bench, cal_machine, cal_out;
    bool cal_fixed_network = false;
    auto* cal_cmd = app.add_subcommand("calibrate", "Fit machine constants to a qft bench CSV");
    cal_cmd->add_option("--bench", cal_bench, "CSV written by 'bench --suite qft'")->required();
    cal_cmd->add_option("--machine", cal_machine, "Starting machine config");
    cal_cmd->add_option("--out", cal_out, "Machine config to write (default stdout)");
    cal_cmd->add_flag("--fixed-network", cal_fixed_network, "Keep b_net from the starting config");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kOk : kUsage;
    }

    try {
        if (*run_cmd) return cmd_run(run);
        if (*bench_cmd) return cmd_bench(bench);
        if (*qpe_cmd) return cmd_qpe(qpe);
        if (*cross_cmd) return cmd_crossover(cross);
        if (*model_cmd) return cmd_model(model_min, model_max, model_machine);
        if (*cal_cmd) return cmd_calibrate(cal_bench, cal_machine, cal_out, !cal_fixed_network);
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const ResourceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kResource;
    } catch (const AllocationError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kResource;
    } catch (const ConvergenceError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kResource;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kUsage;
    } catch (const std::bad_alloc&) {
        std::cerr << "error: out of memory\n";
        return kResource;
    }
    return kUsage;
}
