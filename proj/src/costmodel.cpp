#include "qcemu/costmodel.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>

#include "qcemu/errors.hpp"

namespace qcemu {

void MachineParams::validate() const {
    auto positive = [](double v, const char* name) {
        if (!(v > 0.0)) {
            throw PreconditionError(std::string("machine parameter ") + name + " must be > 0");
        }
    };
    positive(flops_peak, "flops_peak");
    positive(eff_fft, "eff_fft");
    positive(b_mem, "b_mem");
    positive(b_net, "b_net");
    if (eff_fft > 1.0) {
        throw PreconditionError("eff_fft must be <= 1");
    }
    if (!(p >= 1.0)) {
        throw PreconditionError("node count p must be >= 1");
    }
}

namespace {

double points(unsigned n) { return std::ldexp(1.0, static_cast<int>(n)); }

}  // namespace

double t_fft_comm(unsigned n, const MachineParams& m) { return 3.0 * 16.0 * points(n) / m.b_net; }

double t_qft_comm(unsigned n, const MachineParams& m) { return std::log2(m.p) * 16.0 * points(n) / m.b_net; }

double t_fft(unsigned n, const MachineParams& m) {
    m.validate();
    return 5.0 * points(n) * n / m.flops_achieved() + t_fft_comm(n, m);
}

double t_qft(unsigned n, const MachineParams& m) {
    m.validate();
    const double nn = static_cast<double>(n);
    return 4.0 * points(n) * nn * nn / m.b_mem + t_qft_comm(n, m);
}

double single_node_speedup_estimate(unsigned n, const MachineParams& m) {
    m.validate();
    return n * m.flops_achieved() / m.b_mem;
}

namespace {

/// log2(2^x + 2^y)
double log2_add(double x, double y) {
    const double hi = std::max(x, y);
    const double lo = std::min(x, y);
    return hi + std::log2(1.0 + std::exp2(lo - hi));
}

}  // namespace

QpeCosts qpe_log2_costs(unsigned n, unsigned b, unsigned G, bool coherent, bool strassen, const CostWeights& w) {
    if (n < 1 || b < 1 || G < 1) {
        throw PreconditionError("qpe_costs: n, b and G must all be >= 1");
    }
    const double lg = std::log2(static_cast<double>(G));
    const double nn = n;
    const double bb = b;
    const double build = lg + 2 * nn;  // dense construction, G 2^{2n}
    const double mult_exp = strassen ? nn * std::log2(7.0) : 3 * nn;

    QpeCosts c;
    c.simulate = std::log2(w.simulate) + lg + nn + (coherent ? 2 * bb : bb);
    c.square = std::log2(w.square) + log2_add(build, std::log2(bb) + mult_exp);
    c.eigen = std::log2(w.eigen) + log2_add(build, 3 * nn);
    return c;
}

QpeCosts qpe_costs(unsigned n, unsigned b, unsigned G, bool coherent, bool strassen, const CostWeights& w) {
    const QpeCosts l = qpe_log2_costs(n, b, G, coherent, strassen, w);
    return {std::exp2(l.simulate), std::exp2(l.square), std::exp2(l.eigen)};
}

std::optional<unsigned> crossover_bits(unsigned n, unsigned G, EmulationPath path, bool coherent, bool strassen,
                                       const CostWeights& w, unsigned b_max) {
    for (unsigned b = 1; b <= b_max; ++b) {
        const QpeCosts c = qpe_log2_costs(n, b, G, coherent, strassen, w);
        const double emu = path == EmulationPath::Square ? c.square : c.eigen;
        if (emu < c.simulate) {
            return b;
        }
    }
    return std::nullopt;
}

namespace {

double t_model(const TimingSample& s, const MachineParams& m) {
    return s.path == TimingSample::Path::Fft ? t_fft(s.n, m) : t_qft(s.n, m);
}

}  // namespace

CalibrationResult calibrate(const std::vector<TimingSample>& samples, const MachineParams& base, bool fit_network) {
    if (samples.empty()) {
        throw PreconditionError("calibrate: no samples");
    }
    base.validate();
    std::size_t n_fft = 0;
    std::size_t n_qft = 0;
    for (const auto& s : samples) {
        (s.path == TimingSample::Path::Fft ? n_fft : n_qft) += 1;
    }
    if ((n_fft > 0 && n_fft < 2) || (n_qft > 0 && n_qft < 2)) {
        throw PreconditionError("calibrate: need at least two samples per path");
    }

    CalibrationResult r;
    r.params = base;
    r.fft_fitted = n_fft > 0;
    r.mem_fitted = n_qft > 0;
    const double log2p = std::log2(base.p);
    r.net_fitted = fit_network && (n_fft > 0 || (n_qft > 0 && log2p > 0));

    // Unknowns in order: 1/F_achieved, 1/b_mem, 1/b_net (only those with data).
    enum { kF, kM, kN };
    std::vector<int> cols;
    if (r.fft_fitted) cols.push_back(kF);
    if (r.mem_fitted) cols.push_back(kM);
    if (r.net_fitted) cols.push_back(kN);

    const auto rows = static_cast<Eigen::Index>(samples.size());
    auto features = [&](const TimingSample& s) {
        const double N = points(s.n);
        const double nn = s.n;
        std::array<double, 3> f{0, 0, 0};
        if (s.path == TimingSample::Path::Fft) {
            f[kF] = 5 * N * nn;
            f[kN] = 48 * N;
        } else {
            f[kM] = 4 * N * nn * nn;
            f[kN] = log2p * 16 * N;
        }
        return f;
    };

    // Rows are weighted by 1/t so every size counts in relative terms.
    auto solve = [&](const std::vector<int>& use) {
        const auto ncols = static_cast<Eigen::Index>(use.size());
        Eigen::MatrixXd A = Eigen::MatrixXd::Zero(rows, ncols);
        Eigen::VectorXd y(rows);
        for (Eigen::Index i = 0; i < rows; ++i) {
            const auto& s = samples[static_cast<std::size_t>(i)];
            if (!(s.seconds > 0.0)) {
                throw PreconditionError("calibrate: sample times must be positive");
            }
            const auto f = features(s);
            const bool net_in = std::find(use.begin(), use.end(), kN) != use.end();
            const double net_fixed = net_in || std::isinf(base.b_net) ? 0.0 : f[kN] / base.b_net;
            for (Eigen::Index j = 0; j < ncols; ++j) {
                A(i, j) = f[static_cast<std::size_t>(use[static_cast<std::size_t>(j)])] / s.seconds;
            }
            y(i) = (s.seconds - net_fixed) / s.seconds;
        }
        // Column scaling keeps the QR well conditioned across 2^n magnitudes.
        Eigen::VectorXd scale(ncols);
        for (Eigen::Index j = 0; j < ncols; ++j) {
            scale(j) = A.col(j).cwiseAbs().maxCoeff();
            if (scale(j) == 0.0) {
                throw ConvergenceError("calibrate: degenerate fit (empty column)");
            }
            A.col(j) /= scale(j);
        }
        Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(A);
        qr.setThreshold(1e-10);
        if (qr.rank() < ncols) {
            throw ConvergenceError("calibrate: degenerate fit (singular system)");
        }
        return Eigen::VectorXd(qr.solve(y).cwiseQuotient(scale));
    };

    Eigen::VectorXd x = solve(cols);
    // Any non-positive rate means the data can't separate the network term from the rest;
    // treat the network as free and refit. Without it each rate is a one-column fit of
    // positive data, so it comes out positive.
    if (r.net_fitted && !(x.minCoeff() > 0.0)) {
        cols.pop_back();
        r.net_fitted = false;
        r.params.b_net = std::numeric_limits<double>::infinity();
        x = solve(cols);
    }

    for (std::size_t j = 0; j < cols.size(); ++j) {
        const double v = x(static_cast<Eigen::Index>(j));
        if (!(v > 0.0)) {
            throw ConvergenceError("calibrate: fit produced a non-positive inverse rate");
        }
        switch (cols[j]) {
            case kF: r.params.flops_peak = 1.0 / v / base.eff_fft; break;
            case kM: r.params.b_mem = 1.0 / v; break;
            case kN: r.params.b_net = 1.0 / v; break;
        }
    }
    r.residuals.resize(samples.size());
    for (std::size_t i = 0; i < samples.size(); ++i) {
        r.residuals[i] = t_model(samples[i], r.params) - samples[i].seconds;
    }
    return r;
}

MachineParams parse_machine_params(std::istream& is) {
    MachineParams m;
    std::string text;
    std::size_t line = 0;
    while (std::getline(is, text)) {
        ++line;
        if (const auto hash = text.find('#'); hash != std::string::npos) {
            text.erase(hash);
        }
        if (text.find_first_not_of(" \t\r") == std::string::npos) {
            continue;
        }
        const auto eq = text.find('=');
        if (eq == std::string::npos) {
            throw ParseError(line, "expected 'key = value'");
        }
        std::istringstream ks(text.substr(0, eq));
        std::istringstream vs(text.substr(eq + 1));
        std::string key;
        std::string token;
        std::string trailing;
        if (!(ks >> key) || !(vs >> token) || (vs >> trailing)) {
            throw ParseError(line, "expected 'key = value'");
        }
        // stod rather than >> so "inf" (a network that costs nothing) reads back.
        double value = 0;
        try {
            std::size_t used = 0;
            value = std::stod(token, &used);
            if (used != token.size()) throw std::invalid_argument(token);
        } catch (const std::exception&) {
            throw ParseError(line, "expected a number, got '" + token + "'");
        }
        if (key == "flops_peak") {
            m.flops_peak = value;
        } else if (key == "eff_fft") {
            m.eff_fft = value;
        } else if (key == "b_mem") {
            m.b_mem = value;
        } else if (key == "b_net") {
            m.b_net = value;
        } else if (key == "p") {
            m.p = value;
        } else {
            throw ParseError(line, "unknown key '" + key + "'");
        }
    }
    try {
        m.validate();
    } catch (const PreconditionError& e) {
        throw ParseError(line, e.what());
    }
    return m;
}

MachineParams load_machine_params(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw PreconditionError("cannot open machine config '" + path + "'");
    }
    return parse_machine_params(in);
}

void write_machine_params(std::ostream& os, const MachineParams& m) {
    const auto old_prec = os.precision();
    os << std::setprecision(17);
    os << "flops_peak = " << m.flops_peak << '\n'
       << "eff_fft = " << m.eff_fft << '\n'
       << "b_mem = " << m.b_mem << '\n'
       << "b_net = " << m.b_net << '\n'
       << "p = " << m.p << '\n';
    os.precision(old_prec);
}

}  // namespace qcemu
