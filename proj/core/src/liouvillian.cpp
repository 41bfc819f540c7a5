#include "stirap/liouvillian.hpp"

#include <algorithm>
#include <array>
#include <cmath>

#include "bloch_engine.hpp"

namespace stirap {

namespace {

// Rotating-frame phase bookkeeping for the chain 1 -(A)- 2 -(B)- 3 -(C)- 4
// -(D)- 5: each level's diagonal entry is an integer combination of the four
// laser detunings, and the same integer vectors give the dephasing rates.
constexpr std::array<std::array<double, 4>, 5> chain_coeff = {{
    {0, 0, 0, 0},     // level 1
    {1, 0, 0, 0},     // level 2
    {1, -1, 0, 0},    // level 3
    {1, -1, 1, 0},    // level 4
    {1, -1, 1, -1},   // level 5
}};

int field_slot(char label) { return label - 'A'; }

struct GlobalDecay {
    int from, to;
    double IonSpecies::*rate;
};
constexpr std::array<GlobalDecay, 5> dipole_channels = {{
    {2, 1, &IonSpecies::gamma_21},
    {2, 3, &IonSpecies::gamma_23},
    {4, 1, &IonSpecies::gamma_41},
    {4, 3, &IonSpecies::gamma_43},
    {4, 5, &IonSpecies::gamma_45},
}};

// Concrete coherent generator for the chain topologies; build() is the hot
// path of the integrator RHS.
class ChainGenerator {
public:
    explicit ChainGenerator(const SystemConfig& cfg) {
        const auto levels = cfg.levels();
        dim_ = static_cast<int>(levels.size());
        coeff_.setZero(dim_, 4);
        for (int i = 0; i < dim_; ++i) {
            for (int f = 0; f < 4; ++f) {
                coeff_(i, f) = chain_coeff[levels[i] - 1][f];
            }
        }
        base_.fill(0.0);
        doppler_.fill(0.0);
        for (const auto& field : cfg.fields) {
            const int f = field_slot(field.label);
            base_[f] = field.detuning;
            if (cfg.motion.enabled()) {
                doppler_[f] = -cfg.motion.peak_velocity * units::two_pi /
                              cfg.species.wavelength(field.label);
            }
            const auto [lo, hi] = field.transition();
            drives_.push_back({cfg.index_of_level(lo), cfg.index_of_level(hi),
                               field.pulse});
        }
        motion_ = cfg.motion.enabled();
        rf_ = cfg.motion.rf_frequency;
        phase_ = cfg.motion.phase;
    }

    int dim() const { return dim_; }

    template <class Mat>
    void build(double t, Mat& h) const {
        std::array<double, 4> delta = base_;
        if (motion_) {
            const double c = std::cos(rf_ * t + phase_);
            for (int f = 0; f < 4; ++f) delta[f] += doppler_[f] * c;
        }
        h.setZero();
        for (int i = 0; i < dim_; ++i) {
            double d = 0.0;
            for (int f = 0; f < 4; ++f) d += coeff_(i, f) * delta[f];
            h(i, i) = d;
        }
        for (const auto& dr : drives_) {
            const double w = 0.5 * dr.pulse.amplitude(t);
            h(dr.row, dr.col) += w;
            h(dr.col, dr.row) += w;
        }
    }

private:
    struct Drive {
        int row, col;
        GaussianPulse pulse;
    };

    int dim_ = 0;
    Eigen::Matrix<double, Eigen::Dynamic, 4> coeff_;
    std::array<double, 4> base_{}, doppler_{};
    std::vector<Drive> drives_;
    bool motion_ = false;
    double rf_ = 0.0, phase_ = 0.0;
};

double default_max_step(const SystemConfig& cfg) {
    double tau_min = 0.0;
    for (const auto& f : cfg.fields) {
        if (tau_min == 0.0 || f.pulse.width < tau_min) tau_min = f.pulse.width;
    }
    if (tau_min <= 0.0) tau_min = cfg.t_end - cfg.t_start;
    return tau_min / 50.0;
}

} // namespace

std::vector<int> SystemConfig::levels() const {
    switch (topology) {
        case Topology::stage1_lambda: return {1, 2, 3};
        case Topology::stage2_lambda: return {3, 4, 5};
        case Topology::five_level: return {1, 2, 3, 4, 5};
    }
    throw ConfigError("invalid topology");
}

int SystemConfig::index_of_level(int level) const {
    const auto lv = levels();
    const auto it = std::find(lv.begin(), lv.end(), level);
    if (it == lv.end()) {
        throw ConfigError("level " + std::to_string(level) +
                          " is not part of the configured basis");
    }
    return static_cast<int>(it - lv.begin());
}

std::vector<std::string> SystemConfig::level_labels() const {
    std::vector<std::string> out;
    for (int lv : levels()) out.push_back(std::to_string(lv));
    return out;
}

const LaserField* SystemConfig::field(char label) const {
    for (const auto& f : fields) {
        if (f.label == label) return &f;
    }
    return nullptr;
}

void validate_config(const SystemConfig& cfg) {
    std::string allowed;
    switch (cfg.topology) {
        case Topology::stage1_lambda: allowed = "AB"; break;
        case Topology::stage2_lambda: allowed = "CD"; break;
        case Topology::five_level: allowed = "ABCD"; break;
    }
    std::string seen;
    for (const auto& f : cfg.fields) {
        if (allowed.find(f.label) == std::string::npos) {
            throw ConfigError(std::string("field '") + f.label +
                              "' is not driven in this topology");
        }
        if (seen.find(f.label) != std::string::npos) {
            throw ConfigError(std::string("field '") + f.label +
                              "' is configured twice");
        }
        seen += f.label;
        if (f.pulse.width <= 0.0) {
            throw ConfigError(std::string("field '") + f.label +
                              "' needs a positive pulse width");
        }
        if (f.pulse.peak_rabi < 0.0 || f.pulse.residual_floor < 0.0) {
            throw ConfigError(std::string("field '") + f.label +
                              "' has a negative amplitude");
        }
        if (f.linewidth < 0.0) {
            throw ConfigError(std::string("field '") + f.label +
                              "' has a negative linewidth");
        }
    }
    if (!(cfg.t_end > cfg.t_start)) {
        throw ConfigError("integration window is empty (t_end <= t_start)");
    }
    if (cfg.motion.enabled() && cfg.motion.rf_frequency <= 0.0) {
        throw ConfigError("micromotion requires a positive trap RF frequency");
    }
}

DensityMatrix DensityMatrix::pure(const std::vector<std::string>& labels, int index) {
    const int n = static_cast<int>(labels.size());
    DensityMatrix dm{Eigen::MatrixXcd::Zero(n, n), labels};
    dm.rho(index, index) = 1.0;
    return dm;
}

void DensityMatrix::validate(double trace_tol, double herm_tol, double pos_tol) const {
    const double tr = rho.trace().real();
    if (std::abs(tr - 1.0) > trace_tol) {
        throw NumericalError("density matrix trace " + std::to_string(tr) +
                             " deviates from 1 beyond tolerance");
    }
    const double herm = (rho - rho.adjoint()).cwiseAbs().maxCoeff();
    if (herm > herm_tol) {
        throw NumericalError("density matrix is not Hermitian (max deviation " +
                             std::to_string(herm) + ")");
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(0.5 * (rho + rho.adjoint()));
    const double lam_min = es.eigenvalues().minCoeff();
    if (lam_min < -pos_tol) {
        throw NumericalError("density matrix has negative eigenvalue " +
                             std::to_string(lam_min));
    }
}

Eigen::MatrixXcd coherent_generator(const SystemConfig& cfg, double t) {
    validate_config(cfg);
    ChainGenerator gen(cfg);
    Eigen::MatrixXcd h(gen.dim(), gen.dim());
    gen.build(t, h);
    return h;
}

Dissipator dissipator(const SystemConfig& cfg) {
    const auto levels = cfg.levels();
    const int n = static_cast<int>(levels.size());
    Dissipator d;
    d.coherence_decay.setZero(n, n);
    if (!cfg.decay_enabled) return d;

    Eigen::VectorXd total = Eigen::VectorXd::Zero(n);
    for (const auto& ch : dipole_channels) {
        const auto from = std::find(levels.begin(), levels.end(), ch.from);
        const auto to = std::find(levels.begin(), levels.end(), ch.to);
        if (from == levels.end() || to == levels.end()) continue;
        const double rate = cfg.species.*ch.rate;
        const int fi = static_cast<int>(from - levels.begin());
        const int ti = static_cast<int>(to - levels.begin());
        d.channels.push_back({fi, ti, rate});
        total[fi] += rate;
    }
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            d.coherence_decay(i, j) = 0.5 * (total[i] + total[j]);
        }
    }
    return d;
}

Eigen::MatrixXcd Dissipator::apply(const Eigen::MatrixXcd& rho) const {
    Eigen::MatrixXcd out =
        -coherence_decay.cast<std::complex<double>>().cwiseProduct(rho);
    for (const auto& ch : channels) {
        out(ch.to, ch.to) += ch.rate * rho(ch.from, ch.from);
    }
    return out;
}

Dephaser dephaser(const SystemConfig& cfg) {
    const auto levels = cfg.levels();
    const int n = static_cast<int>(levels.size());
    Dephaser d;
    d.rates.setZero(n, n);
    for (const auto& field : cfg.fields) {
        if (field.linewidth <= 0.0) continue;
        const int f = field_slot(field.label);
        for (int i = 0; i < n; ++i) {
            for (int j = 0; j < n; ++j) {
                const double diff = chain_coeff[levels[i] - 1][f] -
                                    chain_coeff[levels[j] - 1][f];
                d.rates(i, j) += field.linewidth * diff * diff;
            }
        }
    }
    return d;
}

Eigen::MatrixXcd Dephaser::apply(const Eigen::MatrixXcd& rho) const {
    return -rates.cast<std::complex<double>>().cwiseProduct(rho);
}

EvolveResult evolve(const SystemConfig& cfg, const Eigen::MatrixXcd& rho0,
                    const EvolveOptions& opt) {
    validate_config(cfg);
    ChainGenerator gen(cfg);
    const int n = gen.dim();
    if (rho0.rows() != n || rho0.cols() != n) {
        throw ConfigError("initial density matrix has dimension " +
                          std::to_string(rho0.rows()) + ", expected " +
                          std::to_string(n));
    }

    const Dissipator diss = dissipator(cfg);
    detail::DissipationData dis;
    dis.channels = diss.channels;
    dis.rate = diss.coherence_decay + dephaser(cfg).rates;

    const double h_max = default_max_step(cfg);
    if (n == 3) {
        return detail::evolve_fixed<3>(gen, dis, rho0, cfg.t_start, cfg.t_end,
                                       opt, h_max, cfg.level_labels());
    }
    return detail::evolve_fixed<5>(gen, dis, rho0, cfg.t_start, cfg.t_end, opt,
                                   h_max, cfg.level_labels());
}

double transfer_efficiency(const SystemConfig& cfg, int initial_level,
                           int target_level, const EvolveOptions& opt) {
    const int i0 = cfg.index_of_level(initial_level);
    const int i1 = cfg.index_of_level(target_level);
    const int n = static_cast<int>(cfg.levels().size());
    Eigen::MatrixXcd rho0 = Eigen::MatrixXcd::Zero(n, n);
    rho0(i0, i0) = 1.0;
    EvolveOptions local = opt;
    local.samples = 0;
    EvolveResult res = evolve(cfg, rho0, local);
    return res.final_state()(i1, i1).real();
}

} // namespace stirap
