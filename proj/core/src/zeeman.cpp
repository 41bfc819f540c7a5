#include "stirap/zeeman.hpp"

#include <array>
#include <cmath>

#include "bloch_engine.hpp"
#include "parallel.hpp"

namespace stirap::zeeman {

namespace {

constexpr double inv_sqrt3 = 0.5773502691896258;

// Clebsch-Gordan branching weights (squared coefficients) for spontaneous
// decay out of the P1/2 sublevels.
struct Branch {
    int from, to;
    double weight;
    bool to_ground;  // scales with gamma_21, else gamma_23
};
constexpr std::array<Branch, 10> branching = {{
    {p_up, s_down, 2.0 / 3.0, true},
    {p_up, s_up, 1.0 / 3.0, true},
    {p_up, d_p32, 1.0 / 2.0, false},
    {p_up, d_p12, 1.0 / 3.0, false},
    {p_up, d_m12, 1.0 / 6.0, false},
    {p_down, s_up, 2.0 / 3.0, true},
    {p_down, s_down, 1.0 / 3.0, true},
    {p_down, d_m32, 1.0 / 2.0, false},
    {p_down, d_m12, 1.0 / 3.0, false},
    {p_down, d_p12, 1.0 / 6.0, false},
}};

class ZeemanGenerator {
public:
    explicit ZeemanGenerator(const ZeemanConfig& cfg) : cfg_(cfg) {
        if (cfg.motion.enabled()) {
            doppler_a_ = -cfg.motion.peak_velocity * units::two_pi / cfg.species.lambda_a;
            doppler_b_ = -cfg.motion.peak_velocity * units::two_pi / cfg.species.lambda_b;
        }
        for (int i = 0; i < dimension; ++i) {
            zeeman_[i] = ZeemanBasis::m_quantum_number(i) *
                         (i <= s_up ? cfg.splitting_s
                                    : (i <= p_up ? cfg.splitting_p : cfg.splitting_d));
        }
    }

    template <class Mat>
    void build(double t, Mat& h) const {
        double delta_a = cfg_.field_a.detuning;
        double delta_b = cfg_.field_b.detuning;
        if (cfg_.motion.enabled()) {
            const double c = std::cos(cfg_.motion.rf_frequency * t + cfg_.motion.phase);
            delta_a += doppler_a_ * c;
            delta_b += doppler_b_ * c;
        }

        h.setZero();
        for (int i = 0; i < dimension; ++i) {
            double d = zeeman_[i];
            if (i == p_down || i == p_up) d += delta_a;
            if (i >= d_m32) d += delta_a - delta_b;
            h(i, i) = d;
        }

        const double wa = 0.5 * cfg_.field_a.pulse.amplitude(t);
        const double wb = 0.5 * cfg_.field_b.pulse.amplitude(t);
        couple(h, s_down, p_up, -wa);                                  // sigma+
        couple(h, s_up, p_down, wa * cfg_.field_a.sigma_minus_ratio);  // sigma-
        couple(h, s_down, p_down, -wa * cfg_.field_a.pi_ratio);        // pi
        couple(h, s_up, p_up, wa * cfg_.field_a.pi_ratio);             // pi
        couple(h, d_p32, p_up, wb);                                    // B sigma-
        couple(h, d_p12, p_down, wb * inv_sqrt3);                      // B sigma-
    }

private:
    template <class Mat>
    static void couple(Mat& h, int i, int j, double w) {
        h(i, j) += w;
        h(j, i) += w;
    }

    const ZeemanConfig& cfg_;
    double doppler_a_ = 0.0, doppler_b_ = 0.0;
    std::array<double, dimension> zeeman_{};
};

detail::DissipationData dissipation(const ZeemanConfig& cfg) {
    detail::DissipationData dis;
    dis.rate.setZero(dimension, dimension);
    Eigen::VectorXd total = Eigen::VectorXd::Zero(dimension);
    if (cfg.decay_enabled) {
        for (const auto& br : branching) {
            const double rate =
                br.weight * (br.to_ground ? cfg.species.gamma_21 : cfg.species.gamma_23);
            dis.channels.push_back({br.from, br.to, rate});
            total[br.from] += rate;
        }
    }
    // Phase bookkeeping: P carries the phase of laser A, D carries A - B,
    // so S-P coherences dephase at gamma_A, P-D at gamma_B, S-D at
    // gamma_A + gamma_B, and same-manifold coherences are unaffected.
    const auto manifold = [](int i) { return i <= s_up ? 0 : (i <= p_up ? 1 : 2); };
    const double ga = cfg.field_a.linewidth, gb = cfg.field_b.linewidth;
    constexpr std::array<double, 3> ca = {0.0, 1.0, 1.0};
    constexpr std::array<double, 3> cb = {0.0, 0.0, -1.0};
    for (int i = 0; i < dimension; ++i) {
        for (int j = 0; j < dimension; ++j) {
            const int mi = manifold(i), mj = manifold(j);
            const double da = ca[mi] - ca[mj], db = cb[mi] - cb[mj];
            dis.rate(i, j) = 0.5 * (total[i] + total[j]) + ga * da * da + gb * db * db;
        }
    }
    return dis;
}

} // namespace

const std::vector<std::string>& ZeemanBasis::labels() {
    static const std::vector<std::string> names = {
        "S-1/2", "S+1/2", "P-1/2", "P+1/2",
        "D-3/2", "D-1/2", "D+1/2", "D+3/2"};
    return names;
}

double ZeemanBasis::m_quantum_number(int index) {
    switch (index) {
        case s_down: case p_down: return -0.5;
        case s_up: case p_up: return 0.5;
        case d_m32: return -1.5;
        case d_m12: return -0.5;
        case d_p12: return 0.5;
        case d_p32: return 1.5;
    }
    throw ConfigError("sublevel index out of range");
}

void validate_config(const ZeemanConfig& cfg) {
    if (cfg.field_a.pulse.width <= 0.0 || cfg.field_b.pulse.width <= 0.0) {
        throw ConfigError("both fields need positive pulse widths");
    }
    if (cfg.field_a.sigma_minus_ratio < 0.0 || cfg.field_a.pi_ratio < 0.0) {
        throw ConfigError("polarization admixture ratios must be non-negative");
    }
    if (cfg.field_b.label != 'B') {
        throw ConfigError("the Stokes field of the Zeeman model is field B");
    }
    if (!(cfg.t_end > cfg.t_start)) {
        throw ConfigError("integration window is empty (t_end <= t_start)");
    }
    if (cfg.motion.enabled() && cfg.motion.rf_frequency <= 0.0) {
        throw ConfigError("micromotion requires a positive trap RF frequency");
    }
}

Eigen::MatrixXcd zeeman_generator(const ZeemanConfig& cfg, double t) {
    validate_config(cfg);
    ZeemanGenerator gen(cfg);
    Eigen::MatrixXcd h(dimension, dimension);
    gen.build(t, h);
    return h;
}

EvolveResult evolve(const ZeemanConfig& cfg, const Eigen::MatrixXcd& rho0,
                    const EvolveOptions& opt) {
    validate_config(cfg);
    if (rho0.rows() != dimension || rho0.cols() != dimension) {
        throw ConfigError("initial density matrix must be 8x8");
    }
    ZeemanGenerator gen(cfg);
    const double h_max =
        std::min(cfg.field_a.pulse.width, cfg.field_b.pulse.width) / 50.0;
    return detail::evolve_fixed<dimension>(gen, dissipation(cfg), rho0,
                                           cfg.t_start, cfg.t_end, opt, h_max,
                                           ZeemanBasis::labels());
}

DetectionResult detection_run(const ZeemanConfig& cfg, int initial_sublevel,
                              const EvolveOptions& opt) {
    if (initial_sublevel != s_down && initial_sublevel != s_up) {
        throw ConfigError("the initial state must be one of the qubit sublevels");
    }
    Eigen::MatrixXcd rho0 = Eigen::MatrixXcd::Zero(dimension, dimension);
    rho0(initial_sublevel, initial_sublevel) = 1.0;
    EvolveOptions local = opt;
    local.samples = 0;
    const EvolveResult res = evolve(cfg, rho0, local);
    const Eigen::MatrixXcd& rho = res.final_state();

    DetectionResult out{};
    for (int i = 0; i < dimension; ++i) {
        const double p = rho(i, i).real();
        if (i <= s_up) {
            out.p_ground += p;
        } else if (i <= p_up) {
            out.p_excited += p;
        } else {
            out.p_shelf += p;
        }
    }
    out.error = (initial_sublevel == s_down) ? 1.0 - out.p_shelf : out.p_shelf;
    return out;
}

std::vector<ProjectionErrorPoint> projection_error_scan(
    const ZeemanConfig& base, const std::vector<double>& sigma_minus_ratios,
    const std::vector<double>& pi_ratios, const EvolveOptions& opt, int jobs) {
    std::vector<ProjectionErrorPoint> points(pi_ratios.size() *
                                             sigma_minus_ratios.size());
    detail::parallel_for_indexed(points.size(), jobs, [&](std::size_t k) {
        const double pi_ratio = pi_ratios[k / sigma_minus_ratios.size()];
        const double sm_ratio = sigma_minus_ratios[k % sigma_minus_ratios.size()];
        ZeemanConfig cfg = base;
        cfg.field_a.pi_ratio = pi_ratio;
        cfg.field_a.sigma_minus_ratio = sm_ratio;
        const double err_down = detection_run(cfg, s_down, opt).error;
        const double err_up = detection_run(cfg, s_up, opt).error;
        points[k] = {pi_ratio, sm_ratio, err_down, err_up,
                     std::max(err_down, err_up)};
    });
    return points;
}

} // namespace stirap::zeeman
