#include "trilevel/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "trilevel/adiabatic.hpp"
#include "trilevel/error.hpp"
#include "trilevel/ode.hpp"

namespace trilevel {

double purity(const Mat3& rho) {
    double p = 0.0;
    for (std::size_t i = 0; i < 3; ++i)
        for (std::size_t j = 0; j < 3; ++j) p += (rho(i, j) * rho(j, i)).real();
    return p;
}

std::vector<std::array<double, 3>> adiabatic_populations(const Trajectory& traj) {
    std::vector<std::array<double, 3>> out;
    out.reserve(traj.size());
    for (const Sample& s : traj.samples) out.push_back(s.adiabatic_populations);
    return out;
}

const char* to_string(Quadrature q) {
    switch (q) {
        case Quadrature::dark_R11: return "dark_R11";
        case Quadrature::dark_R22: return "dark_R22";
        case Quadrature::dark_R21: return "dark_R21";
        case Quadrature::dark_R31: return "dark_R31";
        case Quadrature::dark_R32: return "dark_R32";
        case Quadrature::b_R11: return "b_R11";
        case Quadrature::b_R22: return "b_R22";
        case Quadrature::b_R12: return "b_R12";
        case Quadrature::b_R31: return "b_R31";
        case Quadrature::b_R32: return "b_R32";
        case Quadrature::third_R33: return "third_R33";
    }
    return "?";
}

std::array<std::size_t, 2> element_of(Quadrature q) {
    switch (q) {
        case Quadrature::dark_R11: return {0, 0};
        case Quadrature::dark_R22: return {1, 1};
        case Quadrature::dark_R21: return {1, 0};
        case Quadrature::dark_R31: return {2, 0};
        case Quadrature::dark_R32: return {2, 1};
        case Quadrature::b_R11: return {0, 0};
        case Quadrature::b_R22: return {1, 1};
        case Quadrature::b_R12: return {0, 1};
        case Quadrature::b_R31: return {2, 0};
        case Quadrature::b_R32: return {2, 1};
        case Quadrature::third_R33: return {2, 2};
    }
    return {0, 0};
}

namespace {

enum class Kind { population_gain, population_loss, coherence, conjugate_coherence, linear_decay };

struct Integrand {
    Kind kind;
    std::size_t i = 0, j = 0;  // phase uses lambda_i - lambda_j
    double (*source)(const AdiabaticFrame&, const DerivedRates&) = nullptr;
};

double sin2_2theta(const AdiabaticFrame& f) {
    const double s = std::sin(2.0 * f.theta);
    return s * s;
}

// Sources follow from the adiabatic-basis equation with F = U^dagger dU/dt.
Integrand integrand(Quadrature q) {
    switch (q) {
        case Quadrature::dark_R11:
        case Quadrature::b_R22:
            return {Kind::population_loss, 0, 0,
                    [](const AdiabaticFrame& f, const DerivedRates& r) { return 0.5 * r.gamma_c * sin2_2theta(f); }};
        case Quadrature::b_R11:
            return {Kind::population_gain, 0, 0,
                    [](const AdiabaticFrame& f, const DerivedRates& r) { return 0.5 * r.gamma_c * sin2_2theta(f); }};
        case Quadrature::dark_R22:
            return {Kind::population_gain, 0, 0, [](const AdiabaticFrame& f, const DerivedRates& r) {
                        const double c = std::cos(f.phi);
                        return 0.5 * r.gamma_c * sin2_2theta(f) * c * c;
                    }};
        case Quadrature::dark_R21:
            return {Kind::coherence, 1, 0, [](const AdiabaticFrame& f, const DerivedRates& r) {
                        return (0.25 * r.gamma_c * std::sin(4.0 * f.theta) + f.theta_dot) * std::cos(f.phi);
                    }};
        case Quadrature::dark_R31:
            return {Kind::coherence, 2, 0, [](const AdiabaticFrame& f, const DerivedRates& r) {
                        return (0.25 * r.gamma_c * std::sin(4.0 * f.theta) + f.theta_dot) * std::sin(f.phi);
                    }};
        case Quadrature::dark_R32:
            return {Kind::coherence, 2, 1, [](const AdiabaticFrame& f, const DerivedRates& r) {
                        return 0.25 * r.gamma_c * sin2_2theta(f) * std::sin(2.0 * f.phi);
                    }};
        case Quadrature::b_R12:
            // Integrated as R21 and conjugated.
            return {Kind::conjugate_coherence, 1, 0, [](const AdiabaticFrame& f, const DerivedRates& r) {
                        return -(0.25 * r.gamma_c * std::sin(4.0 * f.theta) + f.theta_dot) * std::cos(f.phi);
                    }};
        case Quadrature::b_R31:
            return {Kind::coherence, 2, 0, [](const AdiabaticFrame& f, const DerivedRates& r) {
                        const double s = std::sin(f.theta), c = std::cos(f.theta);
                        return r.gamma_c * f.phi * s * s * c * c;
                    }};
        case Quadrature::b_R32:
            return {Kind::coherence, 2, 1, [](const AdiabaticFrame& f, const DerivedRates& r) {
                        const double c = std::cos(f.theta);
                        return r.Gamma1 * f.phi + r.gamma_c * f.phi * c * c * c * c + f.phi_dot;
                    }};
        case Quadrature::third_R33:
            return {Kind::linear_decay, 0, 0, nullptr};
    }
    throw PreconditionError("unknown quadrature");
}

void check_grid(const PulseSchedule& s, const std::vector<double>& grid, double points_per_period) {
    if (grid.size() < 2) throw PreconditionError("quadrature grid needs at least two points");
    double prev_gap = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k) {
        const DriveSample d = s.sample(grid[k]);
        const double gap = std::sqrt(d.detuning * d.detuning + 4.0 * d.omega * d.omega);  // lambda3 - lambda2
        if (k > 0) {
            const double dt = grid[k] - grid[k - 1];
            if (!(dt > 0.0)) throw PreconditionError("quadrature grid must be strictly increasing");
            const double period = 2.0 * std::numbers::pi / std::max(gap, prev_gap);
            if (dt * points_per_period > period * (1.0 + 1e-9))
                throw PreconditionError("quadrature grid under-resolves the lambda3 - lambda2 phase at t = " +
                                        std::to_string(grid[k]));
        }
        prev_gap = gap;
    }
}

}  // namespace

QuadratureEstimate quadrature_solution(Quadrature which, const PulseSchedule& s, const DerivedRates& rates,
                                       const std::vector<double>& grid, const QuadratureOptions& opt) {
    check_grid(s, grid, opt.min_points_per_period);
    QuadratureEstimate est;
    est.which = which;
    est.times = grid;
    est.values.reserve(grid.size());
    const Integrand in = integrand(which);

    if (in.kind == Kind::linear_decay) {
        for (double t : grid) est.values.emplace_back(1.0 - rates.gamma_total * (t - grid.front()), 0.0);
        return est;
    }

    const bool free = s.field_free();
    // y = [psi, Re I, Im I, P] with psi = int (lambda_i - lambda_j), I = int src e^{i psi}, P = int src.
    auto rhs = [&](double t, const ode::State<4>& y) {
        const AdiabaticFrame f = frame(s.sample(t), free);
        const double src = in.source(f, rates);
        ode::State<4> d{};
        d[0] = f.lambda[in.i] - f.lambda[in.j];
        d[1] = src * std::cos(y[0]);
        d[2] = src * std::sin(y[0]);
        d[3] = src;
        return d;
    };
    auto obs = [&](double, const ode::State<4>& y) {
        switch (in.kind) {
            case Kind::population_gain: est.values.emplace_back(y[3], 0.0); break;
            case Kind::population_loss: est.values.emplace_back(1.0 - y[3], 0.0); break;
            case Kind::coherence: est.values.push_back(std::polar(1.0, -y[0]) * Complex(y[1], y[2])); break;
            case Kind::conjugate_coherence:
                est.values.push_back(std::conj(std::polar(1.0, -y[0]) * Complex(y[1], y[2])));
                break;
            case Kind::linear_decay: break;
        }
    };
    ode::Options o;
    o.rel_tol = opt.rel_tol;
    o.abs_tol = opt.abs_tol;
    const ode::State<4> cap{1.0, std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
                            std::numeric_limits<double>::infinity()};
    ode::dopri5<4>(rhs, grid.front(), ode::State<4>{}, grid, o, obs, &cap);
    return est;
}

double compare_analytic_numeric(Quadrature which, const Trajectory& traj, const PulseSchedule& s,
                                const DerivedRates& rates) {
    std::vector<double> grid;
    grid.reserve(traj.size());
    for (const Sample& x : traj.samples) grid.push_back(x.t);
    const QuadratureEstimate est = quadrature_solution(which, s, rates, grid);
    const auto [i, j] = element_of(which);
    double worst = 0.0;
    for (std::size_t k = 0; k < grid.size(); ++k)
        worst = std::max(worst, std::abs(est.values[k] - traj.samples[k].R(i, j)));
    return worst;
}

StabilityReport stability_metrics(double omega, double delta, double horizon, double gamma_c, double Gamma1,
                                  const StabilityThresholds& th) {
    StabilityReport r;
    r.thresholds = th;
    r.gcT = gamma_c * horizon;
    r.adiab1 = horizon * std::sqrt(delta * delta + 4.0 * omega * omega);
    r.gcT_ok = r.gcT < th.much_less;
    r.adiab1_ok = r.adiab1 > th.much_greater;
    if (delta == 0.0) {
        r.delta_zero = true;
        r.adiab2 = std::numeric_limits<double>::infinity();
        r.gamma1_over_delta = Gamma1 == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
        // Reciprocals: Delta / (Omega^2 T) = 0 passes "<< 1"; Delta / Gamma1 = 0 fails ">> 1".
        r.adiab2_ok = true;
        r.gamma1_ok = Gamma1 == 0.0;
    } else {
        r.adiab2 = omega * omega * horizon / std::abs(delta);
        r.gamma1_over_delta = Gamma1 / std::abs(delta);
        r.adiab2_ok = r.adiab2 > th.much_greater;
        r.gamma1_ok = r.gamma1_over_delta < th.much_less;
    }
    return r;
}

StabilityReport stability_report(Configuration c, const RateSet& r, const PulseSchedule& s,
                                 const StabilityThresholds& th) {
    const DerivedRates d = derived_rates(c, r);
    constexpr int n = 4000;
    DriveSample best = s.sample(0.0);
    for (int k = 1; k <= n; ++k) {
        const DriveSample x = s.sample(s.horizon * k / n);
        if (x.omega > best.omega) best = x;
    }
    return stability_metrics(best.omega, best.detuning, s.horizon, d.gamma_c, d.Gamma1, th);
}

FidelitySeries hadamard_fidelity(const Trajectory& traj, HadamardTarget target) {
    const double sign = target == HadamardTarget::lambda1_limit ? -1.0 : 1.0;
    FidelitySeries out;
    for (const Sample& s : traj.samples) {
        if (std::abs(s.theta - std::numbers::pi / 4) > 1e-9)
            throw PreconditionError("hadamard_fidelity: schedule must hold theta = pi/4");
        const double f = 0.5 * (s.rho(0, 0).real() + s.rho(1, 1).real()) + sign * s.rho(0, 1).real();
        if (out.crossing_time < 0.0 && f < 0.99 && !out.fidelity.empty()) {
            const double f0 = out.fidelity.back(), t0 = out.times.back();
            out.crossing_time = f0 == f ? s.t : t0 + (f0 - 0.99) / (f0 - f) * (s.t - t0);
        }
        out.times.push_back(s.t);
        out.fidelity.push_back(f);
    }
    return out;
}

double fit_decay_rate(const std::vector<double>& t, const std::vector<double>& y) {
    if (t.size() != y.size() || t.size() < 2) throw PreconditionError("fit_decay_rate: need matching series of length >= 2");
    double st = 0.0, sy = 0.0, stt = 0.0, sty = 0.0;
    const double n = static_cast<double>(t.size());
    for (std::size_t k = 0; k < t.size(); ++k) {
        if (!(std::abs(y[k]) > 0.0)) throw PreconditionError("fit_decay_rate: series touches zero");
        const double ly = std::log(std::abs(y[k]));
        st += t[k];
        sy += ly;
        stt += t[k] * t[k];
        sty += t[k] * ly;
    }
    return -(n * sty - st * sy) / (n * stt - st * st);
}

}  // namespace trilevel
