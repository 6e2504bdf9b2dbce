#include "trilevel/pulses.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string_view>

#include "trilevel/error.hpp"

namespace trilevel {

EnvelopeValue eval_envelope(const GaussianPulse& p, double t) {
    const double x = (t - p.center) / p.width;
    const double v = p.peak * std::exp(-x * x);
    return {v, -2.0 * x / p.width * v};
}

double PulseSchedule::peak_omega() const {
    return std::visit(
        [](const auto& d) -> double {
            using D = std::decay_t<decltype(d)>;
            if constexpr (std::is_same_v<D, GaussianDrive>)
                return std::max(d.pump.peak, d.stokes.peak);
            else if constexpr (std::is_same_v<D, ConstantDrive>)
                return std::max(d.pump, d.stokes);
            else
                return d.omega;
        },
        drive);
}

namespace {

struct Envelopes {
    EnvelopeValue pump, stokes;
};

Envelopes eval_drive(const Drive& drive, double t) {
    if (const auto* g = std::get_if<GaussianDrive>(&drive)) return {eval_envelope(g->pump, t), eval_envelope(g->stokes, t)};
    if (const auto* c = std::get_if<ConstantDrive>(&drive)) return {{c->pump, 0.0}, {c->stokes, 0.0}};
    const auto& law = std::get<ThetaLawDrive>(drive);
    const double e = std::exp(law.gamma_c * (t - law.t0));
    const double x = std::tan(2.0 * law.theta0) * e;
    if (!std::isfinite(x)) throw NumericalError("theta law: tan 2theta overflow", t);
    const double theta = 0.5 * std::atan(x);
    const double theta_dot = 0.5 * law.gamma_c * x / (1.0 + x * x);
    const double s = std::sin(theta), c = std::cos(theta);
    return {{law.omega * s, law.omega * c * theta_dot}, {law.omega * c, -law.omega * s * theta_dot}};
}

}  // namespace

DriveSample PulseSchedule::sample(double t) const {
    const Envelopes e = eval_drive(drive, t);
    DriveSample s;
    s.t = t;
    s.pump = e.pump.value;
    s.pump_dot = e.pump.derivative;
    s.stokes = e.stokes.value;
    s.stokes_dot = e.stokes.derivative;

    const double fl = floor_omega();
    if (fl > 0.0 && std::hypot(s.pump, s.stokes) < fl) {
        s.pump = 0.0;
        s.pump_dot = 0.0;
        s.stokes = fl;
        s.stokes_dot = 0.0;
        s.floored = true;
    }
    s.omega = std::hypot(s.pump, s.stokes);
    s.omega_dot = s.omega > 0.0 ? (s.pump * s.pump_dot + s.stokes * s.stokes_dot) / s.omega : 0.0;

    if (detuning.kind == DetuningKind::constant) {
        s.detuning = detuning.delta0;
        s.detuning_dot = 0.0;
    } else {
        const double g = std::exp(detuning.gamma1 * (t - detuning.t0));
        s.detuning = detuning.delta0 * s.omega * g;
        s.detuning_dot = detuning.delta0 * g * (s.omega_dot + detuning.gamma1 * s.omega);
    }
    return s;
}

PulseSchedule make_stirap_schedule(double peak_omega, double delta, double horizon, Ordering ordering,
                                   const StirapGeometry& geometry) {
    if (!(horizon > 0.0)) throw PreconditionError("make_stirap_schedule: horizon must be positive");
    if (!(peak_omega > 0.0)) throw PreconditionError("make_stirap_schedule: peak Rabi frequency must be positive");
    if (!(geometry.width_fraction > 0.0)) throw PreconditionError("make_stirap_schedule: width must be positive");

    PulseSchedule s;
    s.horizon = horizon;
    s.ordering = ordering;
    s.detuning = {DetuningKind::constant, delta, 0.0, 0.0};
    if (ordering == Ordering::static_drive) {
        s.drive = ConstantDrive{peak_omega, peak_omega};
        return s;
    }
    const double width = geometry.width_fraction * horizon;
    const double delay = geometry.delay_fraction * width;
    const double early = 0.5 * horizon - delay;
    const double late = 0.5 * horizon + delay;
    GaussianDrive g;
    g.pump = {peak_omega, ordering == Ordering::counterintuitive ? late : early, width};
    g.stokes = {peak_omega, ordering == Ordering::counterintuitive ? early : late, width};
    s.drive = g;
    return s;
}

PulseSchedule theta_law_schedule(double theta0, double gamma_c, double t0, double omega, double horizon) {
    if (!(theta0 > 0.0 && theta0 < std::numbers::pi / 4))
        throw PreconditionError("theta_law_schedule: theta0 must lie in (0, pi/4)");
    if (!(horizon > 0.0)) throw PreconditionError("theta_law_schedule: horizon must be positive");
    if (!(omega >= 0.0)) throw PreconditionError("theta_law_schedule: omega must be nonnegative");
    // The principal branch keeps theta below pi/4; only overflow of the law itself can break it.
    const double worst = std::max(gamma_c * (0.0 - t0), gamma_c * (horizon - t0));
    if (!std::isfinite(std::tan(2.0 * theta0) * std::exp(worst)))
        throw PreconditionError("theta_law_schedule: tan 2theta overflows within the horizon");
    PulseSchedule s;
    s.horizon = horizon;
    s.ordering = Ordering::static_drive;
    s.drive = ThetaLawDrive{theta0, gamma_c, t0, omega};
    return s;
}

double shaped_detuning(const DetuningSchedule& d, const PulseSchedule& s, double t) {
    if (d.kind != DetuningKind::shaped) throw PreconditionError("shaped_detuning: schedule is not shaped");
    return d.delta0 * s.sample(t).omega * std::exp(d.gamma1 * (t - d.t0));
}

PulseSchedule with_shaped_detuning(PulseSchedule s, double delta0, double gamma1, double t0) {
    if (gamma1 < 0.0) throw PreconditionError("shaped detuning requires gamma1 >= 0");
    s.detuning = {DetuningKind::shaped, delta0, gamma1, t0};
    return s;
}

const char* to_string(Ordering o) {
    switch (o) {
        case Ordering::counterintuitive: return "counterintuitive";
        case Ordering::intuitive: return "intuitive";
        case Ordering::static_drive: return "static";
    }
    return "?";
}

Ordering ordering_from_string(const char* name) {
    const std::string_view n(name);
    if (n == "counterintuitive") return Ordering::counterintuitive;
    if (n == "intuitive") return Ordering::intuitive;
    if (n == "static") return Ordering::static_drive;
    throw PreconditionError("unknown pulse ordering: " + std::string(n));
}

}  // namespace trilevel
