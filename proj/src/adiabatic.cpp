#include "trilevel/adiabatic.hpp"

#include <cmath>

#include "trilevel/error.hpp"

namespace trilevel {

MixingAngles mixing_angles(double pump, double stokes, double delta) {
    if (pump == 0.0 && stokes == 0.0) throw PreconditionError("mixing angle theta undefined: both envelopes vanish");
    const double omega = std::hypot(pump, stokes);
    return {std::atan2(pump, stokes), 0.5 * std::atan2(2.0 * omega, delta), omega};
}

MixingAngles mixing_angles(const PulseSchedule& s, double t) {
    const DriveSample d = s.sample(t);
    if (d.omega == 0.0) {
        if (!s.field_free()) throw PreconditionError("mixing angle theta undefined: both envelopes vanish");
        return {0.0, 0.5 * std::atan2(0.0, d.detuning), 0.0};
    }
    return mixing_angles(d.pump, d.stokes, d.detuning);
}

Mat3 hamiltonian(double pump, double stokes, double delta) {
    Mat3 h;
    h(0, 2) = h(2, 0) = pump;
    h(1, 2) = h(2, 1) = stokes;
    h(2, 2) = delta;
    return h;
}

Mat3 hamiltonian(const PulseSchedule& s, double t) {
    const DriveSample d = s.sample(t);
    return hamiltonian(d.pump, d.stokes, d.detuning);
}

std::array<double, 3> quasienergies(double omega, double delta) {
    const double root = std::sqrt(delta * delta + 4.0 * omega * omega);
    double l2 = 0.0, l3 = 0.0;
    if (delta >= 0.0) {
        l3 = 0.5 * (delta + root);
        l2 = l3 > 0.0 ? -omega * omega / l3 : 0.0;
    } else {
        l2 = 0.5 * (delta - root);
        l3 = -omega * omega / l2;
    }
    return {0.0, l2, l3};
}

Mat3 transform_matrix(double theta, double phi) {
    const double st = std::sin(theta), ct = std::cos(theta);
    const double sp = std::sin(phi), cp = std::cos(phi);
    Mat3 u;
    u(0, 0) = ct;
    u(1, 0) = -st;
    u(2, 0) = 0.0;
    u(0, 1) = st * cp;
    u(1, 1) = ct * cp;
    u(2, 1) = -sp;
    u(0, 2) = st * sp;
    u(1, 2) = ct * sp;
    u(2, 2) = cp;
    return u;
}

Mat3 coupling_from_rates(double theta_dot, double phi_dot, double phi) {
    const double a = theta_dot * std::cos(phi);
    const double b = theta_dot * std::sin(phi);
    Mat3 f;
    f(0, 1) = a;
    f(1, 0) = -a;
    f(0, 2) = b;
    f(2, 0) = -b;
    f(1, 2) = phi_dot;
    f(2, 1) = -phi_dot;
    return f;
}

AdiabaticFrame frame(const DriveSample& d, bool field_free) {
    AdiabaticFrame f;
    f.t = d.t;
    f.floored = d.floored;
    if (d.omega == 0.0 && !field_free)
        throw PreconditionError("adiabatic frame undefined: both envelopes vanish");
    f.theta = d.omega == 0.0 ? 0.0 : std::atan2(d.pump, d.stokes);
    f.phi = 0.5 * std::atan2(2.0 * d.omega, d.detuning);
    f.omega = d.omega;
    f.lambda = quasienergies(d.omega, d.detuning);
    const double w2 = d.omega * d.omega;
    f.theta_dot = w2 > 0.0 ? (d.pump_dot * d.stokes - d.pump * d.stokes_dot) / w2 : 0.0;
    const double den = d.detuning * d.detuning + 4.0 * w2;
    f.phi_dot = den > 0.0 ? (d.omega_dot * d.detuning - d.omega * d.detuning_dot) / den : 0.0;
    f.U = transform_matrix(f.theta, f.phi);
    f.F = coupling_from_rates(f.theta_dot, f.phi_dot, f.phi);
    return f;
}

AdiabaticFrame frame(const PulseSchedule& s, double t) { return frame(s.sample(t), s.field_free()); }

Mat3 coupling_matrix(const PulseSchedule& s, double t) { return frame(s, t).F; }

Mat3 to_adiabatic(const AdiabaticFrame& f, const Mat3& rho) { return dagger(f.U) * rho * f.U; }

Mat3 to_bare(const AdiabaticFrame& f, const Mat3& r) { return f.U * r * dagger(f.U); }

}  // namespace trilevel
