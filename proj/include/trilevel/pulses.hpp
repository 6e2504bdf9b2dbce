#pragma once

#include <variant>

namespace trilevel {

struct EnvelopeValue {
    double value;
    double derivative;
};

struct GaussianPulse {
    double peak = 0.0;
    double center = 0.5;
    double width = 0.1;
};

// peak * exp(-(t - center)^2 / width^2) and its exact derivative.
EnvelopeValue eval_envelope(const GaussianPulse& p, double t);

enum class Ordering { counterintuitive, intuitive, static_drive };

enum class DetuningKind { constant, shaped };

// constant: Delta = delta0. shaped: Delta = delta0 * Omega(t) * exp(gamma1 (t - t0)).
struct DetuningSchedule {
    DetuningKind kind = DetuningKind::constant;
    double delta0 = 0.0;
    double gamma1 = 0.0;
    double t0 = 0.0;
};

struct GaussianDrive {
    GaussianPulse pump;
    GaussianPulse stokes;
};

struct ConstantDrive {
    double pump = 0.0;
    double stokes = 0.0;
};

// Constant Omega with tan 2theta = tan(2 theta0) exp(gamma_c (t - t0)).
struct ThetaLawDrive {
    double theta0 = 0.0;
    double gamma_c = 0.0;
    double t0 = 0.0;
    double omega = 0.0;
};

using Drive = std::variant<GaussianDrive, ConstantDrive, ThetaLawDrive>;

// Everything the frame needs at one instant. When both envelopes underflow for a
// nonzero-peak drive, the Stokes envelope is replaced by floor_omega and `floored` is set.
struct DriveSample {
    double t = 0.0;
    double pump = 0.0, pump_dot = 0.0;
    double stokes = 0.0, stokes_dot = 0.0;
    double omega = 0.0, omega_dot = 0.0;
    double detuning = 0.0, detuning_dot = 0.0;
    bool floored = false;
};

struct PulseSchedule {
    Drive drive = ConstantDrive{};
    DetuningSchedule detuning{};
    double horizon = 1.0;
    Ordering ordering = Ordering::static_drive;

    double peak_omega() const;
    double floor_omega() const { return 1e-9 * peak_omega(); }
    // True when the drive is identically zero; the frame then reduces to the bare labelling.
    bool field_free() const { return peak_omega() == 0.0; }

    DriveSample sample(double t) const;
};

struct StirapGeometry {
    double width_fraction = 0.69;  // Gaussian width / T
    double delay_fraction = 0.65;  // half centre separation / width
};

PulseSchedule make_stirap_schedule(double peak_omega, double delta, double horizon, Ordering ordering,
                                   const StirapGeometry& geometry = {});

PulseSchedule theta_law_schedule(double theta0, double gamma_c, double t0, double omega, double horizon);

double shaped_detuning(const DetuningSchedule& d, const PulseSchedule& s, double t);

// Replaces the detuning of `s` by the shaped law.
PulseSchedule with_shaped_detuning(PulseSchedule s, double delta0, double gamma1, double t0);

const char* to_string(Ordering o);
Ordering ordering_from_string(const char* name);

}  // namespace trilevel
