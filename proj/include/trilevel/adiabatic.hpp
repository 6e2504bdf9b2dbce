#pragma once

#include <array>

#include "trilevel/matops.hpp"
#include "trilevel/pulses.hpp"

namespace trilevel {

struct MixingAngles {
    double theta;  // tan theta = pump / stokes, in [0, pi/2]
    double phi;    // tan 2phi = 2 Omega / Delta, 2phi in [0, pi]
    double omega;
};

// Throws PreconditionError when both envelopes vanish (theta undefined).
MixingAngles mixing_angles(double pump, double stokes, double delta);
// Schedule form: floored samples are fine; a field-free schedule takes theta = 0.
MixingAngles mixing_angles(const PulseSchedule& s, double t);

// H = pump (s13 + s31) + stokes (s23 + s32) + delta s33.
Mat3 hamiltonian(double pump, double stokes, double delta);
Mat3 hamiltonian(const PulseSchedule& s, double t);

// (lambda1, lambda2, lambda3) = (0, (D - sqrt(D^2+4W^2))/2, (D + sqrt(D^2+4W^2))/2), cancellation-free.
std::array<double, 3> quasienergies(double omega, double delta);

// Columns |lambda1>, |lambda2>, |lambda3>, unsorted: lambda1 = 0 is the dark state.
Mat3 transform_matrix(double theta, double phi);

// F = U^dagger dU/dt from the angle rates.
Mat3 coupling_from_rates(double theta_dot, double phi_dot, double phi);

struct AdiabaticFrame {
    double t = 0.0;
    std::array<double, 3> lambda{};
    double theta = 0.0, phi = 0.0, omega = 0.0;
    double theta_dot = 0.0, phi_dot = 0.0;
    Mat3 U;
    Mat3 F;
    bool floored = false;
};

AdiabaticFrame frame(const DriveSample& d, bool field_free = false);
AdiabaticFrame frame(const PulseSchedule& s, double t);
Mat3 coupling_matrix(const PulseSchedule& s, double t);

// Basis changes R = U^dagger rho U and back.
Mat3 to_adiabatic(const AdiabaticFrame& f, const Mat3& rho);
Mat3 to_bare(const AdiabaticFrame& f, const Mat3& r);

}  // namespace trilevel
