#pragma once

#include <array>
#include <string>
#include <vector>

#include "trilevel/dissipation.hpp"
#include "trilevel/evolution.hpp"
#include "trilevel/matops.hpp"
#include "trilevel/pulses.hpp"

namespace trilevel {

double purity(const Mat3& rho);

std::vector<std::array<double, 3>> adiabatic_populations(const Trajectory& traj);

enum class Quadrature {
    dark_R11,
    dark_R22,
    dark_R21,
    dark_R31,
    dark_R32,
    b_R11,
    b_R22,
    b_R12,
    b_R31,
    b_R32,
    third_R33,
};

const char* to_string(Quadrature q);
// Adiabatic-basis element (row, column), 0-based, that a quadrature approximates.
std::array<std::size_t, 2> element_of(Quadrature q);

struct QuadratureEstimate {
    Quadrature which{};
    std::vector<double> times;
    std::vector<Complex> values;
};

struct QuadratureOptions {
    double rel_tol = 1e-10;
    double abs_tol = 1e-13;
    double min_points_per_period = 20.0;
};

// First-order perturbative solutions started from |lambda1> (dark_*), |lambda2> (b_*) or |lambda3>
// (third_R33). Off-diagonal elements carry exp(-i int_{t'}^{t} (lambda_i - lambda_j)). Throws
// PreconditionError when the grid has fewer than 20 points per period of lambda3 - lambda2.
QuadratureEstimate quadrature_solution(Quadrature which, const PulseSchedule& s, const DerivedRates& rates,
                                       const std::vector<double>& grid, const QuadratureOptions& opt = {});

// max_t |quadrature - numeric| on the trajectory's own sample grid.
double compare_analytic_numeric(Quadrature which, const Trajectory& traj, const PulseSchedule& s,
                                const DerivedRates& rates);

struct StabilityThresholds {
    double much_less = 0.1;     // x << 1  <=>  x < much_less
    double much_greater = 10.0; // x >> 1  <=>  x > much_greater
};

struct StabilityReport {
    double gcT = 0.0;                // gamma_c T
    double adiab1 = 0.0;             // T sqrt(Delta^2 + 4 Omega^2)
    double adiab2 = 0.0;             // Omega^2 T / Delta
    double gamma1_over_delta = 0.0;  // Gamma1 / Delta
    bool gcT_ok = false;
    bool adiab1_ok = false;
    bool adiab2_ok = false;
    bool gamma1_ok = false;
    bool delta_zero = false;  // adiab2 and gamma1_over_delta are infinite; verdicts use the reciprocals
    StabilityThresholds thresholds;

    bool dark_stable() const { return gcT_ok && adiab1_ok && adiab2_ok; }
    bool b_stable() const { return dark_stable() && gamma1_ok; }
};

StabilityReport stability_metrics(double omega, double delta, double horizon, double gamma_c, double Gamma1,
                                  const StabilityThresholds& th = {});
// Omega and Delta are taken where Omega(t) peaks on [0, T].
StabilityReport stability_report(Configuration c, const RateSet& r, const PulseSchedule& s,
                                 const StabilityThresholds& th = {});

enum class HadamardTarget { lambda1_limit, lambda2_limit };

struct FidelitySeries {
    std::vector<double> times;
    std::vector<double> fidelity;
    double crossing_time = -1.0;  // first time fidelity < 0.99, linearly interpolated; -1 if never
};

// <psi|rho|psi> with psi = (|1> -+ |2>)/sqrt 2. Requires theta = pi/4 throughout.
FidelitySeries hadamard_fidelity(const Trajectory& traj, HadamardTarget target);

// Least-squares slope of -ln|y| against t; the exponential decay rate of y.
double fit_decay_rate(const std::vector<double>& t, const std::vector<double>& y);

}  // namespace trilevel
