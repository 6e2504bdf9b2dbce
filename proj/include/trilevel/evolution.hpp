#pragma once

#include <array>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "trilevel/adiabatic.hpp"
#include "trilevel/dissipation.hpp"
#include "trilevel/matops.hpp"
#include "trilevel/pulses.hpp"

namespace trilevel {

enum class Method { adaptive_rk, fixed_rk4, expm_oracle };

struct PropagatorSettings {
    Method method = Method::adaptive_rk;
    double rel_tol = 1e-9;
    double abs_tol = 1e-12;
    double max_step = std::numeric_limits<double>::infinity();
    std::size_t n_steps = 4000;  // fixed_rk4 steps or expm_oracle slices
    std::size_t samples = 1000;  // uniform output points on [0, T], endpoints included
};

void validate(const PropagatorSettings& s);
const char* to_string(Method m);
Method method_from_string(const std::string& name);

namespace tol {
inline double trace = 1e-8;
inline double rho_hermitian = 1e-10;
inline double positivity = 1e-8;
inline double purity = 1e-10;
// A breach larger than this multiple of the tolerance aborts the propagation.
inline double breach_factor = 10.0;
}  // namespace tol

struct Sample {
    double t = 0.0;
    Mat3 rho;  // bare basis
    Mat3 R;    // adiabatic basis
    double purity = 1.0;
    std::array<double, 3> bare_populations{};
    std::array<double, 3> adiabatic_populations{};
    double theta = 0.0, phi = 0.0;
    std::array<double, 3> lambda{};
    double pump = 0.0, stokes = 0.0, detuning = 0.0;
    bool floored = false;
};

// Worst observed values over all samples.
struct InvariantReport {
    double max_trace_error = 0.0;
    double max_hermiticity_defect = 0.0;
    double min_eigenvalue = 1.0;
    double min_purity = 1.0;
    double max_purity = 0.0;

    bool within(double factor = 1.0) const;
};

struct Trajectory {
    std::vector<Sample> samples;
    InvariantReport invariants;
    std::size_t steps = 0;
    std::size_t rhs_calls = 0;

    const Sample& front() const { return samples.front(); }
    const Sample& back() const { return samples.back(); }
    std::size_t size() const { return samples.size(); }
};

std::vector<double> sample_times(double horizon, std::size_t samples);

// Throws PreconditionError unless rho is Hermitian, unit trace and positive semidefinite.
void check_density_matrix(const Mat3& rho, const char* who);

// Dispatches on settings.method; expm_oracle uses settings.n_steps slices.
Trajectory propagate_bare(Configuration c, const RateSet& r, const PulseSchedule& s, const Mat3& rho0,
                          const PropagatorSettings& settings = {});

// Integrates the adiabatic-basis equation. R0 is given in the frame at t = 0.
Trajectory propagate_adiabatic(Configuration c, const RateSet& r, const PulseSchedule& s, const Mat3& R0,
                               const PropagatorSettings& settings = {});

// Piecewise-constant Liouvillian propagator, generator sampled at each sub-interval midpoint.
Trajectory propagate_expm_oracle(Configuration c, const RateSet& r, const PulseSchedule& s, const Mat3& rho0,
                                 std::size_t n_slices, std::size_t samples = 1000);

// R_ij(t) = R_ij(0) exp(-i (lambda_i - lambda_j) t)
Mat3 closed_system_solution(const AdiabaticFrame& frame0, const Mat3& R0, double t);

// Fills the diagnostic fields of a sample from rho and the frame.
Sample make_sample(const PulseSchedule& s, double t, const Mat3& rho, const Mat3* R = nullptr);

// Packing of a Hermitian 3x3 into 9 reals: diagonal, then Re/Im of (1,2), (1,3), (2,3).
std::array<double, 9> pack(const Mat3& m);
Mat3 unpack(const std::array<double, 9>& v);

}  // namespace trilevel
