#pragma once

#include <string>
#include <vector>

#include "trilevel/adiabatic.hpp"
#include "trilevel/matops.hpp"

namespace trilevel {

enum class Configuration { Lambda, Xi, V };

// Level conventions (1-based):
//   Lambda: 1, 2 ground, 3 excited. gamma1: 3->1, gamma2: 3->2; dephasing of levels 2 and 3.
//   Xi:     1 ground, 3 middle, 2 top. gamma1: 3->1, gamma2: 2->3; dephasing of levels 2 and 3.
//   V:      3 ground, 1, 2 excited. gamma1: 1->3, gamma2: 2->3; dephasing of levels 1 and 2.
// Dephasing rates not listed for a configuration are ignored.
struct RateSet {
    double gamma1 = 0.0;
    double gamma2 = 0.0;
    double gamma1_deph = 0.0;
    double gamma2_deph = 0.0;
    double gamma3_deph = 0.0;
    // Xi only: use the projector sqrt(gamma2) s22 instead of the 2->3 lowering operator.
    bool xi_projector_decay = false;
};

struct DerivedRates {
    double Gamma1 = 0.0;      // 3-1 coherence decay
    double Gamma2 = 0.0;      // 3-2 coherence decay
    double gamma_c = 0.0;     // 1-2 coherence decay
    double gamma_total = 0.0; // population decay rate of level 3
};

void validate(const RateSet& r);

// Jump operators with zero rate are dropped, so an all-zero set yields a closed system.
std::vector<Mat3> lindblad_ops(Configuration c, const RateSet& r);

// sum_k L rho L^dagger - 1/2 {L^dagger L, rho}
Mat3 dissipator(const std::vector<Mat3>& ops, const Mat3& rho);

// Operators with L^dagger L cached; the form used inside integrator loops.
class Dissipator {
public:
    Dissipator() = default;
    explicit Dissipator(std::vector<Mat3> ops);
    Dissipator(Configuration c, const RateSet& r) : Dissipator(lindblad_ops(c, r)) {}

    Mat3 apply(const Mat3& rho) const;
    // U^dagger D(U R U^dagger) U
    Mat3 apply_adiabatic(const Mat3& U, const Mat3& R) const;
    const std::vector<Mat3>& ops() const { return ops_; }
    bool empty() const { return ops_.empty(); }

private:
    std::vector<Mat3> ops_;
    std::vector<Mat3> ops_dag_;
    Mat3 half_ldl_;
};

Mat3 adiabatic_dissipator(Configuration c, const RateSet& r, const AdiabaticFrame& f, const Mat3& R);

DerivedRates derived_rates(Configuration c, const RateSet& r);

const char* to_string(Configuration c);
Configuration configuration_from_string(const std::string& name);

}  // namespace trilevel
