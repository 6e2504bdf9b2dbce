#include "trilevel/dissipation.hpp"

#include <cmath>

#include "trilevel/error.hpp"

namespace trilevel {

void validate(const RateSet& r) {
    for (double x : {r.gamma1, r.gamma2, r.gamma1_deph, r.gamma2_deph, r.gamma3_deph})
        if (!(x >= 0.0) || !std::isfinite(x)) throw PreconditionError("rates must be finite and nonnegative");
}

std::vector<Mat3> lindblad_ops(Configuration c, const RateSet& r) {
    validate(r);
    std::vector<Mat3> ops;
    auto add = [&](double rate, int i, int j) {
        if (rate > 0.0) ops.push_back(sigma(i, j) * Complex(std::sqrt(rate)));
    };
    switch (c) {
        case Configuration::Lambda:
            add(r.gamma1, 1, 3);
            add(r.gamma2, 2, 3);
            add(r.gamma3_deph, 3, 3);
            add(r.gamma2_deph, 2, 2);
            break;
        case Configuration::Xi:
            add(r.gamma1, 1, 3);
            if (r.xi_projector_decay)
                add(r.gamma2, 2, 2);
            else
                add(r.gamma2, 3, 2);
            add(r.gamma3_deph, 3, 3);
            add(r.gamma2_deph, 2, 2);
            break;
        case Configuration::V:
            add(r.gamma1, 3, 1);
            add(r.gamma2, 3, 2);
            add(r.gamma1_deph, 1, 1);
            add(r.gamma2_deph, 2, 2);
            break;
    }
    return ops;
}

Dissipator::Dissipator(std::vector<Mat3> ops) : ops_(std::move(ops)) {
    for (const Mat3& l : ops_) {
        ops_dag_.push_back(dagger(l));
        half_ldl_ += ops_dag_.back() * l * Complex(0.5);
    }
}

Mat3 Dissipator::apply(const Mat3& rho) const {
    Mat3 out = (half_ldl_ * rho + rho * half_ldl_) * Complex(-1.0);
    for (std::size_t k = 0; k < ops_.size(); ++k) out += ops_[k] * rho * ops_dag_[k];
    return out;
}

Mat3 Dissipator::apply_adiabatic(const Mat3& U, const Mat3& R) const {
    if (ops_.empty()) return Mat3{};
    const Mat3 Ud = dagger(U);
    return Ud * apply(U * R * Ud) * U;
}

Mat3 dissipator(const std::vector<Mat3>& ops, const Mat3& rho) { return Dissipator(ops).apply(rho); }

Mat3 adiabatic_dissipator(Configuration c, const RateSet& r, const AdiabaticFrame& f, const Mat3& R) {
    return Dissipator(c, r).apply_adiabatic(f.U, R);
}

DerivedRates derived_rates(Configuration c, const RateSet& r) {
    validate(r);
    DerivedRates d;
    switch (c) {
        case Configuration::Lambda:
            d.Gamma1 = 0.5 * (r.gamma1 + r.gamma2 + r.gamma3_deph);
            d.Gamma2 = d.Gamma1 + 0.5 * r.gamma2_deph;
            d.gamma_c = d.Gamma2 - d.Gamma1;
            d.gamma_total = r.gamma1 + r.gamma2;
            break;
        case Configuration::Xi:
            d.Gamma1 = 0.5 * (r.gamma1 + r.gamma3_deph);
            d.Gamma2 = 0.5 * (r.gamma1 + r.gamma2 + r.gamma2_deph + r.gamma3_deph);
            d.gamma_c = 0.5 * (r.gamma2 + r.gamma2_deph);
            d.gamma_total = r.gamma1;
            break;
        case Configuration::V:
            d.Gamma1 = 0.5 * (r.gamma1 + r.gamma1_deph);
            d.Gamma2 = 0.5 * (r.gamma2 + r.gamma2_deph);
            d.gamma_c = d.Gamma1 + d.Gamma2;
            d.gamma_total = 0.0;  // level 3 is the ground state
            break;
    }
    return d;
}

const char* to_string(Configuration c) {
    switch (c) {
        case Configuration::Lambda: return "lambda";
        case Configuration::Xi: return "xi";
        case Configuration::V: return "v";
    }
    return "?";
}

Configuration configuration_from_string(const std::string& name) {
    if (name == "lambda" || name == "Lambda") return Configuration::Lambda;
    if (name == "xi" || name == "Xi" || name == "sigma") return Configuration::Xi;
    if (name == "v" || name == "V") return Configuration::V;
    throw PreconditionError("unknown configuration: " + name);
}

}  // namespace trilevel
