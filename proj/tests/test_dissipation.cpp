#include <doctest.h>

#include <cmath>
#include <random>

#include "trilevel/adiabatic.hpp"
#include "trilevel/dissipation.hpp"
#include "trilevel/error.hpp"

using namespace trilevel;

namespace {

Mat3 random_density(std::mt19937& rng) {
    std::normal_distribution<double> n(0.0, 1.0);
    Mat3 a;
    for (auto& x : a.a) x = {n(rng), n(rng)};
    Mat3 rho = a * dagger(a);
    return rho * Complex(1.0 / trace(rho).real());
}

RateSet all_rates() {
    RateSet r;
    r.gamma1 = 0.7;
    r.gamma2 = 0.3;
    r.gamma1_deph = 0.11;
    r.gamma2_deph = 0.05;
    r.gamma3_deph = 0.2;
    return r;
}

}  // namespace

TEST_CASE("operator lists") {
    RateSet r;
    r.gamma1 = 1.0;
    const auto lam = lindblad_ops(Configuration::Lambda, r);
    REQUIRE(lam.size() == 1);
    CHECK(max_abs(lam[0] - sigma(1, 3)) == 0.0);

    CHECK(lindblad_ops(Configuration::Xi, RateSet{}).empty());
    CHECK(lindblad_ops(Configuration::V, RateSet{}).empty());

    RateSet v;
    v.gamma1 = 4.0;
    const auto vo = lindblad_ops(Configuration::V, v);
    REQUIRE(vo.size() == 1);
    CHECK(max_abs(vo[0] - sigma(3, 1) * Complex(2.0)) == 0.0);

    RateSet xi;
    xi.gamma2 = 9.0;
    CHECK(max_abs(lindblad_ops(Configuration::Xi, xi)[0] - sigma(3, 2) * Complex(3.0)) == 0.0);
    xi.xi_projector_decay = true;
    CHECK(max_abs(lindblad_ops(Configuration::Xi, xi)[0] - sigma(2, 2) * Complex(3.0)) == 0.0);

    RateSet bad;
    bad.gamma2_deph = -0.1;
    CHECK_THROWS_AS(lindblad_ops(Configuration::Lambda, bad), PreconditionError);
    CHECK_THROWS_AS(derived_rates(Configuration::V, bad), PreconditionError);
}

TEST_CASE("dissipator examples") {
    RateSet r;
    r.gamma2_deph = 0.4;
    r.gamma3_deph = 0.9;
    const Mat3 mixed = Mat3::identity() * Complex(1.0 / 3.0);
    CHECK(max_abs(dissipator(lindblad_ops(Configuration::Lambda, r), mixed)) < 1e-16);

    RateSet l;
    l.gamma1 = 0.3;
    l.gamma2 = 0.8;
    const Mat3 expected = sigma(1, 1) * Complex(0.3) + sigma(2, 2) * Complex(0.8) - sigma(3, 3) * Complex(1.1);
    CHECK(max_abs(dissipator(lindblad_ops(Configuration::Lambda, l), sigma(3, 3)) - expected) < 1e-15);
}

TEST_CASE("dissipator preserves trace and Hermiticity") {
    std::mt19937 rng(31);
    for (Configuration c : {Configuration::Lambda, Configuration::Xi, Configuration::V}) {
        const Dissipator d(c, all_rates());
        for (int k = 0; k < 100; ++k) {
            const Mat3 out = d.apply(random_density(rng));
            CHECK(std::abs(trace(out)) < 1e-12);
            CHECK(hermiticity_defect(out) < 1e-12);
        }
    }
}

TEST_CASE("adiabatic dissipator is the transformed bare dissipator") {
    std::mt19937 rng(37);
    std::uniform_real_distribution<double> ang(0.0, 1.5);
    for (Configuration c : {Configuration::Lambda, Configuration::Xi, Configuration::V}) {
        const auto ops = lindblad_ops(c, all_rates());
        for (int k = 0; k < 50; ++k) {
            AdiabaticFrame f;
            f.U = transform_matrix(ang(rng), ang(rng));
            const Mat3 R = random_density(rng);
            const Mat3 direct = dagger(f.U) * dissipator(ops, f.U * R * dagger(f.U)) * f.U;
            CHECK(max_abs(adiabatic_dissipator(c, all_rates(), f, R) - direct) < 1e-10);
        }
        AdiabaticFrame id;
        id.U = Mat3::identity();
        const Mat3 R = random_density(rng);
        CHECK(max_abs(adiabatic_dissipator(c, all_rates(), id, R) - dissipator(ops, R)) < 1e-14);
    }
}

TEST_CASE("the dark state is immune to upper-level relaxation") {
    RateSet r;
    r.gamma1 = 0.6;
    r.gamma2 = 0.4;
    r.gamma3_deph = 0.3;
    PulseSchedule s;
    s.drive = ConstantDrive{70.0, 40.0};
    s.detuning.delta0 = 500.0;
    const AdiabaticFrame f = frame(s, 0.0);
    CHECK(max_abs(adiabatic_dissipator(Configuration::Lambda, r, f, sigma(1, 1))) < 1e-15);
    // Not so for the bright states.
    CHECK(max_abs(adiabatic_dissipator(Configuration::Lambda, r, f, sigma(2, 2))) > 1e-3);
}

TEST_CASE("derived rates") {
    RateSet l;
    l.gamma1 = 0.5;
    l.gamma2 = 0.5;
    l.gamma2_deph = 0.01;
    const DerivedRates d = derived_rates(Configuration::Lambda, l);
    CHECK(d.Gamma1 == doctest::Approx(0.5));
    CHECK(d.Gamma2 == doctest::Approx(0.505));
    CHECK(d.gamma_c == doctest::Approx(0.005));
    CHECK(d.gamma_total == doctest::Approx(1.0));

    for (Configuration c : {Configuration::Lambda, Configuration::Xi, Configuration::V}) {
        const DerivedRates z = derived_rates(c, RateSet{});
        CHECK(z.Gamma1 == 0.0);
        CHECK(z.Gamma2 == 0.0);
        CHECK(z.gamma_c == 0.0);
        CHECK(z.gamma_total == 0.0);
    }

    RateSet v;
    v.gamma1 = 1.0;
    v.gamma2 = 1.0;
    const DerivedRates dv = derived_rates(Configuration::V, v);
    CHECK(dv.gamma_c == doctest::Approx(1.0));
    CHECK(dv.gamma_c == doctest::Approx(dv.Gamma1 + dv.Gamma2));

    RateSet x = all_rates();
    const DerivedRates dx = derived_rates(Configuration::Xi, x);
    CHECK(dx.gamma_c == doctest::Approx(dx.Gamma2 - dx.Gamma1));
    CHECK(dx.gamma_c == doctest::Approx(0.5 * (x.gamma2 + x.gamma2_deph)));
}

TEST_CASE("configuration names") {
    for (Configuration c : {Configuration::Lambda, Configuration::Xi, Configuration::V})
        CHECK(configuration_from_string(to_string(c)) == c);
    CHECK_THROWS_AS(configuration_from_string("W"), PreconditionError);
}
