#include <cmath>
#include <fstream>
#include <limits>
#include <numbers>
#include <set>

#include "trilevel/error.hpp"
#include "trilevel/scenario.hpp"

namespace trilevel {

using nlohmann::ordered_json;

const FlatConfig& config_defaults() {
    static const FlatConfig d = {
        {"scenario.id", "custom"},
        {"configuration", "lambda"},
        {"horizon", 1.0},
        {"rates.gamma1", 0.5},
        {"rates.gamma2", 0.5},
        {"rates.gamma1_deph", 0.0},
        {"rates.gamma2_deph", 0.0},
        {"rates.gamma3_deph", 0.0},
        {"rates.xi_projector_decay", false},
        // When set, overrides the dephasing rate that controls gamma_c (Lambda, Xi only).
        {"rates.gamma_c", nullptr},
        {"pulses.shape", "gaussian"},
        {"pulses.ordering", "counterintuitive"},
        {"pulses.peak", 100.0},
        {"pulses.width_fraction", 0.69},
        {"pulses.delay_fraction", 0.65},
        {"pulses.pump.peak", nullptr},
        {"pulses.pump.center", nullptr},
        {"pulses.pump.width", nullptr},
        {"pulses.stokes.peak", nullptr},
        {"pulses.stokes.center", nullptr},
        {"pulses.stokes.width", nullptr},
        {"pulses.theta0", std::numbers::pi / 8},
        {"pulses.theta_gamma_c", 0.0},
        {"pulses.theta_t0", 0.0},
        {"detuning.kind", "constant"},
        {"detuning.value", 1000.0},
        {"detuning.gamma1", nullptr},  // shaped law; null means the derived Gamma1
        {"detuning.t0", 0.0},
        {"initial.state", "1"},
        {"propagator.basis", "bare"},
        {"propagator.method", "adaptive_rk"},
        {"propagator.rel_tol", 1e-9},
        {"propagator.abs_tol", 1e-12},
        {"propagator.max_step", nullptr},
        {"propagator.n_steps", 4000},
        {"output.samples", 1000},
        {"stability.much_less", 0.1},
        {"stability.much_greater", 10.0},
    };
    return d;
}

namespace {

const std::set<std::string> kInitialStates{"1",       "2",       "3",           "lambda1", "lambda2",
                                           "lambda3", "hadamard_minus", "hadamard_plus"};

class Reader {
public:
    explicit Reader(const FlatConfig& r) : r_(r) {}

    double number(const std::string& k) {
        const auto& v = r_.at(k);
        if (!v.is_number()) return fail(k), 0.0;
        return v.get<double>();
    }
    double optional(const std::string& k, double fallback) {
        const auto& v = r_.at(k);
        if (v.is_null()) return fallback;
        if (!v.is_number()) return fail(k), fallback;
        return v.get<double>();
    }
    bool is_set(const std::string& k) const { return !r_.at(k).is_null(); }
    std::size_t count(const std::string& k, std::size_t min) {
        const auto& v = r_.at(k);
        if (!v.is_number_integer() || v.get<long long>() < static_cast<long long>(min)) return fail(k), min;
        return static_cast<std::size_t>(v.get<long long>());
    }
    std::string text(const std::string& k) {
        const auto& v = r_.at(k);
        if (!v.is_string()) return fail(k), std::string{};
        return v.get<std::string>();
    }
    bool flag(const std::string& k) {
        const auto& v = r_.at(k);
        if (!v.is_boolean()) return fail(k), false;
        return v.get<bool>();
    }
    void fail(const std::string& k) {
        if (std::find(bad_.begin(), bad_.end(), k) == bad_.end()) bad_.push_back(k);
    }
    void fail(std::initializer_list<std::string> ks) {
        for (const auto& k : ks) fail(k);
    }
    const std::vector<std::string>& bad() const { return bad_; }

private:
    const FlatConfig& r_;
    std::vector<std::string> bad_;
};

}  // namespace

ScenarioConfig parse_config(const FlatConfig& flat) {
    if (!flat.is_object()) throw ConfigError("config must be a JSON object of dotted keys", {});
    const FlatConfig& defaults = config_defaults();

    ScenarioConfig cfg;
    cfg.resolved = defaults;
    std::vector<std::string> unknown;
    for (const auto& [key, value] : flat.items()) {
        if (key.rfind("sweep.", 0) == 0) {
            const std::string target = key.substr(6);
            if (!defaults.contains(target) || target == "scenario.id" || !value.is_array() || value.empty()) {
                unknown.push_back(key);
                continue;
            }
            cfg.axes.push_back({target, std::vector<ordered_json>(value.begin(), value.end())});
            continue;
        }
        if (!defaults.contains(key)) {
            unknown.push_back(key);
            continue;
        }
        cfg.resolved[key] = value;
    }

    Reader rd(cfg.resolved);
    cfg.id = rd.text("scenario.id");
    if (cfg.id.empty() || cfg.id.find_first_of("/\\") != std::string::npos) rd.fail("scenario.id");

    try {
        cfg.configuration = configuration_from_string(rd.text("configuration"));
    } catch (const PreconditionError&) {
        rd.fail("configuration");
    }

    const double horizon = rd.number("horizon");
    if (!(horizon > 0.0) || !std::isfinite(horizon)) rd.fail("horizon");

    RateSet& r = cfg.rates;
    r.gamma1 = rd.number("rates.gamma1");
    r.gamma2 = rd.number("rates.gamma2");
    r.gamma1_deph = rd.number("rates.gamma1_deph");
    r.gamma2_deph = rd.number("rates.gamma2_deph");
    r.gamma3_deph = rd.number("rates.gamma3_deph");
    r.xi_projector_decay = rd.flag("rates.xi_projector_decay");
    for (const char* k : {"rates.gamma1", "rates.gamma2", "rates.gamma1_deph", "rates.gamma2_deph", "rates.gamma3_deph"})
        if (!(rd.number(k) >= 0.0)) rd.fail(k);
    if (rd.is_set("rates.gamma_c")) {
        const double gc = rd.optional("rates.gamma_c", 0.0);
        // gamma_c = gamma2_deph / 2 (Lambda) or (gamma2 + gamma2_deph) / 2 (Xi).
        if (!(gc >= 0.0) || cfg.configuration == Configuration::V) rd.fail("rates.gamma_c");
        else if (cfg.configuration == Configuration::Lambda) r.gamma2_deph = 2.0 * gc;
        else if (2.0 * gc >= r.gamma2) r.gamma2_deph = 2.0 * gc - r.gamma2;
        else rd.fail({"rates.gamma_c", "rates.gamma2"});
        cfg.resolved["rates.gamma2_deph"] = r.gamma2_deph;
    }

    const std::string shape = rd.text("pulses.shape");
    Ordering ordering = Ordering::counterintuitive;
    try {
        ordering = ordering_from_string(rd.text("pulses.ordering").c_str());
    } catch (const PreconditionError&) {
        rd.fail("pulses.ordering");
    }
    const double peak = rd.number("pulses.peak");
    if (!(peak >= 0.0)) rd.fail("pulses.peak");

    PulseSchedule s;
    if (rd.bad().empty()) {
        try {
            if (shape == "gaussian") {
                if (ordering == Ordering::static_drive) rd.fail({"pulses.shape", "pulses.ordering"});
                StirapGeometry g{rd.number("pulses.width_fraction"), rd.number("pulses.delay_fraction")};
                s = make_stirap_schedule(peak, 0.0, horizon, ordering, g);
                auto& drive = std::get<GaussianDrive>(s.drive);
                for (auto [name, pulse] : {std::pair{"pump", &drive.pump}, std::pair{"stokes", &drive.stokes}}) {
                    const std::string base = std::string("pulses.") + name;
                    pulse->peak = rd.optional(base + ".peak", pulse->peak);
                    pulse->center = rd.optional(base + ".center", pulse->center);
                    pulse->width = rd.optional(base + ".width", pulse->width);
                    if (!(pulse->peak >= 0.0)) rd.fail(base + ".peak");
                    if (!(pulse->width > 0.0)) rd.fail(base + ".width");
                }
            } else if (shape == "constant") {
                s.horizon = horizon;
                s.ordering = Ordering::static_drive;
                const ConstantDrive c{rd.optional("pulses.pump.peak", peak), rd.optional("pulses.stokes.peak", peak)};
                if (!(c.pump >= 0.0)) rd.fail("pulses.pump.peak");
                if (!(c.stokes >= 0.0)) rd.fail("pulses.stokes.peak");
                s.drive = c;
            } else if (shape == "theta_law") {
                s = theta_law_schedule(rd.number("pulses.theta0"), rd.number("pulses.theta_gamma_c"),
                                       rd.number("pulses.theta_t0"), peak, horizon);
            } else {
                rd.fail("pulses.shape");
            }
        } catch (const PreconditionError&) {
            rd.fail({"pulses.shape", "pulses.peak", "pulses.width_fraction", "pulses.theta0"});
        }
    }

    const std::string dkind = rd.text("detuning.kind");
    const double dvalue = rd.number("detuning.value");
    if (!std::isfinite(dvalue)) rd.fail("detuning.value");
    if (dkind == "constant") {
        s.detuning = {DetuningKind::constant, dvalue, 0.0, 0.0};
    } else if (dkind == "shaped") {
        double g1 = 0.0;
        try {
            g1 = rd.optional("detuning.gamma1", derived_rates(cfg.configuration, r).Gamma1);
        } catch (const PreconditionError&) {
        }
        if (!(g1 >= 0.0)) rd.fail("detuning.gamma1");
        s.detuning = {DetuningKind::shaped, dvalue, g1, rd.number("detuning.t0")};
        cfg.resolved["detuning.gamma1"] = g1;
    } else {
        rd.fail("detuning.kind");
    }
    cfg.schedule = s;

    cfg.initial_state = rd.text("initial.state");
    if (!kInitialStates.count(cfg.initial_state)) rd.fail("initial.state");

    const std::string basis = rd.text("propagator.basis");
    if (basis == "bare") cfg.basis = Basis::bare;
    else if (basis == "adiabatic") cfg.basis = Basis::adiabatic;
    else rd.fail("propagator.basis");

    PropagatorSettings& p = cfg.propagator;
    try {
        p.method = method_from_string(rd.text("propagator.method"));
    } catch (const PreconditionError&) {
        rd.fail("propagator.method");
    }
    if (cfg.basis == Basis::adiabatic && p.method == Method::expm_oracle) rd.fail({"propagator.basis", "propagator.method"});
    p.rel_tol = rd.number("propagator.rel_tol");
    p.abs_tol = rd.number("propagator.abs_tol");
    if (!(p.rel_tol > 0.0)) rd.fail("propagator.rel_tol");
    if (!(p.abs_tol > 0.0)) rd.fail("propagator.abs_tol");
    p.max_step = rd.optional("propagator.max_step", std::numeric_limits<double>::infinity());
    if (!(p.max_step > 0.0)) rd.fail("propagator.max_step");
    p.n_steps = rd.count("propagator.n_steps", 1);
    p.samples = rd.count("output.samples", 2);

    cfg.thresholds.much_less = rd.number("stability.much_less");
    cfg.thresholds.much_greater = rd.number("stability.much_greater");
    if (!(cfg.thresholds.much_less > 0.0)) rd.fail("stability.much_less");
    if (!(cfg.thresholds.much_greater > 0.0)) rd.fail("stability.much_greater");

    std::vector<std::string> bad = unknown;
    bad.insert(bad.end(), rd.bad().begin(), rd.bad().end());
    if (!bad.empty()) throw ConfigError("unknown, malformed or invalid config keys", bad);
    return cfg;
}

FlatConfig load_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot read config file " + path.string(), {});
    try {
        return FlatConfig::parse(in, nullptr, true, true);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(path.string() + ": " + e.what(), {});
    }
}

std::vector<std::string> builtin_names() { return {"stirap_fig2", "bstirap_fig3", "purity_delta_fig4", "hadamard_hold"}; }

FlatConfig builtin_config(const std::string& name) {
    // Reference values: Gamma1 T = Gamma2 T = 0.5 (gamma1 = gamma2 = 0.5, no upper-level dephasing),
    // Omega0 T = 100, Delta T = 1000, gamma_c T in {0.005, 0.01, 0.05}.
    FlatConfig base = {
        {"scenario.id", name},
        {"configuration", "lambda"},
        {"horizon", 1.0},
        {"rates.gamma1", 0.5},
        {"rates.gamma2", 0.5},
        {"rates.gamma_c", 0.005},
        {"pulses.peak", 100.0},
        {"detuning.value", 1000.0},
    };
    if (name == "stirap_fig2") {
        base["pulses.ordering"] = "counterintuitive";
        base["initial.state"] = "1";
        base["sweep.rates.gamma_c"] = {0.005, 0.01, 0.05};
    } else if (name == "bstirap_fig3") {
        base["pulses.ordering"] = "intuitive";
        base["initial.state"] = "1";
        base["sweep.rates.gamma_c"] = {0.005, 0.01, 0.05};
    } else if (name == "purity_delta_fig4") {
        // The detuning grid is a reconstruction; the figure does not list its values.
        base["pulses.ordering"] = "intuitive";
        base["rates.gamma_c"] = 0.05;
        base["initial.state"] = "lambda2";
        base["sweep.detuning.value"] = {100.0, 300.0, 1000.0};
    } else if (name == "hadamard_hold") {
        base["pulses.shape"] = "constant";
        base["pulses.ordering"] = "static";
        base["initial.state"] = "hadamard_minus";
    } else {
        throw ConfigError("unknown builtin scenario " + name, {name});
    }
    return base;
}

FlatConfig resolve_config_source(const std::string& source) {
    std::error_code ec;
    if (std::filesystem::is_regular_file(source, ec)) return load_config_file(source);
    for (const auto& n : builtin_names())
        if (n == source) return builtin_config(n);
    throw ConfigError("no config file or builtin named " + source, {});
}

}  // namespace trilevel
