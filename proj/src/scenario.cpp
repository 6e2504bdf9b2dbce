#include "trilevel/scenario.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <thread>

#include "trilevel/adiabatic.hpp"
#include "trilevel/error.hpp"

namespace trilevel {

using nlohmann::ordered_json;

Mat3 initial_density(const std::string& name, const PulseSchedule& s) {
    if (name == "1" || name == "2" || name == "3") {
        const int k = name[0] - '0';
        return sigma(k, k);
    }
    if (name == "hadamard_minus" || name == "hadamard_plus") {
        const double sgn = name == "hadamard_minus" ? -1.0 : 1.0;
        Mat3 m;
        m(0, 0) = m(1, 1) = 0.5;
        m(0, 1) = m(1, 0) = 0.5 * sgn;
        return m;
    }
    if (name == "lambda1" || name == "lambda2" || name == "lambda3") {
        const std::size_t k = static_cast<std::size_t>(name.back() - '1');
        const AdiabaticFrame f = frame(s, 0.0);
        Mat3 m;
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j) m(i, j) = f.U(i, k) * std::conj(f.U(j, k));
        return m;
    }
    throw ConfigError("unknown initial state " + name, {"initial.state"});
}

Trajectory simulate(const ScenarioConfig& cfg) {
    const Mat3 rho0 = initial_density(cfg.initial_state, cfg.schedule);
    if (cfg.basis == Basis::adiabatic) {
        const AdiabaticFrame f0 = frame(cfg.schedule, 0.0);
        return propagate_adiabatic(cfg.configuration, cfg.rates, cfg.schedule, to_adiabatic(f0, rho0), cfg.propagator);
    }
    return propagate_bare(cfg.configuration, cfg.rates, cfg.schedule, rho0, cfg.propagator);
}

RunRecord run_scenario(const ScenarioConfig& cfg, const RunOptions& opt, std::size_t grid_index,
                       const std::string& table_stem) {
    RunRecord rec;
    rec.scenario_id = cfg.id;
    rec.grid_index = grid_index;
    rec.parameters = cfg.resolved;
    rec.stability = stability_report(cfg.configuration, cfg.rates, cfg.schedule, cfg.thresholds);

    Trajectory tr;
    try {
        tr = simulate(cfg);
    } catch (const NumericalError& e) {
        std::string msg = "scenario " + cfg.id + ": " + e.what();
        if (!std::isnan(e.time())) msg += " (t = " + std::to_string(e.time()) + ")";
        throw NumericalError(msg, e.time());
    }
    rec.invariants = tr.invariants;
    const Table table = make_table(tr);
    rec.summary = summarize(table);
    if (opt.write_outputs) {
        rec.table_file = (table_stem.empty() ? cfg.id : table_stem) + ".csv";
        std::filesystem::create_directories(opt.out_dir);
        write_table(table, opt.out_dir / rec.table_file);
    }
    return rec;
}

std::vector<FlatConfig> expand_grid(const FlatConfig& flat) {
    const ScenarioConfig base = parse_config(flat);
    FlatConfig stripped = ordered_json::object();
    for (const auto& [k, v] : flat.items())
        if (k.rfind("sweep.", 0) != 0) stripped[k] = v;

    std::vector<FlatConfig> out;
    std::vector<std::size_t> idx(base.axes.size(), 0);
    while (true) {
        FlatConfig point = stripped;
        for (std::size_t a = 0; a < base.axes.size(); ++a) point[base.axes[a].key] = base.axes[a].values[idx[a]];
        out.push_back(std::move(point));
        std::size_t a = base.axes.size();
        while (a > 0) {
            --a;
            if (++idx[a] < base.axes[a].values.size()) break;
            idx[a] = 0;
            if (a == 0) return out;
        }
        if (base.axes.empty()) return out;
    }
}

std::vector<RunRecord> run_sweep(const FlatConfig& flat, const RunOptions& opt) {
    const std::vector<FlatConfig> grid = expand_grid(flat);
    const std::string id = parse_config(flat).id;
    std::vector<RunRecord> records(grid.size());

    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t k = next++; k < grid.size(); k = next++) {
            char stem[32];
            std::snprintf(stem, sizeof stem, "__%03zu", k);
            try {
                records[k] = run_scenario(parse_config(grid[k]), opt, k, id + stem);
            } catch (const std::exception& e) {
                RunRecord& r = records[k];
                r = RunRecord{};
                r.scenario_id = id;
                r.grid_index = k;
                r.parameters = grid[k];
                r.ok = false;
                r.error = e.what();
            }
        }
    };
    const std::size_t n = std::max<std::size_t>(1, std::min(opt.workers, grid.size()));
    std::vector<std::thread> pool;
    for (std::size_t w = 1; w < n; ++w) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    return records;
}

ordered_json to_json(const StabilityReport& r) {
    auto num = [](double x) -> ordered_json { return std::isfinite(x) ? ordered_json(x) : ordered_json("inf"); };
    return {
        {"gcT", num(r.gcT)},
        {"adiab1", num(r.adiab1)},
        {"adiab2", num(r.adiab2)},
        {"gamma1_over_delta", num(r.gamma1_over_delta)},
        {"gcT_ok", r.gcT_ok},
        {"adiab1_ok", r.adiab1_ok},
        {"adiab2_ok", r.adiab2_ok},
        {"gamma1_ok", r.gamma1_ok},
        {"delta_zero", r.delta_zero},
        {"much_less", r.thresholds.much_less},
        {"much_greater", r.thresholds.much_greater},
    };
}

ordered_json to_json(const RunRecord& r) {
    ordered_json j = {
        {"scenario_id", r.scenario_id},
        {"grid_index", r.grid_index},
        {"ok", r.ok},
    };
    if (!r.ok) {
        j["error"] = r.error;
        j["parameters"] = r.parameters;
        return j;
    }
    j["table_file"] = r.table_file;
    j["parameters"] = r.parameters;
    j["stability"] = to_json(r.stability);
    j["summary"] = {
        {"final_populations", r.summary.final_populations},
        {"final_adiabatic_populations", r.summary.final_adiabatic_populations},
        {"min_purity", r.summary.min_purity},
        {"final_purity", r.summary.final_purity},
        {"transfer_efficiency", r.summary.transfer_efficiency},
    };
    j["invariants"] = {
        {"max_trace_error", r.invariants.max_trace_error},
        {"max_hermiticity_defect", r.invariants.max_hermiticity_defect},
        {"min_eigenvalue", r.invariants.min_eigenvalue},
        {"min_purity", r.invariants.min_purity},
        {"max_purity", r.invariants.max_purity},
        {"within_tolerance", r.invariants.within()},
    };
    return j;
}

}  // namespace trilevel
