#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "trilevel/analysis.hpp"
#include "trilevel/dissipation.hpp"
#include "trilevel/evolution.hpp"
#include "trilevel/pulses.hpp"
#include "trilevel/table.hpp"

namespace trilevel {

// A config is a JSON object with flat dotted keys, e.g. {"rates.gamma1": 0.5}.
// Keys named "sweep.<key>" hold a list of values for <key>. Times are in units of T.
using FlatConfig = nlohmann::ordered_json;

enum class Basis { bare, adiabatic };

struct SweepAxis {
    std::string key;
    std::vector<nlohmann::ordered_json> values;
};

struct ScenarioConfig {
    std::string id;
    Configuration configuration = Configuration::Lambda;
    RateSet rates;
    PulseSchedule schedule;
    std::string initial_state;
    Basis basis = Basis::bare;
    PropagatorSettings propagator;
    StabilityThresholds thresholds;
    std::vector<SweepAxis> axes;
    FlatConfig resolved;  // every known key with its effective value, sweep keys excluded
};

// Known keys and their defaults, in canonical order.
const FlatConfig& config_defaults();

// Throws ConfigError naming every offending key.
ScenarioConfig parse_config(const FlatConfig& flat);
FlatConfig load_config_file(const std::filesystem::path& path);

std::vector<std::string> builtin_names();
FlatConfig builtin_config(const std::string& name);
// Builtin name or path to a config file.
FlatConfig resolve_config_source(const std::string& source);

// Initial bare-basis density matrix: "1", "2", "3", "lambda1".."lambda3" (frame at t = 0),
// "hadamard_minus" / "hadamard_plus" for (|1> -+ |2>)/sqrt 2.
Mat3 initial_density(const std::string& name, const PulseSchedule& s);

struct RunOptions {
    std::filesystem::path out_dir = ".";
    bool write_outputs = true;
    std::size_t workers = 1;
};

struct RunRecord {
    std::string scenario_id;
    std::size_t grid_index = 0;
    FlatConfig parameters;
    std::string table_file;  // relative to the output directory
    StabilityReport stability;
    Summary summary;
    InvariantReport invariants;
    bool ok = true;
    std::string error;
};

RunRecord run_scenario(const ScenarioConfig& cfg, const RunOptions& opt = {}, std::size_t grid_index = 0,
                       const std::string& table_stem = "");
// Trajectory only, no files.
Trajectory simulate(const ScenarioConfig& cfg);

// One flat config per grid point; last axis varies fastest.
std::vector<FlatConfig> expand_grid(const FlatConfig& flat);
std::vector<RunRecord> run_sweep(const FlatConfig& flat, const RunOptions& opt = {});

nlohmann::ordered_json to_json(const RunRecord& r);
nlohmann::ordered_json to_json(const StabilityReport& r);

}  // namespace trilevel
