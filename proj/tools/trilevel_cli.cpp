// trilevel: run, sweep and validate three-level dissipative scenarios.
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <thread>

#include <CLI11.hpp>

#include "trilevel/error.hpp"
#include "trilevel/scenario.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kConfigError = 2;
constexpr int kNumericalError = 3;

struct Overrides {
    std::optional<std::size_t> samples;
    std::optional<std::string> method;
    std::optional<double> tol;
};

trilevel::FlatConfig load(const std::string& source, const Overrides& o) {
    trilevel::FlatConfig flat = trilevel::resolve_config_source(source);
    if (o.samples) flat["output.samples"] = *o.samples;
    if (o.method) flat["propagator.method"] = *o.method;
    if (o.tol) flat["propagator.rel_tol"] = *o.tol;
    return flat;
}

void write_json(const std::filesystem::path& path, const nlohmann::ordered_json& j) {
    std::filesystem::create_directories(path.parent_path());
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw trilevel::Error("cannot open " + path.string() + " for writing");
    out << j.dump(2) << '\n';
}

void print_config_error(const trilevel::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    for (const auto& k : e.keys()) std::cerr << "  key: " << k << '\n';
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Dissipative three-level system simulator"};
    app.require_subcommand(1);

    const char* env_out = std::getenv("TRILEVEL_OUT_DIR");
    std::string out_dir = env_out && *env_out ? env_out : "trilevel_out";
    std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
    Overrides ov;
    std::string source;

    auto add_common = [&](CLI::App* sub, bool outputs) {
        sub->add_option("config", source, "Config file (flat dotted-key JSON) or builtin name")->required();
        sub->add_option("--samples", ov.samples, "Number of output samples");
        sub->add_option("--method", ov.method, "adaptive_rk | fixed_rk4 | expm_oracle");
        sub->add_option("--tol", ov.tol, "Relative tolerance of the adaptive integrator");
        if (outputs) sub->add_option("--out-dir", out_dir, "Output directory (default: $TRILEVEL_OUT_DIR)");
    };

    CLI::App* run = app.add_subcommand("run", "Run one scenario (sweep axes are ignored)");
    add_common(run, true);
    CLI::App* sweep = app.add_subcommand("sweep", "Run the cross product of the sweep axes");
    add_common(sweep, true);
    sweep->add_option("--workers", workers, "Concurrent sweep points")->check(CLI::PositiveNumber);
    CLI::App* validate = app.add_subcommand("validate", "Check a config and print its resolved form");
    add_common(validate, false);
    CLI::App* list = app.add_subcommand("list-builtins", "List builtin scenarios");
    bool dump = false;
    list->add_flag("--dump", dump, "Print each builtin config");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*list) {
            for (const auto& n : trilevel::builtin_names()) {
                std::cout << n << '\n';
                if (dump) std::cout << trilevel::builtin_config(n).dump(2) << '\n';
            }
            return kOk;
        }

        const trilevel::FlatConfig flat = load(source, ov);
        if (*validate) {
            const auto cfg = trilevel::parse_config(flat);
            nlohmann::ordered_json j = cfg.resolved;
            for (const auto& axis : cfg.axes) j["sweep." + axis.key] = axis.values;
            std::cout << j.dump(2) << '\n';
            std::cout << "grid points: " << trilevel::expand_grid(flat).size() << '\n';
            return kOk;
        }

        trilevel::RunOptions opt;
        opt.out_dir = out_dir;
        opt.workers = workers;

        if (*run) {
            const auto cfg = trilevel::parse_config(flat);
            const trilevel::RunRecord rec = trilevel::run_scenario(cfg, opt);
            write_json(opt.out_dir / (cfg.id + ".json"), trilevel::to_json(rec));
            std::cout << trilevel::to_json(rec).dump(2) << '\n';
            return kOk;
        }

        const auto records = trilevel::run_sweep(flat, opt);
        nlohmann::ordered_json all = nlohmann::ordered_json::array();
        bool failed = false;
        for (const auto& r : records) {
            all.push_back(trilevel::to_json(r));
            failed = failed || !r.ok;
        }
        write_json(opt.out_dir / (trilevel::parse_config(flat).id + "_sweep.json"), all);
        for (const auto& r : records) {
            std::cout << r.grid_index << ' ' << (r.ok ? r.table_file : "FAILED: " + r.error);
            if (r.ok)
                std::cout << " transfer=" << r.summary.transfer_efficiency << " min_purity=" << r.summary.min_purity
                          << " final_purity=" << r.summary.final_purity;
            std::cout << '\n';
        }
        return failed ? kNumericalError : kOk;
    } catch (const trilevel::ConfigError& e) {
        print_config_error(e);
        return kConfigError;
    } catch (const trilevel::PreconditionError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return kConfigError;
    } catch (const trilevel::NumericalError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kNumericalError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kNumericalError;
    }
}
