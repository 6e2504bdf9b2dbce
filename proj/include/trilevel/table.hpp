#pragma once

#include <array>
#include <filesystem>
#include <string>
#include <vector>

#include "trilevel/evolution.hpp"

namespace trilevel {

// Column layout: t, rho_ij re/im (row-major), R11, R22, R33, purity, theta, phi,
// lambda2, lambda3, pump, stokes, detuning, floor_flag.
const std::vector<std::string>& table_header();

struct Table {
    std::vector<std::string> header;
    std::vector<std::vector<double>> rows;

    std::size_t column(const std::string& name) const;
};

Table make_table(const Trajectory& traj);
void write_table(const Table& table, const std::filesystem::path& path);
Table read_table(const std::filesystem::path& path);
void emit_table(const Trajectory& traj, const std::filesystem::path& path);

struct Summary {
    std::array<double, 3> final_populations{};
    std::array<double, 3> final_adiabatic_populations{};
    double min_purity = 0.0;
    double final_purity = 0.0;
    double transfer_efficiency = 0.0;  // final rho22
};

// Computed from table values only, so a table read back from disk reproduces it exactly.
Summary summarize(const Table& table);

}  // namespace trilevel
