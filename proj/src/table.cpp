#include "trilevel/table.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "trilevel/error.hpp"

namespace trilevel {

const std::vector<std::string>& table_header() {
    static const std::vector<std::string> h = [] {
        std::vector<std::string> v{"t"};
        for (int i = 1; i <= 3; ++i)
            for (int j = 1; j <= 3; ++j) {
                const std::string base = "rho" + std::to_string(i) + std::to_string(j);
                v.push_back(base + "_re");
                v.push_back(base + "_im");
            }
        for (const char* c : {"R11", "R22", "R33", "purity", "theta", "phi", "lambda2", "lambda3", "pump", "stokes",
                              "detuning", "floor_flag"})
            v.emplace_back(c);
        return v;
    }();
    return h;
}

std::size_t Table::column(const std::string& name) const {
    const auto it = std::find(header.begin(), header.end(), name);
    if (it == header.end()) throw Error("table has no column " + name);
    return static_cast<std::size_t>(it - header.begin());
}

Table make_table(const Trajectory& traj) {
    Table t;
    t.header = table_header();
    t.rows.reserve(traj.size());
    for (const Sample& s : traj.samples) {
        std::vector<double> r;
        r.reserve(t.header.size());
        r.push_back(s.t);
        for (std::size_t i = 0; i < 3; ++i)
            for (std::size_t j = 0; j < 3; ++j) {
                r.push_back(s.rho(i, j).real());
                r.push_back(s.rho(i, j).imag());
            }
        for (double x : s.adiabatic_populations) r.push_back(x);
        r.insert(r.end(), {s.purity, s.theta, s.phi, s.lambda[1], s.lambda[2], s.pump, s.stokes, s.detuning,
                           s.floored ? 1.0 : 0.0});
        t.rows.push_back(std::move(r));
    }
    return t;
}

void write_table(const Table& table, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw Error("cannot open " + path.string() + " for writing");
    for (std::size_t k = 0; k < table.header.size(); ++k) out << (k ? "," : "") << table.header[k];
    out << '\n';
    char buf[40];
    for (const auto& row : table.rows) {
        for (std::size_t k = 0; k < row.size(); ++k) {
            std::snprintf(buf, sizeof buf, "%.17g", row[k]);
            if (k) out << ',';
            out << buf;
        }
        out << '\n';
    }
    out.flush();
    if (!out) throw Error("write failed for " + path.string());
}

Table read_table(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error("cannot open " + path.string() + " for reading");
    Table t;
    std::string line;
    if (!std::getline(in, line)) throw Error(path.string() + ": empty table");
    {
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) t.header.push_back(cell);
    }
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        const char* p = line.c_str();
        while (*p) {
            char* end = nullptr;
            row.push_back(std::strtod(p, &end));
            if (end == p) throw Error(path.string() + ": malformed number");
            p = end;
            if (*p == ',') ++p;
        }
        if (row.size() != t.header.size()) throw Error(path.string() + ": row width does not match header");
        t.rows.push_back(std::move(row));
    }
    return t;
}

void emit_table(const Trajectory& traj, const std::filesystem::path& path) { write_table(make_table(traj), path); }

Summary summarize(const Table& table) {
    if (table.rows.empty()) throw Error("summarize: empty table");
    const auto& last = table.rows.back();
    Summary s;
    const std::size_t rho11 = table.column("rho11_re"), rho22 = table.column("rho22_re"),
                      rho33 = table.column("rho33_re");
    s.final_populations = {last[rho11], last[rho22], last[rho33]};
    s.final_adiabatic_populations = {last[table.column("R11")], last[table.column("R22")], last[table.column("R33")]};
    const std::size_t pc = table.column("purity");
    s.final_purity = last[pc];
    s.min_purity = last[pc];
    for (const auto& r : table.rows) s.min_purity = std::min(s.min_purity, r[pc]);
    s.transfer_efficiency = last[rho22];
    return s;
}

}  // namespace trilevel
