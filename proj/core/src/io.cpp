#include "orowan/io.hpp"

#include <json.hpp>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

namespace orowan {

namespace {

std::string sidecar_path(const std::string& csv_path) {
    std::filesystem::path p(csv_path);
    p.replace_extension(".json");
    return p.string();
}

}  // namespace

std::string format_double(double x) {
    char buf[40];
    for (int prec = 15; prec <= 17; ++prec) {
        std::snprintf(buf, sizeof(buf), "%.*g", prec, x);
        if (std::strtod(buf, nullptr) == x) return buf;
    }
    return buf;
}

void write_field_csv(const ScalarField& f, const std::string& csv_path) {
    std::ofstream out(csv_path);
    if (!out) throw std::runtime_error("write_field_csv: cannot open " + csv_path);
    out << "x,value\n";
    for (int i = 0; i < f.size(); ++i)
        out << format_double(f.x(i)) << ',' << format_double(f.values[i]) << '\n';

    nlohmann::ordered_json meta;
    meta["grid"] = {{"center", f.grid.center}, {"half_width", f.grid.half_width}, {"n", f.grid.n}};
    meta["left_limit"] = f.left_limit;
    meta["right_limit"] = f.right_limit;
    if (f.tail_power)
        meta["tail_power"] = *f.tail_power;
    else
        meta["tail_power"] = nullptr;
    std::ofstream side(sidecar_path(csv_path));
    if (!side) throw std::runtime_error("write_field_csv: cannot open sidecar for " + csv_path);
    side << meta.dump(2) << '\n';
}

ScalarField read_field_csv(const std::string& csv_path) {
    std::ifstream side(sidecar_path(csv_path));
    if (!side) throw std::runtime_error("read_field_csv: missing sidecar for " + csv_path);
    nlohmann::json meta = nlohmann::json::parse(side);
    Grid1D grid(meta.at("grid").at("center").get<double>(),
                meta.at("grid").at("half_width").get<double>(), meta.at("grid").at("n").get<int>());

    std::ifstream in(csv_path);
    if (!in) throw std::runtime_error("read_field_csv: cannot open " + csv_path);
    std::string line;
    std::getline(in, line);  // header
    std::vector<double> values;
    values.reserve(grid.n);
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw std::runtime_error("read_field_csv: malformed row");
        values.push_back(std::stod(line.substr(comma + 1)));
    }
    std::optional<double> tail;
    if (!meta.at("tail_power").is_null()) tail = meta.at("tail_power").get<double>();
    return make_field(grid, std::move(values), meta.at("left_limit").get<double>(),
                      meta.at("right_limit").get<double>(), tail);
}

std::string validation_csv_string(const ValidationReport& r) {
    std::ostringstream out;
    out << "label,measured,threshold,pass\n";
    for (const auto& row : r.rows)
        out << row.label << ',' << format_double(row.measured) << ','
            << format_double(row.threshold) << ',' << (row.pass ? 1 : 0) << '\n';
    return out.str();
}

std::string convergence_csv_string(const ConvergenceReport& r) {
    std::ostringstream out;
    out << "epsilon,delta,sup_error,wall_time_s,dt_used,cfl_bound\n";
    for (const auto& row : r.rows)
        out << format_double(row.epsilon) << ',' << format_double(row.delta) << ','
            << format_double(row.sup_error) << ',' << format_double(row.wall_time_s) << ','
            << format_double(row.dt_used) << ',' << format_double(row.cfl_bound) << '\n';
    return out.str();
}

namespace {
void write_text(const std::string& text, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open " + path);
    out << text;
}
}  // namespace

void write_validation_csv(const ValidationReport& r, const std::string& path) {
    write_text(validation_csv_string(r), path);
}

void write_convergence_csv(const ConvergenceReport& r, const std::string& path) {
    write_text(convergence_csv_string(r), path);
}

void write_trajectory_csv(const DddTrajectory& tr, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("write_trajectory_csv: cannot open " + path);
    const std::size_t n = tr.positions.empty() ? 0 : tr.positions.front().size();
    out << "t";
    for (std::size_t i = 1; i <= n; ++i) out << ",y_" << i;
    out << '\n';
    for (std::size_t row = 0; row < tr.times.size(); ++row) {
        out << format_double(tr.times[row]);
        for (double y : tr.positions[row]) out << ',' << format_double(y);
        out << '\n';
    }
}

}  // namespace orowan
