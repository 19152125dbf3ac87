#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace orowan {

struct ValidationRow {
    std::string label;
    double measured = 0.0;
    double threshold = 0.0;
    bool pass = false;
};

struct ValidationReport {
    std::vector<ValidationRow> rows;

    void add(std::string label, double measured, double threshold, bool pass) {
        rows.push_back({std::move(label), measured, threshold, pass});
    }
    // pass iff measured <= threshold
    void check_leq(std::string label, double measured, double threshold) {
        add(std::move(label), measured, threshold, measured <= threshold);
    }
    // pass iff measured > threshold
    void check_gt(std::string label, double measured, double threshold) {
        add(std::move(label), measured, threshold, measured > threshold);
    }
    bool all_pass() const {
        if (rows.empty()) throw std::logic_error("ValidationReport: no rows");
        for (const auto& r : rows)
            if (!r.pass) return false;
        return true;
    }
    void append(const ValidationReport& other) {
        rows.insert(rows.end(), other.rows.begin(), other.rows.end());
    }
};

struct ConvergenceRow {
    double epsilon = 0.0;
    double delta = 0.0;
    double sup_error = 0.0;
    double wall_time_s = 0.0;
    double dt_used = 0.0;
    double cfl_bound = 0.0;
};

struct ConvergenceReport {
    std::vector<ConvergenceRow> rows;

    bool strictly_decreasing_error() const {
        if (rows.empty()) throw std::logic_error("ConvergenceReport: no rows");
        for (std::size_t i = 1; i < rows.size(); ++i)
            if (!(rows[i].sup_error < rows[i - 1].sup_error)) return false;
        return true;
    }
};

}  // namespace orowan
