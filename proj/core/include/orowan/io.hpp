#pragma once

#include <string>

#include "orowan/particles.hpp"
#include "orowan/report.hpp"

namespace orowan {

/// Shortest round-trip decimal representation.
std::string format_double(double x);

/// Field CSV with header "x,value" plus a JSON sidecar (same stem, .json)
/// carrying grid and far-field metadata.
void write_field_csv(const ScalarField& f, const std::string& csv_path);
ScalarField read_field_csv(const std::string& csv_path);

std::string validation_csv_string(const ValidationReport& r);
std::string convergence_csv_string(const ConvergenceReport& r);
void write_validation_csv(const ValidationReport& r, const std::string& path);
void write_convergence_csv(const ConvergenceReport& r, const std::string& path);

/// Trajectory CSV with header "t,y_1,...,y_N".
void write_trajectory_csv(const DddTrajectory& tr, const std::string& path);

}  // namespace orowan
