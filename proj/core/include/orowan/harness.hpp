#pragma once

#include <optional>
#include <utility>

#include "orowan/macro.hpp"
#include "orowan/micro.hpp"

namespace orowan {

struct U0Config {
    // logistic ramp lo + (hi - lo)(1 + tanh(scale (x - center)))/2
    double lo = 0.0;
    double hi = 1.0;
    double scale = 1.0;
    double center = 0.0;
};

ScalarField sample_u0(const U0Config& u0, const Grid1D& grid);

struct DeltaRule {
    enum class Kind { Equal, Sqrt, Fixed } kind = Kind::Equal;
    double fixed = 0.1;

    double operator()(double eps) const;
};

struct SimulationConfig {
    PotentialSpec potential = make_classical_potential(1.0);
    Grid1D grid{0.0, 40.0, 4096};
    Grid1D layer_grid{0.0, 40.0, 4096};
    double corrector_stress = 1.0;
    double epsilon = 0.1;
    double delta = 0.1;
    std::vector<double> epsilons;
    DeltaRule delta_rule;
    double T = 0.25;
    std::vector<double> snapshot_times;
    Interval window{-2.0, 2.0};
    U0Config u0;
    OperatorBackend micro_backend = OperatorBackend::PvQuadrature;
    std::optional<double> c0_override;
    std::vector<double> ddd_positions{-0.5, 0.5};
    double ddd_dt = 1e-3;
    double r_exponent = 0.5;  // truncation radius r = eps^r_exponent
    int n_probes = 200;
    long max_steps = 400000;
};

SimulationConfig parse_config(const std::string& json_text);
SimulationConfig load_config(const std::string& path);
/// Canonical JSON echo; parse_config(config_to_json(c)) round-trips.
std::string config_to_json(const SimulationConfig& c);

struct StudyResult {
    ConvergenceReport table;
    ValidationReport gates;
};

/// Truncated particle sums vs the on-grid pv evaluation of I1 at probe points,
/// one row per epsilon (r = eps^r_exponent). Gates: strictly decreasing error,
/// per-step error ratios in [1.6, 2.6], exact truncated+window=full identity.
StudyResult run_particle_approx_study(const ScalarField& profile, std::span<const double> eps_list,
                                      double r_exponent, int n_probes);

/// Layered-reconstruction sup errors per (eps, delta); gates: strictly
/// decreasing error and grid-max vs 10x-finer-probe-max within 2x.
StudyResult run_reconstruction_study(const ScalarField& profile,
                                     std::span<const std::pair<double, double>> eps_delta,
                                     const LayerProfile& layer);

struct MultiscaleOptions {
    Grid1D grid{0.0, 8.0, 16384};  // micro and macro-reference grid
    PotentialSpec potential;
    OperatorBackend micro_backend = OperatorBackend::PvQuadrature;
    long max_steps = 400000;
    double c0 = 0.0;  // mobility for the macro reference (from the solved layer)
};

/// Micro runs per epsilon (delta = rule(eps)) against one macro reference;
/// rows carry sup_distance on the window at time T. Gates: strictly decreasing
/// error, micro monotonicity/bracket checks, macro edge limits within 2*eps.
StudyResult run_multiscale_convergence(const ScalarField& u0, std::span<const double> eps_list,
                                       const DeltaRule& rule, double T, const Interval& window,
                                       const MultiscaleOptions& opt);

struct DddVsMicroOptions {
    Grid1D grid{0.0, 2.0, 4096};
    PotentialSpec potential;
    LayerProfile layer;
    OperatorBackend micro_backend = OperatorBackend::PvQuadrature;
    int n_snapshots = 10;
};

struct DddVsMicroResult {
    ValidationReport gates;
    DddTrajectory micro_levels;  // rescaled: tau = t/eps, y = x/eps
    DddTrajectory ddd;
    double max_deviation = 0.0;
};

/// Micro run from layered initial data; level points extracted per snapshot,
/// rescaled and compared against the ODE trajectories.
DddVsMicroResult run_ddd_vs_micro(std::span<const double> y0, double eps, double delta, double T,
                                  const DddVsMicroOptions& opt);

struct OrowanResult {
    ValidationReport gates;
    double median_rel_deviation = 0.0;
    double doubling_ratio = 0.0;
};

/// Tracked level-point velocities vs -c0 I1[u] at mid-run, plus the
/// c0-doubling linearity check on the first interval.
OrowanResult run_orowan_check(const ScalarField& u0, double c0, double T, double track_eps = 0.1);

void write_report(const ConvergenceReport& report, const std::string& path);
void write_report(const ValidationReport& report, const std::string& path);

}  // namespace orowan
