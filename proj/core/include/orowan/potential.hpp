#pragma once

#include <vector>

#include "orowan/report.hpp"

namespace orowan {

enum class PotentialKind { Classical, CosineSeries };

/// Periodic multi-well potential W(u) = sum_k a_k (1 - cos(2 pi k u)),
/// zero exactly on the integers, period 1, alpha = W''(0) = sum_k a_k (2 pi k)^2.
///
/// The classical form with lattice spacing d is the single-term series
/// a_1 = 1/(2 pi^2 d), so alpha = 2/d. With the half-Laplacian normalized to
/// Fourier symbol -|xi|, its transition layer is exactly
/// 1/2 + arctan(2x/d)/pi and the mobility constant is pi*d.
struct PotentialSpec {
    PotentialKind kind = PotentialKind::CosineSeries;
    double d = 0.0;               // lattice spacing, classical case only
    std::vector<double> coeffs;   // a_k, k = 1..K
    double alpha = 0.0;           // cached W''(0)
};

PotentialSpec make_classical_potential(double d);
PotentialSpec make_cosine_potential(std::vector<double> coeffs);

/// order 0 -> W(u), 1 -> W'(u), 2 -> W''(u).
double eval_potential(const PotentialSpec& p, double u, int order);

/// sup_u |W''(u)| (= sum_k |a_k| (2 pi k)^2), used by the stiff CFL bound.
double max_second_derivative(const PotentialSpec& p);

/// Sample-based check of the multi-well conditions; failing specs get a
/// failed report, not an exception. n_samples >= 16.
ValidationReport validate_potential(const PotentialSpec& p, int n_samples);

}  // namespace orowan
