#include "orowan/harness.hpp"

#include <json.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <numbers>

#include "orowan/io.hpp"
#include "orowan/numerics.hpp"

namespace orowan {

namespace {

double wall_seconds(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

double median(std::vector<double> v) {
    if (v.empty()) throw std::invalid_argument("median of empty set");
    std::sort(v.begin(), v.end());
    return v[v.size() / 2];
}

// leftmost crossings of the given levels in a non-decreasing field; linear
// bracket plus cubic Newton refinement (sub-cell velocity tracking needs it)
std::vector<double> extract_levels(const ScalarField& v, std::span<const double> levels) {
    std::vector<double> out;
    out.reserve(levels.size());
    const double h = v.grid.h();
    for (double level : levels) {
        int k = -1;
        for (int j = 0; j < v.size(); ++j)
            if (v.values[j] >= level) { k = j; break; }
        if (k <= 0) throw std::runtime_error("extract_levels: level not bracketed");
        const double v0 = v.values[k - 1], v1 = v.values[k];
        double x = v.grid.x(k - 1) + h * (level - v0) / (v1 - v0);
        for (int it = 0; it < 3; ++it) {
            const double dv =
                (field_value(v, x + 0.25 * h) - field_value(v, x - 0.25 * h)) / (0.5 * h);
            if (dv <= 0.0) break;
            x -= (field_value(v, x) - level) / dv;
        }
        out.push_back(x);
    }
    return out;
}

}  // namespace

ScalarField sample_u0(const U0Config& u0, const Grid1D& grid) {
    return sample_field(
        grid,
        [&](double x) {
            return u0.lo + (u0.hi - u0.lo) * 0.5 * (1.0 + std::tanh(u0.scale * (x - u0.center)));
        },
        u0.lo, u0.hi);
}

double DeltaRule::operator()(double eps) const {
    switch (kind) {
        case Kind::Equal: return eps;
        case Kind::Sqrt: return std::sqrt(eps);
        case Kind::Fixed: return fixed;
    }
    throw std::logic_error("DeltaRule: bad kind");
}

// ---------------------------------------------------------------------------
// config
// ---------------------------------------------------------------------------

namespace {

Grid1D grid_from_json(const nlohmann::json& j) {
    return Grid1D(j.at("center").get<double>(), j.at("half_width").get<double>(),
                  j.at("n").get<int>());
}

nlohmann::ordered_json grid_to_json(const Grid1D& g) {
    return {{"center", g.center}, {"half_width", g.half_width}, {"n", g.n}};
}

}  // namespace

SimulationConfig parse_config(const std::string& json_text) {
    nlohmann::json j = nlohmann::json::parse(json_text);
    SimulationConfig c;
    c.potential = make_classical_potential(1.0);
    if (j.contains("potential")) {
        const auto& p = j.at("potential");
        const std::string kind = p.at("kind").get<std::string>();
        if (kind == "classical")
            c.potential = make_classical_potential(p.at("d").get<double>());
        else if (kind == "cosine")
            c.potential = make_cosine_potential(p.at("coeffs").get<std::vector<double>>());
        else
            throw std::invalid_argument("config: unknown potential kind '" + kind + "'");
    }
    if (j.contains("grid")) c.grid = grid_from_json(j.at("grid"));
    if (j.contains("layer_grid")) c.layer_grid = grid_from_json(j.at("layer_grid"));
    if (j.contains("corrector_stress")) c.corrector_stress = j.at("corrector_stress").get<double>();
    if (j.contains("epsilon")) c.epsilon = j.at("epsilon").get<double>();
    if (j.contains("delta")) c.delta = j.at("delta").get<double>();
    if (j.contains("epsilons")) {
        c.epsilons = j.at("epsilons").get<std::vector<double>>();
        if (c.epsilons.empty()) throw std::invalid_argument("config: empty epsilon list");
    }
    if (j.contains("delta_rule")) {
        const auto& r = j.at("delta_rule");
        const std::string kind = r.at("kind").get<std::string>();
        if (kind == "equal")
            c.delta_rule.kind = DeltaRule::Kind::Equal;
        else if (kind == "sqrt")
            c.delta_rule.kind = DeltaRule::Kind::Sqrt;
        else if (kind == "fixed") {
            c.delta_rule.kind = DeltaRule::Kind::Fixed;
            c.delta_rule.fixed = r.at("value").get<double>();
        } else
            throw std::invalid_argument("config: unknown delta rule '" + kind + "'");
    }
    if (j.contains("T")) c.T = j.at("T").get<double>();
    if (j.contains("snapshot_times"))
        c.snapshot_times = j.at("snapshot_times").get<std::vector<double>>();
    if (j.contains("window")) {
        const auto w = j.at("window").get<std::vector<double>>();
        if (w.size() != 2 || !(w[0] < w[1]))
            throw std::invalid_argument("config: window must be [lo, hi] with lo < hi");
        c.window = {w[0], w[1]};
    }
    if (j.contains("u0")) {
        const auto& u = j.at("u0");
        if (u.at("kind").get<std::string>() != "logistic")
            throw std::invalid_argument("config: unknown u0 kind");
        if (u.contains("lo")) c.u0.lo = u.at("lo").get<double>();
        if (u.contains("hi")) c.u0.hi = u.at("hi").get<double>();
        if (u.contains("scale")) c.u0.scale = u.at("scale").get<double>();
        if (u.contains("center")) c.u0.center = u.at("center").get<double>();
        if (!(c.u0.hi > c.u0.lo)) throw std::invalid_argument("config: u0 needs hi > lo");
    }
    if (j.contains("micro_backend")) {
        const std::string b = j.at("micro_backend").get<std::string>();
        if (b == "pv")
            c.micro_backend = OperatorBackend::PvQuadrature;
        else if (b == "spectral")
            c.micro_backend = OperatorBackend::Spectral;
        else
            throw std::invalid_argument("config: unknown micro backend '" + b + "'");
    }
    if (j.contains("c0") && !j.at("c0").is_null()) c.c0_override = j.at("c0").get<double>();
    if (j.contains("ddd_positions"))
        c.ddd_positions = j.at("ddd_positions").get<std::vector<double>>();
    if (j.contains("ddd_dt")) c.ddd_dt = j.at("ddd_dt").get<double>();
    if (j.contains("r_exponent")) c.r_exponent = j.at("r_exponent").get<double>();
    if (j.contains("n_probes")) c.n_probes = j.at("n_probes").get<int>();
    if (j.contains("max_steps")) c.max_steps = j.at("max_steps").get<long>();
    return c;
}

SimulationConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("load_config: cannot open " + path);
    std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    return parse_config(text);
}

std::string config_to_json(const SimulationConfig& c) {
    nlohmann::ordered_json j;
    if (c.potential.kind == PotentialKind::Classical)
        j["potential"] = {{"kind", "classical"}, {"d", c.potential.d}};
    else
        j["potential"] = {{"kind", "cosine"}, {"coeffs", c.potential.coeffs}};
    j["grid"] = grid_to_json(c.grid);
    j["layer_grid"] = grid_to_json(c.layer_grid);
    j["corrector_stress"] = c.corrector_stress;
    j["epsilon"] = c.epsilon;
    j["delta"] = c.delta;
    if (!c.epsilons.empty()) j["epsilons"] = c.epsilons;
    switch (c.delta_rule.kind) {
        case DeltaRule::Kind::Equal: j["delta_rule"] = {{"kind", "equal"}}; break;
        case DeltaRule::Kind::Sqrt: j["delta_rule"] = {{"kind", "sqrt"}}; break;
        case DeltaRule::Kind::Fixed:
            j["delta_rule"] = {{"kind", "fixed"}, {"value", c.delta_rule.fixed}};
            break;
    }
    j["T"] = c.T;
    j["snapshot_times"] = c.snapshot_times;
    j["window"] = {c.window.lo, c.window.hi};
    j["u0"] = {{"kind", "logistic"}, {"lo", c.u0.lo}, {"hi", c.u0.hi},
               {"scale", c.u0.scale}, {"center", c.u0.center}};
    j["micro_backend"] = c.micro_backend == OperatorBackend::Spectral ? "spectral" : "pv";
    if (c.c0_override)
        j["c0"] = *c.c0_override;
    else
        j["c0"] = nullptr;
    j["ddd_positions"] = c.ddd_positions;
    j["ddd_dt"] = c.ddd_dt;
    j["r_exponent"] = c.r_exponent;
    j["n_probes"] = c.n_probes;
    j["max_steps"] = c.max_steps;
    return j.dump(2) + "\n";
}

// ---------------------------------------------------------------------------
// studies
// ---------------------------------------------------------------------------

StudyResult run_particle_approx_study(const ScalarField& profile, std::span<const double> eps_list,
                                      double r_exponent, int n_probes) {
    if (eps_list.empty()) throw std::invalid_argument("approx study: empty epsilon list");
    if (n_probes < 8) throw std::invalid_argument("approx study: need at least 8 probes");

    const ScalarField reference = i1_apply(profile, OperatorBackend::PvQuadrature);

    std::vector<ParticleSystem> systems;
    double lo = -std::numeric_limits<double>::infinity();
    double hi = std::numeric_limits<double>::infinity();
    for (double eps : eps_list) {
        systems.push_back(level_points(profile, eps, eps));
        const double r = std::pow(eps, r_exponent);
        lo = std::max(lo, systems.back().positions.front() + 2.0 * r);
        hi = std::min(hi, systems.back().positions.back() - 2.0 * r);
    }
    if (!(lo < hi)) throw std::runtime_error("approx study: probe window is empty");

    std::vector<int> probe_nodes;
    {
        std::vector<int> candidates;
        for (int j = 0; j < profile.size(); ++j)
            if (profile.x(j) >= lo && profile.x(j) <= hi) candidates.push_back(j);
        if (static_cast<int>(candidates.size()) < n_probes)
            probe_nodes = candidates;
        else
            for (int k = 0; k < n_probes; ++k)
                probe_nodes.push_back(candidates[k * candidates.size() / n_probes]);
    }

    StudyResult res;
    double identity_worst = 0.0;
    for (std::size_t e = 0; e < eps_list.size(); ++e) {
        const auto t0 = std::chrono::steady_clock::now();
        const double eps = eps_list[e];
        const double r = std::pow(eps, r_exponent);
        const ParticleSystem& ps = systems[e];
        double err = 0.0;
        for (int j : probe_nodes) {
            const double xbar = profile.x(j);
            const double near =
                ps.positions[nearest_particle_index(ps.positions, xbar)];
            if (std::abs(xbar - near) < 0.5 * eps) continue;  // stay off the particles
            const double truncated = particle_sum_truncated(ps, xbar, r);
            err = std::max(err, std::abs(truncated - reference.values[j]));
            if (std::abs(xbar - near) < r) {
                const double full = particle_sum_full(ps, xbar);
                const double window = short_window_sum(ps, xbar, r);
                identity_worst = std::max(identity_worst, std::abs(truncated + window - full));
            }
        }
        ConvergenceRow row;
        row.epsilon = eps;
        row.delta = eps;
        row.sup_error = err;
        row.wall_time_s = wall_seconds(t0);
        res.table.rows.push_back(row);
    }

    res.gates.add("error-strictly-decreasing", res.table.strictly_decreasing_error() ? 1.0 : 0.0,
                  1.0, res.table.strictly_decreasing_error());
    for (std::size_t e = 1; e < res.table.rows.size(); ++e) {
        const double ratio = res.table.rows[e - 1].sup_error /
                             std::max(res.table.rows[e].sup_error, 1e-300);
        res.gates.add("error-ratio-step-" + std::to_string(e), ratio, 2.6,
                      ratio >= 1.6 && ratio <= 2.6);
    }
    res.gates.check_leq("split-identity-max", identity_worst, 1e-12);
    return res;
}

StudyResult run_reconstruction_study(const ScalarField& profile,
                                     std::span<const std::pair<double, double>> eps_delta,
                                     const LayerProfile& layer) {
    if (eps_delta.empty()) throw std::invalid_argument("reconstruction study: empty list");
    StudyResult res;
    for (const auto& [eps, delta] : eps_delta) {
        const auto t0 = std::chrono::steady_clock::now();
        const ParticleSystem ps = level_points(profile, eps, delta);
        const ScalarField rec = reconstruct(ps, layer, profile.grid);

        double err_grid = 0.0;
        for (int j = 0; j < profile.size(); ++j)
            err_grid = std::max(err_grid, std::abs(rec.values[j] - profile.values[j]));

        const double width = eps * delta;
        auto rec_at = [&](double x) {
            double acc = ps.base_level;
            for (double xi : ps.positions) acc += eps * layer.value((x - xi) / width);
            return acc;
        };
        double err_fine = err_grid;
        const double h = profile.grid.h();
        for (int j = 0; j < profile.size() - 1; ++j) {
            for (int k = 1; k < 10; ++k) {
                const double x = profile.x(j) + k * h / 10.0;
                err_fine = std::max(err_fine, std::abs(rec_at(x) - field_value(profile, x)));
            }
        }

        ConvergenceRow row;
        row.epsilon = eps;
        row.delta = delta;
        row.sup_error = err_grid;
        row.wall_time_s = wall_seconds(t0);
        res.table.rows.push_back(row);
        const double ratio = err_fine / std::max(err_grid, 1e-300);
        res.gates.check_leq("uniformity-ratio-eps-" + format_double(eps), ratio, 2.0);
    }
    res.gates.add("error-strictly-decreasing", res.table.strictly_decreasing_error() ? 1.0 : 0.0,
                  1.0, res.table.strictly_decreasing_error());
    return res;
}

StudyResult run_multiscale_convergence(const ScalarField& u0, std::span<const double> eps_list,
                                       const DeltaRule& rule, double T, const Interval& window,
                                       const MultiscaleOptions& opt) {
    if (eps_list.empty()) throw std::invalid_argument("multiscale study: empty epsilon list");
    if (!(u0.grid == opt.grid))
        throw std::invalid_argument("multiscale study: u0 must be sampled on the study grid");
    if (!(opt.c0 > 0.0)) throw std::invalid_argument("multiscale study: c0 must be positive");

    const MacroRunResult ref = macro_run(macro_init(u0, opt.c0), T, {});

    StudyResult res;
    const double inf_u = u0.left_limit, sup_u = u0.right_limit;
    for (double eps : eps_list) {
        const auto t0 = std::chrono::steady_clock::now();
        const double delta = rule(eps);
        (void)level_points(u0, eps, delta);  // rejects configurations with an empty system

        MicroState s0 = micro_init(u0, eps, delta);
        const double bound = std::min(micro_dt_stiff(s0, opt.potential), micro_dt_transport(s0));
        const long est = static_cast<long>(std::ceil(T / bound));
        if (est > opt.max_steps)
            throw std::runtime_error(
                "multiscale study: eps " + format_double(eps) + " needs " + std::to_string(est) +
                " steps at the CFL bound dt = " + format_double(bound) +
                "; feasible dt budget is " + format_double(T / double(opt.max_steps)));

        MicroOptions mopt;
        mopt.backend = opt.micro_backend;
        const MicroRunResult run = micro_run(s0, opt.potential, T, {}, mopt);

        ConvergenceRow row;
        row.epsilon = eps;
        row.delta = delta;
        row.sup_error = sup_distance(run.final_state.u, ref.final_state.u, window);
        row.wall_time_s = wall_seconds(t0);
        row.dt_used = run.dt_used;
        row.cfl_bound = run.cfl_bound;
        res.table.rows.push_back(row);

        // comparison brackets eps*k1 <= u <= eps*k2 and monotonicity at T
        const double k1 = std::floor(inf_u / eps + 1e-9);
        const double k2 = std::ceil(sup_u / eps - 1e-9);
        double worst = 0.0;
        for (double v : run.final_state.u.values)
            worst = std::max(worst, std::max(eps * k1 - v, v - eps * k2));
        res.gates.check_leq("micro-bracket-excess-eps-" + format_double(eps), worst, 1e-10);
        res.gates.add("micro-monotone-eps-" + format_double(eps), 0.0, 0.0,
                      is_non_decreasing(run.final_state.u, 1e-9));

        const double edge_gap =
            std::max(std::abs(ref.final_state.u.values.front() - inf_u),
                     std::abs(ref.final_state.u.values.back() - sup_u));
        res.gates.check_leq("macro-edge-limits-eps-" + format_double(eps), edge_gap, 2.0 * eps);
    }
    res.gates.add("error-strictly-decreasing", res.table.strictly_decreasing_error() ? 1.0 : 0.0,
                  1.0, res.table.strictly_decreasing_error());
    return res;
}

DddVsMicroResult run_ddd_vs_micro(std::span<const double> y0, double eps, double delta, double T,
                                  const DddVsMicroOptions& opt) {
    if (y0.empty()) throw std::invalid_argument("ddd-vs-micro: empty initial positions");
    const std::size_t n = y0.size();
    const double c0 = opt.layer.c0;
    const double width = eps * delta;

    ScalarField u0 = sample_field(
        opt.grid,
        [&](double x) {
            double acc = 0.0;
            for (double y : y0) acc += eps * opt.layer.value((x - eps * y) / width);
            return acc;
        },
        0.0, eps * static_cast<double>(n), 1.0);

    std::vector<double> levels(n);
    for (std::size_t i = 0; i < n; ++i) levels[i] = eps * (static_cast<double>(i) + 0.5);

    std::vector<double> taus(opt.n_snapshots);
    std::vector<double> micro_times(opt.n_snapshots);
    for (int k = 0; k < opt.n_snapshots; ++k) {
        taus[k] = T * (k + 1) / opt.n_snapshots;
        micro_times[k] = eps * taus[k];
    }

    MicroOptions mopt;
    mopt.backend = opt.micro_backend;
    MicroState s0 = micro_init(u0, eps, delta);
    const MicroRunResult run = micro_run(s0, opt.potential, eps * T, micro_times, mopt);

    DddVsMicroResult res;
    const std::vector<double> x_start = extract_levels(u0, levels);
    std::vector<double> y_start(n);
    for (std::size_t i = 0; i < n; ++i) y_start[i] = x_start[i] / eps;

    res.micro_levels.times.push_back(0.0);
    res.micro_levels.positions.push_back(y_start);
    for (int k = 0; k < opt.n_snapshots; ++k) {
        const std::vector<double> xs = extract_levels(run.snapshots[k].u, levels);
        std::vector<double> ys(n);
        for (std::size_t i = 0; i < n; ++i) ys[i] = xs[i] / eps;
        res.micro_levels.times.push_back(taus[k]);
        res.micro_levels.positions.push_back(ys);
    }

    const double min_gap = [&] {
        double g = std::numeric_limits<double>::infinity();
        for (std::size_t i = 1; i < n; ++i) g = std::min(g, y_start[i] - y_start[i - 1]);
        return g;
    }();
    const double ddd_dt =
        n > 1 ? std::min(1e-3, 0.05 * min_gap * min_gap * std::numbers::pi / c0) : 1e-3;
    res.ddd = ddd_integrate(y_start, c0, ddd_dt, T, taus);

    double dev = 0.0;
    for (std::size_t row = 0; row < res.micro_levels.times.size(); ++row)
        for (std::size_t i = 0; i < n; ++i)
            dev = std::max(dev, std::abs(res.micro_levels.positions[row][i] -
                                         res.ddd.positions[row][i]));
    res.max_deviation = dev;

    double span = 0.0;
    for (std::size_t i = 0; i < n; ++i)
        span = std::max(span, std::abs(res.ddd.positions.back()[i] - y_start[i]));
    res.gates.check_leq("max-trajectory-deviation", dev, 0.15 * std::max(1.0, span));
    if (n == 2) {
        const double sep_micro = res.micro_levels.positions.back()[1] -
                                 res.micro_levels.positions.back()[0];
        const double s0_sep = y_start[1] - y_start[0];
        const double sep_exact = std::sqrt(s0_sep * s0_sep + 4.0 * c0 * T / std::numbers::pi);
        res.gates.check_leq("two-body-separation-rel-err",
                            std::abs(sep_micro - sep_exact) / sep_exact, 0.10);
    }
    if (n % 2 == 1) {
        const std::size_t mid = n / 2;
        double drift = 0.0;
        for (std::size_t row = 0; row < res.micro_levels.times.size(); ++row)
            drift = std::max(drift,
                             std::abs(res.micro_levels.positions[row][mid] - y_start[mid]));
        // symmetric data keep the middle level pinned up to grid tolerance
        res.gates.check_leq("middle-level-drift", drift, 2.0 * opt.grid.h() / eps);
    }
    return res;
}

OrowanResult run_orowan_check(const ScalarField& u0, double c0, double T, double track_eps) {
    if (!(T > 0.0)) throw std::invalid_argument("orowan check: T must be positive");
    const double inf_u = u0.left_limit, sup_u = u0.right_limit;
    std::vector<double> levels;
    for (long i = 1;; ++i) {
        const double level = inf_u + track_eps * static_cast<double>(i);
        if (level > sup_u - 2.0 * track_eps) break;
        if (level >= inf_u + 2.0 * track_eps) levels.push_back(level);
    }
    if (levels.empty()) throw std::invalid_argument("orowan check: no trackable levels");

    const std::vector<double> times{0.25 * T, 0.5 * T, 0.75 * T};
    const MacroRunResult run = macro_run(macro_init(u0, c0), T, times);

    const auto x1 = extract_levels(run.snapshots[0].u, levels);
    const auto x2 = extract_levels(run.snapshots[1].u, levels);
    const auto x3 = extract_levels(run.snapshots[2].u, levels);
    const ScalarField stress = i1_apply(run.snapshots[1].u, OperatorBackend::PvQuadrature);

    std::vector<double> devs;
    for (std::size_t i = 0; i < levels.size(); ++i) {
        const double v = (x3[i] - x1[i]) / (times[2] - times[0]);
        const double predicted = -c0 * field_value(stress, x2[i]);
        devs.push_back(std::abs(v - predicted) / std::max(std::abs(predicted), 1e-12));
    }

    OrowanResult res;
    res.median_rel_deviation = median(devs);
    res.gates.check_leq("velocity-vs-stress-median-rel-dev", res.median_rel_deviation, 0.10);

    // doubling c0 doubles the early velocities; second-order one-sided velocity
    // estimate at t = 0 to suppress deceleration bias over the window
    const double dt_v = T / 64.0;
    const std::vector<double> two{dt_v};
    const auto base = macro_run(macro_init(u0, c0), 2.0 * dt_v, two);
    const auto doubled = macro_run(macro_init(u0, 2.0 * c0), 2.0 * dt_v, two);
    const auto xs0 = extract_levels(u0, levels);
    std::vector<double> ratios;
    {
        const auto b1 = extract_levels(base.snapshots[0].u, levels);
        const auto b2 = extract_levels(base.final_state.u, levels);
        const auto d1 = extract_levels(doubled.snapshots[0].u, levels);
        const auto d2 = extract_levels(doubled.final_state.u, levels);
        for (std::size_t i = 0; i < levels.size(); ++i) {
            const double v1 = (4.0 * b1[i] - b2[i] - 3.0 * xs0[i]) / (2.0 * dt_v);
            const double v2 = (4.0 * d1[i] - d2[i] - 3.0 * xs0[i]) / (2.0 * dt_v);
            if (std::abs(v1) > 1e-9) ratios.push_back(v2 / v1);
        }
    }
    res.doubling_ratio = median(ratios);
    res.gates.check_leq("c0-doubling-ratio-deviation", std::abs(res.doubling_ratio - 2.0), 0.04);
    return res;
}

void write_report(const ConvergenceReport& report, const std::string& path) {
    write_convergence_csv(report, path);
}
void write_report(const ValidationReport& report, const std::string& path) {
    write_validation_csv(report, path);
}

}  // namespace orowan
