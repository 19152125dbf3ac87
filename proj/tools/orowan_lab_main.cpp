// orowan-lab: dislocation-dynamics workbench.
//
//   orowan-lab <layer|c0|micro|macro|ddd|approx|reconstruct|converge|orowan>
//              [--config file.json] [--out dir]
//
// Outputs are CSV tables plus JSON manifests under --out; the exit code is 0
// iff every gate of the invoked study passes.

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>

#include "orowan/harness.hpp"
#include "orowan/io.hpp"
#include "orowan/numerics.hpp"

using namespace orowan;
namespace fs = std::filesystem;

namespace {

struct Context {
    SimulationConfig cfg;
    fs::path out;

    std::string path(const std::string& name) const { return (out / name).string(); }
};

void write_json(const nlohmann::ordered_json& j, const std::string& path) {
    std::ofstream f(path);
    f << j.dump(2) << '\n';
}

int finish(const Context& ctx, const std::string& name, const ValidationReport& gates) {
    write_validation_csv(gates, ctx.path(name + "_gates.csv"));
    const bool ok = gates.all_pass();
    std::printf("%s: %s (%zu gate%s) -> %s\n", name.c_str(), ok ? "PASS" : "FAIL",
                gates.rows.size(), gates.rows.size() == 1 ? "" : "s",
                ctx.out.string().c_str());
    for (const auto& row : gates.rows)
        if (!row.pass)
            std::printf("  failed: %s measured %g threshold %g\n", row.label.c_str(), row.measured,
                        row.threshold);
    return ok ? 0 : 1;
}

double resolve_c0(const Context& ctx, const LayerProfile* layer = nullptr) {
    if (ctx.cfg.c0_override) return *ctx.cfg.c0_override;
    if (layer) return layer->c0;
    return solve_layer_profile(ctx.cfg.potential, ctx.cfg.layer_grid).c0;
}

std::vector<double> eps_or(const Context& ctx, std::initializer_list<double> fallback) {
    return ctx.cfg.epsilons.empty() ? std::vector<double>(fallback) : ctx.cfg.epsilons;
}

int cmd_layer(const Context& ctx) {
    LayerProfile layer = solve_layer_profile(ctx.cfg.potential, ctx.cfg.layer_grid);
    CorrectorProfile psi = solve_corrector(ctx.cfg.potential, layer, ctx.cfg.corrector_stress);

    write_field_csv(layer.field, ctx.path("phi.csv"));
    write_field_csv(central_derivative(layer.field), ctx.path("phi_prime.csv"));
    write_field_csv(psi.field, ctx.path("psi.csv"));
    write_json({{"alpha", layer.alpha},
                {"c0", layer.c0},
                {"K1", layer.tail_constant_K1},
                {"residual", layer.residual},
                {"corrector_stress", psi.stress_L},
                {"corrector_residual", psi.residual},
                {"K2", psi.K2},
                {"K3", psi.K3}},
               ctx.path("layer_summary.json"));

    ValidationReport gates = verify_layer_tails(layer);
    gates.check_leq("layer-residual", layer.residual, 1e-6);
    gates.check_leq("corrector-residual", psi.residual, 1e-6);
    return finish(ctx, "layer", gates);
}

int cmd_c0(const Context& ctx) {
    const Grid1D& g = ctx.cfg.layer_grid;
    LayerProfile coarse = solve_layer_profile(ctx.cfg.potential, g);
    LayerProfile fine = solve_layer_profile(ctx.cfg.potential, Grid1D(0.0, g.half_width, 2 * g.n));
    const double rel = std::abs(fine.c0 - coarse.c0) / coarse.c0;
    write_json({{"c0", coarse.c0},
                {"c0_refined", fine.c0},
                {"rel_change_on_refinement", rel},
                {"alpha", coarse.alpha}},
               ctx.path("c0.json"));
    ValidationReport gates;
    gates.check_leq("c0-refinement-rel-change", rel, 1e-4);
    return finish(ctx, "c0", gates);
}

nlohmann::ordered_json snapshot_manifest(const Context& ctx, double c0,
                                         const std::vector<double>& times,
                                         const std::vector<std::string>& files) {
    return {{"epsilon", ctx.cfg.epsilon}, {"delta", ctx.cfg.delta}, {"c0", c0},
            {"times", times},            {"files", files}};
}

int cmd_micro(const Context& ctx) {
    const double c0 = resolve_c0(ctx);
    ScalarField u0 = sample_u0(ctx.cfg.u0, ctx.cfg.grid);
    MicroState s0 = micro_init(u0, ctx.cfg.epsilon, ctx.cfg.delta);
    MicroOptions opt;
    opt.backend = ctx.cfg.micro_backend;
    std::vector<double> times = ctx.cfg.snapshot_times;
    if (times.empty()) times = {0.5 * ctx.cfg.T, ctx.cfg.T};
    MicroRunResult run = micro_run(s0, ctx.cfg.potential, ctx.cfg.T, times, opt);

    ValidationReport gates;
    std::vector<std::string> files;
    for (std::size_t k = 0; k < run.snapshots.size(); ++k) {
        const std::string name = "micro_t" + std::to_string(k) + ".csv";
        write_field_csv(run.snapshots[k].u, ctx.path(name));
        files.push_back(name);
        gates.add("monotone-t" + std::to_string(k), 0.0, 0.0,
                  is_non_decreasing(run.snapshots[k].u, 1e-9));
    }
    write_json(snapshot_manifest(ctx, c0, times, files), ctx.path("micro_manifest.json"));
    gates.check_leq("dt-used-vs-cfl", run.dt_used, run.cfl_bound * (1.0 + 1e-12));
    return finish(ctx, "micro", gates);
}

int cmd_macro(const Context& ctx) {
    const double c0 = resolve_c0(ctx);
    ScalarField u0 = sample_u0(ctx.cfg.u0, ctx.cfg.grid);
    std::vector<double> times = ctx.cfg.snapshot_times;
    if (times.empty()) times = {0.5 * ctx.cfg.T, ctx.cfg.T};
    MacroRunResult run = macro_run(macro_init(u0, c0), ctx.cfg.T, times);

    ValidationReport gates;
    std::vector<std::string> files;
    for (std::size_t k = 0; k < run.snapshots.size(); ++k) {
        const std::string uname = "macro_u_t" + std::to_string(k) + ".csv";
        const std::string fname = "macro_f_t" + std::to_string(k) + ".csv";
        write_field_csv(run.snapshots[k].u, ctx.path(uname));
        write_field_csv(run.snapshots[k].f, ctx.path(fname));
        files.push_back(uname);
        files.push_back(fname);
        gates.add("monotone-t" + std::to_string(k), 0.0, 0.0,
                  is_non_decreasing(run.snapshots[k].u, 1e-12));
    }
    write_json(snapshot_manifest(ctx, c0, times, files), ctx.path("macro_manifest.json"));
    gates.check_leq("mass-drift", run.mass_drift, 1e-3);
    const double range = ctx.cfg.u0.hi - ctx.cfg.u0.lo;
    gates.check_leq("edge-gap",
                    std::max(std::abs(run.final_state.u.values.front() - ctx.cfg.u0.lo),
                             std::abs(run.final_state.u.values.back() - ctx.cfg.u0.hi)),
                    1e-3 * range);
    return finish(ctx, "macro", gates);
}

int cmd_ddd(const Context& ctx) {
    const double c0 = resolve_c0(ctx);
    DddTrajectory tr =
        ddd_integrate(ctx.cfg.ddd_positions, c0, ctx.cfg.ddd_dt, ctx.cfg.T, ctx.cfg.snapshot_times);
    write_trajectory_csv(tr, ctx.path("trajectory.csv"));
    write_json({{"c0", c0}, {"dt", ctx.cfg.ddd_dt}, {"T", ctx.cfg.T}},
               ctx.path("ddd_manifest.json"));

    ValidationReport gates;
    double com0 = 0.0;
    for (double y : tr.positions.front()) com0 += y;
    double drift = 0.0;
    for (const auto& row : tr.positions) {
        double com = 0.0;
        for (double y : row) com += y;
        drift = std::max(drift, std::abs(com - com0));
    }
    gates.check_leq("center-of-mass-drift", drift, 1e-10);
    gates.add("ordering-preserved", 0.0, 0.0, true);  // ddd_integrate throws otherwise
    return finish(ctx, "ddd", gates);
}

int cmd_approx(const Context& ctx) {
    ScalarField profile = sample_u0(ctx.cfg.u0, ctx.cfg.grid);
    const std::vector<double> eps = eps_or(ctx, {4e-2, 1e-2, 2.5e-3});
    StudyResult res = run_particle_approx_study(profile, eps, ctx.cfg.r_exponent, ctx.cfg.n_probes);
    write_convergence_csv(res.table, ctx.path("approx_report.csv"));
    return finish(ctx, "approx", res.gates);
}

int cmd_reconstruct(const Context& ctx) {
    ScalarField profile = sample_u0(ctx.cfg.u0, ctx.cfg.grid);
    LayerProfile layer = solve_layer_profile(ctx.cfg.potential, ctx.cfg.layer_grid);
    const std::vector<double> eps = eps_or(ctx, {0.1, 0.05, 0.025});
    std::vector<std::pair<double, double>> pairs;
    for (double e : eps) pairs.emplace_back(e, ctx.cfg.delta_rule(e));
    StudyResult res = run_reconstruction_study(profile, pairs, layer);
    write_convergence_csv(res.table, ctx.path("reconstruct_report.csv"));
    return finish(ctx, "reconstruct", res.gates);
}

int cmd_converge(const Context& ctx) {
    LayerProfile layer = solve_layer_profile(ctx.cfg.potential, ctx.cfg.layer_grid);
    MultiscaleOptions opt;
    opt.grid = ctx.cfg.grid;
    opt.potential = ctx.cfg.potential;
    opt.micro_backend = ctx.cfg.micro_backend;
    opt.max_steps = ctx.cfg.max_steps;
    opt.c0 = ctx.cfg.c0_override.value_or(layer.c0);
    ScalarField u0 = sample_u0(ctx.cfg.u0, opt.grid);
    const std::vector<double> eps = eps_or(ctx, {0.2, 0.1, 0.05});
    StudyResult res = run_multiscale_convergence(u0, eps, ctx.cfg.delta_rule, ctx.cfg.T,
                                                 ctx.cfg.window, opt);
    write_convergence_csv(res.table, ctx.path("converge_report.csv"));
    return finish(ctx, "converge", res.gates);
}

int cmd_orowan(const Context& ctx) {
    const double c0 = resolve_c0(ctx);
    ScalarField u0 = sample_u0(ctx.cfg.u0, ctx.cfg.grid);
    OrowanResult res = run_orowan_check(u0, c0, ctx.cfg.T);
    write_json({{"median_rel_deviation", res.median_rel_deviation},
                {"doubling_ratio", res.doubling_ratio},
                {"c0", c0}},
               ctx.path("orowan_summary.json"));
    return finish(ctx, "orowan", res.gates);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"orowan-lab: layers, dislocation particles and multiscale runs"};
    app.require_subcommand(1);
    app.fallthrough();  // --config/--out may follow the subcommand

    std::string config_path;
    std::string out_dir = "out";
    app.add_option("--config", config_path, "JSON configuration file")->check(CLI::ExistingFile);
    app.add_option("--out", out_dir, "output directory (created if missing)");

    int (*handler)(const Context&) = nullptr;
    app.add_subcommand("layer", "solve the transition layer and corrector")
        ->callback([&] { handler = cmd_layer; });
    app.add_subcommand("c0", "mobility constant with a refinement check")
        ->callback([&] { handler = cmd_c0; });
    app.add_subcommand("micro", "rescaled phase-field evolution")
        ->callback([&] { handler = cmd_micro; });
    app.add_subcommand("macro", "density transport evolution")
        ->callback([&] { handler = cmd_macro; });
    app.add_subcommand("ddd", "discrete dislocation ODE system")
        ->callback([&] { handler = cmd_ddd; });
    app.add_subcommand("approx", "truncated particle-sum approximation study")
        ->callback([&] { handler = cmd_approx; });
    app.add_subcommand("reconstruct", "layered reconstruction study")
        ->callback([&] { handler = cmd_reconstruct; });
    app.add_subcommand("converge", "micro-to-macro convergence study")
        ->callback([&] { handler = cmd_converge; });
    app.add_subcommand("orowan", "level-point velocity vs stress check")
        ->callback([&] { handler = cmd_orowan; });

    CLI11_PARSE(app, argc, argv);

    try {
        Context ctx;
        if (!config_path.empty()) ctx.cfg = load_config(config_path);
        ctx.out = out_dir;
        fs::create_directories(ctx.out);
        // echo the effective configuration next to the outputs
        std::ofstream echo(ctx.path("config_used.json"));
        echo << config_to_json(ctx.cfg);
        return handler(ctx);
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 2;
    }
}
