// mixlab — a numerical laboratory for shear-layer mixing diagnostics.
//
// Subcommands:
//   run        integrate one configuration, write CSV series + verdicts
//   sweep      run the same configuration across several channel widths L
//   oracle     brute-force campaign on the interpolation inequality
//   reference  closed-form rarefaction diagnostics and sharp constant
//   report     re-verdict a finished run directory
//   plot       SVG plots (diagnostic ratios, coarse profile vs rarefaction)
//
// Exit codes: 0 success, 1 verdict/inequality failure or aborted run,
// 2 configuration errors. Diagnostics go to stderr, data to files.

#include <CLI11.hpp>

#include <iostream>
#include <string>
#include <variant>
#include <vector>

#include "mixlab/harness.hpp"

namespace {

struct Overrides {
    CLI::App* app = nullptr;
    double U = 0, L = 0, H = 0, T = 0, cfl = 0, eps = 0, delta = 0, chi = 0, interval = 0;
    int ny = 0, nz = 0, wavenumber = 0, snapshot_every = 0, threads = 0;
    std::string dt, output_dir;
    std::uint64_t seed = 0;

    void attach(CLI::App* a) {
        app = a;
        a->add_option("--U", U, "velocity jump");
        a->add_option("--L", L, "channel width (Reynolds parameter)");
        a->add_option("--H", H, "vertical truncation half-height");
        a->add_option("--T", T, "final time");
        a->add_option("--Ny", ny, "y resolution (even)");
        a->add_option("--Nz", nz, "z resolution");
        a->add_option("--dt", dt, "time step, or 'adaptive'");
        a->add_option("--cfl-number", cfl, "adaptive step safety factor");
        a->add_option("--epsilon", eps, "perturbation amplitude");
        a->add_option("--delta", delta, "sheet half-width");
        a->add_option("--wavenumber", wavenumber, "perturbation harmonic");
        a->add_option("--chi-width", chi, "perturbation envelope half-width");
        a->add_option("--sample-interval", interval, "diagnostic sampling interval");
        a->add_option("--snapshot-every", snapshot_every, "snapshot every N samples (0 = off)");
        a->add_option("--output-dir", output_dir, "output directory");
        a->add_option("--seed", seed, "configuration seed (recorded in outputs)");
        a->add_option("--threads", threads, "worker threads inside one run");
    }

    void apply(mixlab::RunConfig& c) const {
        auto set = [this](const char* name) { return app->count(name) > 0; };
        if (set("--U")) c.params.U = U;
        if (set("--L")) c.params.L = L;
        if (set("--H")) c.params.H = H;
        if (set("--T")) c.params.T = T;
        if (set("--Ny")) c.params.Ny = ny;
        if (set("--Nz")) c.params.Nz = nz;
        if (set("--cfl-number")) c.params.cfl_number = cfl;
        if (set("--dt")) {
            if (dt == "adaptive") {
                c.params.dt = 0.0;
            } else {
                char* end = nullptr;
                c.params.dt = std::strtod(dt.c_str(), &end);
                if (!end || *end != '\0' || !(c.params.dt > 0.0))
                    throw mixlab::ConfigError("--dt: expected a positive number or 'adaptive'");
            }
        }
        if (set("--epsilon")) c.initial_data.epsilon = eps;
        if (set("--delta")) c.initial_data.delta = delta;
        if (set("--wavenumber")) c.initial_data.wavenumber = wavenumber;
        if (set("--chi-width")) c.initial_data.chi_width = chi;
        if (set("--sample-interval")) c.sample_interval = interval;
        if (set("--snapshot-every")) c.snapshot_every = snapshot_every;
        if (set("--output-dir")) c.output_dir = output_dir;
        if (set("--seed")) c.seed = seed;
        if (set("--threads")) c.threads = threads;
    }
};

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"mixlab: shear-layer mixing diagnostics laboratory"};
    app.require_subcommand(1);

    std::string config_path;
    Overrides run_ov, sweep_ov;

    CLI::App* c_run = app.add_subcommand("run", "integrate one configuration");
    c_run->add_option("--config", config_path, "JSON configuration file");
    run_ov.attach(c_run);

    CLI::App* c_sweep = app.add_subcommand("sweep", "run a sweep over channel widths");
    c_sweep->add_option("--config", config_path, "JSON configuration file (with a sweep block)");
    std::vector<double> sweep_L;
    int sweep_par = 0;
    c_sweep->add_option("--L-values", sweep_L, "channel widths to sweep");
    c_sweep->add_option("--parallelism", sweep_par, "concurrent runs");
    sweep_ov.attach(c_sweep);

    CLI::App* c_oracle = app.add_subcommand("oracle", "interpolation-inequality campaign");
    mixlab::OracleOptions oracle;
    c_oracle->add_option("--seeds", oracle.seeds, "number of random profiles");
    c_oracle->add_option("--breakpoints", oracle.breakpoints, "steps per random profile");
    c_oracle->add_option("--hill-breakpoints", oracle.hill_breakpoints, "steps for the search");
    c_oracle->add_option("--budget", oracle.hill_budget, "hill-climbing iterations");
    c_oracle->add_option("--seed", oracle.seed0, "base seed");
    c_oracle->add_option("--U", oracle.U, "velocity jump");
    c_oracle->add_option("--output-dir", oracle.out_dir, "output directory");

    CLI::App* c_ref = app.add_subcommand("reference", "closed-form reference diagnostics");
    double ref_U = 1.0;
    std::vector<double> ref_t{1.0};
    std::string ref_out;
    c_ref->add_option("--U", ref_U, "velocity jump");
    c_ref->add_option("--t", ref_t, "times to tabulate");
    c_ref->add_option("--out", ref_out, "output CSV (default: stdout)");

    CLI::App* c_report = app.add_subcommand("report", "re-verdict a finished run directory");
    std::string report_dir;
    c_report->add_option("dir", report_dir, "run directory")->required();

    CLI::App* c_plot = app.add_subcommand("plot", "plots for a finished run directory");
    std::string plot_dir;
    c_plot->add_option("dir", plot_dir, "run directory")->required();

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand(c_run)) {
            mixlab::RunConfig cfg;
            if (!config_path.empty()) {
                auto loaded = mixlab::load_config(config_path);
                if (std::holds_alternative<mixlab::SweepConfig>(loaded))
                    throw mixlab::ConfigError("run: config contains a sweep block; use `sweep`");
                cfg = std::get<mixlab::RunConfig>(loaded);
            }
            run_ov.apply(cfg);
            cfg.validate();
            return mixlab::cmd_run(cfg);
        }
        if (app.got_subcommand(c_sweep)) {
            mixlab::SweepConfig sw;
            if (!config_path.empty()) {
                auto loaded = mixlab::load_config(config_path);
                if (std::holds_alternative<mixlab::SweepConfig>(loaded))
                    sw = std::get<mixlab::SweepConfig>(loaded);
                else
                    sw.base = std::get<mixlab::RunConfig>(loaded);
            }
            sweep_ov.apply(sw.base);
            if (c_sweep->count("--L-values")) sw.L_values = sweep_L;
            if (c_sweep->count("--parallelism")) sw.parallelism = sweep_par;
            if (sw.L_values.empty()) sw.L_values = {2.0, 4.0, 8.0};
            sw.validate();
            return mixlab::cmd_sweep(sw);
        }
        if (app.got_subcommand(c_oracle)) return mixlab::cmd_oracle(oracle);
        if (app.got_subcommand(c_ref)) return mixlab::cmd_reference(ref_U, ref_t, ref_out);
        if (app.got_subcommand(c_report)) return mixlab::cmd_report(report_dir);
        if (app.got_subcommand(c_plot)) return mixlab::cmd_plot(plot_dir);
    } catch (const mixlab::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 2;
}
