#pragma once

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "mixlab/config.hpp"
#include "mixlab/io.hpp"
#include "mixlab/monotone_profile.hpp"
#include "mixlab/run.hpp"

namespace mixlab {

inline constexpr double kRatioGuard = 1e-9;  // oracle inequality slack

inline std::string output_root() {
    const char* env = std::getenv("MIXLAB_OUTPUT_ROOT");
    return env && *env ? std::string(env) : std::string(".");
}

inline std::string resolve_output_dir(const std::string& dir) {
    std::filesystem::path p(dir);
    if (p.is_absolute()) return p.string();
    return (std::filesystem::path(output_root()) / p).string();
}

inline std::string verdict_table(const std::vector<BoundVerdict>& vs) {
    std::string out;
    char line[200];
    std::snprintf(line, sizeof(line), "  %-12s %12s %12s %10s %10s  %s\n", "quantity",
                  "observed", "bound", "tol", "margin", "verdict");
    out += line;
    for (const auto& v : vs) {
        std::snprintf(line, sizeof(line), "  %-12s %12.6g %12.6g %10.3g %10.3g  %s\n",
                      v.quantity.c_str(), v.observed, v.bound, v.tolerance, v.margin,
                      v.pass ? "pass" : "FAIL");
        out += line;
    }
    return out;
}

class SnapshotSink : public DiagnosticsSink {
public:
    SnapshotSink(std::string dir, double U, std::uint64_t config_hash)
        : dir_(std::move(dir)), U_(U), hash_(config_hash) {}
    void on_sample_state(const FlowState& s, int sample_index) override {
        write_snapshot(dir_, sample_index, s.omega, s.t, U_, hash_);
    }

private:
    std::string dir_;
    double U_;
    std::uint64_t hash_;
};

struct RunArtifacts {
    RunSummary summary;
    std::vector<BoundVerdict> verdicts;
    std::string dir;
    bool verdicts_pass = false;
    bool ok() const { return summary.accepted && verdicts_pass; }
};

inline nlohmann::json summary_to_json(const RunSummary& s, const RunConfig& cfg) {
    return nlohmann::json{{"schema_version", kSchemaVersion},
                          {"accepted", s.accepted},
                          {"abort_reason", s.abort_reason},
                          {"steps", s.steps},
                          {"wall_seconds", s.wall_seconds},
                          {"sample_interval", s.sample_interval},
                          {"samples", s.series.size()},
                          {"max_abs_m", s.max_abs_m},
                          {"max_circulation_drift", s.max_circulation_drift},
                          {"min_omega", s.min_omega},
                          {"omega_scale", s.omega_scale},
                          {"max_interp_violation", s.max_interp_violation},
                          {"max_boundary_contamination", s.max_boundary_contamination},
                          {"res_energy_max", s.res_energy_max},
                          {"res_lwidth_max", s.res_lwidth_max},
                          {"positivity_warnings", s.positivity_warnings},
                          {"config", to_json(cfg)}};
}

// Runs one configuration and persists series.csv, summary.json,
// verdicts.json and config.json (plus snapshots) into its output directory.
inline RunArtifacts execute_run(const RunConfig& cfg, bool keep_final_state = false,
                                bool quiet = false) {
    cfg.validate();
    RunArtifacts art;
    art.dir = resolve_output_dir(cfg.output_dir);
    std::filesystem::create_directories(art.dir);

    const std::uint64_t cfg_hash = fnv1a_hash(to_json(cfg).dump());
    SnapshotSink sink(art.dir + "/snapshots", cfg.params.U, cfg_hash);

    RunOptions opt = cfg.options();
    opt.keep_final_state = keep_final_state;
    if (!quiet)
        std::cerr << "[run] L=" << cfg.params.L << " U=" << cfg.params.U
                  << " T=" << cfg.params.T << " grid=" << cfg.params.Ny << "x" << cfg.params.Nz
                  << " -> " << art.dir << "\n";
    art.summary = run(cfg.params, cfg.initial_data, opt, &sink);

    write_series_csv(art.dir + "/series.csv", art.summary.series);
    write_json_file(art.dir + "/config.json", to_json(cfg));
    write_json_file(art.dir + "/summary.json", summary_to_json(art.summary, cfg));

    std::string verdict_note;
    if (art.summary.accepted) {
        try {
            art.verdicts = verify_theorem(art.summary.series, cfg.params.U, cfg.params.H,
                                          cfg.verdicts);
            art.verdicts_pass = all_pass(art.verdicts);
        } catch (const std::invalid_argument& e) {
            verdict_note = e.what();  // e.g. too few samples in the tail window
            art.verdicts_pass = false;
        }
        nlohmann::json vj = {{"schema_version", kSchemaVersion},
                             {"U", cfg.params.U},
                             {"L", cfg.params.L},
                             {"H", cfg.params.H},
                             {"T", cfg.params.T},
                             {"all_pass", art.verdicts_pass},
                             {"note", verdict_note},
                             {"verdicts", verdicts_to_json(art.verdicts)}};
        write_json_file(art.dir + "/verdicts.json", vj);
    }
    if (!quiet) {
        if (!art.summary.accepted)
            std::cerr << "[run] ABORTED: " << art.summary.abort_reason << "\n";
        else if (!verdict_note.empty())
            std::cerr << "[run] verdicts not evaluated: " << verdict_note << "\n";
        else
            std::cerr << verdict_table(art.verdicts);
        std::cerr << "[run] steps=" << art.summary.steps << " wall=" << art.summary.wall_seconds
                  << "s samples=" << art.summary.series.size() << "\n";
    }
    return art;
}

inline int cmd_run(const RunConfig& cfg) {
    const RunArtifacts art = execute_run(cfg);
    return art.ok() ? 0 : 1;
}

inline int cmd_sweep(const SweepConfig& sw) {
    sw.validate();
    std::vector<RunConfig> cfgs = sw.expand();
    for (auto& c : cfgs) {
        char sub[32];
        std::snprintf(sub, sizeof(sub), "L_%g", c.params.L);
        c.output_dir = (std::filesystem::path(sw.base.output_dir) / sub).string();
        c.validate();
    }
    std::vector<RunArtifacts> arts(cfgs.size());
    std::vector<std::string> errors(cfgs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= cfgs.size()) return;
            try {
                arts[i] = execute_run(cfgs[i]);
            } catch (const std::exception& e) {
                errors[i] = e.what();
            }
        }
    };
    const int nw = std::min<std::size_t>(sw.parallelism, cfgs.size());
    std::vector<std::thread> pool;
    for (int w = 1; w < nw; ++w) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();

    bool ok = true;
    nlohmann::json combined = nlohmann::json::array();
    for (std::size_t i = 0; i < cfgs.size(); ++i) {
        if (!errors[i].empty()) {
            std::cerr << "[sweep] L=" << cfgs[i].params.L << " error: " << errors[i] << "\n";
            ok = false;
            continue;
        }
        std::cerr << "[sweep] L=" << cfgs[i].params.L
                  << (arts[i].ok() ? " all verdicts pass\n" : " VERDICT FAILURE\n");
        std::cerr << verdict_table(arts[i].verdicts);
        combined.push_back({{"L", cfgs[i].params.L},
                            {"accepted", arts[i].summary.accepted},
                            {"all_pass", arts[i].verdicts_pass},
                            {"verdicts", verdicts_to_json(arts[i].verdicts)}});
        ok = ok && arts[i].ok();
    }
    // ratio comparisons between consecutive L values; reported, not asserted
    nlohmann::json comparisons = nlohmann::json::array();
    for (std::size_t i = 0; i + 1 < cfgs.size(); ++i) {
        if (!errors[i].empty() || !errors[i + 1].empty()) continue;
        const ScaleComparison sc =
            scale_invariance_report(arts[i].summary.series, cfgs[i].params.L,
                                    arts[i + 1].summary.series, cfgs[i + 1].params.L,
                                    sw.base.params.U);
        comparisons.push_back({{"L_a", cfgs[i].params.L},
                               {"L_b", cfgs[i + 1].params.L},
                               {"max_diff_width", sc.max_diff_width},
                               {"max_diff_energy", sc.max_diff_energy},
                               {"max_diff_separation", sc.max_diff_separation},
                               {"compared_samples", sc.compared_samples}});
        std::cerr << "[sweep] rescaled-ratio differences L=" << cfgs[i].params.L << " vs L="
                  << cfgs[i + 1].params.L << ": width " << sc.max_diff_width << ", energy "
                  << sc.max_diff_energy << ", separation " << sc.max_diff_separation << "\n";
    }
    const std::string dir = resolve_output_dir(sw.base.output_dir);
    std::filesystem::create_directories(dir);
    write_json_file(dir + "/sweep_verdicts.json",
                    {{"schema_version", kSchemaVersion},
                     {"all_pass", ok},
                     {"runs", combined},
                     {"scale_comparisons", comparisons}});
    return ok ? 0 : 1;
}

struct OracleOptions {
    long seeds = 10000;
    int breakpoints = 16;
    int hill_breakpoints = 64;
    long hill_budget = 10000;
    std::uint64_t seed0 = 1;
    double U = 1.0;
    std::string out_dir = "oracle_out";
};

inline int cmd_oracle(const OracleOptions& o) {
    const FluxFunction flux = quadratic_flux(o.U);
    flux.validate();
    const std::string dir = resolve_output_dir(o.out_dir);
    std::filesystem::create_directories(dir);
    std::ofstream csv(dir + "/oracle.csv", std::ios::binary);
    if (!csv) throw std::runtime_error("cannot write oracle.csv");
    csv << "seed,ratio\n";
    double max_ratio = 0.0;
    std::uint64_t worst_seed = 0;
    for (long s = 0; s < o.seeds; ++s) {
        const std::uint64_t seed = o.seed0 + static_cast<std::uint64_t>(s);
        const MonotoneProfile p = random_monotone_profile(seed, o.breakpoints, o.U);
        const SideEvaluation ev = evaluate_sides(p, flux);
        csv << seed << ',' << format_double(ev.ratio) << "\n";
        if (ev.ratio > max_ratio) {
            max_ratio = ev.ratio;
            worst_seed = seed;
        }
    }
    const RatioSearchResult search =
        maximize_ratio(flux, o.hill_breakpoints, o.hill_budget, o.seed0);
    const bool violated = max_ratio > 1.0 + kRatioGuard || search.best_ratio > 1.0 + kRatioGuard;
    char line[256];
    std::snprintf(line, sizeof(line),
                  "oracle: seeds=%ld max_ratio=%.12f (seed %llu) hill_ratio=%.12f -> %s",
                  o.seeds, max_ratio, static_cast<unsigned long long>(worst_seed),
                  search.best_ratio,
                  violated ? "INEQUALITY VIOLATED" : "max ratio <= 1 (inequality holds)");
    std::cout << line << "\n";
    if (violated)
        std::cerr << "[oracle] VIOLATION: a monotone profile exceeded the sharp bound; "
                     "this would be a counterexample and is surfaced loudly\n";
    return violated ? 1 : 0;
}

inline int cmd_reference(double U, const std::vector<double>& times, const std::string& out) {
    const FluxFunction flux = quadratic_flux(U);
    const double c_sharp = sharp_constant(flux);
    std::ostringstream csv;
    csv << "U,t,l,E,D,C_sharp\n";
    for (double t : times) {
        const RarefactionReference r = rarefaction_diagnostics(t, U);
        csv << format_double(U) << ',' << format_double(t) << ',' << format_double(r.l) << ','
            << format_double(r.E) << ',' << format_double(r.D) << ',' << format_double(c_sharp)
            << "\n";
    }
    if (out.empty() || out == "-") {
        std::cout << csv.str();
    } else {
        const std::string path = resolve_output_dir(out);
        if (auto parent = std::filesystem::path(path).parent_path(); !parent.empty())
            std::filesystem::create_directories(parent);
        std::ofstream f(path, std::ios::binary);
        if (!f) throw std::runtime_error("cannot write " + path);
        f << csv.str();
        std::cerr << "[reference] wrote " << path << "\n";
    }
    return 0;
}

// Re-verdicts a finished run directory from its persisted files.
inline int cmd_report(const std::string& run_dir) {
    const std::string dir = resolve_output_dir(run_dir);
    const nlohmann::json cfg_json = read_json_file(dir + "/config.json");
    RunConfig cfg;
    detail::parse_run_config(cfg_json, cfg);
    const auto series = read_series_csv(dir + "/series.csv");
    const auto verdicts = verify_theorem(series, cfg.params.U, cfg.params.H, cfg.verdicts);
    std::cerr << "[report] " << dir << " (" << series.size() << " samples)\n"
              << verdict_table(verdicts);
    return all_pass(verdicts) ? 0 : 1;
}

inline int cmd_plot(const std::string& run_dir) {
    const std::string dir = resolve_output_dir(run_dir);
    const nlohmann::json cfg_json = read_json_file(dir + "/config.json");
    RunConfig cfg;
    detail::parse_run_config(cfg_json, cfg);
    const double U = cfg.params.U;
    const auto series = read_series_csv(dir + "/series.csv");

    std::vector<SvgSeries> ratio_series(6);
    ratio_series[0] = {"l/(Ut)", {}, {}, "#1f77b4", false};
    ratio_series[1] = {"E/(U^2 t)", {}, {}, "#2ca02c", false};
    ratio_series[2] = {"D/(U^2 t)", {}, {}, "#d62728", false};
    ratio_series[3] = {"bound 1/(2*sqrt(3))", {}, {}, "#1f77b4", true};
    ratio_series[4] = {"bound 1/12", {}, {}, "#2ca02c", true};
    ratio_series[5] = {"bound 1/(4*sqrt(3))", {}, {}, "#d62728", true};
    for (const auto& r : series) {
        if (r.t <= 0.0) continue;
        ratio_series[0].x.push_back(r.t);
        ratio_series[0].y.push_back(r.l / (U * r.t));
        ratio_series[1].x.push_back(r.t);
        ratio_series[1].y.push_back(r.E / (U * U * r.t));
        ratio_series[2].x.push_back(r.t);
        ratio_series[2].y.push_back(r.D / (U * U * r.t));
    }
    if (!ratio_series[0].x.empty()) {
        const double t0 = ratio_series[0].x.front(), t1 = ratio_series[0].x.back();
        ratio_series[3].x = {t0, t1};
        ratio_series[3].y = {kWidthBound, kWidthBound};
        ratio_series[4].x = {t0, t1};
        ratio_series[4].y = {kEnergyBound, kEnergyBound};
        ratio_series[5].x = {t0, t1};
        ratio_series[5].y = {kSeparationBound, kSeparationBound};
    }
    write_svg_chart(dir + "/ratios.svg", "diagnostic ratios vs t", "t", "ratio", ratio_series);
    std::cerr << "[plot] wrote " << dir << "/ratios.svg\n";

    // coarse profile overlay from snapshots, if any were written
    std::vector<std::string> headers;
    const std::string snapdir = dir + "/snapshots";
    if (std::filesystem::exists(snapdir))
        for (const auto& e : std::filesystem::directory_iterator(snapdir))
            if (e.path().extension() == ".json") headers.push_back(e.path().string());
    std::sort(headers.begin(), headers.end());
    if (!headers.empty()) {
        std::vector<SvgSeries> prof;
        const char* colors[] = {"#9467bd", "#8c564b", "#1f77b4", "#2ca02c", "#d62728"};
        const std::size_t stride = std::max<std::size_t>(1, headers.size() / 4);
        double t_last = 0.0;
        int ci = 0;
        for (std::size_t i = 0; i < headers.size(); i += stride) {
            const Snapshot s = read_snapshot(headers[i]);
            Profile wbar = horizontal_average(s.omega);
            SvgSeries ser;
            char nm[48];
            std::snprintf(nm, sizeof(nm), "ubar, t=%.3g", s.t);
            ser.name = nm;
            ser.color = colors[ci++ % 5];
            double cum = 0.0;
            for (int j = 0; j < wbar.size(); ++j) {
                if (j > 0) cum += 0.5 * wbar.grid().dz() * (wbar[j - 1] + wbar[j]);
                ser.x.push_back(wbar.grid().z(j));
                ser.y.push_back(0.5 * s.U - cum);
            }
            t_last = std::max(t_last, s.t);
            prof.push_back(std::move(ser));
        }
        if (t_last > 0.0) {
            SvgSeries rar;
            rar.name = "rarefaction, t=" + std::to_string(t_last);
            rar.color = "#000000";
            rar.dashed = true;
            const Snapshot s0 = read_snapshot(headers.front());
            for (int j = 0; j < s0.grid->nz(); ++j) {
                rar.x.push_back(s0.grid->z(j));
                rar.y.push_back(rarefaction_profile(s0.grid->z(j), t_last, U));
            }
            prof.push_back(std::move(rar));
        }
        write_svg_chart(dir + "/ubar.svg", "coarse-grained profile vs rarefaction", "z",
                        "ubar(z)", prof);
        std::cerr << "[plot] wrote " << dir << "/ubar.svg\n";
    }
    return 0;
}

} // namespace mixlab
