#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "mixlab/bounds.hpp"
#include "mixlab/fields.hpp"
#include "mixlab/initial_data.hpp"
#include "mixlab/run.hpp"

namespace mixlab {

struct RunConfig {
    Params params;
    InitialDataSpec initial_data;
    double sample_interval = 0.005;
    int snapshot_every = 0;
    VerdictTolerances verdicts;
    std::string output_dir = "out";
    std::uint64_t seed = 0;
    int threads = 1;

    void validate() const {
        params.validate();
        initial_data.validate();
        RunOptions opt;
        opt.sample_interval = sample_interval;
        opt.snapshot_every = snapshot_every;
        opt.threads = threads;
        opt.validate(params);
        if (!(verdicts.tail_fraction > 0.0) || verdicts.tail_fraction > 1.0)
            throw ConfigError("verdicts.tail_fraction: must lie in (0, 1]");
    }

    RunOptions options() const {
        RunOptions opt;
        opt.sample_interval = sample_interval;
        opt.snapshot_every = snapshot_every;
        opt.threads = threads;
        return opt;
    }
};

struct SweepConfig {
    std::vector<double> L_values;
    int parallelism = 2;
    RunConfig base;

    void validate() const {
        base.validate();
        if (L_values.empty()) throw ConfigError("sweep.L_values: must be non-empty");
        for (std::size_t i = 0; i < L_values.size(); ++i) {
            if (!(L_values[i] > 0.0)) throw ConfigError("sweep.L_values: must be positive");
            for (std::size_t k = 0; k < i; ++k)
                if (L_values[i] == L_values[k])
                    throw ConfigError("sweep.L_values: must be distinct");
        }
        if (parallelism < 1) throw ConfigError("sweep.parallelism: must be >= 1");
    }

    std::vector<RunConfig> expand() const {
        std::vector<RunConfig> out;
        for (double L : L_values) {
            RunConfig c = base;
            c.params.L = L;
            out.push_back(std::move(c));
        }
        return out;
    }
};

namespace detail {

using json = nlohmann::json;

// unknown keys are rejected so a misspelled tolerance cannot silently fall
// back to its default
inline void expect_keys(const json& j, const std::string& path,
                        std::initializer_list<const char*> allowed) {
    if (!j.is_object()) throw ConfigError(path + ": expected an object");
    for (auto it = j.begin(); it != j.end(); ++it) {
        bool known = false;
        for (const char* k : allowed)
            if (it.key() == k) { known = true; break; }
        if (!known) throw ConfigError(path + "." + it.key() + ": unknown key");
    }
}

template <typename T>
void get_to_checked(const json& j, const std::string& path, const char* key, T& out) {
    if (!j.contains(key)) return;
    try {
        j.at(key).get_to(out);
    } catch (const json::exception& e) {
        throw ConfigError(path + "." + key + ": " + e.what());
    }
}

inline void parse_tolerances(const json& j, const std::string& path, Tolerances& t) {
    expect_keys(j, path,
                {"positivity", "circulation", "moment", "identity", "interp_slack",
                 "shear_match", "monotone", "boundary_decay", "boundary_contamination"});
    get_to_checked(j, path, "positivity", t.positivity);
    get_to_checked(j, path, "circulation", t.circulation);
    get_to_checked(j, path, "moment", t.moment);
    get_to_checked(j, path, "identity", t.identity);
    get_to_checked(j, path, "interp_slack", t.interp_slack);
    get_to_checked(j, path, "shear_match", t.shear_match);
    get_to_checked(j, path, "monotone", t.monotone);
    get_to_checked(j, path, "boundary_decay", t.boundary_decay);
    get_to_checked(j, path, "boundary_contamination", t.boundary_contamination);
}

inline void parse_params(const json& j, const std::string& path, Params& p) {
    expect_keys(j, path, {"U", "L", "H", "Ny", "Nz", "dt", "cfl_number", "T", "tolerances"});
    get_to_checked(j, path, "U", p.U);
    get_to_checked(j, path, "L", p.L);
    get_to_checked(j, path, "H", p.H);
    get_to_checked(j, path, "Ny", p.Ny);
    get_to_checked(j, path, "Nz", p.Nz);
    if (j.contains("dt")) {
        const auto& v = j.at("dt");
        if (v.is_string()) {
            if (v.get<std::string>() != "adaptive")
                throw ConfigError(path + ".dt: expected a positive number or \"adaptive\"");
            p.dt = 0.0;
        } else if (v.is_number()) {
            p.dt = v.get<double>();
            if (!(p.dt > 0.0))
                throw ConfigError(path + ".dt: expected a positive number or \"adaptive\"");
        } else {
            throw ConfigError(path + ".dt: expected a positive number or \"adaptive\"");
        }
    }
    get_to_checked(j, path, "cfl_number", p.cfl_number);
    get_to_checked(j, path, "T", p.T);
    if (j.contains("tolerances")) parse_tolerances(j.at("tolerances"), path + ".tolerances", p.tol);
}

inline void parse_initial_data(const json& j, const std::string& path, InitialDataSpec& s) {
    expect_keys(j, path, {"delta", "epsilon", "wavenumber", "chi_width"});
    get_to_checked(j, path, "delta", s.delta);
    get_to_checked(j, path, "epsilon", s.epsilon);
    get_to_checked(j, path, "wavenumber", s.wavenumber);
    get_to_checked(j, path, "chi_width", s.chi_width);
}

inline void parse_run_config(const json& j, RunConfig& c) {
    expect_keys(j, "config",
                {"params", "initial_data", "sampling", "verdicts", "output_dir", "seed",
                 "threads", "sweep"});
    if (j.contains("params")) parse_params(j.at("params"), "params", c.params);
    if (j.contains("initial_data"))
        parse_initial_data(j.at("initial_data"), "initial_data", c.initial_data);
    if (j.contains("sampling")) {
        const auto& s = j.at("sampling");
        expect_keys(s, "sampling", {"interval", "snapshot_every"});
        get_to_checked(s, "sampling", "interval", c.sample_interval);
        get_to_checked(s, "sampling", "snapshot_every", c.snapshot_every);
    }
    if (j.contains("verdicts")) {
        const auto& v = j.at("verdicts");
        expect_keys(v, "verdicts", {"tail_fraction", "width", "energy", "separation", "moment"});
        get_to_checked(v, "verdicts", "tail_fraction", c.verdicts.tail_fraction);
        get_to_checked(v, "verdicts", "width", c.verdicts.width);
        get_to_checked(v, "verdicts", "energy", c.verdicts.energy);
        get_to_checked(v, "verdicts", "separation", c.verdicts.separation);
        get_to_checked(v, "verdicts", "moment", c.verdicts.moment);
    }
    get_to_checked(j, "config", "output_dir", c.output_dir);
    get_to_checked(j, "config", "seed", c.seed);
    get_to_checked(j, "config", "threads", c.threads);
}

} // namespace detail

inline nlohmann::json to_json(const RunConfig& c) {
    nlohmann::json j;
    j["params"] = {{"U", c.params.U},
                   {"L", c.params.L},
                   {"H", c.params.H},
                   {"Ny", c.params.Ny},
                   {"Nz", c.params.Nz},
                   {"cfl_number", c.params.cfl_number},
                   {"T", c.params.T}};
    if (c.params.adaptive_dt())
        j["params"]["dt"] = "adaptive";
    else
        j["params"]["dt"] = c.params.dt;
    j["params"]["tolerances"] = {{"positivity", c.params.tol.positivity},
                                 {"circulation", c.params.tol.circulation},
                                 {"moment", c.params.tol.moment},
                                 {"identity", c.params.tol.identity},
                                 {"interp_slack", c.params.tol.interp_slack},
                                 {"shear_match", c.params.tol.shear_match},
                                 {"monotone", c.params.tol.monotone},
                                 {"boundary_decay", c.params.tol.boundary_decay},
                                 {"boundary_contamination", c.params.tol.boundary_contamination}};
    j["initial_data"] = {{"delta", c.initial_data.delta},
                         {"epsilon", c.initial_data.epsilon},
                         {"wavenumber", c.initial_data.wavenumber},
                         {"chi_width", c.initial_data.chi_width}};
    j["sampling"] = {{"interval", c.sample_interval}, {"snapshot_every", c.snapshot_every}};
    j["verdicts"] = {{"tail_fraction", c.verdicts.tail_fraction},
                     {"width", c.verdicts.width},
                     {"energy", c.verdicts.energy},
                     {"separation", c.verdicts.separation},
                     {"moment", c.verdicts.moment}};
    j["output_dir"] = c.output_dir;
    j["seed"] = c.seed;
    j["threads"] = c.threads;
    return j;
}

using LoadedConfig = std::variant<RunConfig, SweepConfig>;

inline LoadedConfig parse_config(const nlohmann::json& j) {
    RunConfig base;
    detail::parse_run_config(j, base);
    if (j.contains("sweep")) {
        SweepConfig sw;
        sw.base = base;
        const auto& s = j.at("sweep");
        detail::expect_keys(s, "sweep", {"L_values", "parallelism"});
        detail::get_to_checked(s, "sweep", "L_values", sw.L_values);
        detail::get_to_checked(s, "sweep", "parallelism", sw.parallelism);
        sw.validate();
        return sw;
    }
    base.validate();
    return base;
}

inline LoadedConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config file not found: " + path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(path + ": " + e.what());
    }
    return parse_config(j);
}

} // namespace mixlab
