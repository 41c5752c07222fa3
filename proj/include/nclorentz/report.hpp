#pragma once

// Experiment reports: the structured result of one scenario run.
//
// Every number a scenario produces is wrapped in a check record carrying its
// name, tolerance and pass/fail verdict -- no bare numbers in output.  JSON
// reports carry the full structure (config echo, RNG identity, payload
// tables, wall clock); CSV reports are the flattened per-check table with a
// stable column order.  Both formats print doubles through one fixed
// formatter, so re-running a scenario with the same config reproduces the
// numeric output byte for byte (wall clock aside).

#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "nclorentz/common.hpp"
#include "nclorentz/io.hpp"
#include "nclorentz/rng.hpp"

namespace nclorentz {

struct check_record {
    std::string name;
    double value = 0.0;
    double tolerance = 0.0;
    bool pass = false;
    nlohmann::json witness;  // null when the check carries no witness

    check_record(std::string name_, double value_, double tolerance_, bool pass_,
                 nlohmann::json witness_ = nullptr)
        : name(std::move(name_)), value(value_), tolerance(tolerance_), pass(pass_),
          witness(std::move(witness_)) {}
};

struct scenario_config {
    std::string scenario;
    double p = 1.0;
    double q = 1.0;
    std::size_t n = 0;       // 0 means "use the scenario's default"
    std::uint64_t seed = 1;
    std::size_t samples = 0;  // 0 means "use the scenario's default"
    double lacunarity = 0.1;
    std::string input_path;
    std::string out_path;    // empty means stdout
    std::string format = "json";
};

struct experiment_report {
    scenario_config config;
    std::string rng_engine = seeded_rng::engine_name;
    std::string version = library_version;
    std::vector<check_record> checks;
    std::vector<std::string> warnings;
    nlohmann::json payload;  // scenario-specific tables; null when absent
    double wall_clock_seconds = 0.0;

    bool all_pass() const {
        for (const check_record& c : checks)
            if (!c.pass) return false;
        return true;
    }
};

// One formatter for every double that reaches an output file: %.17g
// round-trips doubles exactly and prints identically across runs.
inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline nlohmann::json report_to_json(const experiment_report& r) {
    nlohmann::json checks = nlohmann::json::array();
    for (const check_record& c : r.checks)
        checks.push_back({{"name", c.name},
                          {"value", c.value},
                          {"tolerance", c.tolerance},
                          {"pass", c.pass},
                          {"witness", c.witness}});
    return {{"scenario", r.config.scenario},
            {"config",
             {{"p", r.config.p},
              {"q", r.config.q},
              {"n", r.config.n},
              {"seed", r.config.seed},
              {"samples", r.config.samples},
              {"lacunarity", r.config.lacunarity},
              {"input", r.config.input_path}}},
            {"rng", {{"engine", r.rng_engine}, {"seed", r.config.seed}}},
            {"version", r.version},
            {"checks", std::move(checks)},
            {"warnings", r.warnings},
            {"payload", r.payload},
            {"wall_clock_seconds", r.wall_clock_seconds}};
}

// Flattened per-check table; columns fixed as scenario,check,value,tolerance,pass.
inline std::string report_to_csv(const experiment_report& r) {
    std::string out = "scenario,check,value,tolerance,pass\n";
    for (const check_record& c : r.checks) {
        out += r.config.scenario;
        out += ',';
        out += c.name;
        out += ',';
        out += format_double(c.value);
        out += ',';
        out += format_double(c.tolerance);
        out += ',';
        out += c.pass ? "true" : "false";
        out += '\n';
    }
    return out;
}

inline std::string render_report(const experiment_report& r, const std::string& format) {
    if (format == "json") return report_to_json(r).dump(2) + "\n";
    if (format == "csv") return report_to_csv(r);
    throw std::invalid_argument("render_report: format must be json or csv");
}

inline void write_report_file(const experiment_report& r, const std::string& format,
                              const std::string& path) {
    write_text_file(path, render_report(r, format));
}

}  // namespace nclorentz
