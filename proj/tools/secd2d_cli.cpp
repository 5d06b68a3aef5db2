#include "secd2d.h"

#include <CLI11.hpp>

#include <cstdint>
#include <iostream>
#include <map>
#include <string>

namespace {

int fail(const char* what) {
    std::cerr << "error: " << what << ": " << secd2d_last_error() << "\n";
    return 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Secrecy-capacity resource allocation simulator for D2D underlay HetNets"};
    app.require_subcommand(1);

    std::string config_path;
    std::string preset = "paper";
    std::uint64_t seed = 1;
    int snapshots = 0;
    std::string out = "-";
    std::string schemes;
    bool trace = false;
    std::string trace_out = "-";
    int threads = 0;
    bool wall_time = false;

    app.add_option("--config", config_path, "flat key=value configuration file")->check(CLI::ExistingFile);
    app.add_option("--preset", preset, "base parameter set before --config")->check(CLI::IsMember({"paper", "desk"}));
    app.add_option("--seed", seed, "first snapshot seed; snapshot i uses seed + i");
    app.add_option("--snapshots", snapshots, "snapshots per sweep point (default 1000 paper, 100 desk)")
        ->check(CLI::PositiveNumber);
    app.add_option("--out", out, "CSV output path, '-' for standard output");
    app.add_option("--scheme", schemes,
                   "comma list of proposed,upper_bound,interference_avoidance,orthogonal,fixed_power");
    app.add_flag("--trace", trace, "emit per-iteration solver rows for the proposed scheme");
    app.add_option("--trace-out", trace_out, "trace output path, '-' for standard output");
    app.add_option("--threads", threads, "worker threads, 0 for all cores")->check(CLI::NonNegativeNumber);
    app.add_flag("--wall-time", wall_time, "record wall_ms (output is then not byte-reproducible)");

    const std::map<std::string, secd2d_experiment> kinds{{"convergence", SECD2D_EXP_CONVERGENCE},
                                                         {"qos-sweep", SECD2D_EXP_QOS_SWEEP},
                                                         {"power-sweep", SECD2D_EXP_POWER_SWEEP},
                                                         {"lue-sweep", SECD2D_EXP_LUE_SWEEP},
                                                         {"compare", SECD2D_EXP_COMPARE}};
    for (const auto& [name, kind] : kinds) app.add_subcommand(name, "run the " + name + " experiment")->fallthrough();

    CLI11_PARSE(app, argc, argv);

    secd2d_experiment kind = SECD2D_EXP_COMPARE;
    for (const auto& [name, k] : kinds)
        if (app.got_subcommand(name)) kind = k;

    secd2d_settings* settings = nullptr;
    if (secd2d_settings_create(preset.c_str(), &settings) != SECD2D_OK) return fail("settings");
    if (config_path.empty()) {
        std::cerr << "note: no --config given, using " << preset << " defaults\n";
    } else if (secd2d_settings_load(settings, config_path.c_str()) != SECD2D_OK) {
        secd2d_settings_destroy(settings);
        return fail("config");
    }

    secd2d_run_options opt{};
    opt.snapshots = snapshots > 0 ? snapshots : (preset == "desk" ? 100 : 1000);
    opt.seed = seed;
    opt.schemes = schemes.c_str();
    opt.threads = threads;
    opt.wall_time = wall_time ? 1 : 0;
    opt.trace = trace ? 1 : 0;

    secd2d_table* table = nullptr;
    const secd2d_status st = secd2d_run_experiment(settings, kind, &opt, &table);
    secd2d_settings_destroy(settings);
    if (st != SECD2D_OK) return fail("experiment");

    int rc = 0;
    if (secd2d_table_write_csv(table, out.c_str()) != SECD2D_OK)
        rc = fail("write csv");
    else if (trace && secd2d_table_write_trace(table, trace_out.c_str()) != SECD2D_OK)
        rc = fail("write trace");
    secd2d_table_destroy(table);
    return rc;
}
