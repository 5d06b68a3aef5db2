#pragma once

#include "baselines.hpp"
#include "config.hpp"
#include "solver.hpp"

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

namespace secd2d {

enum class ExperimentKind { Convergence, QosSweep, PowerSweep, LueSweep, Compare };

std::string kind_name(ExperimentKind k);

struct SweepPoint {
    std::string param; // CSV sweep_param label
    double value = 0.0;
    std::vector<std::pair<std::string, std::string>> overrides; // config key=value applied on top of the base
};

struct ExperimentSpec {
    ExperimentKind kind = ExperimentKind::Compare;
    Settings base;
    std::vector<SweepPoint> points;
    int snapshots = 1;
    std::uint64_t seed_base = 1;
    std::vector<Scheme> schemes;
    int threads = 0; // 0: hardware concurrency
    bool wall_time = false;
    bool trace = false;

    void validate() const;
};

ExperimentSpec convergence_spec(const Settings& base, int snapshots, std::uint64_t seed);
// c_min for every class over 0, 0.02, ..., 0.2 bits/s/Hz.
ExperimentSpec qos_sweep_spec(const Settings& base, int snapshots, std::uint64_t seed);
// LUE p_max over 14, 16, ..., 36 dBm.
ExperimentSpec power_sweep_spec(const Settings& base, int snapshots, std::uint64_t seed);
// M = 1..8 with N = 8 and c_min = 0.1 bits/s/Hz, at each LUE power level in dBm.
ExperimentSpec lue_sweep_spec(const Settings& base, int snapshots, std::uint64_t seed,
                              const std::vector<double>& lue_power_dbm = {18.0, 20.0, 22.0});
ExperimentSpec compare_spec(const Settings& base, int snapshots, std::uint64_t seed);

struct SnapshotResult {
    std::string scheme;
    std::string sweep_param;
    double sweep_value = 0.0;
    std::string seed; // decimal seed, or "mean" / "stderr" on aggregate rows
    double total_secrecy_bps = 0.0;
    double mean_secrecy_per_lue_bps = 0.0;
    double feasible_fraction = 0.0;
    double outer_iters = 0.0;
    double wall_ms = 0.0;
    bool ok = true;
    bool converged = true;
    std::string error;

    bool operator==(const SnapshotResult& o) const = default;
};

// Throws the underlying Error when the scheme fails.
SnapshotResult evaluate_snapshot(const Settings& s, std::uint64_t seed, Scheme scheme, const TraceSink& trace = {});
// Same, with failures recorded in the row (ok = false, NaN metrics) instead of thrown.
SnapshotResult run_snapshot(const Settings& s, std::uint64_t seed, Scheme scheme, bool wall_time = false,
                            const TraceSink& trace = {});

struct ResultTable {
    std::vector<SnapshotResult> rows;
    std::vector<std::string> trace_lines;
};

// Runs every point x snapshot x scheme with seeds seed_base + snapshot index, then appends
// mean/stderr rows per (point, scheme).
ResultTable run_experiment(const ExperimentSpec& spec);

extern const char* const kCsvHeader;
extern const char* const kTraceHeader;

void write_csv(const ResultTable& table, std::ostream& out);
void write_csv(const ResultTable& table, const std::string& path);
ResultTable parse_csv(std::istream& in);
ResultTable read_csv(const std::string& path);

void write_trace(const ResultTable& table, std::ostream& out);

// Mean of the data rows for one (scheme, sweep_param, sweep_value) cell.
double cell_mean(const ResultTable& table, const std::string& scheme, const std::string& param, double value,
                 double SnapshotResult::*column);

} // namespace secd2d
