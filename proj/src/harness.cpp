#include "harness.hpp"

#include "errors.hpp"
#include "netmodel.hpp"

#include <atomic>
#include <charconv>
#include <chrono>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

namespace secd2d {

const char* const kCsvHeader =
    "scheme,sweep_param,sweep_value,seed,total_secrecy_bps,mean_secrecy_per_lue_bps,feasible_fraction,outer_iters,"
    "wall_ms";
const char* const kTraceHeader = "seed,iter,subcarrier,objective_nats,lambda_norm,beta_norm,mu_norm,max_log_rho";

std::string kind_name(ExperimentKind k) {
    switch (k) {
    case ExperimentKind::Convergence: return "convergence";
    case ExperimentKind::QosSweep: return "qos-sweep";
    case ExperimentKind::PowerSweep: return "power-sweep";
    case ExperimentKind::LueSweep: return "lue-sweep";
    case ExperimentKind::Compare: return "compare";
    }
    return "unknown";
}

namespace {

std::string num(double x) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, x);
    return std::string(buf, res.ptr);
}

double parse_num(const std::string& s) {
    double v = 0.0;
    auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (res.ec != std::errc() || res.ptr != s.data() + s.size()) throw IoError("bad numeric CSV field: '" + s + "'");
    return v;
}

ExperimentSpec base_spec(ExperimentKind kind, const Settings& base, int snapshots, std::uint64_t seed) {
    ExperimentSpec e;
    e.kind = kind;
    e.base = base;
    e.snapshots = snapshots;
    e.seed_base = seed;
    e.schemes = {Scheme::Proposed};
    return e;
}

} // namespace

void ExperimentSpec::validate() const {
    if (snapshots < 1) throw ConfigError("snapshots must be >= 1");
    if (points.empty()) throw ConfigError("experiment has no sweep points");
    if (schemes.empty()) throw ConfigError("experiment has no schemes");
    std::map<std::string, double> last;
    for (const SweepPoint& p : points) {
        auto it = last.find(p.param);
        if (it != last.end() && !(p.value > it->second))
            throw ConfigError("sweep values must be strictly increasing for " + p.param);
        last[p.param] = p.value;
    }
}

ExperimentSpec convergence_spec(const Settings& base, int snapshots, std::uint64_t seed) {
    ExperimentSpec e = base_spec(ExperimentKind::Convergence, base, snapshots, seed);
    e.points.push_back({"none", 0.0, {}});
    return e;
}

ExperimentSpec qos_sweep_spec(const Settings& base, int snapshots, std::uint64_t seed) {
    ExperimentSpec e = base_spec(ExperimentKind::QosSweep, base, snapshots, seed);
    for (int i = 0; i <= 10; ++i) {
        const double c = i / 50.0;
        const std::string v = num(c);
        e.points.push_back({"c_min", c, {{"c_min_hue", v}, {"c_min_lue", v}, {"c_min_due", v}}});
    }
    return e;
}

ExperimentSpec power_sweep_spec(const Settings& base, int snapshots, std::uint64_t seed) {
    ExperimentSpec e = base_spec(ExperimentKind::PowerSweep, base, snapshots, seed);
    for (int dbm = 14; dbm <= 36; dbm += 2)
        e.points.push_back({"p_max_lue_dbm", static_cast<double>(dbm), {{"p_max_lue", num(dbm_to_watt(dbm))}}});
    return e;
}

ExperimentSpec lue_sweep_spec(const Settings& base, int snapshots, std::uint64_t seed,
                              const std::vector<double>& lue_power_dbm) {
    ExperimentSpec e = base_spec(ExperimentKind::LueSweep, base, snapshots, seed);
    const std::string c = num(0.1);
    for (double dbm : lue_power_dbm) {
        const std::string label = "M@p_max_lue_dbm=" + num(dbm);
        for (int m = 1; m <= 8; ++m)
            e.points.push_back({label,
                                static_cast<double>(m),
                                {{"N", "8"},
                                 {"p_max_hue", num(hue_pmax_for(8))},
                                 {"M", std::to_string(m)},
                                 {"p_max_lue", num(dbm_to_watt(dbm))},
                                 {"c_min_hue", c},
                                 {"c_min_lue", c},
                                 {"c_min_due", c}}});
    }
    return e;
}

ExperimentSpec compare_spec(const Settings& base, int snapshots, std::uint64_t seed) {
    ExperimentSpec e = base_spec(ExperimentKind::Compare, base, snapshots, seed);
    e.points.push_back({"none", 0.0, {}});
    e.schemes = all_schemes();
    return e;
}

SnapshotResult evaluate_snapshot(const Settings& s, std::uint64_t seed, Scheme scheme, const TraceSink& trace) {
    SnapshotResult r;
    r.scheme = scheme_name(scheme);
    r.seed = std::to_string(seed);
    const ChannelSet ch = make_snapshot(s.net, seed);
    const BaselineResult b = run_scheme(scheme, ch, s, trace);
    r.total_secrecy_bps = b.total_bps;
    double lue = 0.0;
    for (int l = 0; l < ch.L(); ++l)
        for (int m = 0; m < ch.M(); ++m)
            for (int n = 0; n < ch.N(); ++n) lue += std::max(b.breakdown.slot(ch.lue_tx(l, m), n), 0.0);
    r.mean_secrecy_per_lue_bps = lue / (ch.L() * ch.M());
    int met = 0;
    for (bool q : b.qos) met += q ? 1 : 0;
    r.feasible_fraction = static_cast<double>(met) / static_cast<double>(b.qos.size());
    r.outer_iters = b.outer_iters;
    r.converged = b.converged;
    return r;
}

SnapshotResult run_snapshot(const Settings& s, std::uint64_t seed, Scheme scheme, bool wall_time,
                            const TraceSink& trace) {
    const auto t0 = std::chrono::steady_clock::now();
    SnapshotResult r;
    try {
        r = evaluate_snapshot(s, seed, scheme, trace);
    } catch (const Error& e) {
        const double nan = std::numeric_limits<double>::quiet_NaN();
        r = SnapshotResult{};
        r.scheme = scheme_name(scheme);
        r.seed = std::to_string(seed);
        r.ok = false;
        r.converged = false;
        r.error = e.what();
        r.total_secrecy_bps = r.mean_secrecy_per_lue_bps = r.feasible_fraction = r.outer_iters = nan;
    }
    if (wall_time)
        r.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
    return r;
}

namespace {

void append_aggregates(std::vector<SnapshotResult>& out, const std::vector<SnapshotResult>& data) {
    SnapshotResult mean = data.front();
    SnapshotResult se = data.front();
    mean.seed = "mean";
    se.seed = "stderr";
    mean.error.clear();
    se.error.clear();
    mean.ok = se.ok = true;
    double SnapshotResult::*cols[] = {&SnapshotResult::total_secrecy_bps, &SnapshotResult::mean_secrecy_per_lue_bps,
                                      &SnapshotResult::feasible_fraction, &SnapshotResult::outer_iters,
                                      &SnapshotResult::wall_ms};
    for (auto col : cols) {
        double sum = 0.0;
        int n = 0;
        for (const auto& r : data)
            if (r.ok) {
                sum += r.*col;
                ++n;
            }
        const double m = n > 0 ? sum / n : std::numeric_limits<double>::quiet_NaN();
        double ss = 0.0;
        for (const auto& r : data)
            if (r.ok) ss += (r.*col - m) * (r.*col - m);
        mean.*col = m;
        se.*col = n > 1 ? std::sqrt(ss / (n - 1) / n) : 0.0;
    }
    out.push_back(mean);
    out.push_back(se);
}

} // namespace

ResultTable run_experiment(const ExperimentSpec& spec) {
    spec.validate();
    std::vector<Settings> settings;
    for (const SweepPoint& p : spec.points) {
        Settings s = spec.base;
        bool saw_n = false, saw_hue = false;
        for (const auto& [k, v] : p.overrides) {
            set_value(s, k, v);
            saw_n = saw_n || k == "N";
            saw_hue = saw_hue || k == "p_max_hue";
        }
        if (saw_n && !saw_hue) s.net.p_max_hue = hue_pmax_for(s.net.N);
        s.net.validate();
        s.solver.validate();
        settings.push_back(s);
    }

    const size_t tasks = spec.points.size() * static_cast<size_t>(spec.snapshots);
    std::vector<std::vector<SnapshotResult>> results(tasks);
    std::vector<std::vector<std::string>> traces(tasks);
    std::atomic<size_t> next{0};
    auto worker = [&]() {
        for (size_t t = next++; t < tasks; t = next++) {
            const size_t pi = t / spec.snapshots;
            const std::uint64_t seed = spec.seed_base + t % spec.snapshots;
            for (Scheme sc : spec.schemes) {
                TraceSink sink;
                if (spec.trace && sc == Scheme::Proposed) {
                    sink = [&, seed, t](const TraceRow& row) {
                        traces[t].push_back(std::to_string(seed) + "," + std::to_string(row.iter) + "," +
                                            std::to_string(row.subcarrier) + "," + num(row.objective_nats) + "," +
                                            num(row.lambda_norm) + "," + num(row.beta_norm) + "," +
                                            num(row.mu_norm) + "," + num(row.max_log_rho));
                    };
                }
                SnapshotResult r = run_snapshot(settings[pi], seed, sc, spec.wall_time, sink);
                r.sweep_param = spec.points[pi].param;
                r.sweep_value = spec.points[pi].value;
                results[t].push_back(std::move(r));
            }
        }
    };
    int nthreads = spec.threads > 0 ? spec.threads : static_cast<int>(std::thread::hardware_concurrency());
    nthreads = std::max(1, std::min<int>(nthreads, static_cast<int>(tasks)));
    std::vector<std::thread> pool;
    for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();

    ResultTable table;
    for (size_t pi = 0; pi < spec.points.size(); ++pi) {
        for (size_t si = 0; si < spec.schemes.size(); ++si) {
            std::vector<SnapshotResult> cell;
            for (int k = 0; k < spec.snapshots; ++k) cell.push_back(results[pi * spec.snapshots + k][si]);
            table.rows.insert(table.rows.end(), cell.begin(), cell.end());
            append_aggregates(table.rows, cell);
        }
    }
    for (const auto& t : traces) table.trace_lines.insert(table.trace_lines.end(), t.begin(), t.end());
    return table;
}

void write_csv(const ResultTable& table, std::ostream& out) {
    if (table.rows.empty()) throw IoError("write_csv: empty table");
    out << kCsvHeader << "\n";
    for (const auto& r : table.rows) {
        out << r.scheme << "," << r.sweep_param << "," << num(r.sweep_value) << "," << r.seed << ","
            << num(r.total_secrecy_bps) << "," << num(r.mean_secrecy_per_lue_bps) << "," << num(r.feasible_fraction)
            << "," << num(r.outer_iters) << "," << num(r.wall_ms) << "\n";
    }
    if (!out) throw IoError("write_csv: stream error");
}

void write_csv(const ResultTable& table, const std::string& path) {
    if (table.rows.empty()) throw IoError("write_csv: empty table");
    std::ofstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open for writing: " + path);
    write_csv(table, f);
}

ResultTable parse_csv(std::istream& in) {
    ResultTable t;
    std::string line;
    if (!std::getline(in, line) || line != kCsvHeader) throw IoError("parse_csv: missing or unexpected header");
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> f;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) f.push_back(cell);
        if (f.size() != 9) throw IoError("parse_csv: expected 9 fields: " + line);
        SnapshotResult r;
        r.scheme = f[0];
        r.sweep_param = f[1];
        r.sweep_value = parse_num(f[2]);
        r.seed = f[3];
        r.total_secrecy_bps = parse_num(f[4]);
        r.mean_secrecy_per_lue_bps = parse_num(f[5]);
        r.feasible_fraction = parse_num(f[6]);
        r.outer_iters = parse_num(f[7]);
        r.wall_ms = parse_num(f[8]);
        r.ok = !std::isnan(r.total_secrecy_bps);
        r.converged = r.ok;
        t.rows.push_back(r);
    }
    return t;
}

ResultTable read_csv(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw IoError("cannot open for reading: " + path);
    return parse_csv(f);
}

void write_trace(const ResultTable& table, std::ostream& out) {
    out << kTraceHeader << "\n";
    for (const auto& l : table.trace_lines) out << l << "\n";
}

double cell_mean(const ResultTable& table, const std::string& scheme, const std::string& param, double value,
                 double SnapshotResult::*column) {
    double sum = 0.0;
    int n = 0;
    for (const auto& r : table.rows) {
        if (r.scheme != scheme || r.sweep_param != param || r.sweep_value != value) continue;
        if (r.seed == "mean" || r.seed == "stderr" || !r.ok) continue;
        sum += r.*column;
        ++n;
    }
    return n > 0 ? sum / n : std::numeric_limits<double>::quiet_NaN();
}

} // namespace secd2d
