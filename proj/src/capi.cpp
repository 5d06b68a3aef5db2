#include "secd2d.h"

#include "errors.hpp"
#include "harness.hpp"

#include <cstring>
#include <fstream>
#include <memory>
#include <iostream>
#include <sstream>
#include <string>

struct secd2d_settings {
    secd2d::Settings s;
};

struct secd2d_table {
    secd2d::ResultTable t;
};

namespace {

thread_local std::string g_last_error;

template <typename F>
secd2d_status guard(F&& f) {
    g_last_error.clear();
    try {
        f();
        return SECD2D_OK;
    } catch (const secd2d::ConfigError& e) {
        g_last_error = e.what();
        return SECD2D_ERR_CONFIG;
    } catch (const secd2d::DomainError& e) {
        g_last_error = e.what();
        return SECD2D_ERR_DOMAIN;
    } catch (const secd2d::InfeasibleRateError& e) {
        g_last_error = e.what();
        return SECD2D_ERR_INFEASIBLE;
    } catch (const secd2d::NumericalError& e) {
        g_last_error = e.what();
        return SECD2D_ERR_NUMERICAL;
    } catch (const secd2d::NonConvergenceError& e) {
        g_last_error = e.what();
        return SECD2D_ERR_NONCONVERGENCE;
    } catch (const secd2d::SearchSpaceError& e) {
        g_last_error = e.what();
        return SECD2D_ERR_SEARCH_SPACE;
    } catch (const secd2d::IoError& e) {
        g_last_error = e.what();
        return SECD2D_ERR_IO;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return SECD2D_ERR_INTERNAL;
    } catch (...) {
        g_last_error = "unknown error";
        return SECD2D_ERR_INTERNAL;
    }
}

secd2d_status invalid(const char* what) {
    g_last_error = what;
    return SECD2D_ERR_INVALID_ARGUMENT;
}

std::vector<secd2d::Scheme> parse_schemes(const char* list) {
    std::vector<secd2d::Scheme> out;
    std::stringstream ss(list);
    std::string name;
    while (std::getline(ss, name, ','))
        if (!name.empty()) out.push_back(secd2d::parse_scheme(name));
    return out;
}

template <typename W>
void write_to(const char* path, W&& write) {
    if (path == nullptr || std::strcmp(path, "-") == 0) {
        write(std::cout);
        std::cout.flush();
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw secd2d::IoError(std::string("cannot open for writing: ") + path);
    write(f);
    if (!f) throw secd2d::IoError(std::string("write failed: ") + path);
}

} // namespace

extern "C" {

const char* secd2d_last_error(void) { return g_last_error.c_str(); }

const char* secd2d_version(void) { return "1.0.0"; }

secd2d_status secd2d_settings_create(const char* preset, secd2d_settings** out) {
    if (!out) return invalid("out is null");
    *out = nullptr;
    return guard([&] {
        auto h = std::make_unique<secd2d_settings>();
        const std::string p = preset ? preset : "paper";
        if (p == "paper")
            h->s.net = secd2d::paper_defaults();
        else if (p == "desk")
            h->s.net = secd2d::desk_defaults();
        else
            throw secd2d::ConfigError("unknown preset: " + p);
        *out = h.release();
    });
}

void secd2d_settings_destroy(secd2d_settings* s) { delete s; }

secd2d_status secd2d_settings_load(secd2d_settings* s, const char* path) {
    if (!s || !path) return invalid("null argument");
    return guard([&] { s->s = secd2d::load_settings(path, s->s); });
}

secd2d_status secd2d_settings_set(secd2d_settings* s, const char* key, const char* value) {
    if (!s || !key || !value) return invalid("null argument");
    return guard([&] {
        secd2d::Settings copy = s->s;
        secd2d::set_value(copy, key, value);
        if (std::strcmp(key, "N") == 0) copy.net.p_max_hue = secd2d::hue_pmax_for(copy.net.N);
        copy.net.validate();
        copy.solver.validate();
        s->s = copy;
    });
}

secd2d_status secd2d_settings_dump(const secd2d_settings* s, char* buf, size_t cap, size_t* needed) {
    if (!s) return invalid("null settings");
    return guard([&] {
        const std::string text = secd2d::to_text(s->s);
        if (needed) *needed = text.size() + 1;
        if (buf && cap > 0) {
            const size_t n = std::min(cap - 1, text.size());
            std::memcpy(buf, text.data(), n);
            buf[n] = '\0';
        }
    });
}

secd2d_status secd2d_run_snapshot(const secd2d_settings* s, uint64_t seed, const char* scheme, secd2d_snapshot* out) {
    if (!s || !scheme || !out) return invalid("null argument");
    return guard([&] {
        const secd2d::SnapshotResult r = secd2d::evaluate_snapshot(s->s, seed, secd2d::parse_scheme(scheme));
        out->total_secrecy_bps = r.total_secrecy_bps;
        out->mean_secrecy_per_lue_bps = r.mean_secrecy_per_lue_bps;
        out->feasible_fraction = r.feasible_fraction;
        out->outer_iters = r.outer_iters;
        out->converged = r.converged ? 1 : 0;
    });
}

secd2d_status secd2d_run_experiment(const secd2d_settings* s, secd2d_experiment kind, const secd2d_run_options* opt,
                                    secd2d_table** out) {
    if (!s || !opt || !out) return invalid("null argument");
    *out = nullptr;
    return guard([&] {
        secd2d::ExperimentSpec spec;
        switch (kind) {
        case SECD2D_EXP_CONVERGENCE: spec = secd2d::convergence_spec(s->s, opt->snapshots, opt->seed); break;
        case SECD2D_EXP_QOS_SWEEP: spec = secd2d::qos_sweep_spec(s->s, opt->snapshots, opt->seed); break;
        case SECD2D_EXP_POWER_SWEEP: spec = secd2d::power_sweep_spec(s->s, opt->snapshots, opt->seed); break;
        case SECD2D_EXP_LUE_SWEEP: spec = secd2d::lue_sweep_spec(s->s, opt->snapshots, opt->seed); break;
        case SECD2D_EXP_COMPARE: spec = secd2d::compare_spec(s->s, opt->snapshots, opt->seed); break;
        default: throw secd2d::ConfigError("unknown experiment kind");
        }
        if (opt->schemes && *opt->schemes) spec.schemes = parse_schemes(opt->schemes);
        spec.threads = opt->threads;
        spec.wall_time = opt->wall_time != 0;
        spec.trace = opt->trace != 0;
        auto h = std::make_unique<secd2d_table>();
        h->t = secd2d::run_experiment(spec);
        *out = h.release();
    });
}

size_t secd2d_table_rows(const secd2d_table* t) { return t ? t->t.rows.size() : 0; }

secd2d_status secd2d_table_write_csv(const secd2d_table* t, const char* path) {
    if (!t) return invalid("null table");
    return guard([&] {
        if (t->t.rows.empty()) throw secd2d::IoError("write_csv: empty table");
        write_to(path, [&](std::ostream& os) { secd2d::write_csv(t->t, os); });
    });
}

secd2d_status secd2d_table_write_trace(const secd2d_table* t, const char* path) {
    if (!t) return invalid("null table");
    return guard([&] { write_to(path, [&](std::ostream& os) { secd2d::write_trace(t->t, os); }); });
}

void secd2d_table_destroy(secd2d_table* t) { delete t; }

} // extern "C"
