#include "config.hpp"

#include "errors.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace secd2d {

double dbm_to_watt(double dbm) { return std::pow(10.0, dbm / 10.0) * 1e-3; }
double watt_to_dbm(double watt) { return 10.0 * std::log10(watt * 1e3); }

double hue_pmax_for(int N) { return dbm_to_watt(43.0) / N; }

NetworkConfig paper_defaults() {
    NetworkConfig c;
    c.H = 2;
    c.L = 2;
    c.M = 5;
    c.K = 5;
    c.N = 8;
    c.noise_psd = dbm_to_watt(-174.0);
    c.p_max_hue = hue_pmax_for(c.N);
    c.p_max_lue = dbm_to_watt(24.0);
    c.p_max_due = dbm_to_watt(15.0);
    return c;
}

NetworkConfig desk_defaults() {
    NetworkConfig c = paper_defaults();
    c.M = 2;
    c.K = 2;
    c.N = 4;
    c.p_max_hue = hue_pmax_for(c.N);
    return c;
}

void NetworkConfig::validate() const {
    auto req = [](bool ok, const char* what) {
        if (!ok) throw ConfigError(std::string("invalid config: ") + what);
    };
    req(H >= 1 && L >= 1 && M >= 1 && K >= 1, "all counts must be >= 1");
    req(N >= 1, "N must be >= 1");
    req(bandwidth_per_subcarrier > 0, "bandwidth_per_subcarrier must be > 0");
    req(noise_psd > 0, "noise_psd must be > 0");
    req(p_max_hue > 0 && p_max_lue > 0 && p_max_due > 0, "all powers must be > 0");
    req(c_min_hue >= 0 && c_min_lue >= 0 && c_min_due >= 0, "QoS thresholds must be >= 0");
    req(i_max_hue > 0 && i_max_lpn > 0, "interference caps must be > 0");
    req(hpn_radius_m > 0 && lpn_radius_m > 0 && lpn_ring_m > 0 && d2d_distance_m > 0,
        "radii and distances must be > 0");
    req(min_dist_hpn_m > 0 && min_dist_lpn_m > 0, "minimum distances must be > 0");
    req(min_dist_hpn_m < hpn_radius_m, "min_dist_hpn_m must be < hpn_radius_m");
    req(min_dist_lpn_m < lpn_radius_m, "min_dist_lpn_m must be < lpn_radius_m");
    req(d2d_distance_m < 2 * lpn_radius_m, "d2d_distance_m must fit inside the LPN disk");
    req(p_fixed_fraction >= 0 && p_fixed_fraction <= 1, "p_fixed_fraction must lie in [0,1]");
    req(ia_threshold_factor > 0, "ia_threshold_factor must be > 0");
    req(ia_passes >= 0, "ia_passes must be >= 0");
    req(exhaustive_cap >= 1, "exhaustive_cap must be >= 1");
}

void SolverOptions::validate() const {
    auto req = [](bool ok, const char* what) {
        if (!ok) throw ConfigError(std::string("invalid solver option: ") + what);
    };
    req(lambda0 >= 0 && beta0 >= 0 && mu0 >= 0, "initial multipliers must be >= 0");
    req(xi_lambda > 0 && xi_beta > 0 && xi_mu > 0, "step sizes must be > 0");
    req(i_max >= 1 && s_max >= 1, "iteration caps must be >= 1");
    req(delta > 0 && eta > 0 && tau > 0, "tolerances and tau must be > 0");
    req(pf_tol > 0 && pf_max_iter >= 1, "PF settings must be positive");
    req(ascent_starts >= 1 && corner_start_max_j >= 0, "start counts must be positive");
}

namespace {

double parse_double(const std::string& key, const std::string& v) {
    std::istringstream is(v);
    double out = 0;
    is >> out;
    std::string rest;
    if (is.fail() || (is >> rest)) throw ConfigError("bad numeric value for " + key + ": '" + v + "'");
    return out;
}

long long parse_int(const std::string& key, const std::string& v) {
    long long out = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size())
        throw ConfigError("bad integer value for " + key + ": '" + v + "'");
    return out;
}

std::uint64_t parse_u64(const std::string& key, const std::string& v) {
    std::uint64_t out = 0;
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size())
        throw ConfigError("bad unsigned value for " + key + ": '" + v + "'");
    return out;
}

struct Field {
    std::function<void(Settings&, const std::string&, const std::string&)> set;
    std::function<std::string(const Settings&)> get;
};

std::string fmt_double(double x) {
    std::ostringstream os;
    os.precision(17);
    os << x;
    return os.str();
}

const std::map<std::string, Field>& fields() {
    static const std::map<std::string, Field> table = [] {
        std::map<std::string, Field> t;
        auto dbl = [&t](const std::string& name, auto member) {
            t[name] = Field{[member](Settings& s, const std::string& k, const std::string& v) {
                                member(s) = parse_double(k, v);
                            },
                            [member](const Settings& s) {
                                Settings copy = s;
                                return fmt_double(member(copy));
                            }};
        };
        auto integer = [&t](const std::string& name, auto member) {
            t[name] = Field{[member](Settings& s, const std::string& k, const std::string& v) {
                                member(s) = static_cast<int>(parse_int(k, v));
                            },
                            [member](const Settings& s) {
                                Settings copy = s;
                                return std::to_string(member(copy));
                            }};
        };
#define NET_D(f) dbl(#f, [](Settings& s) -> double& { return s.net.f; })
#define NET_I(f) integer(#f, [](Settings& s) -> int& { return s.net.f; })
        NET_I(H);
        NET_I(L);
        NET_I(M);
        NET_I(K);
        NET_I(N);
        NET_D(bandwidth_per_subcarrier);
        NET_D(noise_psd);
        NET_D(p_max_hue);
        NET_D(p_max_lue);
        NET_D(p_max_due);
        NET_D(c_min_hue);
        NET_D(c_min_lue);
        NET_D(c_min_due);
        NET_D(i_max_hue);
        NET_D(i_max_lpn);
        NET_D(hpn_radius_m);
        NET_D(lpn_radius_m);
        NET_D(lpn_ring_m);
        NET_D(d2d_distance_m);
        NET_D(min_dist_hpn_m);
        NET_D(min_dist_lpn_m);
        NET_D(p_fixed_fraction);
        NET_D(ia_threshold_factor);
        NET_I(ia_passes);
        NET_D(exhaustive_cap);
        dbl("pathloss_short_intercept_db", [](Settings& s) -> double& { return s.net.pathloss_short.intercept_db; });
        dbl("pathloss_short_slope_db", [](Settings& s) -> double& { return s.net.pathloss_short.slope_db; });
        dbl("pathloss_long_intercept_db", [](Settings& s) -> double& { return s.net.pathloss_long.intercept_db; });
        dbl("pathloss_long_slope_db", [](Settings& s) -> double& { return s.net.pathloss_long.slope_db; });
#undef NET_D
#undef NET_I
        t["seed"] = Field{[](Settings& s, const std::string& k, const std::string& v) { s.net.seed = parse_u64(k, v); },
                          [](const Settings& s) { return std::to_string(s.net.seed); }};
#define H_D(f) dbl("heuristic_" #f, [](Settings& s) -> double& { return s.heuristic.f; })
        H_D(lambda0);
        H_D(xi0);
        H_D(tol);
        integer("heuristic_max_iter", [](Settings& s) -> int& { return s.heuristic.max_iter; });
#undef H_D
#define S_D(f) dbl("solver_" #f, [](Settings& s) -> double& { return s.solver.f; })
#define S_I(f) integer("solver_" #f, [](Settings& s) -> int& { return s.solver.f; })
        S_D(lambda0);
        S_D(beta0);
        S_D(mu0);
        S_D(xi_lambda);
        S_D(xi_beta);
        S_D(xi_mu);
        S_I(i_max);
        S_D(delta);
        S_I(s_max);
        S_D(eta);
        S_D(tau);
        S_I(corner_start_max_j);
        S_I(ascent_starts);
        S_D(pf_tol);
        S_I(pf_max_iter);
#undef S_D
#undef S_I
        return t;
    }();
    return table;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

} // namespace

void set_value(Settings& s, const std::string& key, const std::string& value) {
    const auto& t = fields();
    auto it = t.find(key);
    if (it == t.end()) throw ConfigError("unknown config key: " + key);
    it->second.set(s, key, value);
}

Settings parse_settings(std::istream& in, const Settings& base) {
    Settings s = base;
    std::string line;
    int lineno = 0;
    bool saw_n = false;
    bool saw_hue_power = false;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("line " + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(line.substr(0, eq));
        std::string value = trim(line.substr(eq + 1));
        if (key.empty() || value.empty())
            throw ConfigError("line " + std::to_string(lineno) + ": empty key or value");
        set_value(s, key, value);
        saw_n = saw_n || key == "N";
        saw_hue_power = saw_hue_power || key == "p_max_hue";
    }
    if (saw_n && !saw_hue_power) s.net.p_max_hue = hue_pmax_for(s.net.N);
    s.net.validate();
    s.solver.validate();
    return s;
}

Settings load_settings(const std::string& path, const Settings& base) {
    std::ifstream f(path);
    if (!f) throw IoError("cannot open config file: " + path);
    return parse_settings(f, base);
}

std::string to_text(const Settings& s) {
    std::ostringstream os;
    for (const auto& [k, f] : fields()) os << k << " = " << f.get(s) << "\n";
    return os.str();
}

} // namespace secd2d
