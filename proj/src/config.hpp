#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>

namespace secd2d {

struct PathLossModel {
    double intercept_db = 31.5;
    double slope_db = 40.0;
};

double dbm_to_watt(double dbm);
double watt_to_dbm(double watt);

// Scenario parameters plus the knobs of the reference schemes. SI units.
struct NetworkConfig {
    int H = 2;
    int L = 2;
    int M = 5;
    int K = 5;
    int N = 8;

    double bandwidth_per_subcarrier = 200e3;
    double noise_psd = 0.0; // W/Hz, set from -174 dBm/Hz in the factories

    double p_max_hue = 0.0;
    double p_max_lue = 0.0;
    double p_max_due = 0.0;

    // bits/s/Hz
    double c_min_hue = 0.0;
    double c_min_lue = 0.0;
    double c_min_due = 0.0;

    double i_max_hue = 1e-12;
    double i_max_lpn = 1e-14;

    double hpn_radius_m = 800.0;
    double lpn_radius_m = 200.0;
    double lpn_ring_m = 1000.0;
    double d2d_distance_m = 10.0;
    double min_dist_hpn_m = 50.0;
    double min_dist_lpn_m = 20.0;

    PathLossModel pathloss_short{31.5, 40.0};
    PathLossModel pathloss_long{31.5, 35.0};

    std::uint64_t seed = 1;

    // Reference schemes.
    double p_fixed_fraction = 0.5;
    double ia_threshold_factor = 1.0;
    int ia_passes = 1;
    double exhaustive_cap = 1e8;

    double noise_power() const { return bandwidth_per_subcarrier * noise_psd; }
    int users_per_subcarrier() const { return 1 + 2 * L; }

    void validate() const;
};

struct HeuristicOptions {
    double lambda0 = 1.0;
    double xi0 = 0.1;
    int max_iter = 200;
    double tol = 1e-6;
};

struct SolverOptions {
    double lambda0 = 1.0;
    double beta0 = 0.0;
    double mu0 = 0.0;
    double xi_lambda = 0.5;
    double xi_beta = 0.2;
    double xi_mu = 0.2;
    int i_max = 200;
    double delta = 1e-3;
    int s_max = 500;
    double eta = 1e-6;
    double tau = 0.1;
    // Candidate starts: 0.5, all-ones, then every corner up to this J (single on/off corners above).
    int corner_start_max_j = 6;
    // Ascents run from this many best-scoring candidates, plus the previous outer solution.
    int ascent_starts = 3;
    double pf_tol = 1e-13;
    int pf_max_iter = 200000;

    void validate() const;
};

struct Settings {
    NetworkConfig net;
    HeuristicOptions heuristic;
    SolverOptions solver;
};

// Paper-scale scenario: H=2, L=2, M=5, K=5, N=8.
NetworkConfig paper_defaults();
// Desk-scale scenario: H=2, L=2, M=2, K=2, N=4.
NetworkConfig desk_defaults();

// HPN total transmit power (43 dBm) divided evenly over N subcarriers.
double hue_pmax_for(int N);

// Applies one key=value pair. Unknown keys and malformed values throw ConfigError.
void set_value(Settings& s, const std::string& key, const std::string& value);

// Flat key=value text; '#' starts a comment. Keys not present keep the values in `base`.
// When N is given without p_max_hue, p_max_hue follows the per-subcarrier HPN split.
Settings parse_settings(std::istream& in, const Settings& base);
Settings load_settings(const std::string& path, const Settings& base);

std::string to_text(const Settings& s);

} // namespace secd2d
