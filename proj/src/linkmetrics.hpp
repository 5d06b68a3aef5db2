#pragma once

#include "config.hpp"
#include "netmodel.hpp"

#include <cstdint>
#include <vector>

namespace secd2d {

// Binary subcarrier indicators, indexed by transmitter (ChannelSet ordering) and subcarrier.
class Allocation {
public:
    Allocation() = default;
    explicit Allocation(const ChannelSet& ch);

    int num_tx() const { return T_; }
    int N() const { return N_; }

    std::uint8_t& at(int t, int n) { return a_[static_cast<size_t>(t) * N_ + n]; }
    std::uint8_t at(int t, int n) const { return a_[static_cast<size_t>(t) * N_ + n]; }

    std::uint8_t a_hue(int h, int n) const { return at(h, n); }
    std::uint8_t a_lue(int l, int m, int n) const { return at(H_ + l * M_ + m, n); }
    std::uint8_t a_due(int l, int k, int n) const { return at(H_ + L_ * M_ + l * K_ + k, n); }

    // Exactly one HUE per subcarrier and exactly one LUE and one DUE pair per (LPN, subcarrier).
    bool is_complete() const;
    // Same with "at most one"; orthogonal schemes leave classes unserved on some subcarriers.
    bool is_valid() const;

    // Transmitters active on n: the HUE, then LUEs by LPN, then DUE pairs by LPN.
    std::vector<int> scheduled(int n) const;

    bool operator==(const Allocation& o) const = default;

private:
    int H_ = 0, L_ = 0, M_ = 0, K_ = 0, N_ = 0, T_ = 0;
    std::vector<std::uint8_t> a_;
};

class PowerProfile {
public:
    PowerProfile() = default;
    PowerProfile(int num_tx, int N) : T_(num_tx), N_(N), p_(static_cast<size_t>(num_tx) * N, 0.0) {}

    double& at(int t, int n) { return p_[static_cast<size_t>(t) * N_ + n]; }
    double at(int t, int n) const { return p_[static_cast<size_t>(t) * N_ + n]; }
    int num_tx() const { return T_; }
    int N() const { return N_; }

private:
    int T_ = 0, N_ = 0;
    std::vector<double> p_;
};

double class_pmax(const NetworkConfig& cfg, UserClass c);
// bits/s/Hz
double class_cmin(const NetworkConfig& cfg, UserClass c);

// Every scheduled user transmits at fraction * its class p_max.
PowerProfile uniform_power(const ChannelSet& ch, const Allocation& alloc, const NetworkConfig& cfg, double fraction);

struct SinrReport {
    int T = 0;
    int N = 0;
    std::vector<double> legit; // [t*N + n]
    std::vector<double> eve;   // [t*N + n]

    double legit_at(int t, int n) const { return legit[static_cast<size_t>(t) * N + n]; }
    double eve_at(int t, int n) const { return eve[static_cast<size_t>(t) * N + n]; }
};

// Desired power over (every other scheduled transmitter on n + noise) at the serving receiver.
SinrReport legit_sinrs(const ChannelSet& ch, const Allocation& alloc, const PowerProfile& pw,
                       const NetworkConfig& cfg);
// Same structure at the eavesdropper of subcarrier n.
SinrReport eve_sinrs(const ChannelSet& ch, const Allocation& alloc, const PowerProfile& pw, const NetworkConfig& cfg);
SinrReport all_sinrs(const ChannelSet& ch, const Allocation& alloc, const PowerProfile& pw, const NetworkConfig& cfg);

// B*(log2(1+rho) - log2(1+rho_e)); may be negative.
double secrecy_capacity(double rho, double rho_e, double bandwidth);
double secrecy_capacity_clipped(double rho, double rho_e, double bandwidth);

struct SecrecyBreakdown {
    int T = 0;
    int N = 0;
    std::vector<double> per_slot_bps; // [t*N + n], unclipped, 0 where unscheduled
    std::vector<double> per_user_bps; // [t], unclipped sum over subcarriers
    double total_bps = 0.0;           // unclipped network secrecy
    double clipped_total_bps = 0.0;   // sum of max(slot, 0)

    double slot(int t, int n) const { return per_slot_bps[static_cast<size_t>(t) * N + n]; }
};

SecrecyBreakdown network_secrecy(const ChannelSet& ch, const Allocation& alloc, const PowerProfile& pw,
                                 const NetworkConfig& cfg);

// Per transmitter: summed secrecy (bits/s/Hz) >= class threshold.
std::vector<bool> qos_feasible(const SecrecyBreakdown& b, const ChannelSet& ch, const NetworkConfig& cfg);

} // namespace secd2d
