#pragma once

#include "config.hpp"

#include <random>
#include <vector>

namespace secd2d {

using Rng = std::mt19937_64;

struct Point {
    double x = 0.0;
    double y = 0.0;
};

double distance(Point a, Point b);

struct Topology {
    Point hpn_pos;
    std::vector<Point> lpn_pos;                 // [L]
    std::vector<Point> hue_pos;                 // [H]
    std::vector<std::vector<Point>> lue_pos;    // [L][M]
    std::vector<std::vector<Point>> due_tx_pos; // [L][K]
    std::vector<std::vector<Point>> due_rx_pos; // [L][K]
    std::vector<Point> eve_pos;                 // [N]
};

enum class LinkClass { Short, Long };

enum class FadeMode {
    Rayleigh,
    Unit, // |h|^2 pinned to 1, for tests
};

enum class UserClass { Hue, Lue, Due };

// Throws ConfigError when rejection sampling gives up.
Topology generate_topology(const NetworkConfig& cfg, Rng& rng);

// Linear gain 10^(-PL/10), PL = intercept + slope*log10(d). Throws DomainError for d <= 0.
double path_loss_gain(double distance_m, LinkClass cls, const NetworkConfig& cfg);

// Transmitters: HUEs, then LUEs by (l, m), then DUE transmitters by (l, k).
// Receivers: the HPN, then LPNs, then DUE receivers by (l, k).
// Eavesdropper n listens on subcarrier n only.
class ChannelSet {
public:
    ChannelSet() = default;
    ChannelSet(int H, int L, int M, int K, int N);

    int H() const { return H_; }
    int L() const { return L_; }
    int M() const { return M_; }
    int K() const { return K_; }
    int N() const { return N_; }
    int num_tx() const { return T_; }
    int num_rx() const { return R_; }

    int hue_tx(int h) const { return h; }
    int lue_tx(int l, int m) const { return H_ + l * M_ + m; }
    int due_tx(int l, int k) const { return H_ + L_ * M_ + l * K_ + k; }
    int hpn_rx() const { return 0; }
    int lpn_rx(int l) const { return 1 + l; }
    int due_rx(int l, int k) const { return 1 + L_ + l * K_ + k; }

    UserClass tx_class(int t) const;
    // LPN index of an LUE or DUE transmitter, -1 for HUEs.
    int tx_cell(int t) const;
    // Receiver serving transmitter t (HPN, own LPN, or paired DUE receiver).
    int serving_rx(int t) const;

    double& gain(int t, int n, int r) { return legit_[(static_cast<size_t>(t) * N_ + n) * R_ + r]; }
    double gain(int t, int n, int r) const { return legit_[(static_cast<size_t>(t) * N_ + n) * R_ + r]; }
    double& eve_gain(int t, int n) { return eve_[static_cast<size_t>(t) * N_ + n]; }
    double eve_gain(int t, int n) const { return eve_[static_cast<size_t>(t) * N_ + n]; }

    // The link classes of the notation table.
    double g_HH(int h, int n) const { return gain(hue_tx(h), n, hpn_rx()); }
    double g_HL(int h, int n, int l) const { return gain(hue_tx(h), n, lpn_rx(l)); }
    double g_HD(int h, int n, int l, int k) const { return gain(hue_tx(h), n, due_rx(l, k)); }
    double g_HE(int h, int n) const { return eve_gain(hue_tx(h), n); }
    double g_LH(int l, int m, int n) const { return gain(lue_tx(l, m), n, hpn_rx()); }
    double g_LL(int l, int m, int n, int j) const { return gain(lue_tx(l, m), n, lpn_rx(j)); }
    double g_LD(int l, int m, int n, int j, int k) const { return gain(lue_tx(l, m), n, due_rx(j, k)); }
    double g_LE(int l, int m, int n) const { return eve_gain(lue_tx(l, m), n); }
    double g_DH(int l, int k, int n) const { return gain(due_tx(l, k), n, hpn_rx()); }
    double g_DL(int l, int k, int n, int j) const { return gain(due_tx(l, k), n, lpn_rx(j)); }
    double g_DD(int l, int k, int n, int j, int i) const { return gain(due_tx(l, k), n, due_rx(j, i)); }
    double g_DE(int l, int k, int n) const { return eve_gain(due_tx(l, k), n); }

    bool operator==(const ChannelSet& o) const = default;

private:
    int H_ = 0, L_ = 0, M_ = 0, K_ = 0, N_ = 0, T_ = 0, R_ = 0;
    std::vector<double> legit_;
    std::vector<double> eve_;
};

// Short model between LPN-tier transmitters (LUEs, DUE transmitters) and LPN-tier receivers
// (LPNs, DUE receivers); long model for everything touching the HPN, an HUE or an eavesdropper.
LinkClass link_class(const ChannelSet& ch, int t, int r);

ChannelSet sample_channels(const Topology& topo, const NetworkConfig& cfg, Rng& rng,
                           FadeMode fade = FadeMode::Rayleigh);

// |h|^2 for h circularly-symmetric complex Gaussian with unit variance.
double rayleigh_power(Rng& rng);

// Topology and channels for one snapshot, seeded deterministically.
ChannelSet make_snapshot(const NetworkConfig& cfg, std::uint64_t seed);

} // namespace secd2d
