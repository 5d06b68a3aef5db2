#include "netmodel.hpp"

#include "errors.hpp"

#include <cmath>
#include <numbers>

namespace secd2d {

namespace {

constexpr int kMaxPlacementAttempts = 100000;
// Path-loss formulas are referenced to 1 m; closer links are clamped.
constexpr double kMinLinkDistance = 1.0;

Point uniform_in_annulus(Rng& rng, Point center, double radius, double min_dist) {
    std::uniform_real_distribution<double> u(-radius, radius);
    for (int a = 0; a < kMaxPlacementAttempts; ++a) {
        const double dx = u(rng);
        const double dy = u(rng);
        const double r = std::hypot(dx, dy);
        if (r <= radius && r >= min_dist) return {center.x + dx, center.y + dy};
    }
    throw ConfigError("placement failed: no point in annulus after bounded attempts");
}

} // namespace

double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

Topology generate_topology(const NetworkConfig& cfg, Rng& rng) {
    cfg.validate();
    Topology t;
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);

    t.lpn_pos.resize(cfg.L);
    for (int l = 0; l < cfg.L; ++l) {
        const double a = angle(rng);
        t.lpn_pos[l] = {cfg.lpn_ring_m * std::cos(a), cfg.lpn_ring_m * std::sin(a)};
    }
    t.hue_pos.resize(cfg.H);
    for (auto& p : t.hue_pos) p = uniform_in_annulus(rng, t.hpn_pos, cfg.hpn_radius_m, cfg.min_dist_hpn_m);

    t.lue_pos.assign(cfg.L, std::vector<Point>(cfg.M));
    for (int l = 0; l < cfg.L; ++l)
        for (auto& p : t.lue_pos[l]) p = uniform_in_annulus(rng, t.lpn_pos[l], cfg.lpn_radius_m, cfg.min_dist_lpn_m);

    t.due_tx_pos.assign(cfg.L, std::vector<Point>(cfg.K));
    t.due_rx_pos.assign(cfg.L, std::vector<Point>(cfg.K));
    for (int l = 0; l < cfg.L; ++l) {
        for (int k = 0; k < cfg.K; ++k) {
            bool placed = false;
            for (int a = 0; a < kMaxPlacementAttempts && !placed; ++a) {
                const Point tx = uniform_in_annulus(rng, t.lpn_pos[l], cfg.lpn_radius_m, cfg.min_dist_lpn_m);
                // A transmitter near the disk edge may leave few valid receiver angles; bounded retries
                // per transmitter, then a fresh transmitter.
                for (int b = 0; b < 64; ++b) {
                    const double phi = angle(rng);
                    const Point rx{tx.x + cfg.d2d_distance_m * std::cos(phi), tx.y + cfg.d2d_distance_m * std::sin(phi)};
                    const double d = distance(rx, t.lpn_pos[l]);
                    if (d <= cfg.lpn_radius_m && d >= cfg.min_dist_lpn_m) {
                        t.due_tx_pos[l][k] = tx;
                        t.due_rx_pos[l][k] = rx;
                        placed = true;
                        break;
                    }
                }
            }
            if (!placed) throw ConfigError("placement failed: no valid D2D receiver position");
        }
    }

    t.eve_pos.resize(cfg.N);
    for (auto& p : t.eve_pos) p = uniform_in_annulus(rng, t.hpn_pos, cfg.hpn_radius_m, cfg.min_dist_hpn_m);
    return t;
}

double path_loss_gain(double distance_m, LinkClass cls, const NetworkConfig& cfg) {
    if (!(distance_m > 0.0)) throw DomainError("path_loss_gain: distance must be > 0");
    const PathLossModel& m = cls == LinkClass::Short ? cfg.pathloss_short : cfg.pathloss_long;
    const double pl_db = m.intercept_db + m.slope_db * std::log10(distance_m);
    return std::pow(10.0, -pl_db / 10.0);
}

ChannelSet::ChannelSet(int H, int L, int M, int K, int N)
    : H_(H), L_(L), M_(M), K_(K), N_(N), T_(H + L * (M + K)), R_(1 + L + L * K),
      legit_(static_cast<size_t>(T_) * N_ * R_, 0.0), eve_(static_cast<size_t>(T_) * N_, 0.0) {}

UserClass ChannelSet::tx_class(int t) const {
    if (t < H_) return UserClass::Hue;
    if (t < H_ + L_ * M_) return UserClass::Lue;
    return UserClass::Due;
}

int ChannelSet::tx_cell(int t) const {
    switch (tx_class(t)) {
    case UserClass::Hue: return -1;
    case UserClass::Lue: return (t - H_) / M_;
    case UserClass::Due: return (t - H_ - L_ * M_) / K_;
    }
    return -1;
}

int ChannelSet::serving_rx(int t) const {
    switch (tx_class(t)) {
    case UserClass::Hue: return hpn_rx();
    case UserClass::Lue: return lpn_rx(tx_cell(t));
    case UserClass::Due: return 1 + L_ + (t - H_ - L_ * M_);
    }
    return 0;
}

LinkClass link_class(const ChannelSet& ch, int t, int r) {
    const bool lpn_tier_tx = ch.tx_class(t) != UserClass::Hue;
    const bool lpn_tier_rx = r != ch.hpn_rx();
    return lpn_tier_tx && lpn_tier_rx ? LinkClass::Short : LinkClass::Long;
}

double rayleigh_power(Rng& rng) {
    std::normal_distribution<double> g(0.0, 1.0);
    const double re = g(rng);
    const double im = g(rng);
    return 0.5 * (re * re + im * im);
}

ChannelSet sample_channels(const Topology& topo, const NetworkConfig& cfg, Rng& rng, FadeMode fade) {
    const int L = static_cast<int>(topo.lpn_pos.size());
    const int H = static_cast<int>(topo.hue_pos.size());
    const int M = L > 0 ? static_cast<int>(topo.lue_pos[0].size()) : 0;
    const int K = L > 0 ? static_cast<int>(topo.due_tx_pos[0].size()) : 0;
    const int N = static_cast<int>(topo.eve_pos.size());
    ChannelSet ch(H, L, M, K, N);

    std::vector<Point> tx(ch.num_tx());
    for (int h = 0; h < H; ++h) tx[ch.hue_tx(h)] = topo.hue_pos[h];
    for (int l = 0; l < L; ++l) {
        for (int m = 0; m < M; ++m) tx[ch.lue_tx(l, m)] = topo.lue_pos[l][m];
        for (int k = 0; k < K; ++k) tx[ch.due_tx(l, k)] = topo.due_tx_pos[l][k];
    }
    std::vector<Point> rx(ch.num_rx());
    rx[ch.hpn_rx()] = topo.hpn_pos;
    for (int l = 0; l < L; ++l) {
        rx[ch.lpn_rx(l)] = topo.lpn_pos[l];
        for (int k = 0; k < K; ++k) rx[ch.due_rx(l, k)] = topo.due_rx_pos[l][k];
    }

    auto draw = [&]() { return fade == FadeMode::Unit ? 1.0 : rayleigh_power(rng); };
    for (int t = 0; t < ch.num_tx(); ++t) {
        for (int r = 0; r < ch.num_rx(); ++r) {
            const double d = std::max(distance(tx[t], rx[r]), kMinLinkDistance);
            const double pl = path_loss_gain(d, link_class(ch, t, r), cfg);
            for (int n = 0; n < N; ++n) ch.gain(t, n, r) = pl * draw();
        }
        for (int n = 0; n < N; ++n) {
            const double d = std::max(distance(tx[t], topo.eve_pos[n]), kMinLinkDistance);
            ch.eve_gain(t, n) = path_loss_gain(d, LinkClass::Long, cfg) * draw();
        }
    }
    return ch;
}

ChannelSet make_snapshot(const NetworkConfig& cfg, std::uint64_t seed) {
    Rng rng(seed);
    const Topology topo = generate_topology(cfg, rng);
    return sample_channels(topo, cfg, rng);
}

} // namespace secd2d
