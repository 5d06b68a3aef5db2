#include "doctest.h"

#include "errors.hpp"
#include "netmodel.hpp"

#include <cmath>

using namespace secd2d;

TEST_CASE("placement invariants hold across seeds") {
    const NetworkConfig cfg = paper_defaults();
    for (std::uint64_t seed = 1; seed <= 50; ++seed) {
        Rng rng(seed);
        const Topology t = generate_topology(cfg, rng);
        REQUIRE(t.lpn_pos.size() == 2);
        REQUIRE(t.eve_pos.size() == 8);
        for (const Point& p : t.lpn_pos) CHECK(distance(p, t.hpn_pos) == doctest::Approx(cfg.lpn_ring_m));
        for (const Point& p : t.hue_pos) {
            const double d = distance(p, t.hpn_pos);
            CHECK(d >= cfg.min_dist_hpn_m);
            CHECK(d <= cfg.hpn_radius_m);
        }
        for (int l = 0; l < cfg.L; ++l) {
            for (const Point& p : t.lue_pos[l]) {
                const double d = distance(p, t.lpn_pos[l]);
                CHECK(d >= cfg.min_dist_lpn_m);
                CHECK(d <= cfg.lpn_radius_m);
            }
            for (int k = 0; k < cfg.K; ++k) {
                CHECK(distance(t.due_tx_pos[l][k], t.due_rx_pos[l][k]) == doctest::Approx(cfg.d2d_distance_m));
                for (const Point& p : {t.due_tx_pos[l][k], t.due_rx_pos[l][k]}) {
                    const double d = distance(p, t.lpn_pos[l]);
                    CHECK(d >= cfg.min_dist_lpn_m);
                    CHECK(d <= cfg.lpn_radius_m + 1e-9);
                }
            }
        }
        for (const Point& p : t.eve_pos) CHECK(distance(p, t.hpn_pos) <= cfg.hpn_radius_m);
    }
}

TEST_CASE("path loss follows intercept + slope log10(d)") {
    const NetworkConfig cfg = paper_defaults();
    CHECK(path_loss_gain(1.0, LinkClass::Short, cfg) == doctest::Approx(std::pow(10.0, -3.15)));
    CHECK(path_loss_gain(100.0, LinkClass::Short, cfg) == doctest::Approx(std::pow(10.0, -(31.5 + 80.0) / 10)));
    CHECK(path_loss_gain(100.0, LinkClass::Long, cfg) == doctest::Approx(std::pow(10.0, -(31.5 + 70.0) / 10)));
    CHECK(path_loss_gain(50.0, LinkClass::Short, cfg) < path_loss_gain(50.0, LinkClass::Long, cfg));
    CHECK_THROWS_AS(path_loss_gain(0.0, LinkClass::Long, cfg), DomainError);
}

TEST_CASE("index layout and class accessors agree") {
    ChannelSet ch(2, 2, 3, 2, 4);
    CHECK(ch.num_tx() == 2 + 2 * 3 + 2 * 2);
    CHECK(ch.num_rx() == 1 + 2 + 2 * 2);
    CHECK(ch.tx_class(ch.hue_tx(1)) == UserClass::Hue);
    CHECK(ch.tx_class(ch.lue_tx(1, 2)) == UserClass::Lue);
    CHECK(ch.tx_class(ch.due_tx(1, 1)) == UserClass::Due);
    CHECK(ch.tx_cell(ch.lue_tx(1, 0)) == 1);
    CHECK(ch.tx_cell(ch.due_tx(0, 1)) == 0);
    CHECK(ch.serving_rx(ch.hue_tx(0)) == ch.hpn_rx());
    CHECK(ch.serving_rx(ch.lue_tx(1, 1)) == ch.lpn_rx(1));
    CHECK(ch.serving_rx(ch.due_tx(1, 0)) == ch.due_rx(1, 0));
    ch.gain(ch.lue_tx(0, 1), 2, ch.due_rx(1, 1)) = 7.0;
    CHECK(ch.g_LD(0, 1, 2, 1, 1) == 7.0);
    ch.eve_gain(ch.due_tx(1, 0), 3) = 5.0;
    CHECK(ch.g_DE(1, 0, 3) == 5.0);
    ch.gain(ch.hue_tx(1), 0, ch.lpn_rx(1)) = 3.0;
    CHECK(ch.g_HL(1, 0, 1) == 3.0);
}

TEST_CASE("link classes: short only inside the LPN tier") {
    ChannelSet ch(1, 1, 1, 1, 1);
    CHECK(link_class(ch, ch.lue_tx(0, 0), ch.lpn_rx(0)) == LinkClass::Short);
    CHECK(link_class(ch, ch.due_tx(0, 0), ch.due_rx(0, 0)) == LinkClass::Short);
    CHECK(link_class(ch, ch.lue_tx(0, 0), ch.hpn_rx()) == LinkClass::Long);
    CHECK(link_class(ch, ch.hue_tx(0), ch.lpn_rx(0)) == LinkClass::Long);
    CHECK(link_class(ch, ch.hue_tx(0), ch.hpn_rx()) == LinkClass::Long);
}

TEST_CASE("unit fading reproduces the pure path loss") {
    const NetworkConfig cfg = desk_defaults();
    Rng rng(3);
    const Topology t = generate_topology(cfg, rng);
    Rng r2(4);
    const ChannelSet ch = sample_channels(t, cfg, r2, FadeMode::Unit);
    const double d = distance(t.due_tx_pos[1][0], t.due_rx_pos[1][0]);
    for (int n = 0; n < cfg.N; ++n) {
        CHECK(ch.g_DD(1, 0, n, 1, 0) == doctest::Approx(path_loss_gain(d, LinkClass::Short, cfg)));
        const double de = distance(t.hue_pos[0], t.eve_pos[n]);
        CHECK(ch.g_HE(0, n) == doctest::Approx(path_loss_gain(de, LinkClass::Long, cfg)));
    }
}

TEST_CASE("Rayleigh power has unit mean") {
    Rng rng(11);
    double sum = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
        const double g = rayleigh_power(rng);
        REQUIRE(g >= 0.0);
        sum += g;
    }
    CHECK(sum / n == doctest::Approx(1.0).epsilon(0.01));
}

TEST_CASE("snapshots are deterministic per seed and differ across seeds") {
    const NetworkConfig cfg = desk_defaults();
    CHECK(make_snapshot(cfg, 5) == make_snapshot(cfg, 5));
    CHECK_FALSE(make_snapshot(cfg, 5) == make_snapshot(cfg, 6));
}

TEST_CASE("impossible geometry is refused") {
    NetworkConfig cfg = desk_defaults();
    cfg.lpn_radius_m = 21.0;
    cfg.min_dist_lpn_m = 21.0 - 1e-9; // annulus of negligible area
    cfg.d2d_distance_m = 5.0;
    Rng rng(1);
    CHECK_THROWS_AS(generate_topology(cfg, rng), ConfigError);
}
