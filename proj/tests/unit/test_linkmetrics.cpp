#include "doctest.h"

#include "linkmetrics.hpp"
#include "suballoc.hpp"

#include <cmath>

using namespace secd2d;

namespace {

// Round-robin complete allocation, independent of the heuristic.
Allocation round_robin(const ChannelSet& ch) {
    Allocation a(ch);
    for (int n = 0; n < ch.N(); ++n) {
        a.at(ch.hue_tx(n % ch.H()), n) = 1;
        for (int l = 0; l < ch.L(); ++l) {
            a.at(ch.lue_tx(l, (n + l) % ch.M()), n) = 1;
            a.at(ch.due_tx(l, (n + 2 * l) % ch.K()), n) = 1;
        }
    }
    return a;
}

struct Oracle {
    double legit;
    double eve;
};

// SINRs written out class by class from the named channel accessors.
Oracle hue_oracle(const ChannelSet& ch, const Allocation& a, const PowerProfile& pw, double noise, int h, int n) {
    double i_l = noise, i_e = noise;
    for (int l = 0; l < ch.L(); ++l) {
        for (int m = 0; m < ch.M(); ++m) {
            const double p = a.a_lue(l, m, n) * pw.at(ch.lue_tx(l, m), n);
            i_l += p * ch.g_LH(l, m, n);
            i_e += p * ch.g_LE(l, m, n);
        }
        for (int k = 0; k < ch.K(); ++k) {
            const double p = a.a_due(l, k, n) * pw.at(ch.due_tx(l, k), n);
            i_l += p * ch.g_DH(l, k, n);
            i_e += p * ch.g_DE(l, k, n);
        }
    }
    for (int o = 0; o < ch.H(); ++o) {
        if (o == h) continue;
        const double p = a.a_hue(o, n) * pw.at(ch.hue_tx(o), n);
        i_l += p * ch.g_HH(o, n);
        i_e += p * ch.g_HE(o, n);
    }
    const double p = pw.at(ch.hue_tx(h), n);
    return {p * ch.g_HH(h, n) / i_l, p * ch.g_HE(h, n) / i_e};
}

Oracle due_oracle(const ChannelSet& ch, const Allocation& a, const PowerProfile& pw, double noise, int l0, int k0,
                  int n) {
    double i_l = noise, i_e = noise;
    for (int h = 0; h < ch.H(); ++h) {
        const double p = a.a_hue(h, n) * pw.at(ch.hue_tx(h), n);
        i_l += p * ch.g_HD(h, n, l0, k0);
        i_e += p * ch.g_HE(h, n);
    }
    for (int l = 0; l < ch.L(); ++l) {
        for (int m = 0; m < ch.M(); ++m) {
            const double p = a.a_lue(l, m, n) * pw.at(ch.lue_tx(l, m), n);
            i_l += p * ch.g_LD(l, m, n, l0, k0);
            i_e += p * ch.g_LE(l, m, n);
        }
        for (int k = 0; k < ch.K(); ++k) {
            if (l == l0 && k == k0) continue;
            const double p = a.a_due(l, k, n) * pw.at(ch.due_tx(l, k), n);
            i_l += p * ch.g_DD(l, k, n, l0, k0);
            i_e += p * ch.g_DE(l, k, n);
        }
    }
    const double p = pw.at(ch.due_tx(l0, k0), n);
    return {p * ch.g_DD(l0, k0, n, l0, k0) / i_l, p * ch.g_DE(l0, k0, n) / i_e};
}

Oracle lue_oracle(const ChannelSet& ch, const Allocation& a, const PowerProfile& pw, double noise, int l0, int m0,
                  int n) {
    double i_l = noise, i_e = noise;
    for (int h = 0; h < ch.H(); ++h) {
        const double p = a.a_hue(h, n) * pw.at(ch.hue_tx(h), n);
        i_l += p * ch.g_HL(h, n, l0);
        i_e += p * ch.g_HE(h, n);
    }
    for (int l = 0; l < ch.L(); ++l) {
        for (int m = 0; m < ch.M(); ++m) {
            if (l == l0 && m == m0) continue;
            const double p = a.a_lue(l, m, n) * pw.at(ch.lue_tx(l, m), n);
            i_l += p * ch.g_LL(l, m, n, l0);
            i_e += p * ch.g_LE(l, m, n);
        }
        for (int k = 0; k < ch.K(); ++k) {
            const double p = a.a_due(l, k, n) * pw.at(ch.due_tx(l, k), n);
            i_l += p * ch.g_DL(l, k, n, l0);
            i_e += p * ch.g_DE(l, k, n);
        }
    }
    const double p = pw.at(ch.lue_tx(l0, m0), n);
    return {p * ch.g_LL(l0, m0, n, l0) / i_l, p * ch.g_LE(l0, m0, n) / i_e};
}

} // namespace

TEST_CASE("SINRs match the class-by-class formulas") {
    const NetworkConfig cfg = desk_defaults();
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        const ChannelSet ch = make_snapshot(cfg, seed);
        const Allocation a = round_robin(ch);
        REQUIRE(a.is_complete());
        PowerProfile pw(ch.num_tx(), ch.N());
        for (int t = 0; t < ch.num_tx(); ++t)
            for (int n = 0; n < ch.N(); ++n)
                if (a.at(t, n)) pw.at(t, n) = class_pmax(cfg, ch.tx_class(t)) * (0.2 + 0.1 * ((t + n) % 7));
        const SinrReport r = all_sinrs(ch, a, pw, cfg);
        const double noise = cfg.noise_power();
        for (int n = 0; n < ch.N(); ++n) {
            for (int h = 0; h < ch.H(); ++h) {
                if (!a.a_hue(h, n)) continue;
                const Oracle o = hue_oracle(ch, a, pw, noise, h, n);
                CHECK(r.legit_at(ch.hue_tx(h), n) == doctest::Approx(o.legit).epsilon(1e-12));
                CHECK(r.eve_at(ch.hue_tx(h), n) == doctest::Approx(o.eve).epsilon(1e-12));
            }
            for (int l = 0; l < ch.L(); ++l) {
                for (int m = 0; m < ch.M(); ++m) {
                    if (!a.a_lue(l, m, n)) continue;
                    const Oracle o = lue_oracle(ch, a, pw, noise, l, m, n);
                    CHECK(r.legit_at(ch.lue_tx(l, m), n) == doctest::Approx(o.legit).epsilon(1e-12));
                    CHECK(r.eve_at(ch.lue_tx(l, m), n) == doctest::Approx(o.eve).epsilon(1e-12));
                }
                for (int k = 0; k < ch.K(); ++k) {
                    if (!a.a_due(l, k, n)) continue;
                    const Oracle o = due_oracle(ch, a, pw, noise, l, k, n);
                    CHECK(r.legit_at(ch.due_tx(l, k), n) == doctest::Approx(o.legit).epsilon(1e-12));
                    CHECK(r.eve_at(ch.due_tx(l, k), n) == doctest::Approx(o.eve).epsilon(1e-12));
                }
            }
        }
        const SinrReport lo = legit_sinrs(ch, a, pw, cfg);
        const SinrReport eo = eve_sinrs(ch, a, pw, cfg);
        CHECK(lo.legit == r.legit);
        CHECK(eo.eve == r.eve);
    }
}

TEST_CASE("secrecy capacity") {
    CHECK(secrecy_capacity(3.0, 1.0, 1.0) == doctest::Approx(1.0));
    CHECK(secrecy_capacity(1.0, 3.0, 2.0) == doctest::Approx(-2.0));
    CHECK(secrecy_capacity_clipped(1.0, 3.0, 2.0) == 0.0);
    CHECK(secrecy_capacity(7.0, 7.0, 5.0) == 0.0);
    CHECK(secrecy_capacity(15.0, 0.0, 200e3) == doctest::Approx(800e3));
}

TEST_CASE("network secrecy sums slots and clips per slot") {
    const NetworkConfig cfg = desk_defaults();
    const ChannelSet ch = make_snapshot(cfg, 2);
    const Allocation a = round_robin(ch);
    const PowerProfile pw = uniform_power(ch, a, cfg, 1.0);
    const SecrecyBreakdown b = network_secrecy(ch, a, pw, cfg);
    const SinrReport r = all_sinrs(ch, a, pw, cfg);
    double total = 0.0, clipped = 0.0;
    for (int t = 0; t < ch.num_tx(); ++t) {
        double user = 0.0;
        for (int n = 0; n < ch.N(); ++n) {
            const double s = a.at(t, n) ? secrecy_capacity(r.legit_at(t, n), r.eve_at(t, n), 200e3) : 0.0;
            CHECK(b.slot(t, n) == doctest::Approx(s));
            user += s;
            clipped += std::max(s, 0.0);
        }
        CHECK(b.per_user_bps[t] == doctest::Approx(user));
        total += user;
    }
    CHECK(b.total_bps == doctest::Approx(total));
    CHECK(b.clipped_total_bps == doctest::Approx(clipped));
    CHECK(b.clipped_total_bps >= b.total_bps - 1e-6);
}

TEST_CASE("zero power gives zero SINR and zero secrecy") {
    const NetworkConfig cfg = desk_defaults();
    const ChannelSet ch = make_snapshot(cfg, 3);
    const Allocation a = round_robin(ch);
    const SecrecyBreakdown b = network_secrecy(ch, a, uniform_power(ch, a, cfg, 0.0), cfg);
    CHECK(b.total_bps == 0.0);
    CHECK(b.clipped_total_bps == 0.0);
}

TEST_CASE("QoS feasibility compares per-user spectral efficiency with the class threshold") {
    NetworkConfig cfg = desk_defaults();
    const ChannelSet ch = make_snapshot(cfg, 4);
    const Allocation a = round_robin(ch);
    const SecrecyBreakdown b = network_secrecy(ch, a, uniform_power(ch, a, cfg, 1.0), cfg);
    cfg.c_min_hue = cfg.c_min_lue = cfg.c_min_due = 0.0;
    const auto ok0 = qos_feasible(b, ch, cfg);
    for (int t = 0; t < ch.num_tx(); ++t) CHECK(ok0[t] == (b.per_user_bps[t] >= 0.0));
    cfg.c_min_due = 1e6;
    const auto ok1 = qos_feasible(b, ch, cfg);
    for (int l = 0; l < ch.L(); ++l)
        for (int k = 0; k < ch.K(); ++k) CHECK_FALSE(ok1[ch.due_tx(l, k)]);
}

TEST_CASE("allocation completeness and validity") {
    const ChannelSet ch = make_snapshot(desk_defaults(), 1);
    Allocation a = round_robin(ch);
    CHECK(a.is_complete());
    CHECK(a.is_valid());
    const auto s = a.scheduled(0);
    REQUIRE(s.size() == 5);
    CHECK(ch.tx_class(s[0]) == UserClass::Hue);
    CHECK(ch.tx_class(s[1]) == UserClass::Lue);
    CHECK(ch.tx_class(s[4]) == UserClass::Due);
    a.at(ch.hue_tx(0), 0) = 0;
    a.at(ch.hue_tx(1), 0) = 0;
    CHECK_FALSE(a.is_complete());
    CHECK(a.is_valid());
    a.at(ch.hue_tx(0), 0) = 1;
    a.at(ch.hue_tx(1), 0) = 1;
    CHECK_FALSE(a.is_valid());
}
