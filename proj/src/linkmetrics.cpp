#include "linkmetrics.hpp"

#include <algorithm>
#include <cmath>

namespace secd2d {

Allocation::Allocation(const ChannelSet& ch)
    : H_(ch.H()), L_(ch.L()), M_(ch.M()), K_(ch.K()), N_(ch.N()), T_(ch.num_tx()),
      a_(static_cast<size_t>(T_) * N_, 0) {}

namespace {

template <typename Pred>
bool check_counts(const Allocation& a, int H, int L, int M, int K, Pred ok) {
    for (int n = 0; n < a.N(); ++n) {
        int hues = 0;
        for (int h = 0; h < H; ++h) hues += a.a_hue(h, n);
        if (!ok(hues)) return false;
        for (int l = 0; l < L; ++l) {
            int lues = 0;
            int dues = 0;
            for (int m = 0; m < M; ++m) lues += a.a_lue(l, m, n);
            for (int k = 0; k < K; ++k) dues += a.a_due(l, k, n);
            if (!ok(lues) || !ok(dues)) return false;
        }
    }
    for (int t = 0; t < a.num_tx(); ++t)
        for (int n = 0; n < a.N(); ++n)
            if (a.at(t, n) > 1) return false;
    return true;
}

} // namespace

bool Allocation::is_complete() const {
    return check_counts(*this, H_, L_, M_, K_, [](int c) { return c == 1; });
}

bool Allocation::is_valid() const {
    return check_counts(*this, H_, L_, M_, K_, [](int c) { return c <= 1; });
}

std::vector<int> Allocation::scheduled(int n) const {
    std::vector<int> out;
    for (int t = 0; t < T_; ++t)
        if (at(t, n)) out.push_back(t);
    return out;
}

double class_pmax(const NetworkConfig& cfg, UserClass c) {
    switch (c) {
    case UserClass::Hue: return cfg.p_max_hue;
    case UserClass::Lue: return cfg.p_max_lue;
    case UserClass::Due: return cfg.p_max_due;
    }
    return 0.0;
}

double class_cmin(const NetworkConfig& cfg, UserClass c) {
    switch (c) {
    case UserClass::Hue: return cfg.c_min_hue;
    case UserClass::Lue: return cfg.c_min_lue;
    case UserClass::Due: return cfg.c_min_due;
    }
    return 0.0;
}

PowerProfile uniform_power(const ChannelSet& ch, const Allocation& alloc, const NetworkConfig& cfg, double fraction) {
    PowerProfile pw(ch.num_tx(), ch.N());
    for (int t = 0; t < ch.num_tx(); ++t)
        for (int n = 0; n < ch.N(); ++n)
            if (alloc.at(t, n)) pw.at(t, n) = fraction * class_pmax(cfg, ch.tx_class(t));
    return pw;
}

namespace {

SinrReport make_report(const ChannelSet& ch) {
    SinrReport r;
    r.T = ch.num_tx();
    r.N = ch.N();
    r.legit.assign(static_cast<size_t>(r.T) * r.N, 0.0);
    r.eve.assign(static_cast<size_t>(r.T) * r.N, 0.0);
    return r;
}

void fill_legit(SinrReport& r, const ChannelSet& ch, const Allocation& alloc, const PowerProfile& pw, double noise) {
    for (int n = 0; n < ch.N(); ++n) {
        const auto act = alloc.scheduled(n);
        for (int u : act) {
            const int rx = ch.serving_rx(u);
            double interference = 0.0;
            for (int t : act)
                if (t != u) interference += pw.at(t, n) * ch.gain(t, n, rx);
            r.legit[static_cast<size_t>(u) * r.N + n] = pw.at(u, n) * ch.gain(u, n, rx) / (interference + noise);
        }
    }
}

void fill_eve(SinrReport& r, const ChannelSet& ch, const Allocation& alloc, const PowerProfile& pw, double noise) {
    for (int n = 0; n < ch.N(); ++n) {
        const auto act = alloc.scheduled(n);
        for (int u : act) {
            double interference = 0.0;
            for (int t : act)
                if (t != u) interference += pw.at(t, n) * ch.eve_gain(t, n);
            r.eve[static_cast<size_t>(u) * r.N + n] = pw.at(u, n) * ch.eve_gain(u, n) / (interference + noise);
        }
    }
}

} // namespace

SinrReport legit_sinrs(const ChannelSet& ch, const Allocation& alloc, const PowerProfile& pw,
                       const NetworkConfig& cfg) {
    SinrReport r = make_report(ch);
    fill_legit(r, ch, alloc, pw, cfg.noise_power());
    return r;
}

SinrReport eve_sinrs(const ChannelSet& ch, const Allocation& alloc, const PowerProfile& pw, const NetworkConfig& cfg) {
    SinrReport r = make_report(ch);
    fill_eve(r, ch, alloc, pw, cfg.noise_power());
    return r;
}

SinrReport all_sinrs(const ChannelSet& ch, const Allocation& alloc, const PowerProfile& pw, const NetworkConfig& cfg) {
    SinrReport r = make_report(ch);
    fill_legit(r, ch, alloc, pw, cfg.noise_power());
    fill_eve(r, ch, alloc, pw, cfg.noise_power());
    return r;
}

double secrecy_capacity(double rho, double rho_e, double bandwidth) {
    return bandwidth * (std::log2(1.0 + rho) - std::log2(1.0 + rho_e));
}

double secrecy_capacity_clipped(double rho, double rho_e, double bandwidth) {
    return std::max(secrecy_capacity(rho, rho_e, bandwidth), 0.0);
}

SecrecyBreakdown network_secrecy(const ChannelSet& ch, const Allocation& alloc, const PowerProfile& pw,
                                 const NetworkConfig& cfg) {
    const SinrReport r = all_sinrs(ch, alloc, pw, cfg);
    SecrecyBreakdown b;
    b.T = ch.num_tx();
    b.N = ch.N();
    b.per_slot_bps.assign(static_cast<size_t>(b.T) * b.N, 0.0);
    b.per_user_bps.assign(b.T, 0.0);
    for (int t = 0; t < b.T; ++t) {
        for (int n = 0; n < b.N; ++n) {
            if (!alloc.at(t, n)) continue;
            const double s = secrecy_capacity(r.legit_at(t, n), r.eve_at(t, n), cfg.bandwidth_per_subcarrier);
            b.per_slot_bps[static_cast<size_t>(t) * b.N + n] = s;
            b.per_user_bps[t] += s;
            b.clipped_total_bps += std::max(s, 0.0);
        }
        b.total_bps += b.per_user_bps[t];
    }
    return b;
}

std::vector<bool> qos_feasible(const SecrecyBreakdown& b, const ChannelSet& ch, const NetworkConfig& cfg) {
    std::vector<bool> ok(b.T);
    for (int t = 0; t < b.T; ++t)
        ok[t] = b.per_user_bps[t] / cfg.bandwidth_per_subcarrier >= class_cmin(cfg, ch.tx_class(t));
    return ok;
}

} // namespace secd2d
