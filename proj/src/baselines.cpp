#include "baselines.hpp"

#include "errors.hpp"
#include "suballoc.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>

namespace secd2d {

const std::vector<Scheme>& all_schemes() {
    static const std::vector<Scheme> v{Scheme::UpperBound, Scheme::Proposed, Scheme::InterferenceAvoidance,
                                       Scheme::Orthogonal, Scheme::FixedPower};
    return v;
}

std::string scheme_name(Scheme s) {
    switch (s) {
    case Scheme::Proposed: return "proposed";
    case Scheme::UpperBound: return "upper_bound";
    case Scheme::InterferenceAvoidance: return "interference_avoidance";
    case Scheme::Orthogonal: return "orthogonal";
    case Scheme::FixedPower: return "fixed_power";
    }
    return "unknown";
}

Scheme parse_scheme(const std::string& name) {
    for (Scheme s : all_schemes())
        if (scheme_name(s) == name) return s;
    throw ConfigError("unknown scheme: " + name);
}

BaselineResult evaluate_fixed(Scheme tag, const ChannelSet& ch, const NetworkConfig& cfg, const Allocation& alloc,
                              const PowerProfile& pw) {
    BaselineResult r;
    r.scheme = tag;
    r.alloc = alloc;
    r.power = pw;
    r.breakdown = network_secrecy(ch, alloc, pw, cfg);
    r.qos = qos_feasible(r.breakdown, ch, cfg);
    r.total_bps = r.breakdown.clipped_total_bps;
    return r;
}

namespace {

BaselineResult from_solution(Scheme tag, const ChannelSet& ch, const NetworkConfig& cfg, const Allocation& alloc,
                             const NetworkSolution& sol) {
    BaselineResult r;
    r.scheme = tag;
    r.alloc = alloc;
    r.power = sol.power;
    r.breakdown = sol.breakdown;
    r.qos = qos_feasible(r.breakdown, ch, cfg);
    r.total_bps = r.breakdown.clipped_total_bps;
    r.outer_iters = sol.max_outer_iters;
    r.converged = sol.all_converged;
    return r;
}

} // namespace

BaselineResult proposed(const ChannelSet& ch, const Settings& s, const TraceSink& trace) {
    const HeuristicResult h = allocate_heuristic(ch, s.net, s.heuristic);
    const NetworkSolution sol = solve_network(ch, h.alloc, s.net, s.solver, trace);
    return from_solution(Scheme::Proposed, ch, s.net, h.alloc, sol);
}

BaselineResult upper_bound(const ChannelSet& ch, const Settings& s) {
    auto score = [&](const SubcarrierProblem& sp) {
        const SubcarrierSolution sol = outer_solve(sp, s.solver);
        return sol.secrecy.cwiseMax(0.0).sum();
    };
    const ExhaustiveResult ex = allocate_exhaustive(ch, s.net, score);
    const NetworkSolution sol = solve_network(ch, ex.alloc, s.net, s.solver);
    return from_solution(Scheme::UpperBound, ch, s.net, ex.alloc, sol);
}

namespace {

double median(std::vector<double> v) {
    if (v.empty()) return 0.0;
    std::sort(v.begin(), v.end());
    const size_t m = v.size() / 2;
    return v.size() % 2 ? v[m] : 0.5 * (v[m - 1] + v[m]);
}

// Interference a scheduled transmitter at p_max inflicts on the other receivers active on n.
double inflicted(const ChannelSet& ch, const NetworkConfig& cfg, const Allocation& a, int t, int n) {
    const double p = class_pmax(cfg, ch.tx_class(t));
    double sum = 0.0;
    for (int v : a.scheduled(n))
        if (v != t) sum += p * ch.gain(t, n, ch.serving_rx(v));
    return sum;
}

bool same_slot(const ChannelSet& ch, int a, int b) {
    return ch.tx_class(a) == ch.tx_class(b) && ch.tx_cell(a) == ch.tx_cell(b);
}

} // namespace

Allocation interference_avoidance_allocation(const ChannelSet& ch, const NetworkConfig& cfg, const Allocation& start,
                                             std::vector<IaMove>* moves) {
    Allocation a = start;
    for (int pass = 0; pass < cfg.ia_passes; ++pass) {
        // Cells: index 0 is the HPN, 1 + l the LPNs.
        std::vector<std::vector<double>> per_cell(1 + ch.L());
        std::vector<double> value(static_cast<size_t>(ch.num_tx()) * ch.N(), 0.0);
        for (int n = 0; n < ch.N(); ++n)
            for (int t : a.scheduled(n)) {
                const double v = inflicted(ch, cfg, a, t, n);
                value[static_cast<size_t>(t) * ch.N() + n] = v;
                per_cell[1 + ch.tx_cell(t)].push_back(v);
            }
        std::vector<double> threshold(per_cell.size());
        for (size_t c = 0; c < per_cell.size(); ++c) threshold[c] = cfg.ia_threshold_factor * median(per_cell[c]);

        const Allocation before = a;
        for (int n = 0; n < ch.N(); ++n) {
            for (int t : before.scheduled(n)) {
                if (!a.at(t, n)) continue;
                if (value[static_cast<size_t>(t) * ch.N() + n] <= threshold[1 + ch.tx_cell(t)]) continue;
                const int rx = ch.serving_rx(t);
                int target = -1;
                for (int m = 0; m < ch.N(); ++m) {
                    if (m == n || a.at(t, m)) continue;
                    if (target < 0 || ch.gain(t, m, rx) > ch.gain(t, target, rx)) target = m;
                }
                if (target < 0) continue;
                int occupant = -1;
                for (int v : a.scheduled(target))
                    if (same_slot(ch, v, t)) occupant = v;
                a.at(t, n) = 0;
                a.at(t, target) = 1;
                if (occupant >= 0) {
                    a.at(occupant, target) = 0;
                    a.at(occupant, n) = 1;
                }
                if (moves) moves->push_back({t, n, target});
            }
        }
    }
    return a;
}

BaselineResult interference_avoidance(const ChannelSet& ch, const Settings& s) {
    const HeuristicResult h = allocate_heuristic(ch, s.net, s.heuristic);
    const Allocation a = interference_avoidance_allocation(ch, s.net, h.alloc);
    return evaluate_fixed(Scheme::InterferenceAvoidance, ch, s.net, a, uniform_power(ch, a, s.net, 1.0));
}

OrthogonalSplit orthogonal_split(const NetworkConfig& cfg) {
    const std::array<double, 3> w{static_cast<double>(cfg.H), static_cast<double>(cfg.L) * cfg.M,
                                  static_cast<double>(cfg.L) * cfg.K};
    const double W = w[0] + w[1] + w[2];
    // Class indices by descending weight, ties to the lower index.
    std::array<int, 3> order{0, 1, 2};
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return w[a] > w[b]; });
    std::array<int, 3> c{0, 0, 0};
    if (cfg.N < 3) {
        for (int i = 0; i < cfg.N; ++i) c[order[i]] = 1;
    } else {
        for (int i = 0; i < 3; ++i) c[i] = std::max(1, static_cast<int>(std::floor(cfg.N * w[i] / W)));
        int total = c[0] + c[1] + c[2];
        while (total < cfg.N) {
            ++c[order[0]];
            ++total;
        }
        while (total > cfg.N) {
            for (int i : order)
                if (c[i] > 1) {
                    --c[i];
                    --total;
                    break;
                }
        }
    }
    return {c[0], c[1], c[2]};
}

Allocation orthogonal_allocation_map(const ChannelSet& ch, const NetworkConfig& cfg) {
    const OrthogonalSplit sp = orthogonal_split(cfg);
    Allocation a(ch);
    int n = 0;
    for (int i = 0; i < sp.hue; ++i, ++n) a.at(ch.hue_tx(i % ch.H()), n) = 1;
    for (int i = 0; i < sp.lue; ++i, ++n)
        for (int l = 0; l < ch.L(); ++l) a.at(ch.lue_tx(l, i % ch.M()), n) = 1;
    for (int i = 0; i < sp.due; ++i, ++n)
        for (int l = 0; l < ch.L(); ++l) a.at(ch.due_tx(l, i % ch.K()), n) = 1;
    return a;
}

BaselineResult orthogonal_allocation(const ChannelSet& ch, const Settings& s) {
    const Allocation a = orthogonal_allocation_map(ch, s.net);
    return evaluate_fixed(Scheme::Orthogonal, ch, s.net, a, uniform_power(ch, a, s.net, 1.0));
}

BaselineResult fixed_power(const ChannelSet& ch, const Settings& s) {
    const HeuristicResult h = allocate_heuristic(ch, s.net, s.heuristic);
    return evaluate_fixed(Scheme::FixedPower, ch, s.net, h.alloc,
                          uniform_power(ch, h.alloc, s.net, s.net.p_fixed_fraction));
}

BaselineResult run_scheme(Scheme scheme, const ChannelSet& ch, const Settings& s, const TraceSink& trace) {
    switch (scheme) {
    case Scheme::Proposed: return proposed(ch, s, trace);
    case Scheme::UpperBound: return upper_bound(ch, s);
    case Scheme::InterferenceAvoidance: return interference_avoidance(ch, s);
    case Scheme::Orthogonal: return orthogonal_allocation(ch, s);
    case Scheme::FixedPower: return fixed_power(ch, s);
    }
    throw ConfigError("unknown scheme");
}

} // namespace secd2d
