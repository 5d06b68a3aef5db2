#include "suballoc.hpp"

#include "errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace secd2d {

namespace {

CellProblem make_cell(int users, int N, double budget, double noise, double p_max) {
    CellProblem cp;
    cp.users = users;
    cp.N = N;
    cp.g.assign(static_cast<size_t>(users) * N, 0.0);
    cp.g_leak.assign(static_cast<size_t>(users) * N, 0.0);
    cp.budget = budget;
    cp.noise = noise;
    cp.p_max = p_max;
    return cp;
}

} // namespace

CellProblem hue_cell(const ChannelSet& ch, const NetworkConfig& cfg) {
    CellProblem cp = make_cell(ch.H(), ch.N(), cfg.i_max_hue, cfg.noise_power(), cfg.p_max_hue);
    for (int h = 0; h < ch.H(); ++h)
        for (int n = 0; n < ch.N(); ++n) {
            cp.g[static_cast<size_t>(h) * cp.N + n] = ch.g_HH(h, n);
            double leak = 0.0;
            for (int l = 0; l < ch.L(); ++l) leak += ch.g_HL(h, n, l);
            cp.g_leak[static_cast<size_t>(h) * cp.N + n] = leak;
        }
    return cp;
}

CellProblem lue_cell(const ChannelSet& ch, const NetworkConfig& cfg, int l) {
    CellProblem cp = make_cell(ch.M(), ch.N(), cfg.i_max_lpn, cfg.noise_power(), cfg.p_max_lue);
    for (int m = 0; m < ch.M(); ++m)
        for (int n = 0; n < ch.N(); ++n) {
            cp.g[static_cast<size_t>(m) * cp.N + n] = ch.g_LL(l, m, n, l);
            cp.g_leak[static_cast<size_t>(m) * cp.N + n] = ch.g_LH(l, m, n);
        }
    return cp;
}

CellProblem due_cell(const ChannelSet& ch, const NetworkConfig& cfg, int l) {
    CellProblem cp = make_cell(ch.K(), ch.N(), cfg.i_max_lpn, cfg.noise_power(), cfg.p_max_due);
    for (int k = 0; k < ch.K(); ++k)
        for (int n = 0; n < ch.N(); ++n) {
            cp.g[static_cast<size_t>(k) * cp.N + n] = ch.g_DD(l, k, n, l, k);
            cp.g_leak[static_cast<size_t>(k) * cp.N + n] = ch.g_DH(l, k, n);
        }
    return cp;
}

double waterfill_power(const CellProblem& cp, int u, int n, double lambda) {
    const double g = cp.gain(u, n);
    const double leak = cp.leak(u, n);
    if (!(g > 0.0)) return 0.0;
    if (lambda <= 0.0 || leak <= 0.0) return cp.p_max;
    const double level = cp.budget / (lambda * leak);
    return std::clamp(level - cp.noise / g, 0.0, cp.p_max);
}

double waterfill_utility(const CellProblem& cp, int u, int n, double lambda) {
    const double p = waterfill_power(cp, u, n, lambda);
    return std::log1p(p * cp.gain(u, n) / cp.noise) - lambda * p * cp.leak(u, n) / cp.budget;
}

std::vector<int> select_users(const CellProblem& cp, double lambda) {
    std::vector<int> sel(cp.N, 0);
    for (int n = 0; n < cp.N; ++n) {
        double best = waterfill_utility(cp, 0, n, lambda);
        for (int u = 1; u < cp.users; ++u) {
            const double v = waterfill_utility(cp, u, n, lambda);
            if (v > best) {
                best = v;
                sel[n] = u;
            }
        }
    }
    return sel;
}

CellAllocation allocate_cell(const CellProblem& cp, const HeuristicOptions& opt) {
    CellAllocation out;
    double lambda = opt.lambda0;
    std::vector<int> best_feasible;
    double best_rate = -std::numeric_limits<double>::infinity();
    std::vector<int> sel;
    for (int i = 1; i <= opt.max_iter; ++i) {
        sel = select_users(cp, lambda);
        double used = 0.0;
        double rate = 0.0;
        for (int n = 0; n < cp.N; ++n) {
            const double p = waterfill_power(cp, sel[n], n, lambda);
            used += p * cp.leak(sel[n], n);
            rate += std::log1p(p * cp.gain(sel[n], n) / cp.noise);
        }
        const double residual = used / cp.budget - 1.0;
        if (residual <= 0.0 && rate > best_rate) {
            best_rate = rate;
            best_feasible = sel;
        }
        const double next = std::max(0.0, lambda + opt.xi0 / std::sqrt(static_cast<double>(i)) * residual);
        out.iterations = i;
        const double change = std::abs(next - lambda);
        lambda = next;
        if (change < opt.tol) {
            out.converged = true;
            break;
        }
    }
    out.lambda = lambda;
    if (out.converged)
        out.user_on = select_users(cp, lambda);
    else
        out.user_on = best_feasible.empty() ? sel : best_feasible;
    return out;
}

HeuristicResult allocate_heuristic(const ChannelSet& ch, const NetworkConfig& cfg, const HeuristicOptions& opt) {
    HeuristicResult r;
    r.alloc = Allocation(ch);
    auto apply = [&](const CellProblem& cp, auto tx_of) {
        const CellAllocation ca = allocate_cell(cp, opt);
        r.converged = r.converged && ca.converged;
        r.max_iterations = std::max(r.max_iterations, ca.iterations);
        for (int n = 0; n < ch.N(); ++n) r.alloc.at(tx_of(ca.user_on[n]), n) = 1;
    };
    apply(hue_cell(ch, cfg), [&](int h) { return ch.hue_tx(h); });
    for (int l = 0; l < ch.L(); ++l) {
        apply(lue_cell(ch, cfg, l), [&](int m) { return ch.lue_tx(l, m); });
        apply(due_cell(ch, cfg, l), [&](int k) { return ch.due_tx(l, k); });
    }
    return r;
}

double assignment_space_size(const NetworkConfig& cfg) {
    const double per_n = static_cast<double>(cfg.H) * std::pow(static_cast<double>(cfg.M) * cfg.K, cfg.L);
    return std::pow(per_n, cfg.N);
}

ExhaustiveResult allocate_exhaustive(const ChannelSet& ch, const NetworkConfig& cfg, const SubcarrierScore& score) {
    const double space = assignment_space_size(cfg);
    if (space > cfg.exhaustive_cap)
        throw SearchSpaceError("allocate_exhaustive: assignment space " + std::to_string(space) +
                               " exceeds cap " + std::to_string(cfg.exhaustive_cap));
    const int L = ch.L();
    ExhaustiveResult out;
    out.alloc = Allocation(ch);
    out.per_subcarrier_score.assign(ch.N(), 0.0);

    // Mixed-radix counter over (h, m_0..m_{L-1}, k_0..k_{L-1}).
    std::vector<int> radix{ch.H()};
    for (int l = 0; l < L; ++l) radix.push_back(ch.M());
    for (int l = 0; l < L; ++l) radix.push_back(ch.K());
    auto users_of = [&](const std::vector<int>& digit) {
        std::vector<int> users{ch.hue_tx(digit[0])};
        for (int l = 0; l < L; ++l) users.push_back(ch.lue_tx(l, digit[1 + l]));
        for (int l = 0; l < L; ++l) users.push_back(ch.due_tx(l, digit[1 + L + l]));
        return users;
    };

    for (int n = 0; n < ch.N(); ++n) {
        std::vector<int> digit(radix.size(), 0);
        std::vector<int> best_users;
        double best = -std::numeric_limits<double>::infinity();
        while (true) {
            const std::vector<int> users = users_of(digit);
            const double s = score(build_subproblem_for_users(ch, cfg, n, users));
            ++out.evaluated;
            if (best_users.empty() || s > best) {
                best = s;
                best_users = users;
            }
            size_t d = 0;
            while (d < digit.size() && ++digit[d] == radix[d]) digit[d++] = 0;
            if (d == digit.size()) break;
        }
        for (int t : best_users) out.alloc.at(t, n) = 1;
        out.per_subcarrier_score[n] = best;
    }
    return out;
}

} // namespace secd2d
