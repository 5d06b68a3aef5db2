#pragma once

#include "config.hpp"
#include "linkmetrics.hpp"
#include "netmodel.hpp"
#include "spectral.hpp"

#include <functional>
#include <vector>

namespace secd2d {

// One user class inside one cell: the HUEs of the HPN, or the LUEs / DUE pairs of one LPN.
struct CellProblem {
    int users = 0;
    int N = 0;
    std::vector<double> g;      // [u*N + n] direct gain to the serving receiver
    std::vector<double> g_leak; // [u*N + n] leakage toward the other tier
    double budget = 0.0;        // W, summed leakage cap over subcarriers
    double noise = 0.0;         // W
    double p_max = 0.0;         // W

    double gain(int u, int n) const { return g[static_cast<size_t>(u) * N + n]; }
    double leak(int u, int n) const { return g_leak[static_cast<size_t>(u) * N + n]; }
};

struct CellAllocation {
    std::vector<int> user_on; // [n]
    double lambda = 0.0;
    int iterations = 0;
    bool converged = false;
};

// HUEs leak into every LPN; LPN-tier users leak into the HPN.
CellProblem hue_cell(const ChannelSet& ch, const NetworkConfig& cfg);
CellProblem lue_cell(const ChannelSet& ch, const NetworkConfig& cfg, int l);
CellProblem due_cell(const ChannelSet& ch, const NetworkConfig& cfg, int l);

// Water-filling power at multiplier lambda, capped at p_max.
double waterfill_power(const CellProblem& cp, int u, int n, double lambda);
// Per-(user, subcarrier) Lagrangian utility log(1 + p g / noise) - lambda p g_leak / budget.
double waterfill_utility(const CellProblem& cp, int u, int n, double lambda);
// Argmax of the utility on each subcarrier, lowest index on ties.
std::vector<int> select_users(const CellProblem& cp, double lambda);

CellAllocation allocate_cell(const CellProblem& cp, const HeuristicOptions& opt);

struct HeuristicResult {
    Allocation alloc;
    bool converged = true;
    int max_iterations = 0;
};

HeuristicResult allocate_heuristic(const ChannelSet& ch, const NetworkConfig& cfg, const HeuristicOptions& opt);

// Scores one subcarrier's user set; larger is better.
using SubcarrierScore = std::function<double(const SubcarrierProblem&)>;

// Size of the joint assignment space H^N * prod_l (M^N K^N).
double assignment_space_size(const NetworkConfig& cfg);

struct ExhaustiveResult {
    Allocation alloc;
    std::vector<double> per_subcarrier_score;
    long long evaluated = 0;
};

// Throws SearchSpaceError when the assignment space exceeds cfg.exhaustive_cap.
// The total is a sum of per-subcarrier terms, each depending only on the users scheduled on
// that subcarrier, so the joint argmax is assembled from per-subcarrier argmaxes.
ExhaustiveResult allocate_exhaustive(const ChannelSet& ch, const NetworkConfig& cfg, const SubcarrierScore& score);

} // namespace secd2d
