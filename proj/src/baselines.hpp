#pragma once

#include "config.hpp"
#include "linkmetrics.hpp"
#include "netmodel.hpp"
#include "solver.hpp"

#include <optional>
#include <string>
#include <vector>

namespace secd2d {

enum class Scheme { Proposed, UpperBound, InterferenceAvoidance, Orthogonal, FixedPower };

const std::vector<Scheme>& all_schemes();
std::string scheme_name(Scheme s);
// Throws ConfigError for an unknown name.
Scheme parse_scheme(const std::string& name);

struct BaselineResult {
    Scheme scheme = Scheme::Proposed;
    Allocation alloc;
    PowerProfile power;
    SecrecyBreakdown breakdown;
    std::vector<bool> qos;
    double total_bps = 0.0; // clipped per (user, subcarrier)
    int outer_iters = 0;
    bool converged = true;
};

BaselineResult evaluate_fixed(Scheme tag, const ChannelSet& ch, const NetworkConfig& cfg, const Allocation& alloc,
                              const PowerProfile& pw);

BaselineResult proposed(const ChannelSet& ch, const Settings& s, const TraceSink& trace = {});
BaselineResult upper_bound(const ChannelSet& ch, const Settings& s);

struct IaMove {
    int tx = 0;
    int from = 0;
    int to = 0;
};

// Reassigns users whose inflicted interference exceeds threshold_factor * the cell median.
Allocation interference_avoidance_allocation(const ChannelSet& ch, const NetworkConfig& cfg, const Allocation& start,
                                             std::vector<IaMove>* moves = nullptr);
BaselineResult interference_avoidance(const ChannelSet& ch, const Settings& s);

// Number of subcarriers given to HUEs, LUEs and DUEs.
struct OrthogonalSplit {
    int hue = 0;
    int lue = 0;
    int due = 0;
};
OrthogonalSplit orthogonal_split(const NetworkConfig& cfg);
Allocation orthogonal_allocation_map(const ChannelSet& ch, const NetworkConfig& cfg);
BaselineResult orthogonal_allocation(const ChannelSet& ch, const Settings& s);

BaselineResult fixed_power(const ChannelSet& ch, const Settings& s);

BaselineResult run_scheme(Scheme scheme, const ChannelSet& ch, const Settings& s, const TraceSink& trace = {});

} // namespace secd2d
