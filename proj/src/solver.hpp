#pragma once

#include "config.hpp"
#include "linkmetrics.hpp"
#include "spectral.hpp"

#include <functional>
#include <utility>
#include <vector>

namespace secd2d {

struct RateState {
    VectorXd C;   // legitimate rates, nats
    VectorXd C_e; // wiretap rates, nats
};

struct DualState {
    VectorXd lambda;
    VectorXd beta;
    VectorXd mu;
    int outer_iter = 0;
};

// Which matrix family represents the power caps.
//   Tilde: log rho(B~_j diag(e^C)), the convexified form; needs B~_j >= 0 and, for the
//          wiretap side, an invertible I + B_e_j (J <= 2).
//   Exact: log rho(B_j diag(e^C - 1)); zero exactly when p_j = p_max_j, defined for every J.
enum class ConstraintForm { Tilde, Exact };

double constraint_value(const ConstraintMatrices& cm, int j, const VectorXd& C, bool wiretap, ConstraintForm form,
                        VectorXd* grad = nullptr);

// sum(C - C_e) + sum lambda (C - C_e - c_min) - sum beta_j h_j(C) - sum mu_j h^E_j(C_e).
double lagrangian(const RateState& rs, const DualState& ds, const ConstraintMatrices& cm, const VectorXd& c_min,
                  ConstraintForm form = ConstraintForm::Tilde);

// Gradient of the spectral part f = -sum beta_j h_j(C) - sum mu_j h^E_j(C_e).
std::pair<VectorXd, VectorXd> grad_f(const RateState& rs, const DualState& ds, const ConstraintMatrices& cm,
                                     ConstraintForm form = ConstraintForm::Tilde);

// Componentwise (1 + lambda_j)(C_j - C_e_j - 1).
VectorXd prox_g(const RateState& rs, const VectorXd& lambda);

// One step of the rate-space update pair built from prox_g. Kept as a reference; the solver
// does not iterate it (its fixed point collapses C - C_e to zero).
RateState literal_prox_step(const RateState& rs, const DualState& ds, const ConstraintMatrices& cm,
                            ConstraintForm form = ConstraintForm::Tilde);

struct InnerResult {
    VectorXd p;
    double value = 0.0;
    int iterations = 0;
    bool converged = false;
};

// Maximizes the Lagrangian over powers in [0, p_max] with the rates tied to p, by projected
// gradient ascent with backtracking from several starting points.
InnerResult inner_solve(const SubcarrierProblem& sp, const NormalizedSystem& ns, const ConstraintMatrices& cm,
                        const DualState& ds, const SolverOptions& opt, const VectorXd* warm = nullptr);

// Inner objective and its gradient with respect to p.
double inner_objective(const NormalizedSystem& ns, const ConstraintMatrices& cm, const DualState& ds,
                       const VectorXd& p, VectorXd* grad_p = nullptr);

struct TraceRow {
    int iter = 0;
    int subcarrier = 0;
    double objective_nats = 0.0;
    double lambda_norm = 0.0;
    double beta_norm = 0.0;
    double mu_norm = 0.0;
    double max_log_rho = 0.0;
};

using TraceSink = std::function<void(const TraceRow&)>;

struct SubcarrierSolution {
    int n = 0;
    std::vector<int> user_ids;
    RateState rates;  // C and the wiretap rates recomputed from p
    VectorXd p;       // W
    VectorXd secrecy; // nats, C - C_e
    DualState duals;
    bool converged = false;
    bool qos_ok = true;
    int outer_iters = 0;
    int inner_iters = 0;

    double objective_nats() const { return secrecy.sum(); }
};

SubcarrierSolution outer_solve(const SubcarrierProblem& sp, const SolverOptions& opt, const TraceSink& trace = {});

struct NetworkSolution {
    std::vector<SubcarrierSolution> per_subcarrier;
    PowerProfile power;
    SecrecyBreakdown breakdown;
    int max_outer_iters = 0;
    bool all_converged = true;
    bool qos_ok = true;
};

NetworkSolution solve_network(const ChannelSet& ch, const Allocation& alloc, const NetworkConfig& cfg,
                              const SolverOptions& opt, const TraceSink& trace = {});

} // namespace secd2d
