#pragma once

#include "config.hpp"
#include "linkmetrics.hpp"
#include "netmodel.hpp"

#include <Eigen/Dense>

#include <optional>
#include <vector>

namespace secd2d {

using Eigen::MatrixXd;
using Eigen::VectorXd;

struct SubcarrierProblem {
    int n = 0;
    int J = 0;
    std::vector<int> user_ids; // transmitter indices into the ChannelSet
    MatrixXd G;                // G(i,j): transmitter j -> receiver of user i
    VectorXd G_e;              // transmitter j -> eavesdropper of subcarrier n
    VectorXd p_max;            // W
    VectorXd c_min;            // nats/s/Hz
    double noise = 0.0;        // W
};

struct NormalizedSystem {
    MatrixXd F;
    VectorXd v;
    MatrixXd F_e;
    VectorXd v_e;
};

struct ConstraintMatrices {
    std::vector<MatrixXd> B;       // F + v e_j^T / p_max[j]
    std::vector<MatrixXd> B_tilde; // (I + B_j)^-1 B_j
    std::vector<MatrixXd> B_e;
    // (I + B_e_j) is singular whenever J >= 3: I + F_e has rank one. Empty in that case.
    std::vector<std::optional<MatrixXd>> B_e_tilde;
};

struct PfEigenpair {
    double rho = 0.0;
    VectorXd x; // right, ||x||_1 = 1
    VectorXd y; // left, y^T x = 1
    int iterations = 0;
};

// Users scheduled on n in HUE, LUE-by-LPN, DUE-by-LPN order. Throws NumericalError when a
// class is missing on n.
SubcarrierProblem build_subproblem(const ChannelSet& ch, const Allocation& alloc, const NetworkConfig& cfg, int n);
// Same for an explicit user list (used by the exhaustive search).
SubcarrierProblem build_subproblem_for_users(const ChannelSet& ch, const NetworkConfig& cfg, int n,
                                             const std::vector<int>& users);

// Throws NumericalError on a zero direct or eavesdropper gain.
NormalizedSystem normalize(const SubcarrierProblem& sp);

ConstraintMatrices constraint_matrices(const NormalizedSystem& ns, const VectorXd& p_max);

// Perron root and vectors of a nonnegative matrix after diagonal balancing: Noda iteration
// (shifted power iteration as fallback). Irreducible inputs are solved as given; reducible ones
// take their vectors from A + eps*11^T, eps = 1e-12*max(A), and rho from the diagonal blocks.
// Throws DomainError for negative entries, NonConvergenceError past max_iter.
PfEigenpair pf_eigenpair(const MatrixXd& A, double tol = 1e-13, int max_iter = 200000);

// log rho(A diag(w)) and its gradient with respect to C where w = w(C) and dw = dw/dC.
// Returns -inf (zero gradient) when the spectral radius vanishes.
double log_pf(const MatrixXd& A, const VectorXd& w, double tol = 1e-13, int max_iter = 200000);
double log_pf_with_grad(const MatrixXd& A, const VectorXd& w, const VectorXd& dw, VectorXd& grad,
                        double tol = 1e-13, int max_iter = 200000);

// Legitimate and eavesdropper rates (nats) of power vector p.
VectorXd legit_rates(const NormalizedSystem& ns, const VectorXd& p);
VectorXd eve_rates(const NormalizedSystem& ns, const VectorXd& p);

// Solves (I - D F) p = D v with D = diag(e^C - 1).
// Throws InfeasibleRateError when rho(D F) >= 1 or p has a negative entry.
VectorXd recover_power(const VectorXd& C, const NormalizedSystem& ns);

} // namespace secd2d
