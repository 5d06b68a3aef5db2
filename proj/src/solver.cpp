#include "solver.hpp"

#include "errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace secd2d {

namespace {

constexpr double kActiveTol = 1e-9;

// Lower clamp for log rho when the spectral radius vanishes (all rates zero).
constexpr double kLogRhoFloor = -50.0;

} // namespace

double constraint_value(const ConstraintMatrices& cm, int j, const VectorXd& C, bool wiretap, ConstraintForm form,
                        VectorXd* grad) {
    const MatrixXd* A = nullptr;
    VectorXd w;
    if (form == ConstraintForm::Tilde) {
        if (wiretap) {
            if (!cm.B_e_tilde[j]) throw NumericalError("constraint_value: wiretap B~ undefined (I + B_e singular)");
            A = &*cm.B_e_tilde[j];
        } else {
            A = &cm.B_tilde[j];
        }
        w = C.array().exp().matrix();
    } else {
        A = wiretap ? &cm.B_e[j] : &cm.B[j];
        w = C.array().expm1().matrix();
    }
    if (!grad) return log_pf(*A, w);
    const VectorXd dw = C.array().exp().matrix();
    return log_pf_with_grad(*A, w, dw, *grad);
}

double lagrangian(const RateState& rs, const DualState& ds, const ConstraintMatrices& cm, const VectorXd& c_min,
                  ConstraintForm form) {
    const VectorXd d = rs.C - rs.C_e;
    double L = d.sum() + ds.lambda.dot(d - c_min);
    const int J = static_cast<int>(rs.C.size());
    for (int j = 0; j < J; ++j) {
        if (ds.beta(j) != 0.0) L -= ds.beta(j) * constraint_value(cm, j, rs.C, false, form);
        if (ds.mu(j) != 0.0) L -= ds.mu(j) * constraint_value(cm, j, rs.C_e, true, form);
    }
    return L;
}

std::pair<VectorXd, VectorXd> grad_f(const RateState& rs, const DualState& ds, const ConstraintMatrices& cm,
                                     ConstraintForm form) {
    const int J = static_cast<int>(rs.C.size());
    VectorXd dC = VectorXd::Zero(J);
    VectorXd dCe = VectorXd::Zero(J);
    VectorXd g;
    for (int j = 0; j < J; ++j) {
        if (ds.beta(j) != 0.0) {
            constraint_value(cm, j, rs.C, false, form, &g);
            dC -= ds.beta(j) * g;
        }
        if (ds.mu(j) != 0.0) {
            constraint_value(cm, j, rs.C_e, true, form, &g);
            dCe -= ds.mu(j) * g;
        }
    }
    return {dC, dCe};
}

VectorXd prox_g(const RateState& rs, const VectorXd& lambda) {
    return ((1.0 + lambda.array()) * (rs.C - rs.C_e).array() - (1.0 + lambda.array())).matrix();
}

RateState literal_prox_step(const RateState& rs, const DualState& ds, const ConstraintMatrices& cm,
                            ConstraintForm form) {
    const auto [dC, dCe] = grad_f(rs, ds, cm, form);
    RateState out;
    out.C = prox_g({rs.C - dC, rs.C_e}, ds.lambda);
    out.C_e = prox_g({rs.C, rs.C_e - dCe}, ds.lambda);
    return out;
}

namespace {

// d/dp of sum_i a_i log(1 + p_i / (F p + v)_i).
VectorXd rate_gradient(const MatrixXd& F, const VectorXd& v, const VectorXd& p, const VectorXd& a) {
    const VectorXd q = F * p + v;
    const VectorXd r = (q + p).cwiseInverse();
    const VectorXd t = q.cwiseInverse();
    const VectorXd ar = a.cwiseProduct(r);
    return ar + F.transpose() * (ar - a.cwiseProduct(t));
}

double floored(double h) { return std::isfinite(h) ? h : kLogRhoFloor; }

// A power exactly at its cap gives log rho = 0 up to eigen-solver roundoff; that residue must
// not switch on a multiplier.
double active_part(double h) { return h > kActiveTol ? h : std::min(h, 0.0); }

} // namespace

double inner_objective(const NormalizedSystem& ns, const ConstraintMatrices& cm, const DualState& ds,
                       const VectorXd& p, VectorXd* grad_p) {
    const int J = static_cast<int>(p.size());
    const VectorXd C = legit_rates(ns, p);
    const VectorXd Ce = eve_rates(ns, p);
    const VectorXd w = (1.0 + ds.lambda.array()).matrix();
    double value = w.dot(C - Ce);
    VectorXd a = w;
    VectorXd b = -w;
    VectorXd g;
    for (int j = 0; j < J; ++j) {
        if (ds.beta(j) != 0.0) {
            const double h = constraint_value(cm, j, C, false, ConstraintForm::Exact, grad_p ? &g : nullptr);
            value -= ds.beta(j) * floored(h);
            if (grad_p && std::isfinite(h)) a -= ds.beta(j) * g;
        }
        if (ds.mu(j) != 0.0) {
            const double h = constraint_value(cm, j, Ce, true, ConstraintForm::Exact, grad_p ? &g : nullptr);
            value -= ds.mu(j) * floored(h);
            if (grad_p && std::isfinite(h)) b -= ds.mu(j) * g;
        }
    }
    if (grad_p) *grad_p = rate_gradient(ns.F, ns.v, p, a) + rate_gradient(ns.F_e, ns.v_e, p, b);
    return value;
}

namespace {

struct Ascent {
    VectorXd u;
    double value;
    int iterations;
    bool converged;
};

// Spectral projected gradient ascent on the unit box with a nonmonotone Armijo search.
// Barzilai-Borwein steps absorb the wide curvature spread between barely-on and saturated links.
Ascent projected_ascent(const NormalizedSystem& ns, const ConstraintMatrices& cm, const DualState& ds,
                        const VectorXd& p_max, VectorXd u, const SolverOptions& opt) {
    constexpr int kMemory = 8;
    constexpr double kAlphaMin = 1e-14;
    constexpr double kAlphaMax = 1e14;
    auto eval = [&](const VectorXd& uu, VectorXd* gu) {
        const VectorXd p = uu.cwiseProduct(p_max);
        VectorXd gp;
        const double val = inner_objective(ns, cm, ds, p, gu ? &gp : nullptr);
        if (gu) *gu = gp.cwiseProduct(p_max);
        return val;
    };
    auto project = [](const VectorXd& x) { return VectorXd(x.cwiseMax(0.0).cwiseMin(1.0)); };
    VectorXd g;
    double val = eval(u, &g);
    std::vector<double> history{val};
    const double gn0 = g.cwiseAbs().maxCoeff();
    double alpha = gn0 > 0.0 ? opt.tau / gn0 : 1.0;
    for (int s = 1; s <= opt.s_max; ++s) {
        if (!g.allFinite()) return {u, val, s, false};
        if ((project(u + g) - u).cwiseAbs().maxCoeff() <= 1e-12) return {u, val, s, true};
        const VectorXd d = project(u + alpha * g) - u;
        const double slope = g.dot(d);
        const double ref = *std::max_element(history.begin(), history.end());
        double t = 1.0;
        VectorXd u_new;
        double val_new = 0.0;
        bool accepted = false;
        while (t >= 1e-16) {
            u_new = u + t * d;
            val_new = eval(u_new, nullptr);
            if (std::isfinite(val_new) && val_new >= ref + 1e-4 * t * slope) {
                accepted = true;
                break;
            }
            t *= 0.5;
        }
        if (!accepted) return {u, val, s, true};
        VectorXd g_new;
        val_new = eval(u_new, &g_new);
        const VectorXd step = u_new - u;
        const double sy = -step.dot(g_new - g); // curvature of -f along the step
        alpha = sy > 0.0 ? std::clamp(step.squaredNorm() / sy, kAlphaMin, kAlphaMax) : kAlphaMax;
        u = u_new;
        g = g_new;
        val = val_new;
        history.push_back(val);
        if (static_cast<int>(history.size()) > kMemory) history.erase(history.begin());
        if (step.cwiseAbs().sum() <= opt.eta) return {u, val, s, true};
    }
    return {u, val, opt.s_max, false};
}

std::vector<VectorXd> start_points(int J, int corner_limit) {
    std::vector<VectorXd> starts;
    starts.push_back(VectorXd::Constant(J, 0.5));
    starts.push_back(VectorXd::Ones(J));
    if (J <= corner_limit) {
        for (unsigned mask = 0; mask < (1u << J); ++mask) {
            if (mask == (1u << J) - 1) continue; // all-ones already present
            VectorXd u(J);
            for (int i = 0; i < J; ++i) u(i) = (mask >> i) & 1u ? 1.0 : 0.0;
            starts.push_back(u);
        }
    } else {
        for (int i = 0; i < J; ++i) {
            VectorXd off = VectorXd::Ones(J);
            off(i) = 0.0;
            starts.push_back(off);
            VectorXd on = VectorXd::Zero(J);
            on(i) = 1.0;
            starts.push_back(on);
        }
    }
    return starts;
}

} // namespace

InnerResult inner_solve(const SubcarrierProblem& sp, const NormalizedSystem& ns, const ConstraintMatrices& cm,
                        const DualState& ds, const SolverOptions& opt, const VectorXd* warm) {
    // Screen every candidate by its objective and ascend from the best few, plus the warm start.
    std::vector<std::pair<double, VectorXd>> ranked;
    for (const VectorXd& u0 : start_points(sp.J, opt.corner_start_max_j)) {
        const double v = inner_objective(ns, cm, ds, u0.cwiseProduct(sp.p_max));
        ranked.emplace_back(std::isfinite(v) ? v : -std::numeric_limits<double>::infinity(), u0);
    }
    std::stable_sort(ranked.begin(), ranked.end(),
                     [](const auto& x, const auto& y) { return x.first > y.first; });
    std::vector<VectorXd> chosen;
    if (warm) chosen.push_back(warm->cwiseQuotient(sp.p_max).cwiseMax(0.0).cwiseMin(1.0));
    for (int k = 0; k < static_cast<int>(ranked.size()) && k < opt.ascent_starts; ++k)
        chosen.push_back(ranked[k].second);

    InnerResult best;
    best.value = -std::numeric_limits<double>::infinity();
    bool have = false;
    for (const VectorXd& u0 : chosen) {
        const Ascent a = projected_ascent(ns, cm, ds, sp.p_max, u0, opt);
        best.iterations += a.iterations;
        if (!have || a.value > best.value) {
            best.p = a.u.cwiseProduct(sp.p_max);
            best.value = a.value;
            best.converged = a.converged;
            have = true;
        }
    }
    return best;
}

SubcarrierSolution outer_solve(const SubcarrierProblem& sp, const SolverOptions& opt, const TraceSink& trace) {
    const int J = sp.J;
    const NormalizedSystem ns = normalize(sp);
    const ConstraintMatrices cm = constraint_matrices(ns, sp.p_max);

    DualState ds;
    ds.lambda = VectorXd::Constant(J, opt.lambda0);
    ds.beta = VectorXd::Constant(J, opt.beta0);
    ds.mu = VectorXd::Constant(J, opt.mu0);

    SubcarrierSolution sol;
    sol.n = sp.n;
    sol.user_ids = sp.user_ids;
    VectorXd p = VectorXd::Zero(J);
    VectorXd h(J), he(J);
    for (int i = 1; i <= opt.i_max; ++i) {
        ds.outer_iter = i;
        const InnerResult inner = inner_solve(sp, ns, cm, ds, opt, i > 1 ? &p : nullptr);
        sol.inner_iters += inner.iterations;
        p = inner.p;
        const VectorXd C = legit_rates(ns, p);
        const VectorXd Ce = eve_rates(ns, p);
        for (int j = 0; j < J; ++j) {
            h(j) = constraint_value(cm, j, C, false, ConstraintForm::Exact);
            he(j) = constraint_value(cm, j, Ce, true, ConstraintForm::Exact);
        }
        const double root = std::sqrt(static_cast<double>(i));
        // Dual descent: d g / d lambda = C - C_e - c_min, d g / d beta = -h.
        const VectorXd lambda = (ds.lambda - (opt.xi_lambda / root) * (C - Ce - sp.c_min)).cwiseMax(0.0);
        VectorXd beta(J), mu(J);
        for (int j = 0; j < J; ++j) {
            beta(j) = std::max(0.0, ds.beta(j) + (opt.xi_beta / root) * active_part(h(j)));
            mu(j) = std::max(0.0, ds.mu(j) + (opt.xi_mu / root) * active_part(he(j)));
        }
        const double movement = std::max({(lambda - ds.lambda).cwiseAbs().maxCoeff(),
                                          (beta - ds.beta).cwiseAbs().maxCoeff(),
                                          (mu - ds.mu).cwiseAbs().maxCoeff()});
        ds.lambda = lambda;
        ds.beta = beta;
        ds.mu = mu;
        sol.outer_iters = i;
        if (trace) {
            TraceRow row;
            row.iter = i;
            row.subcarrier = sp.n;
            row.objective_nats = (C - Ce).sum();
            row.lambda_norm = ds.lambda.norm();
            row.beta_norm = ds.beta.norm();
            row.mu_norm = ds.mu.norm();
            row.max_log_rho = std::max(h.maxCoeff(), he.maxCoeff());
            trace(row);
        }
        if (movement <= opt.delta) {
            sol.converged = true;
            break;
        }
    }

    // Route the final rates through the power-recovery map; keep the direct powers if the
    // linear system is too ill-conditioned for the roundtrip check.
    try {
        p = recover_power(legit_rates(ns, p), ns).cwiseMin(sp.p_max);
    } catch (const Error&) {
    }
    sol.p = p;
    sol.rates.C = legit_rates(ns, p);
    sol.rates.C_e = eve_rates(ns, p);
    sol.secrecy = sol.rates.C - sol.rates.C_e;
    sol.duals = ds;
    sol.qos_ok = (sol.secrecy - sp.c_min).minCoeff() >= -1e-9;
    return sol;
}

NetworkSolution solve_network(const ChannelSet& ch, const Allocation& alloc, const NetworkConfig& cfg,
                              const SolverOptions& opt, const TraceSink& trace) {
    NetworkSolution out;
    out.power = PowerProfile(ch.num_tx(), ch.N());
    for (int n = 0; n < ch.N(); ++n) {
        const SubcarrierProblem sp = build_subproblem(ch, alloc, cfg, n);
        SubcarrierSolution sol = outer_solve(sp, opt, trace);
        for (int i = 0; i < sp.J; ++i) out.power.at(sp.user_ids[i], n) = sol.p(i);
        out.max_outer_iters = std::max(out.max_outer_iters, sol.outer_iters);
        out.all_converged = out.all_converged && sol.converged;
        out.qos_ok = out.qos_ok && sol.qos_ok;
        out.per_subcarrier.push_back(std::move(sol));
    }
    out.breakdown = network_secrecy(ch, alloc, out.power, cfg);
    return out;
}

} // namespace secd2d
