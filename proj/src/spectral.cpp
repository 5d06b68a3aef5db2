#include "spectral.hpp"

#include "errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

namespace secd2d {

SubcarrierProblem build_subproblem_for_users(const ChannelSet& ch, const NetworkConfig& cfg, int n,
                                             const std::vector<int>& users) {
    SubcarrierProblem sp;
    sp.n = n;
    sp.J = static_cast<int>(users.size());
    sp.user_ids = users;
    sp.G.resize(sp.J, sp.J);
    sp.G_e.resize(sp.J);
    sp.p_max.resize(sp.J);
    sp.c_min.resize(sp.J);
    sp.noise = cfg.noise_power();
    for (int i = 0; i < sp.J; ++i) {
        const int rx = ch.serving_rx(users[i]);
        for (int j = 0; j < sp.J; ++j) sp.G(i, j) = ch.gain(users[j], n, rx);
        sp.G_e(i) = ch.eve_gain(users[i], n);
        const UserClass c = ch.tx_class(users[i]);
        sp.p_max(i) = class_pmax(cfg, c);
        sp.c_min(i) = class_cmin(cfg, c) * std::numbers::ln2;
    }
    return sp;
}

SubcarrierProblem build_subproblem(const ChannelSet& ch, const Allocation& alloc, const NetworkConfig& cfg, int n) {
    const std::vector<int> users = alloc.scheduled(n);
    if (static_cast<int>(users.size()) != cfg.users_per_subcarrier())
        throw NumericalError("build_subproblem: subcarrier " + std::to_string(n) +
                             " does not schedule one user per class and cell");
    return build_subproblem_for_users(ch, cfg, n, users);
}

NormalizedSystem normalize(const SubcarrierProblem& sp) {
    const int J = sp.J;
    NormalizedSystem ns;
    ns.F = MatrixXd::Zero(J, J);
    ns.v.resize(J);
    ns.F_e = MatrixXd::Zero(J, J);
    ns.v_e.resize(J);
    for (int i = 0; i < J; ++i) {
        if (!(sp.G(i, i) > 0.0)) throw NumericalError("normalize: zero direct gain");
        if (!(sp.G_e(i) > 0.0)) throw NumericalError("normalize: zero eavesdropper gain");
    }
    for (int i = 0; i < J; ++i) {
        for (int j = 0; j < J; ++j) {
            if (i == j) continue;
            ns.F(i, j) = sp.G(i, j) / sp.G(i, i);
            ns.F_e(i, j) = sp.G_e(j) / sp.G_e(i);
        }
        ns.v(i) = sp.noise / sp.G(i, i);
        ns.v_e(i) = sp.noise / sp.G_e(i);
    }
    return ns;
}

namespace {

MatrixXd add_cap_column(const MatrixXd& F, const VectorXd& v, double p_max_j, int j) {
    MatrixXd B = F;
    B.col(j) += v / p_max_j;
    return B;
}

std::optional<MatrixXd> tilde(const MatrixXd& B) {
    const int J = static_cast<int>(B.rows());
    const MatrixXd A = MatrixXd::Identity(J, J) + B;
    Eigen::FullPivLU<MatrixXd> lu(A);
    lu.setThreshold(1e-12);
    if (!lu.isInvertible()) return std::nullopt;
    MatrixXd Bt = lu.solve(B);
    const double scale = std::max(1.0, B.cwiseAbs().maxCoeff());
    if ((A * Bt - B).cwiseAbs().maxCoeff() > 1e-10 * scale) return std::nullopt;
    return Bt;
}

} // namespace

ConstraintMatrices constraint_matrices(const NormalizedSystem& ns, const VectorXd& p_max) {
    const int J = static_cast<int>(ns.F.rows());
    for (int j = 0; j < J; ++j)
        if (!(p_max(j) > 0.0)) throw DomainError("constraint_matrices: p_max must be > 0");
    ConstraintMatrices cm;
    for (int j = 0; j < J; ++j) {
        cm.B.push_back(add_cap_column(ns.F, ns.v, p_max(j), j));
        auto bt = tilde(cm.B.back());
        if (!bt) throw NumericalError("constraint_matrices: I + B_j is singular");
        cm.B_tilde.push_back(std::move(*bt));
        cm.B_e.push_back(add_cap_column(ns.F_e, ns.v_e, p_max(j), j));
        cm.B_e_tilde.push_back(tilde(cm.B_e.back()));
    }
    return cm;
}

namespace {

struct PowerIterResult {
    double rho;
    VectorXd x;
    int iterations;
};

struct Bracket {
    double lo;
    double hi;
};

// Collatz-Wielandt bracket: min (Ax)_i/x_i <= rho <= max (Ax)_i/x_i for x > 0.
Bracket cw_bracket(const VectorXd& Ax, const VectorXd& x) {
    Bracket b{std::numeric_limits<double>::infinity(), 0.0};
    for (Eigen::Index i = 0; i < x.size(); ++i) {
        const double r = Ax(i) / x(i);
        b.lo = std::min(b.lo, r);
        b.hi = std::max(b.hi, r);
    }
    return b;
}

PowerIterResult power_iterate(const MatrixXd& A, double tol, int max_iter) {
    const int n = static_cast<int>(A.rows());
    VectorXd x = VectorXd::Constant(n, 1.0 / n);
    double prev = -1.0;
    int stable = 0;
    for (int it = 1; it <= max_iter; ++it) {
        const VectorXd Ax = A * x;
        const Bracket b = cw_bracket(Ax, x);
        const double est = Ax.sum(); // ||x||_1 = 1
        if (b.hi - b.lo <= tol * b.hi) return {0.5 * (b.lo + b.hi), x, it};
        // Reducible inputs leave components of order eps where the bracket never tightens;
        // fall back to a stalled Rayleigh-type estimate with a residual check.
        if (prev >= 0.0 && std::abs(est - prev) <= tol * est) {
            if (++stable >= 3 && (Ax - est * x).cwiseAbs().maxCoeff() <= 1e-10 * est * x.cwiseAbs().maxCoeff())
                return {est, x, it};
        } else {
            stable = 0;
        }
        prev = est;
        // Shifting by the current estimate damps eigenvalues near -rho (periodic structure).
        VectorXd next = Ax + est * x;
        x = next / next.sum();
    }
    throw NonConvergenceError("pf_eigenpair: power iteration did not converge, last estimate " +
                              std::to_string(prev));
}

// Noda iteration: shifted inverse iteration with the shift set to the Collatz-Wielandt upper
// bound. Converges superlinearly on positive matrices; returns nullopt when the shifted system
// degenerates before the bracket closes, so the caller can fall back to plain power iteration.
std::optional<PowerIterResult> noda_iterate(const MatrixXd& A, double tol) {
    const int n = static_cast<int>(A.rows());
    VectorXd x = VectorXd::Constant(n, 1.0 / n);
    const MatrixXd I = MatrixXd::Identity(n, n);
    double best_width = std::numeric_limits<double>::infinity();
    PowerIterResult best{0.0, x, 0};
    for (int it = 1; it <= 100; ++it) {
        const VectorXd Ax = A * x;
        const Bracket b = cw_bracket(Ax, x);
        const double width = b.hi - b.lo;
        if (width < best_width) {
            best_width = width;
            best = {0.5 * (b.lo + b.hi), x, it};
        }
        if (width <= tol * b.hi) return best;
        const VectorXd y = (b.hi * I - A).partialPivLu().solve(x);
        if (!y.allFinite() || y.minCoeff() <= 0.0) break;
        const VectorXd xn = y / y.sum();
        if ((xn - x).cwiseAbs().maxCoeff() <= 1e-15) break;
        x = xn;
    }
    // Stalled at roundoff: accept when the eigen-residual is at machine level.
    const VectorXd Ax = A * best.x;
    if ((Ax - best.rho * best.x).cwiseAbs().maxCoeff() <= 1e-12 * best.rho * best.x.cwiseAbs().maxCoeff())
        return best;
    return std::nullopt;
}

PowerIterResult dominant_pair(const MatrixXd& A, double tol, int max_iter) {
    if (auto r = noda_iterate(A, tol)) return *r;
    return power_iterate(A, tol, max_iter);
}

// Diagonal scaling equalizing off-diagonal row and column sums (Parlett-Reinsch style).
VectorXd balance(const MatrixXd& A) {
    const int n = static_cast<int>(A.rows());
    VectorXd d = VectorXd::Ones(n);
    MatrixXd B = A;
    for (int sweep = 0; sweep < 50; ++sweep) {
        bool changed = false;
        for (int i = 0; i < n; ++i) {
            const double r = B.row(i).sum() - B(i, i);
            const double c = B.col(i).sum() - B(i, i);
            if (!(r > 0.0) || !(c > 0.0)) continue;
            const double f = std::sqrt(r / c);
            if (std::abs(std::log(f)) < 1e-3) continue;
            // Column i scaled by f, row i by 1/f.
            B.col(i) *= f;
            B.row(i) /= f;
            d(i) *= f;
            changed = true;
        }
        if (!changed) break;
    }
    return d;
}

// Strongly connected components of the nonzero pattern, labelled 0..k-1.
std::vector<int> strong_components(const MatrixXd& A) {
    const int n = static_cast<int>(A.rows());
    std::vector<std::vector<char>> reach(n, std::vector<char>(n, 0));
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) reach[i][j] = i == j || A(i, j) > 0.0;
    for (int k = 0; k < n; ++k)
        for (int i = 0; i < n; ++i)
            if (reach[i][k])
                for (int j = 0; j < n; ++j) reach[i][j] = reach[i][j] || reach[k][j];
    std::vector<int> comp(n, -1);
    int next = 0;
    for (int i = 0; i < n; ++i) {
        if (comp[i] >= 0) continue;
        for (int j = i; j < n; ++j)
            if (reach[i][j] && reach[j][i]) comp[j] = next;
        ++next;
    }
    return comp;
}

} // namespace

PfEigenpair pf_eigenpair(const MatrixXd& A, double tol, int max_iter) {
    const int n = static_cast<int>(A.rows());
    if (n == 0 || A.cols() != n) throw DomainError("pf_eigenpair: matrix must be square and non-empty");
    if (!A.allFinite()) throw DomainError("pf_eigenpair: non-finite entry");
    if (A.minCoeff() < 0.0) throw DomainError("pf_eigenpair: matrix has a negative entry");
    const double amax = A.maxCoeff();
    PfEigenpair out;
    if (amax == 0.0) {
        out.rho = 0.0;
        out.x = VectorXd::Constant(n, 1.0 / n);
        out.y = VectorXd::Ones(n);
        return out;
    }
    const VectorXd d = balance(A);
    const MatrixXd Ab = d.cwiseInverse().asDiagonal() * A * d.asDiagonal();
    const std::vector<int> comp = strong_components(A);
    const int ncomp = *std::max_element(comp.begin(), comp.end()) + 1;
    PowerIterResult right, left;
    if (ncomp == 1) {
        // Irreducible: the Perron vectors are positive and no perturbation is needed.
        right = dominant_pair(Ab, tol, max_iter);
        left = dominant_pair(Ab.transpose(), tol, max_iter);
        out.rho = right.rho;
    } else {
        // Reducible: vectors come from the balanced matrix plus eps 11^T (eps = 1e-12 max), which
        // keeps them positive; rho itself is the largest radius over the irreducible diagonal
        // blocks, since a nilpotent block would turn eps into an eps^(1/k) bias.
        const double eps = 1e-12 * Ab.maxCoeff();
        const MatrixXd Ae = (Ab.array() + eps).matrix();
        right = dominant_pair(Ae, tol, max_iter);
        left = dominant_pair(Ae.transpose(), tol, max_iter);
        out.rho = 0.0;
        for (int c = 0; c < ncomp; ++c) {
            std::vector<int> idx;
            for (int i = 0; i < n; ++i)
                if (comp[i] == c) idx.push_back(i);
            const int k = static_cast<int>(idx.size());
            MatrixXd blk(k, k);
            for (int i = 0; i < k; ++i)
                for (int j = 0; j < k; ++j) blk(i, j) = Ab(idx[i], idx[j]);
            out.rho = std::max(out.rho, k == 1 ? blk(0, 0) : dominant_pair(blk, tol, max_iter).rho);
        }
    }
    out.x = d.cwiseProduct(right.x);
    out.x /= out.x.sum();
    out.y = left.x.cwiseQuotient(d);
    out.y /= out.y.dot(out.x);
    out.iterations = right.iterations + left.iterations;
    return out;
}

namespace {

MatrixXd clamp_roundoff(const MatrixXd& A) {
    const double scale = A.cwiseAbs().maxCoeff();
    MatrixXd out = A;
    for (Eigen::Index i = 0; i < A.size(); ++i) {
        double& a = out.data()[i];
        if (a < 0.0 && a >= -1e-12 * scale) a = 0.0;
    }
    return out;
}

} // namespace

double log_pf(const MatrixXd& A, const VectorXd& w, double tol, int max_iter) {
    const MatrixXd Aw = clamp_roundoff(A * w.asDiagonal());
    const PfEigenpair e = pf_eigenpair(Aw, tol, max_iter);
    return e.rho > 0.0 ? std::log(e.rho) : -std::numeric_limits<double>::infinity();
}

double log_pf_with_grad(const MatrixXd& A, const VectorXd& w, const VectorXd& dw, VectorXd& grad, double tol,
                        int max_iter) {
    const MatrixXd Aw = clamp_roundoff(A * w.asDiagonal());
    const PfEigenpair e = pf_eigenpair(Aw, tol, max_iter);
    grad = VectorXd::Zero(w.size());
    if (!(e.rho > 0.0)) return -std::numeric_limits<double>::infinity();
    // d rho / d w_k = (y^T A)_k x_k with y^T x = 1.
    const VectorXd yA = A.transpose() * e.y;
    grad = yA.cwiseProduct(e.x).cwiseProduct(dw) / e.rho;
    return std::log(e.rho);
}

VectorXd legit_rates(const NormalizedSystem& ns, const VectorXd& p) {
    const VectorXd q = ns.F * p + ns.v;
    return (p.array() / q.array()).log1p().matrix();
}

VectorXd eve_rates(const NormalizedSystem& ns, const VectorXd& p) {
    const VectorXd q = ns.F_e * p + ns.v_e;
    return (p.array() / q.array()).log1p().matrix();
}

VectorXd recover_power(const VectorXd& C, const NormalizedSystem& ns) {
    const int J = static_cast<int>(C.size());
    const VectorXd d = C.array().expm1().matrix();
    if (d.minCoeff() < 0.0) throw InfeasibleRateError("recover_power: negative rate");
    const MatrixXd DF = d.asDiagonal() * ns.F;
    if (DF.maxCoeff() > 0.0 && pf_eigenpair(DF).rho >= 1.0)
        throw InfeasibleRateError("recover_power: rates not jointly achievable (rho(DF) >= 1)");
    const MatrixXd A = MatrixXd::Identity(J, J) - DF;
    const VectorXd b = d.cwiseProduct(ns.v);
    VectorXd p = A.partialPivLu().solve(b);
    const double scale = std::max(p.cwiseAbs().maxCoeff(), std::numeric_limits<double>::min());
    for (int i = 0; i < J; ++i) {
        if (p(i) < -1e-12 * scale) throw InfeasibleRateError("recover_power: negative power component");
        p(i) = std::max(p(i), 0.0);
    }
    const VectorXd back = legit_rates(ns, p);
    for (int i = 0; i < J; ++i)
        if (std::abs(back(i) - C(i)) > 1e-9 * std::max(1.0, std::abs(C(i))))
            throw NumericalError("recover_power: roundtrip residual above 1e-9");
    return p;
}

} // namespace secd2d
