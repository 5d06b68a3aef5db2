#include "doctest.h"

#include "errors.hpp"
#include "linkmetrics.hpp"
#include "oracles.hpp"
#include "spectral.hpp"
#include "suballoc.hpp"

#include <cmath>
#include <random>

using namespace secd2d;

TEST_CASE("PF eigenpair of small closed-form matrices") {
    MatrixXd A(2, 2);
    A << 0, 2, 2, 0;
    PfEigenpair e = pf_eigenpair(A);
    CHECK(e.rho == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(e.x(0) == doctest::Approx(e.x(1)));
    A << 0, 1, 4, 0;
    e = pf_eigenpair(A);
    CHECK(e.rho == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(pf_eigenpair(MatrixXd::Zero(3, 3)).rho == 0.0);
    MatrixXd U(2, 2);
    U << 0, 1, 0, 0; // nilpotent: rho = 0 despite the perturbation used for the vectors
    CHECK(std::abs(pf_eigenpair(U).rho) < 1e-12);
    MatrixXd T(3, 3);
    T << 2, 5, 1, 0, 3, 7, 0, 0, 1; // triangular: rho = max diagonal
    CHECK(pf_eigenpair(T).rho == doctest::Approx(3.0).epsilon(1e-12));
}

TEST_CASE("PF eigenpair errors") {
    MatrixXd A(2, 2);
    A << 0, -1, 1, 0;
    CHECK_THROWS_AS(pf_eigenpair(A), DomainError);
    CHECK_THROWS_AS(pf_eigenpair(MatrixXd(2, 3)), DomainError);
    A << 0, std::nan(""), 1, 0;
    CHECK_THROWS_AS(pf_eigenpair(A), DomainError);
}

TEST_CASE("PF residuals and normalization on random positive matrices") {
    std::mt19937_64 r(5);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int c = 0; c < 200; ++c) {
        const int n = 1 + c % 6;
        MatrixXd A(n, n);
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) A(i, j) = u(r) * std::pow(10.0, 4 * u(r) - 2);
        const PfEigenpair e = pf_eigenpair(A);
        CHECK(e.x.sum() == doctest::Approx(1.0));
        CHECK(e.y.dot(e.x) == doctest::Approx(1.0));
        CHECK((A * e.x - e.rho * e.x).cwiseAbs().maxCoeff() <= 1e-8 * e.rho * e.x.cwiseAbs().maxCoeff());
        const VectorXd yA = A.transpose() * e.y;
        CHECK((yA - e.rho * e.y).cwiseAbs().maxCoeff() <= 1e-8 * e.rho * e.y.cwiseAbs().maxCoeff());
        // Subinvariance: A w <= a w for w > 0 bounds rho by a.
        VectorXd w(n);
        for (int i = 0; i < n; ++i) w(i) = 0.1 + u(r);
        const double a = (A * w).cwiseQuotient(w).maxCoeff();
        CHECK(e.rho <= a * (1 + 1e-12));
    }
}

TEST_CASE("normalize") {
    SubcarrierProblem sp;
    sp.J = 1;
    sp.G = MatrixXd::Constant(1, 1, 4.0);
    sp.G_e = VectorXd::Constant(1, 2.0);
    sp.noise = 8.0;
    NormalizedSystem ns = normalize(sp);
    CHECK(ns.F(0, 0) == 0.0);
    CHECK(ns.v(0) == 2.0);
    CHECK(ns.v_e(0) == 4.0);

    sp.J = 3;
    sp.G = MatrixXd::Zero(3, 3);
    sp.G.diagonal() << 1.0, 2.0, 3.0;
    sp.G_e = VectorXd::Ones(3);
    sp.noise = 1.0;
    CHECK(normalize(sp).F.isZero());

    sp.G(1, 1) = 0.0;
    CHECK_THROWS_AS(normalize(sp), NumericalError);
}

TEST_CASE("normalized rates equal the direct SINR formula on network subproblems") {
    const NetworkConfig cfg = desk_defaults();
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        const ChannelSet ch = make_snapshot(cfg, seed);
        const Allocation a = allocate_heuristic(ch, cfg, HeuristicOptions{}).alloc;
        PowerProfile pw(ch.num_tx(), ch.N());
        for (int n = 0; n < ch.N(); ++n) {
            const SubcarrierProblem sp = build_subproblem(ch, a, cfg, n);
            CHECK(sp.J == 5);
            VectorXd p(sp.J);
            for (int i = 0; i < sp.J; ++i) {
                p(i) = sp.p_max(i) * (0.3 + 0.1 * i);
                pw.at(sp.user_ids[i], n) = p(i);
            }
        }
        const SinrReport r = all_sinrs(ch, a, pw, cfg);
        for (int n = 0; n < ch.N(); ++n) {
            const SubcarrierProblem sp = build_subproblem(ch, a, cfg, n);
            const NormalizedSystem ns = normalize(sp);
            VectorXd p(sp.J);
            for (int i = 0; i < sp.J; ++i) p(i) = pw.at(sp.user_ids[i], n);
            const VectorXd C = legit_rates(ns, p);
            const VectorXd Ce = eve_rates(ns, p);
            for (int i = 0; i < sp.J; ++i) {
                CHECK(std::expm1(C(i)) == doctest::Approx(r.legit_at(sp.user_ids[i], n)).epsilon(1e-12));
                CHECK(std::expm1(Ce(i)) == doctest::Approx(r.eve_at(sp.user_ids[i], n)).epsilon(1e-12));
            }
        }
    }
}

TEST_CASE("constraint matrices") {
    NormalizedSystem ns;
    ns.F = MatrixXd::Zero(2, 2);
    ns.v = VectorXd::Zero(2);
    ns.F_e = MatrixXd::Zero(2, 2);
    ns.v_e = VectorXd::Zero(2);
    ConstraintMatrices cm = constraint_matrices(ns, VectorXd::Ones(2));
    CHECK(cm.B[0].isZero());
    CHECK(cm.B_tilde[1].isZero());

    NormalizedSystem one;
    one.F = MatrixXd::Zero(1, 1);
    one.v = VectorXd::Constant(1, 3.0);
    one.F_e = MatrixXd::Zero(1, 1);
    one.v_e = VectorXd::Constant(1, 1.0);
    cm = constraint_matrices(one, VectorXd::Constant(1, 2.0));
    CHECK(cm.B[0](0, 0) == doctest::Approx(1.5));
    CHECK(cm.B_tilde[0](0, 0) == doctest::Approx(1.5 / 2.5));

    std::mt19937_64 r(9);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    NormalizedSystem three;
    three.F = MatrixXd::Zero(3, 3);
    three.F_e = MatrixXd::Zero(3, 3);
    three.v.resize(3);
    three.v_e.resize(3);
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j)
            if (i != j) {
                three.F(i, j) = u(r);
                three.F_e(i, j) = u(r);
            }
        three.v(i) = u(r);
        three.v_e(i) = u(r);
    }
    cm = constraint_matrices(three, VectorXd::Constant(3, 1.5));
    for (int j = 0; j < 3; ++j) {
        const MatrixXd I = MatrixXd::Identity(3, 3);
        CHECK(((I + cm.B[j]) * cm.B_tilde[j] - cm.B[j]).cwiseAbs().maxCoeff() <= 1e-10);
    }
    CHECK_THROWS_AS(constraint_matrices(three, VectorXd::Zero(3)), DomainError);
}

TEST_CASE("wiretap B~ is undefined from three users on") {
    // I + F_e has rank one when F_e(i,j) = g_j / g_i, so adding a single cap column cannot
    // make it invertible once J >= 3.
    const NetworkConfig cfg = desk_defaults();
    const ChannelSet ch = make_snapshot(cfg, 1);
    const Allocation a = allocate_heuristic(ch, cfg, HeuristicOptions{}).alloc;
    const SubcarrierProblem sp = build_subproblem(ch, a, cfg, 0);
    const ConstraintMatrices cm = constraint_matrices(normalize(sp), sp.p_max);
    for (const auto& be : cm.B_e_tilde) CHECK_FALSE(be.has_value());
}

TEST_CASE("recover_power") {
    NormalizedSystem ns;
    ns.F = MatrixXd::Zero(2, 2);
    ns.v = VectorXd::Ones(2) * 0.5;
    VectorXd C(2);
    C << 1.0, 2.0;
    const VectorXd p = recover_power(C, ns);
    CHECK(p(0) == doctest::Approx(std::expm1(1.0) * 0.5));
    CHECK(p(1) == doctest::Approx(std::expm1(2.0) * 0.5));
    CHECK(recover_power(VectorXd::Zero(2), ns).isZero());

    ns.F << 0, 1, 1, 0; // rates 1 nat each need rho(DF) = e - 1 > 1
    CHECK_THROWS_AS(recover_power(VectorXd::Ones(2), ns), InfeasibleRateError);
    CHECK_THROWS_AS(recover_power(-VectorXd::Ones(2), ns), InfeasibleRateError);
}

TEST_CASE("log_pf gradient and extreme values") {
    MatrixXd A(2, 2);
    A << 0.0, 1.0, 1.0, 0.0;
    VectorXd w(2);
    w << 4.0, 1.0;
    VectorXd g;
    CHECK(log_pf(A, w) == doctest::Approx(std::log(2.0)));
    CHECK(log_pf_with_grad(A, w, w, g) == doctest::Approx(std::log(2.0)));
    // rho = sqrt(w0 w1): d log rho / d log w_k = 1/2.
    CHECK(g(0) == doctest::Approx(0.5));
    CHECK(g(1) == doctest::Approx(0.5));
    CHECK(std::isinf(log_pf(MatrixXd::Zero(2, 2), w)));
}

TEST_CASE("oracle suites at reduced size") {
    using namespace secd2d::oracle;
    for (const SuiteResult& s : {pf_vs_dense(300, 1), grad_vs_finite_diff(40, 2), recover_roundtrip(300, 3),
                                 cap_inequality_equivalence(200, 4), spectral_cap_equivalence(200, 5),
                                 log_convexity(200, 6)}) {
        INFO(s.name << ": " << s.detail);
        CHECK(s.passed());
    }
}
