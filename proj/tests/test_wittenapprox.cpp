#include <doctest.h>

#include <cmath>

#include "susyq/models.hpp"
#include "susyq/spectral.hpp"
#include "susyq/wittenapprox.hpp"
#include "test_util.hpp"

using namespace susyq;
namespace tu = susyq::testutil;

TEST_SUITE_BEGIN("wittenapprox");

TEST_CASE("penalty hamiltonian values") {
    const SparseOperator k2 = penalty_hamiltonian(tu::k2());
    const Eigen::VectorXcd d = k2.diagonal_vector();
    CHECK(d(0) == Complex(0.0, 0.0));
    CHECK(d(1) == Complex(0.0, 0.0));
    CHECK(d(2) == Complex(0.0, 0.0));
    CHECK(d(3) == Complex(2.0, 0.0));  // both endpoints occupied, edge counted twice

    CHECK(penalty_hamiltonian(tu::empty_graph(3)).is_zero());

    const SparseOperator p3 = penalty_hamiltonian(tu::path3());
    CHECK(p3.diagonal_vector()(7) == Complex(4.0, 0.0));  // |111>: two edges, doubled
}

TEST_CASE("penalty hamiltonian is integer, even, zero exactly on independent sets") {
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const Graph g = tu::random_graph(3 + static_cast<int>(seed % 5), 0.4, seed + 7);
        const SparseOperator h_pen = penalty_hamiltonian(g);
        CHECK(h_pen.is_diagonal());
        const Eigen::VectorXcd d = h_pen.diagonal_vector();

        std::vector<bool> independent(static_cast<std::size_t>(d.size()), false);
        for (const BasisState& s : independent_sets(g)) independent[s.index] = true;

        for (Index s = 0; s < d.size(); ++s) {
            const double v = d(s).real();
            CHECK(v == std::round(v));
            CHECK(std::fmod(v, 2.0) == 0.0);
            if (independent[static_cast<std::size_t>(s)]) {
                CHECK(v == 0.0);
            } else {
                CHECK(v >= 2.0);
            }
        }
    }
}

TEST_CASE("penalty hamiltonian is Q-closed but not Q-exact") {
    for (const Graph& g : {tu::k2(), tu::path3(), tu::random_graph(6, 0.3, 3)}) {
        const SusyModel m = hardcore_model(g);
        const SparseOperator h_pen = penalty_hamiltonian(g);
        CHECK(commutator(m.supercharge, h_pen).max_abs() <= 1e-10);
    }
    // Non-exactness witness on K2: exact operators have vanishing supertrace,
    // but Tr[(-1)^F H_Pen] = 2.
    const Complex witness = mul(parity_operator(2), penalty_hamiltonian(tu::k2())).trace();
    CHECK(witness == Complex(2.0, 0.0));
}

TEST_CASE("xi on K2 at mu = 0, gamma = log 20") {
    const SusyModel m = hardcore_model(tu::k2());
    ApproxConfig cfg;
    cfg.mu = 0.0;
    cfg.epsilon = 0.1;  // gamma defaults to log(2/0.1) = log 20
    const Complex x = xi(m, cfg);
    CHECK(x.real() == doctest::Approx(-0.9975).epsilon(1e-12));
    CHECK(x.imag() == 0.0);
    CHECK(std::abs(x - Complex(-1.0, 0.0)) <= 4.0 * std::exp(-cfg.resolved_gamma()));
}

TEST_CASE("xi approaches Z_P as gamma grows; real at mu = 0") {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        const Graph g = tu::random_graph(3 + static_cast<int>(seed % 4), 0.35, seed * 3 + 1);
        const SusyModel m = hardcore_model(g);
        const double z = static_cast<double>(witten_index(m));
        double prev_gap = std::numeric_limits<double>::infinity();
        for (double gamma : {1.0, 2.0, 4.0, 8.0, 700.0}) {
            ApproxConfig cfg;
            cfg.epsilon = 0.1;
            cfg.gamma = gamma;
            const Complex x = xi(m, cfg);
            CHECK(x.imag() == 0.0);
            const double gap = std::abs(x.real() - z);
            CHECK(gap <= prev_gap + 1e-15);
            prev_gap = gap;
        }
        // gamma = 700 suppresses violators below the double floor entirely
        ApproxConfig big;
        big.epsilon = 0.1;
        big.gamma = 700.0;
        CHECK(xi(m, big).real() == doctest::Approx(z).epsilon(1e-14));
    }
}

TEST_CASE("supersymmetric observable checks") {
    const SusyModel m = hardcore_model(tu::k2());
    const SparseOperator h = hamiltonian(m);

    const ObservableCheck jh = check_supersymmetric_observable(m, h);
    CHECK(jh.hermiticity_residual <= 1e-12);
    CHECK(jh.closure_residual <= 1e-12);
    CHECK(jh.hamiltonian_commutator_residual <= 1e-12);
    CHECK(jh.lambda_min == doctest::Approx(0.0).epsilon(1e-12));

    const ObservableCheck ji = check_supersymmetric_observable(m, SparseOperator::identity(4));
    CHECK(ji.closure_residual == 0.0);
    CHECK(ji.lambda_min == doctest::Approx(1.0));

    const ObservableCheck jn = check_supersymmetric_observable(m, number_operator(1, 2));
    CHECK(jn.closure_residual > 0.1);
}

TEST_CASE("gap report: K2 numbers and the epsilon/2 budget") {
    const SusyModel m = hardcore_model(tu::k2());
    ApproxConfig cfg;
    cfg.mu = 0.0;
    cfg.epsilon = 0.1;
    const GapReport r = approximation_gap_report(m, cfg);
    CHECK(r.z_exact.real() == doctest::Approx(-1.0));
    CHECK(r.normalized_gap == doctest::Approx(0.000625).epsilon(1e-9));
    CHECK(r.budget == doctest::Approx(0.05));
    CHECK(r.within_budget);
    CHECK(r.ordering_residual == 0.0);  // H and H_Pen commute on K2

    // doubling gamma shrinks the measured gap
    ApproxConfig tighter = cfg;
    tighter.gamma = 2.0 * cfg.resolved_gamma();
    CHECK(approximation_gap_report(m, tighter).normalized_gap < r.normalized_gap);
}

TEST_CASE("gap bound mu = 0 on random graphs: gap <= e^{-2 gamma} violation fraction") {
    for (std::uint64_t seed = 0; seed < 20; ++seed) {
        const int n = 2 + static_cast<int>(seed % 7);
        const Graph g = tu::random_graph(n, 0.3, seed * 11 + 2);
        const SusyModel m = hardcore_model(g);
        ApproxConfig cfg;
        cfg.epsilon = 0.2;
        const GapReport r = approximation_gap_report(m, cfg);
        const double dim = static_cast<double>(Index(1) << n);
        const double violators = dim - static_cast<double>(independent_sets(g).size());
        const double bound = std::exp(-2.0 * r.gamma_used) * violators / dim;
        CHECK(r.normalized_gap <= bound + 1e-15);
    }
}

TEST_CASE("additive estimate: K2 lands within epsilon; deterministic in seed") {
    const SusyModel m = hardcore_model(tu::k2());
    ApproxConfig cfg;
    cfg.mu = 0.0;
    cfg.epsilon = 0.1;
    cfg.confidence = 0.9;

    const EstimateResult r = witten_additive_estimate(m, cfg, std::nullopt, 42);
    CHECK(r.guarantee_met);
    CHECK(r.range_bound == doctest::Approx(1.0));
    // n >= 2 R^2 ln(2/(1-c)) / (eps/2)^2 = 2 ln(20) / 0.0025
    CHECK(r.shots_used == static_cast<std::uint64_t>(std::ceil(2.0 * std::log(20.0) / 0.0025)));
    CHECK(std::abs(r.z_hat - Complex(-0.25, 0.0)) <= cfg.epsilon);

    const EstimateResult again = witten_additive_estimate(m, cfg, std::nullopt, 42);
    CHECK(again.z_hat == r.z_hat);

    // undersized override: same estimator, weaker guarantee, recomputed halfwidth
    const EstimateResult small = witten_additive_estimate(m, cfg, 50, 42);
    CHECK_FALSE(small.guarantee_met);
    CHECK(small.achieved_halfwidth > cfg.epsilon / 2.0);
}

TEST_CASE("additive estimate: empty graph gives index 0 within epsilon") {
    const SusyModel m = hardcore_model(tu::empty_graph(3));
    ApproxConfig cfg;
    cfg.epsilon = 0.1;
    cfg.confidence = 0.9;
    const EstimateResult r = witten_additive_estimate(m, cfg, std::nullopt, 7);
    CHECK(std::abs(r.z_hat) <= cfg.epsilon);
}

TEST_CASE("additive estimate with mu > 0 and J = H") {
    const SusyModel m = hardcore_model(tu::k2());
    ApproxConfig cfg;
    cfg.mu = 0.3;
    cfg.epsilon = 0.2;
    cfg.confidence = 0.9;

    const GapReport gap = approximation_gap_report(m, cfg);
    // Exact Z_P[mu] for K2: ground state contributes -1, the paired E = 2
    // levels cancel: Z = -e^{0.3 * 0} * 1 + (e^{0.6} - e^{0.6}) = -1.
    CHECK(gap.z_exact.real() == doctest::Approx(-1.0).epsilon(1e-12));
    CHECK(gap.lambda_used == doctest::Approx(0.0).epsilon(1e-10));

    const EstimateResult r = witten_additive_estimate(m, cfg, std::nullopt, 3);
    const double target = gap.z_exact.real() / (4.0 * std::exp(cfg.mu * gap.lambda_used));
    CHECK(std::abs(r.z_hat.real() - target) <= cfg.epsilon);
}

TEST_CASE("config validation") {
    const SusyModel m = hardcore_model(tu::k2());
    ApproxConfig bad;
    bad.epsilon = -1.0;
    CHECK_THROWS_AS(xi(m, bad), std::invalid_argument);

    ApproxConfig conf;
    conf.epsilon = 0.1;
    conf.confidence = 0.4;
    CHECK_THROWS_AS(xi(m, conf), std::invalid_argument);

    // J that is not supersymmetric is rejected
    ApproxConfig badj;
    badj.epsilon = 0.1;
    badj.observable = number_operator(1, 2);
    CHECK_THROWS_AS(xi(m, badj), std::invalid_argument);

    // models without a graph label cannot be relaxed
    SusyModel anonymous = m;
    anonymous.labels.erase("graph");
    ApproxConfig cfg;
    cfg.epsilon = 0.1;
    CHECK_THROWS_AS(xi(anonymous, cfg), std::invalid_argument);
}

TEST_SUITE_END();
