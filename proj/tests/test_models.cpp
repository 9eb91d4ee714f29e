#include <doctest.h>

#include <cmath>

#include "susyq/models.hpp"
#include "susyq/spectral.hpp"
#include "test_util.hpp"

using namespace susyq;
namespace tu = susyq::testutil;

TEST_SUITE_BEGIN("models");

TEST_CASE("graph parsing") {
    const Graph single = load_graph("2\n1 2\n");
    CHECK(single.n_vertices == 2);
    REQUIRE(single.edges.size() == 1);
    CHECK(single.edges[0] == std::pair<int, int>{1, 2});

    const Graph p3 = load_graph("3\n1 2\n2 3\n");
    CHECK(p3.n_edges() == 2);

    const Graph commented = load_graph("# header\n 3 \n1 2 # edge one\n\n2 3\n");
    CHECK(commented.n_edges() == 2);

    CHECK_THROWS_AS(load_graph("2\n1 1\n"), GraphParseError);
    CHECK_THROWS_AS(load_graph("2\n1 2\n1 2\n"), GraphParseError);
    CHECK_THROWS_AS(load_graph("2\n1 3\n"), GraphParseError);
    CHECK_THROWS_AS(load_graph("2\n1\n"), GraphParseError);
    CHECK_THROWS_AS(load_graph("x\n"), GraphParseError);
    CHECK_THROWS_AS(load_graph(""), GraphParseError);

    try {
        load_graph("2\n1 1\n");
    } catch (const GraphParseError& e) {
        CHECK(e.line() == 2);
    }
}

TEST_CASE("graph text round-trip") {
    const Graph g = tu::random_graph(7, 0.4, 21);
    const Graph back = load_graph(graph_to_text(g));
    CHECK(back.n_vertices == g.n_vertices);
    CHECK(back.edges == g.edges);
}

TEST_CASE("independent sets and Euler characteristics of the named graphs") {
    const auto k2_sets = independent_sets(tu::k2());
    REQUIRE(k2_sets.size() == 3);
    CHECK(k2_sets[0].index == 0);
    CHECK(k2_sets[1].index == 1);
    CHECK(k2_sets[2].index == 2);
    CHECK(independence_euler_characteristic(tu::k2()) == -1);

    CHECK(independent_sets(tu::k3()).size() == 4);
    CHECK(independence_euler_characteristic(tu::k3()) == -2);

    CHECK(independent_sets(tu::path3()).size() == 5);
    CHECK(independence_euler_characteristic(tu::path3()) == -1);

    CHECK(independent_sets(tu::empty_graph(4)).size() == 16);

    CHECK_THROWS_AS(independent_sets(tu::empty_graph(25)), std::invalid_argument);
}

TEST_CASE("hardcore model: projector counts independent sets, model validates") {
    const SusyModel k2 = hardcore_model(tu::k2());
    CHECK(validate(k2).passed);
    CHECK(k2.projector.trace() == Complex(3.0, 0.0));

    const SusyModel p3 = hardcore_model(tu::path3());
    CHECK(p3.projector.trace() == Complex(5.0, 0.0));

    // Empty graph: P = I and the Witten index vanishes.
    const SusyModel free3 = hardcore_model(tu::empty_graph(3));
    CHECK(sub(free3.projector, SparseOperator::identity(8)).is_zero());
    CHECK(witten_index(free3) == 0);

    CHECK_THROWS_AS(hardcore_model(tu::empty_graph(21)), std::invalid_argument);
}

TEST_CASE("witten index equals independence Euler characteristic on random graphs") {
    for (std::uint64_t seed = 0; seed < 15; ++seed) {
        const int n = 2 + static_cast<int>(seed % 9);
        const Graph g = tu::random_graph(n, 0.3, seed * 31 + 5);
        CHECK(witten_index(hardcore_model(g)) == independence_euler_characteristic(g));
    }
}

TEST_CASE("hardcore projector trace matches independent set count on random graphs") {
    for (std::uint64_t seed = 50; seed < 58; ++seed) {
        const Graph g = tu::random_graph(6, 0.35, seed);
        const SusyModel m = hardcore_model(g);
        CHECK(m.projector.trace().real() == doctest::Approx(static_cast<double>(independent_sets(g).size())));
    }
}

TEST_CASE("syk model: single coupling, nilpotency exact") {
    SykCoupling c;
    c.n_modes = 3;
    c.q = 3;
    c.table = {{{1, 2, 3}, Complex(1.0, 0.0)}};
    const SusyModel m = syk_model(c);
    CHECK(m.supercharge.nonzeros() == 1);
    CHECK(m.supercharge.entry(7, 0) == Complex(0.0, 1.0));  // i a1† a2† a3† |000> = i |111>
    CHECK(mul(m.supercharge, m.supercharge).is_zero());
    CHECK(validate(m).passed);
    CHECK(witten_index(m) == 0);
}

TEST_CASE("syk model: even q rejected, q > N gives empty supercharge") {
    SykCoupling even;
    even.n_modes = 4;
    even.q = 4;
    CHECK_THROWS_WITH_AS(syk_model(even), doctest::Contains("odd"), std::invalid_argument);

    const SykCoupling big = random_syk_coupling(3, 5, 1);
    CHECK(big.table.empty());
    const SusyModel m = syk_model(big);
    CHECK(m.supercharge.is_zero());
    CHECK(m.labels.count("warning") == 1);
}

TEST_CASE("random couplings are deterministic in the seed") {
    const SykCoupling a = random_syk_coupling(5, 3, 11);
    const SykCoupling b = random_syk_coupling(5, 3, 11);
    REQUIRE(a.table.size() == b.table.size());
    REQUIRE(a.table.size() == 10);  // C(5,3)
    for (std::size_t k = 0; k < a.table.size(); ++k) {
        CHECK(a.table[k].first == b.table[k].first);
        CHECK(a.table[k].second == b.table[k].second);
    }
    const SykCoupling c = random_syk_coupling(5, 3, 12);
    CHECK(a.table[0].second != c.table[0].second);
}

TEST_CASE("random syk models validate with exact nilpotency") {
    for (int n : {3, 5, 7}) {
        for (int q : {3, 5}) {
            if (q > n) continue;
            const SusyModel m = syk_model(random_syk_coupling(n, q, 17));
            const ValidationReport r = validate(m);
            CHECK(r.passed);
            CHECK(r.parity_residual == 0.0);
        }
    }
}

TEST_CASE("zq symmetry operator") {
    CHECK(sub(zq_symmetry_operator(3, 3, 0.0), SparseOperator::identity(8)).max_abs() <= 1e-15);
    CHECK(sub(zq_symmetry_operator(3, 3, 3.0), SparseOperator::identity(8)).max_abs() <= 1e-12);

    // Tr[(-1)^F g] on 3 modes with q = 3: (1 - e^{2 pi i/3})^3 = -3 sqrt(3) i
    const SparseOperator g = zq_symmetry_operator(3, 3, 1.0);
    const Complex tr = mul(parity_operator(3), g).trace();
    CHECK(tr.real() == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(tr.imag() == doctest::Approx(-3.0 * std::sqrt(3.0)));
}

TEST_CASE("refined index closed form against brute-force trace") {
    // Spot value N=3, q=3, r=1: e^{-i pi/2} (2 sin pi/3)^3 = -3 sqrt(3) i
    const Complex spot = syk_refined_index_closed_form(3, 3, 1.0);
    CHECK(spot.real() == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(spot.imag() == doctest::Approx(-3.0 * std::sqrt(3.0)));

    // N=1, q=2, r=1 cross-check: closed form 2, brute trace (1 - e^{i pi}) = 2
    const Complex small = syk_refined_index_closed_form(1, 2, 1.0);
    CHECK(small.real() == doctest::Approx(2.0));
    CHECK(std::abs(small.imag()) <= 1e-12);

    for (int n : {2, 4, 7, 10}) {
        for (int q : {2, 3, 5, 9}) {
            if (q > n) continue;
            for (int r = 1; r < q; ++r) {
                const Complex brute = mul(parity_operator(n), zq_symmetry_operator(n, q, r)).trace();
                const Complex closed = syk_refined_index_closed_form(n, q, r);
                CHECK(std::abs(brute - closed) <= 1e-9 * std::max(1.0, std::abs(closed)));
                // modulus of the phase factor is 1
                const double mod = std::pow(2.0 * std::sin(M_PI * r / q), n);
                CHECK(std::abs(closed) == doctest::Approx(std::abs(mod)));
            }
        }
    }
}

TEST_CASE("zq generator is a symmetry of the syk supercharge at integer r") {
    const SusyModel m = syk_model(random_syk_coupling(5, 3, 23));
    const SparseOperator g = zq_symmetry_operator(5, 3, 1.0);
    // g Q g† = e^{2 pi i r} Q = Q for integer r
    const SparseOperator conj = mul(g, mul(m.supercharge, g.adjoint()));
    CHECK(sub(conj, m.supercharge).max_abs() <= 1e-10 * std::max(1.0, m.supercharge.max_abs()));
}

TEST_CASE("refined index is coupling independent across seeds") {
    const SparseOperator f = parity_operator(4);
    const SparseOperator g = zq_symmetry_operator(4, 3, 1.0);
    const Complex a = mul(f, g).trace();
    (void)syk_model(random_syk_coupling(4, 3, 1));
    (void)syk_model(random_syk_coupling(4, 3, 2));
    const Complex b = mul(f, g).trace();
    CHECK(a == b);  // the trace does not involve C at all; the index is ensemble-free
}

TEST_CASE("ansatz supercharge") {
    // B_i = P_i reproduces the hard-core supercharge
    const Graph g = tu::k2();
    std::vector<SparseOperator> b = {hardcore_vertex_projector(g, 1), hardcore_vertex_projector(g, 2)};
    const AnsatzResult hc = ansatz_supercharge(2, b);
    CHECK(hc.report.passed);
    CHECK(sub(hc.model.supercharge, hardcore_model(g).supercharge).is_zero());

    // B_i = I: Q = sum a_i†, nilpotent because creation operators anticommute
    std::vector<SparseOperator> ones = {SparseOperator::identity(4), SparseOperator::identity(4)};
    const AnsatzResult free = ansatz_supercharge(2, ones);
    CHECK(free.report.passed);
    CHECK(free.report.nilpotency_residual == 0.0);

    // B_1 = n_2, B_2 = I: nilpotency fails and the report says so
    std::vector<SparseOperator> bad = {number_operator(2, 2), SparseOperator::identity(4)};
    const AnsatzResult broken = ansatz_supercharge(2, bad);
    CHECK_FALSE(broken.report.passed);
    CHECK(broken.report.nilpotency_residual > 0.1);

    // fermionic B rejected
    std::vector<SparseOperator> wrong_parity = {jw_annihilation(1, 2), SparseOperator::identity(4)};
    CHECK_THROWS_AS(ansatz_supercharge(2, wrong_parity), std::invalid_argument);
}

TEST_SUITE_END();
