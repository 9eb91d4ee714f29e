#include <doctest.h>

#include <cmath>

#include "susyq/models.hpp"
#include "susyq/spectral.hpp"
#include "susyq/susycore.hpp"
#include "test_util.hpp"

using namespace susyq;
namespace tu = susyq::testutil;

TEST_SUITE_BEGIN("susycore");

TEST_CASE("validate: zero supercharge passes, a + a† fails nilpotency") {
    SusyModel zero;
    zero.n_modes = 1;
    zero.supercharge = SparseOperator::zero(2, OpParity::Fermionic);
    zero.projector = SparseOperator::identity(2);
    const ValidationReport rz = validate(zero);
    CHECK(rz.passed);
    CHECK(rz.max_residual() == 0.0);

    SusyModel bad;
    bad.n_modes = 1;
    bad.supercharge = add(jw_creation(1, 1), jw_annihilation(1, 1));
    bad.projector = SparseOperator::identity(2);
    const ValidationReport rb = validate(bad);
    CHECK_FALSE(rb.passed);
    CHECK(rb.parity_residual <= 1e-12);
    CHECK(rb.nilpotency_residual == doctest::Approx(1.0));  // Q^2 = I, norm bound 1
    CHECK_THROWS_AS(hamiltonian(bad), ValidationError);
}

TEST_CASE("validate: hard-core models on small graphs pass") {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        const Graph g = tu::random_graph(2 + static_cast<int>(seed), 0.4, seed);
        const SusyModel m = hardcore_model(g);
        CHECK(validate(m).passed);
    }
}

TEST_CASE("hamiltonian: Q = 0 gives H = 0; hard-core K2 spectrum") {
    SusyModel zero;
    zero.n_modes = 2;
    zero.supercharge = SparseOperator::zero(4, OpParity::Fermionic);
    zero.projector = SparseOperator::identity(4);
    CHECK(hamiltonian(zero).is_zero());

    const SusyModel k2 = hardcore_model(tu::k2());
    const SparseOperator h = hamiltonian(k2);
    CHECK(h.hermiticity_residual() == 0.0);
    CHECK(commutator(h, k2.projector).max_abs() <= 1e-12);
    CHECK(commutator(h, parity_operator(2)).max_abs() <= 1e-12);

    // Projected spectrum {0, 2, 2}: unique ground state |10> - |01>.
    const SpectralReport spec = diagonalize(k2);
    REQUIRE(spec.eigenvalues.size() == 3);
    CHECK(spec.eigenvalues[0] == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(spec.eigenvalues[1] == doctest::Approx(2.0));
    CHECK(spec.eigenvalues[2] == doctest::Approx(2.0));
    REQUIRE(spec.ground_basis.cols() == 1);
    const DenseVec w = spec.ground_basis.col(0);
    CHECK(std::abs(std::abs(w(1)) - 1.0 / std::sqrt(2.0)) <= 1e-12);
    CHECK(std::abs(std::abs(w(2)) - 1.0 / std::sqrt(2.0)) <= 1e-12);
    CHECK(std::abs(w(1) + w(2)) <= 1e-12);  // relative minus sign
}

TEST_CASE("exact deformation: psi = 0 and psi = Q†") {
    const SusyModel m = hardcore_model(tu::path3());
    CHECK(exact_deformation(m, SparseOperator::zero(8, OpParity::Fermionic)).op.is_zero());

    const DeformationResult e = exact_deformation(m, m.supercharge.adjoint());
    CHECK(sub(e.op, hamiltonian(m)).max_abs() <= 1e-14);
    CHECK(e.closure_residual <= 1e-12);

    // bosonic psi rejected
    CHECK_THROWS_AS(exact_deformation(m, number_operator(1, 3)), std::invalid_argument);
}

TEST_CASE("random_fermionic: determinism, parity, bound") {
    const SparseOperator a = random_fermionic(3, 7);
    const SparseOperator b = random_fermionic(3, 7);
    CHECK(sub(a, b).max_abs() == 0.0);
    CHECK(a.max_abs() <= 1.0 + 1e-15);

    const SparseOperator f = parity_operator(4);
    const SparseOperator c = random_fermionic(4, 1);
    CHECK(anticommutator(f, c).max_abs() <= 1e-15);

    // N = 1: anticommutes with diag(1,-1) hence off-diagonal only
    const SparseOperator d = random_fermionic(1, 99);
    CHECK(d.entry(0, 0) == Complex(0.0, 0.0));
    CHECK(d.entry(1, 1) == Complex(0.0, 0.0));
}

TEST_CASE("exactness implies closure on random deformations") {
    for (const Graph& g : {tu::k2(), tu::path3(), tu::random_graph(5, 0.4, 3)}) {
        const SusyModel m = hardcore_model(g);
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            const DeformationResult e = exact_deformation(m, random_fermionic(m.n_modes, seed));
            const ClosureResult c = is_closed(e.op, m);
            CHECK(c.closed);
            CHECK(c.residual <= 1e-12);
        }
    }
}

TEST_CASE("is_closed basics") {
    const SusyModel m = hardcore_model(tu::k2());
    CHECK(is_closed(hamiltonian(m), m).closed);
    CHECK(is_closed(SparseOperator::identity(4), m).closed);

    const ClosureResult open = is_closed(jw_creation(1, 2), m);
    CHECK_FALSE(open.closed);
    CHECK(open.residual > 0.5);
}

TEST_CASE("enumerate_partitions") {
    const auto p4 = enumerate_partitions(4);
    REQUIRE(p4.size() == 2);
    CHECK(p4[0] == NilpotentPartition{2, 0});
    CHECK(p4[1] == NilpotentPartition{1, 2});

    const auto p2 = enumerate_partitions(2);
    REQUIRE(p2.size() == 1);
    CHECK(p2[0] == NilpotentPartition{1, 0});

    CHECK(enumerate_partitions(8).size() == 4);
    CHECK_THROWS_AS(enumerate_partitions(5), std::invalid_argument);
    CHECK_THROWS_AS(enumerate_partitions(0), std::invalid_argument);
}

TEST_CASE("nilpotent_from_partition reproduces the two 4-dim Jordan forms") {
    const SparseOperator q1 = nilpotent_from_partition({2, 0});
    CHECK(q1.nonzeros() == 2);
    CHECK(q1.entry(0, 1) == Complex(1.0, 0.0));
    CHECK(q1.entry(2, 3) == Complex(1.0, 0.0));
    CHECK(mul(q1, q1).is_zero());

    const SparseOperator q2 = nilpotent_from_partition({1, 2});
    CHECK(q2.nonzeros() == 1);
    CHECK(q2.entry(0, 1) == Complex(1.0, 0.0));
    CHECK(mul(q2, q2).is_zero());
}

TEST_CASE("conjugation preserves nilpotency; ill-conditioned conjugators rejected") {
    for (std::uint64_t seed : {1u, 2u}) {
        // Random well-conditioned conjugator: identity plus a small perturbation.
        const SparseOperator noise = tu::random_operator(4, seed);
        const SparseOperator s = add(SparseOperator::identity(4), scale(Complex(0.2, 0.0), noise));
        for (const auto& p : enumerate_partitions(4)) {
            const SparseOperator q = nilpotent_from_partition(p, &s);
            CHECK(mul(q, q).max_abs() <= 1e-10);
            CHECK(partition_type(q, 1e-8).n_two == p.n_two);
        }
    }

    Eigen::VectorXcd singular(4);
    singular << 1.0, 1.0, 1.0, 0.0;
    const SparseOperator s_bad = SparseOperator::diagonal(singular);
    CHECK_THROWS_AS(nilpotent_from_partition({2, 0}, &s_bad), std::invalid_argument);
}

TEST_CASE("parity anticommutation check") {
    // Jordan forms couple indices 2k and 2k+1, which have opposite parity, so
    // the check passes with no conjugation.
    for (const auto& p : enumerate_partitions(4)) {
        const auto [ok, res] = check_parity_anticommutation(nilpotent_from_partition(p));
        CHECK(ok);
        CHECK(res == 0.0);
    }

    CHECK(check_parity_anticommutation(jw_creation(1, 1)).first);

    const auto [ok_n, res_n] = check_parity_anticommutation(number_operator(1, 1));
    CHECK_FALSE(ok_n);
    CHECK(res_n == doctest::Approx(2.0));
}

TEST_CASE("jordan models validate and have the advertised ground-state counts") {
    const SusyModel m22 = jordan_model({2, 0});
    CHECK(validate(m22).passed);
    const SpectralReport s22 = diagonalize(m22);
    CHECK(s22.n_bosonic_ground + s22.n_fermionic_ground == 0);

    const SusyModel m211 = jordan_model({1, 2});
    CHECK(validate(m211).passed);
    CHECK(witten_index(m211) == 0);
}

TEST_CASE("random_hermitian_exact yields Hermitian exact deformations") {
    const SusyModel m = hardcore_model(tu::path3());
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const DeformationResult e = random_hermitian_exact(m, seed);
        CHECK(e.op.hermiticity_residual() <= 1e-12);
        CHECK(e.closure_residual <= 1e-12);
    }
}

TEST_SUITE_END();
