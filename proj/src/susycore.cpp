#include "susyq/susycore.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "susyq/rng.hpp"

namespace susyq {

double ValidationReport::max_residual() const {
    return std::max({nilpotency_residual, parity_residual, projector_idempotency, projector_hermiticity,
                     projector_compatibility});
}

ValidationReport validate(const SusyModel& model, double tolerance) {
    const SparseOperator& q = model.supercharge;
    const SparseOperator& p = model.projector;
    if (q.dim() != model.dim() || p.dim() != model.dim()) {
        throw std::invalid_argument("validate: operator dimensions do not match 2^N");
    }
    ValidationReport r;
    r.tolerance = tolerance;
    const double q_scale = std::max(1.0, q.norm_bound() * q.norm_bound());
    r.nilpotency_residual = mul(q, q).max_abs() / q_scale;
    r.parity_residual = anticommutator(parity_operator(model.n_modes), q).max_abs();
    r.projector_idempotency = sub(mul(p, p), p).max_abs();
    r.projector_hermiticity = p.hermiticity_residual();
    r.projector_compatibility = commutator(q, p).max_abs();
    r.passed = r.max_residual() <= tolerance;
    return r;
}

void require_valid(const SusyModel& model, double tolerance) {
    const ValidationReport r = validate(model, tolerance);
    if (!r.passed) {
        std::ostringstream os;
        os << "model failed validation: nilpotency=" << r.nilpotency_residual
           << " parity=" << r.parity_residual << " idempotency=" << r.projector_idempotency
           << " hermiticity=" << r.projector_hermiticity
           << " compatibility=" << r.projector_compatibility << " (tolerance " << tolerance << ")";
        throw ValidationError(os.str());
    }
}

SparseOperator hamiltonian(const SusyModel& model) {
    require_valid(model);
    const SparseOperator& q = model.supercharge;
    return anticommutator(q, q.adjoint()).with_tag(OpParity::Bosonic);
}

DeformationResult exact_deformation(const SusyModel& model, const SparseOperator& psi, double parity_tol) {
    const double scale = std::max(1.0, psi.max_abs());
    const double res = parity_relation_residual(psi, OpParity::Fermionic);
    if (res > parity_tol * scale) {
        std::ostringstream os;
        os << "exact_deformation: psi is not fermionic (parity residual " << res << ")";
        throw std::invalid_argument(os.str());
    }
    SparseOperator e = anticommutator(model.supercharge, psi).with_tag(OpParity::Bosonic);
    const double closure = commutator(model.supercharge, e).max_abs();
    return {std::move(e), closure};
}

SparseOperator random_fermionic(int n_modes, std::uint64_t seed) {
    if (n_modes < 1 || n_modes > 24) throw std::invalid_argument("random_fermionic: mode count out of range");
    const Index dim = Index(1) << n_modes;
    SplitMix64 gen(seed);
    // ~4 entries per column keeps the projected result sparse at any N.
    const int per_col = 4;
    std::vector<Eigen::Triplet<Complex>> t;
    t.reserve(static_cast<std::size_t>(dim) * per_col);
    for (Index c = 0; c < dim; ++c) {
        for (int k = 0; k < per_col; ++k) {
            const Index rrow = static_cast<Index>(gen.next() % static_cast<std::uint64_t>(dim));
            const double re = 2.0 * gen.uniform() - 1.0;
            const double im = 2.0 * gen.uniform() - 1.0;
            t.emplace_back(rrow, c, Complex(re, im));
        }
    }
    SparseOperator a = SparseOperator::from_triplets(dim, t, OpParity::Unknown);
    const SparseOperator f = parity_operator(n_modes);
    SparseOperator psi = scale(Complex(0.5, 0.0), sub(a, mul(f, mul(a, f))));
    const double m = psi.max_abs();
    if (m > 1.0) psi = scale(Complex(1.0 / m, 0.0), psi);
    return psi.with_tag(OpParity::Fermionic);
}

DeformationResult random_hermitian_exact(const SusyModel& model, std::uint64_t seed) {
    const SparseOperator h = hamiltonian(model);
    SplitMix64 gen(seed);
    const double scale_h = std::max(1.0, h.norm_bound());
    // f(H) = c0 + c1 H/s + c2 (H/s)^2 with coefficients in [-1, 1].
    const double c0 = 2.0 * gen.uniform() - 1.0;
    const double c1 = 2.0 * gen.uniform() - 1.0;
    const double c2 = 2.0 * gen.uniform() - 1.0;
    const SparseOperator hs = scale(Complex(1.0 / scale_h, 0.0), h);
    SparseOperator f_of_h = add(scale(Complex(c0, 0.0), SparseOperator::identity(h.dim())),
                                add(scale(Complex(c1, 0.0), hs), scale(Complex(c2, 0.0), mul(hs, hs))));
    SparseOperator psi = mul(model.supercharge.adjoint(), f_of_h).with_tag(OpParity::Fermionic);
    return exact_deformation(model, psi);
}

ClosureResult is_closed(const SparseOperator& op, const SusyModel& model, double tol) {
    if (op.dim() != model.dim()) throw std::invalid_argument("is_closed: dimension mismatch");
    const OpParity p = effective_parity(op, tol);
    const SparseOperator bracket = (p == OpParity::Bosonic) ? commutator(model.supercharge, op)
                                                            : anticommutator(model.supercharge, op);
    const double residual = bracket.max_abs();
    const double scale = std::max(1.0, model.supercharge.norm_bound() * op.norm_bound());
    return {residual <= tol * scale, residual};
}

// --------------------------------------------------------------------------
// Nilpotent conjugacy classes
// --------------------------------------------------------------------------

std::vector<NilpotentPartition> enumerate_partitions(Index m) {
    if (m < 2 || m % 2 != 0) throw std::invalid_argument("enumerate_partitions: M must be even and >= 2");
    std::vector<NilpotentPartition> out;
    out.reserve(static_cast<std::size_t>(m / 2));
    for (Index n2 = m / 2; n2 >= 1; --n2) out.push_back({n2, m - 2 * n2});
    return out;
}

SparseOperator nilpotent_from_partition(const NilpotentPartition& partition, const SparseOperator* conjugator) {
    if (partition.n_two < 1 || partition.n_one < 0) {
        throw std::invalid_argument("nilpotent_from_partition: invalid partition");
    }
    const Index m = partition.dim();
    std::vector<Eigen::Triplet<Complex>> t;
    t.reserve(static_cast<std::size_t>(partition.n_two));
    for (Index k = 0; k < partition.n_two; ++k) {
        t.emplace_back(2 * k, 2 * k + 1, Complex(1.0, 0.0));
    }
    SparseOperator jordan = SparseOperator::from_triplets(m, t, OpParity::Unknown);
    if (conjugator == nullptr) return jordan;

    if (conjugator->dim() != m) throw std::invalid_argument("nilpotent_from_partition: conjugator dimension mismatch");
    const DenseMat s = conjugator->dense();
    Eigen::JacobiSVD<DenseMat> svd(s);
    const double smin = svd.singularValues().minCoeff();
    const double smax = svd.singularValues().maxCoeff();
    if (smin <= 0.0 || smax / smin > 1e12) {
        std::ostringstream os;
        os << "nilpotent_from_partition: conjugator is singular or ill-conditioned (cond ~ "
           << (smin > 0.0 ? smax / smin : std::numeric_limits<double>::infinity()) << ")";
        throw std::invalid_argument(os.str());
    }
    DenseMat conj = s.partialPivLu().solve(jordan.dense() * s);
    return SparseOperator::from_dense(conj, OpParity::Unknown);
}

std::pair<bool, double> check_parity_anticommutation(const SparseOperator& q_candidate, double tol) {
    const int n = log2_exact(static_cast<std::uint64_t>(q_candidate.dim()));
    const double res = anticommutator(parity_operator(n), q_candidate).max_abs();
    const double scale = std::max(1.0, q_candidate.max_abs());
    return {res <= tol * scale, res};
}

SusyModel jordan_model(const NilpotentPartition& partition, const SparseOperator* conjugator) {
    const Index m = partition.dim();
    const int n = log2_exact(static_cast<std::uint64_t>(m));
    SusyModel model;
    model.n_modes = n;
    model.supercharge = nilpotent_from_partition(partition, conjugator).with_tag(OpParity::Fermionic);
    model.projector = SparseOperator::identity(m);
    model.labels["family"] = "jordan";
    model.labels["partition"] = std::to_string(partition.n_two) + "," + std::to_string(partition.n_one);
    return model;
}

NilpotentPartition partition_type(const SparseOperator& q, double rank_tol) {
    const Index m = q.dim();
    if (mul(q, q).max_abs() > rank_tol * std::max(1.0, q.norm_bound() * q.norm_bound())) {
        throw std::invalid_argument("partition_type: operator is not nilpotent of degree 2");
    }
    Eigen::JacobiSVD<DenseMat> svd(q.dense());
    const double cutoff = rank_tol * std::max(1.0, svd.singularValues().maxCoeff());
    Index rank = 0;
    for (Index i = 0; i < svd.singularValues().size(); ++i) {
        if (svd.singularValues()[i] > cutoff) ++rank;
    }
    return {rank, m - 2 * rank};
}

}  // namespace susyq
