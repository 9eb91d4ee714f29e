#include "susyq/circuits.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "susyq/rng.hpp"
#include "susyq/spectral.hpp"

namespace susyq {

namespace {

void require_unitary(const SparseOperator& op, double tol, const char* what) {
    const double res = unitarity_residual(op);
    if (res > tol) {
        std::ostringstream os;
        os << what << ": operator is not unitary (max |U†U - I| = " << res
           << "); shot sampling simulates a physical circuit and needs one";
        throw std::invalid_argument(os.str());
    }
}

Complex expectation(const DenseVec& state, const SparseOperator& op) {
    return state.dot(op.matrix() * state);
}

double p0_from(Complex amplitude, AncillaPart part) {
    const double x = (part == AncillaPart::Real) ? amplitude.real() : amplitude.imag();
    return 0.5 * (1.0 + x);
}

// Clamp guards against 1-2 ulp excursions outside [0,1] for exactly
// deterministic outcomes; anything larger is a caller error.
double as_probability(double p, const char* what) {
    if (p < -1e-9 || p > 1.0 + 1e-9) {
        std::ostringstream os;
        os << what << ": outcome probability " << p << " outside [0, 1]; operator is not a contraction";
        throw std::invalid_argument(os.str());
    }
    return std::clamp(p, 0.0, 1.0);
}

std::vector<Index> projected_basis_states(const SusyModel& model) {
    if (!model.projector.is_diagonal()) {
        throw std::invalid_argument("projected sampling requires a diagonal projector");
    }
    const Eigen::VectorXcd d = model.projector.diagonal_vector();
    std::vector<Index> states;
    for (Index s = 0; s < d.size(); ++s) {
        if (std::abs(d[s] - Complex(1.0, 0.0)) <= 1e-10) states.push_back(s);
    }
    return states;
}

}  // namespace

double unitarity_residual(const SparseOperator& op) {
    return sub(mul(op.adjoint(), op), SparseOperator::identity(op.dim())).max_abs();
}

SampleRecord SampleRecord::from_tally(std::uint64_t shots, std::uint64_t zeros, std::uint64_t seed,
                                      std::string mode) {
    SampleRecord r;
    r.shots = shots;
    r.zeros = zeros;
    r.seed = seed;
    r.mode = std::move(mode);
    r.p0_hat = (shots > 0) ? static_cast<double>(zeros) / static_cast<double>(shots) : 0.0;
    r.ci95_halfwidth = (shots > 0) ? 1.96 * std::sqrt(r.p0_hat * (1.0 - r.p0_hat) / static_cast<double>(shots))
                                   : 0.0;
    return r;
}

double hadamard_test_exact(const DenseVec& state, const SparseOperator& op, AncillaPart part,
                           double norm_tol) {
    if (state.size() != op.dim()) throw std::invalid_argument("hadamard_test_exact: dimension mismatch");
    if (std::abs(state.norm() - 1.0) > norm_tol) {
        throw std::invalid_argument("hadamard_test_exact: state is not normalized");
    }
    return p0_from(expectation(state, op), part);
}

SampleRecord hadamard_test_sample(const DenseVec& state, const SparseOperator& unitary,
                                  std::uint64_t shots, std::uint64_t seed, AncillaPart part,
                                  double unitarity_tol) {
    if (shots == 0) throw std::invalid_argument("hadamard_test_sample: shots must be positive");
    require_unitary(unitary, unitarity_tol, "hadamard_test_sample");
    const double p0 = as_probability(hadamard_test_exact(state, unitary, part), "hadamard_test_sample");
    std::uint64_t zeros = 0;
    for (std::uint64_t k = 0; k < shots; ++k) {
        if (rng_uniform(seed, k) < p0) ++zeros;
    }
    return SampleRecord::from_tally(shots, zeros, seed, "hadamard");
}

double trace_estimation_exact(const SusyModel& model, const SparseOperator& op, Normalization norm) {
    if (op.dim() != model.dim()) throw std::invalid_argument("trace_estimation_exact: dimension mismatch");
    const SparseOperator f = parity_operator(model.n_modes);
    const Complex tr = mul(model.projector, mul(f, op)).trace();
    double d = 0.0;
    if (norm == Normalization::FullSpace) {
        d = static_cast<double>(model.dim());
    } else {
        d = model.projector.trace().real();
        if (d <= 0.0) throw std::invalid_argument("trace_estimation_exact: projected space is empty");
    }
    return 0.5 * (1.0 + tr.real() / d);
}

double trace_estimation_exact(int n_modes, const SparseOperator& op) {
    SusyModel trivial;
    trivial.n_modes = n_modes;
    trivial.supercharge = SparseOperator::zero(Index(1) << n_modes, OpParity::Fermionic);
    trivial.projector = SparseOperator::identity(Index(1) << n_modes);
    return trace_estimation_exact(trivial, op, Normalization::FullSpace);
}

namespace {

SampleRecord trace_sample_impl(const SusyModel& model, const SparseOperator& unitary, std::uint64_t shots,
                               std::uint64_t seed, Normalization norm, double unitarity_tol) {
    if (shots == 0) throw std::invalid_argument("trace_estimation_sample: shots must be positive");
    require_unitary(unitary, unitarity_tol, "trace_estimation_sample");
    const SparseOperator f = parity_operator(model.n_modes);
    const SparseOperator controlled = mul(f, unitary);

    std::vector<Index> pool;
    if (norm == Normalization::Projected) {
        pool = projected_basis_states(model);
        if (pool.empty()) throw std::invalid_argument("trace_estimation_sample: projected space is empty");
    }
    const std::uint64_t pool_size =
        (norm == Normalization::Projected) ? pool.size() : static_cast<std::uint64_t>(model.dim());

    // Two independent draws per shot: register state and ancilla coin.
    std::uint64_t zeros = 0;
    for (std::uint64_t k = 0; k < shots; ++k) {
        const std::uint64_t pick = rng_draw(seed, 2 * k) % pool_size;
        const Index s = (norm == Normalization::Projected) ? pool[static_cast<std::size_t>(pick)]
                                                           : static_cast<Index>(pick);
        const double p0 = as_probability(0.5 * (1.0 + controlled.entry(s, s).real()),
                                         "trace_estimation_sample");
        if (rng_uniform(seed, 2 * k + 1) < p0) ++zeros;
    }
    return SampleRecord::from_tally(shots, zeros, seed, "trace");
}

}  // namespace

SampleRecord trace_estimation_sample(const SusyModel& model, const SparseOperator& unitary,
                                     std::uint64_t shots, std::uint64_t seed, Normalization norm,
                                     double unitarity_tol) {
    return trace_sample_impl(model, unitary, shots, seed, norm, unitarity_tol);
}

SampleRecord trace_estimation_sample(int n_modes, const SparseOperator& unitary, std::uint64_t shots,
                                     std::uint64_t seed, double unitarity_tol) {
    SusyModel trivial;
    trivial.n_modes = n_modes;
    trivial.supercharge = SparseOperator::zero(Index(1) << n_modes, OpParity::Fermionic);
    trivial.projector = SparseOperator::identity(Index(1) << n_modes);
    return trace_sample_impl(trivial, unitary, shots, seed, Normalization::FullSpace, unitarity_tol);
}

RobustnessReport robustness_report(const SusyModel& model, const SparseOperator& u_s,
                                   const SparseOperator& psi, RobustnessMode mode, double closure_tol) {
    const ClosureResult closure = is_closed(u_s.with_tag(OpParity::Bosonic), model, closure_tol);
    if (!closure.closed) {
        std::ostringstream os;
        os << "robustness_report: U_S is not supersymmetric ([Q, U_S] residual " << closure.residual << ")";
        throw std::invalid_argument(os.str());
    }
    const DeformationResult def = exact_deformation(model, psi);
    const SparseOperator deformed = add(u_s, def.op);

    RobustnessReport report;
    report.mode = mode;
    report.deformation_scale = def.op.max_abs();

    if (mode == RobustnessMode::HadamardOnGround) {
        const SpectralReport spec = diagonalize(model);
        if (spec.ground_basis.cols() == 0) {
            throw std::domain_error("robustness_report: model has no supersymmetric ground states");
        }
        for (Index k = 0; k < spec.ground_basis.cols(); ++k) {
            const DenseVec w = spec.ground_basis.col(k);
            report.p0_before.push_back(hadamard_test_exact(w, u_s));
            report.p0_after.push_back(hadamard_test_exact(w, deformed));
        }
    } else {
        report.p0_before.push_back(trace_estimation_exact(model, u_s, Normalization::Projected));
        report.p0_after.push_back(trace_estimation_exact(model, deformed, Normalization::Projected));

        // The caveat: per-register-state outcomes are shifted even though the
        // averaged outcome is not.
        const SparseOperator f = parity_operator(model.n_modes);
        const SparseOperator fe = mul(f, def.op);
        const std::vector<Index> pool = projected_basis_states(model);
        double per_state = 0.0;
        for (Index s : pool) per_state = std::max(per_state, std::abs(0.5 * fe.entry(s, s).real()));
        report.per_state_max_deviation = per_state;
        Complex avg(0.0, 0.0);
        for (Index s : pool) avg += fe.entry(s, s);
        report.averaged_deviation = std::abs(0.5 * avg.real()) / static_cast<double>(pool.size());
    }

    for (std::size_t k = 0; k < report.p0_before.size(); ++k) {
        report.max_deviation = std::max(report.max_deviation, std::abs(report.p0_after[k] - report.p0_before[k]));
    }
    return report;
}

DropFactorReport drop_exact_factor_check(const SusyModel& model, const SparseOperator& u_hat,
                                         const SparseOperator& exact_op, double tolerance) {
    const SparseOperator& q = model.supercharge;
    const double res_q = commutator(q, u_hat).max_abs();
    const double res_qd = commutator(q.adjoint(), u_hat).max_abs();
    const double scale_u = std::max(1.0, q.norm_bound() * u_hat.norm_bound());
    if (res_q > tolerance * scale_u || res_qd > tolerance * scale_u) {
        std::ostringstream os;
        os << "drop_exact_factor_check: U_hat must be closed under both supercharges; residuals [Q, U] = "
           << res_q << ", [Q†, U] = " << res_qd;
        if (res_q > tolerance * scale_u && res_qd <= tolerance * scale_u) os << " (Q side fails)";
        if (res_qd > tolerance * scale_u && res_q <= tolerance * scale_u) os << " (Q† side fails)";
        throw std::invalid_argument(os.str());
    }
    const double e_parity = parity_relation_residual(exact_op, OpParity::Bosonic);
    if (e_parity > 1e-10 * std::max(1.0, exact_op.max_abs())) {
        throw std::invalid_argument("drop_exact_factor_check: E must be bosonic");
    }

    const SparseOperator re_e =
        scale(Complex(0.5, 0.0), add(exact_op, exact_op.adjoint())).with_tag(OpParity::Bosonic);
    const SparseOperator u_e = hermitian_exp(re_e, Complex(0.0, 1.0));

    const SparseOperator f = parity_operator(model.n_modes);
    const SparseOperator base = mul(model.projector, mul(f, u_hat));

    DropFactorReport report;
    report.tolerance = tolerance;
    report.trace_without_factor = base.trace();
    report.trace_with_factor = mul(base, u_e).trace();
    report.deviation = std::abs(report.trace_with_factor - report.trace_without_factor);
    report.scale = std::max(1.0, std::abs(report.trace_without_factor));
    report.passed = report.deviation <= tolerance * report.scale;
    return report;
}

}  // namespace susyq
