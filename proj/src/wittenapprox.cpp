#include "susyq/wittenapprox.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

#include "susyq/rng.hpp"
#include "susyq/spectral.hpp"

namespace susyq {

double ApproxConfig::resolved_gamma() const { return gamma.value_or(std::log(2.0 / epsilon)); }

void ApproxConfig::check() const {
    if (mu < 0.0) throw std::invalid_argument("ApproxConfig: mu must be >= 0");
    if (epsilon <= 0.0) throw std::invalid_argument("ApproxConfig: epsilon must be > 0");
    if (confidence <= 0.5 || confidence >= 1.0) {
        throw std::invalid_argument("ApproxConfig: confidence must lie in (1/2, 1)");
    }
    if (resolved_gamma() <= 0.0) throw std::invalid_argument("ApproxConfig: gamma must be > 0");
}

SparseOperator penalty_hamiltonian(const Graph& g) {
    const int n = g.n_vertices;
    const std::uint64_t dim = std::uint64_t(1) << n;
    const auto adj = g.adjacency_masks();
    Eigen::VectorXcd d = Eigen::VectorXcd::Zero(static_cast<Index>(dim));
    for (std::uint64_t s = 0; s < dim; ++s) {
        int violations = 0;
        for (int i = 1; i <= n; ++i) {
            const std::uint64_t bit = std::uint64_t(1) << (i - 1);
            if (s & bit) violations += std::popcount(s & adj[static_cast<std::size_t>(i - 1)]);
        }
        // The double sum counts each occupied edge from both endpoints.
        if (violations > 0) d[static_cast<Index>(s)] = Complex(static_cast<double>(violations), 0.0);
    }
    return SparseOperator::diagonal(d, OpParity::Bosonic);
}

ObservableCheck check_supersymmetric_observable(const SusyModel& model, const SparseOperator& j) {
    if (j.dim() != model.dim()) throw std::invalid_argument("check_supersymmetric_observable: dimension mismatch");
    ObservableCheck out;
    out.hermiticity_residual = j.hermiticity_residual();
    out.closure_residual = commutator(model.supercharge, j).max_abs();
    out.hamiltonian_commutator_residual = commutator(hamiltonian(model), j).max_abs();
    const Eigen::VectorXd ev = hermitian_eigenvalues(j, 1e-8);
    out.lambda_min = (ev.size() > 0) ? ev.minCoeff() : 0.0;
    return out;
}

XiEvaluation evaluate_xi(const SusyModel& model, const ApproxConfig& config) {
    config.check();
    require_valid(model);
    const Graph g = graph_from_labels(model);
    if (g.n_vertices != model.n_modes) {
        throw std::invalid_argument("evaluate_xi: graph label does not match the model's mode count");
    }
    const SparseOperator h_pen = penalty_hamiltonian(g);

    const SparseOperator j = config.observable ? *config.observable : hamiltonian(model);
    const ObservableCheck jc = check_supersymmetric_observable(model, j);
    if (jc.hermiticity_residual > 1e-10) {
        throw std::invalid_argument("evaluate_xi: J is not Hermitian (residual " +
                                    std::to_string(jc.hermiticity_residual) + ")");
    }
    if (jc.closure_residual > 1e-8) {
        throw std::invalid_argument("evaluate_xi: J is not supersymmetric ([Q, J] residual " +
                                    std::to_string(jc.closure_residual) + ")");
    }

    XiEvaluation out;
    out.gamma = config.resolved_gamma();
    out.lambda = config.lambda.value_or(jc.lambda_min);
    out.ordering_residual = commutator(j, h_pen).max_abs();

    const SparseOperator f = parity_operator(model.n_modes);
    const SparseOperator suppress = hermitian_exp(h_pen, Complex(-out.gamma, 0.0));
    SparseOperator product;
    if (config.mu == 0.0) {
        product = mul(f, suppress);
    } else {
        const SparseOperator boost = hermitian_exp(j, Complex(config.mu, 0.0));
        product = mul(f, mul(boost, suppress));
    }

    out.summands = product.diagonal_vector();
    out.xi = out.summands.sum();
    const double denom = std::exp(config.mu * out.lambda);
    double max_abs = 0.0;
    for (Index s = 0; s < out.summands.size(); ++s) max_abs = std::max(max_abs, std::abs(out.summands[s]));
    out.range_bound = max_abs / denom;
    return out;
}

Complex xi(const SusyModel& model, const ApproxConfig& config) { return evaluate_xi(model, config).xi; }

EstimateResult witten_additive_estimate(const SusyModel& model, const ApproxConfig& config,
                                        std::optional<std::uint64_t> shots, std::uint64_t seed) {
    const XiEvaluation ev = evaluate_xi(model, config);
    const double denom = std::exp(config.mu * ev.lambda);
    const std::uint64_t dim = std::uint64_t(1) << model.n_modes;

    // Hoeffding at half the error budget: n >= 2 R^2 ln(2/(1-c)) / (eps/2)^2.
    const double log_term = std::log(2.0 / (1.0 - config.confidence));
    const double half_budget = config.epsilon / 2.0;
    const double required_real = (ev.range_bound > 0.0)
                                     ? 2.0 * ev.range_bound * ev.range_bound * log_term / (half_budget * half_budget)
                                     : 1.0;
    const std::uint64_t required = static_cast<std::uint64_t>(std::ceil(required_real));

    EstimateResult result;
    result.required_shots = required;
    result.range_bound = ev.range_bound;
    result.shots_used = shots.value_or(required);
    if (result.shots_used == 0) throw std::invalid_argument("witten_additive_estimate: shots must be positive");
    result.guarantee_met = result.shots_used >= required;
    result.achieved_halfwidth =
        ev.range_bound * std::sqrt(2.0 * log_term / static_cast<double>(result.shots_used));

    Complex acc(0.0, 0.0);
    for (std::uint64_t k = 0; k < result.shots_used; ++k) {
        const std::uint64_t s = rng_draw(seed, k) % dim;
        acc += ev.summands[static_cast<Index>(s)] / denom;
    }
    result.z_hat = acc / static_cast<double>(result.shots_used);
    return result;
}

GapReport approximation_gap_report(const SusyModel& model, const ApproxConfig& config) {
    const XiEvaluation ev = evaluate_xi(model, config);

    const SparseOperator j = config.observable ? *config.observable : hamiltonian(model);
    const SparseOperator f = parity_operator(model.n_modes);
    SparseOperator weighted;
    if (config.mu == 0.0) {
        weighted = f;
    } else {
        weighted = mul(f, hermitian_exp(j, Complex(config.mu, 0.0)));
    }
    const Complex z_exact = mul(model.projector, weighted).trace();

    GapReport report;
    report.xi_value = ev.xi;
    report.z_exact = z_exact;
    report.gamma_used = ev.gamma;
    report.lambda_used = ev.lambda;
    report.ordering_residual = ev.ordering_residual;
    const double denom = static_cast<double>(model.dim()) * std::exp(config.mu * ev.lambda);
    report.normalized_gap = std::abs(ev.xi - z_exact) / denom;
    report.budget = config.epsilon / 2.0;
    report.within_budget = report.normalized_gap <= report.budget;
    return report;
}

}  // namespace susyq
