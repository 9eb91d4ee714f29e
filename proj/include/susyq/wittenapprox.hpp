#pragma once

#include <cstdint>
#include <optional>

#include "susyq/models.hpp"

namespace susyq {

// ---------------------------------------------------------------------------
// Additive approximation of the generalized Witten index Z_P[mu] of the
// hard-core model: the strict projector is relaxed to a penalty factor
// e^{-gamma H_Pen} and the resulting full-space trace is Monte-Carlo sampled.
// ---------------------------------------------------------------------------
struct ApproxConfig {
    double mu = 0.0;          // chemical potential, >= 0
    double epsilon = 0.1;     // additive accuracy, > 0
    double confidence = 0.9;  // in (1/2, 1)
    std::optional<double> gamma;              // defaults to log(2/epsilon)
    std::optional<SparseOperator> observable; // J; defaults to H
    std::optional<double> lambda;             // lower bound on spec(J); min eigenvalue if absent

    double resolved_gamma() const;
    void check() const;  // throws std::invalid_argument on bad ranges
};

// H_Pen = sum_i sum_{j ~ i} n_i n_j: diagonal, value 2 * (edges internal to s),
// zero exactly on independent sets. Q-closed but not Q-exact.
SparseOperator penalty_hamiltonian(const Graph& g);

// Per-basis-state summands <s|(-1)^F e^{mu J} e^{-gamma H_Pen}|s>, resolved
// J/gamma/lambda, and the Hoeffding range bound; shared by the exact and
// Monte-Carlo paths.
struct XiEvaluation {
    Eigen::VectorXcd summands;      // one entry per bit string
    double gamma = 0.0;
    double lambda = 0.0;            // lower bound on spec(J) actually used
    double range_bound = 0.0;       // max_s |summand| / e^{mu lambda}
    double ordering_residual = 0.0; // max |[J, H_Pen]|; nonzero means the written order matters
    Complex xi{0.0, 0.0};           // sum of summands
};
XiEvaluation evaluate_xi(const SusyModel& model, const ApproxConfig& config);

// xi(mu; gamma) = Tr over the full 2^N space of (-1)^F e^{mu J} e^{-gamma H_Pen}.
Complex xi(const SusyModel& model, const ApproxConfig& config);

// Residuals qualifying J as a supersymmetric observable, plus its spectral
// lower bound and the [J, H] residual.
struct ObservableCheck {
    double hermiticity_residual = 0.0;
    double closure_residual = 0.0;
    double hamiltonian_commutator_residual = 0.0;
    double lambda_min = 0.0;
};
ObservableCheck check_supersymmetric_observable(const SusyModel& model, const SparseOperator& j);

// Monte-Carlo estimate of Z_P[mu] / (2^N e^{mu lambda}). The default shot
// count comes from Hoeffding at half the error budget, so the estimate lands
// within epsilon of the normalized exact index with probability >= confidence.
struct EstimateResult {
    Complex z_hat{0.0, 0.0};
    std::uint64_t shots_used = 0;
    double achieved_halfwidth = 0.0;  // Hoeffding halfwidth at the used shot count
    double range_bound = 0.0;
    bool guarantee_met = false;       // false when a shots override undercuts the bound
    std::uint64_t required_shots = 0;
};
EstimateResult witten_additive_estimate(const SusyModel& model, const ApproxConfig& config,
                                        std::optional<std::uint64_t> shots, std::uint64_t seed);

// Exact gap |xi - Z_P[mu]| / (2^N e^{mu lambda}) against the epsilon/2 budget.
struct GapReport {
    Complex xi_value{0.0, 0.0};
    Complex z_exact{0.0, 0.0};
    double normalized_gap = 0.0;
    double budget = 0.0;  // epsilon / 2
    bool within_budget = false;
    double ordering_residual = 0.0;
    double lambda_used = 0.0;
    double gamma_used = 0.0;
};
GapReport approximation_gap_report(const SusyModel& model, const ApproxConfig& config);

}  // namespace susyq
