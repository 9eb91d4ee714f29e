#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "susyq/susycore.hpp"

namespace susyq {

enum class AncillaPart { Real, Imaginary };
enum class Normalization { FullSpace, Projected };

// ---------------------------------------------------------------------------
// Shot-sampling outcome tally for the ancilla qubit.
// ---------------------------------------------------------------------------
struct SampleRecord {
    std::uint64_t shots = 0;
    std::uint64_t zeros = 0;
    std::uint64_t seed = 0;
    double p0_hat = 0.0;
    double ci95_halfwidth = 0.0;  // 1.96 sqrt(p0_hat (1 - p0_hat) / shots)
    std::string mode;             // "hadamard" or "trace"

    static SampleRecord from_tally(std::uint64_t shots, std::uint64_t zeros, std::uint64_t seed,
                                   std::string mode);
};

// p(0) = 1/2 (1 + Re<s|op|s>) (or Im with the ancilla prepared differently).
// Exact mode accepts non-unitary ops: it evaluates the matrix element
// directly, which is what the deformed circuits U_S + E mean.
double hadamard_test_exact(const DenseVec& state, const SparseOperator& op,
                           AncillaPart part = AncillaPart::Real, double norm_tol = 1e-12);

// Simulates the ancilla circuit shot by shot; requires a genuine unitary.
SampleRecord hadamard_test_sample(const DenseVec& state, const SparseOperator& unitary,
                                  std::uint64_t shots, std::uint64_t seed,
                                  AncillaPart part = AncillaPart::Real, double unitarity_tol = 1e-8);

// p(0) = 1/2 (1 + Re Tr[P (-1)^F op] / D) with D = 2^N (FullSpace) or
// D = Tr P (Projected).
double trace_estimation_exact(const SusyModel& model, const SparseOperator& op, Normalization norm);
double trace_estimation_exact(int n_modes, const SparseOperator& op);  // P = I, full space

// One-clean-qubit sampling: per shot draw a register basis state uniformly
// (over the full space or over the projected basis), evaluate the exact
// ancilla probability for controlled-((-1)^F U), and flip the biased coin.
SampleRecord trace_estimation_sample(const SusyModel& model, const SparseOperator& unitary,
                                     std::uint64_t shots, std::uint64_t seed, Normalization norm,
                                     double unitarity_tol = 1e-8);
SampleRecord trace_estimation_sample(int n_modes, const SparseOperator& unitary, std::uint64_t shots,
                                     std::uint64_t seed, double unitarity_tol = 1e-8);

// ---------------------------------------------------------------------------
// Robustness of the two computation modes under U_S -> U_S + {Q, psi}.
// For the trace mode the per-basis-state outcome IS shifted; only the
// average over the maximally mixed register is invariant. The report carries
// both numbers.
// ---------------------------------------------------------------------------
enum class RobustnessMode { HadamardOnGround, Trace };

struct RobustnessReport {
    RobustnessMode mode = RobustnessMode::Trace;
    std::vector<double> p0_before;  // per ground state (hadamard) or single entry (trace)
    std::vector<double> p0_after;
    double max_deviation = 0.0;          // max |p0_after - p0_before|
    double per_state_max_deviation = 0.0;  // trace mode: max_s |1/2 Re <s|(-1)^F E|s>|
    double averaged_deviation = 0.0;       // trace mode: |1/2 Re Tr[P (-1)^F E]| / D
    double deformation_scale = 0.0;        // max |E|
};

RobustnessReport robustness_report(const SusyModel& model, const SparseOperator& u_s,
                                   const SparseOperator& psi, RobustnessMode mode,
                                   double closure_tol = 1e-8);

// ---------------------------------------------------------------------------
// Factor-removal identity: for U_hat closed under both supercharges and a
// bosonic exact E, compare Tr[P (-1)^F U_hat e^{i Re E}] with
// Tr[P (-1)^F U_hat]. Holds exactly when Re E = E (Hermitian exact
// deformations); the check reports both traces either way.
// ---------------------------------------------------------------------------
struct DropFactorReport {
    Complex trace_with_factor{0.0, 0.0};
    Complex trace_without_factor{0.0, 0.0};
    double deviation = 0.0;
    double scale = 1.0;
    double tolerance = 1e-8;
    bool passed = false;
};

DropFactorReport drop_exact_factor_check(const SusyModel& model, const SparseOperator& u_hat,
                                         const SparseOperator& exact_op, double tolerance = 1e-8);

double unitarity_residual(const SparseOperator& op);

}  // namespace susyq
