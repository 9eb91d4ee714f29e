#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "susyq/fockalg.hpp"

namespace susyq {

// ---------------------------------------------------------------------------
// A supersymmetric model on N qubits: supercharge Q, Hilbert-space projector
// P, and free-form provenance labels (model family, graph, seed, ...).
// Construction does not enforce the algebra; validate() does.
// ---------------------------------------------------------------------------
struct SusyModel {
    int n_modes = 0;
    SparseOperator supercharge;  // Q, fermionic
    SparseOperator projector;    // P
    std::map<std::string, std::string> labels;

    Index dim() const { return Index(1) << n_modes; }
};

struct ValidationReport {
    double nilpotency_residual = 0.0;   // max |Q^2| / max(1, norm_bound(Q)^2)
    double parity_residual = 0.0;       // max |{(-1)^F, Q}|
    double projector_idempotency = 0.0; // max |P^2 - P|
    double projector_hermiticity = 0.0; // max |P - P†|
    double projector_compatibility = 0.0;  // max |[Q, P]|
    double tolerance = 1e-12;
    bool passed = false;

    double max_residual() const;
};

ValidationReport validate(const SusyModel& model, double tolerance = 1e-12);

// Throws ValidationError unless validate(model) passes.
void require_valid(const SusyModel& model, double tolerance = 1e-12);

// H = {Q, Q†}; Hermitian, PSD, bosonic. Rejects models failing validate().
SparseOperator hamiltonian(const SusyModel& model);

// E = {Q, psi} for fermionic psi. E is bosonic and closed by construction;
// the measured [Q, E] residual is reported alongside.
struct DeformationResult {
    SparseOperator op;
    double closure_residual = 0.0;
};
DeformationResult exact_deformation(const SusyModel& model, const SparseOperator& psi,
                                    double parity_tol = 1e-10);

// Deterministic-in-seed operator with exact fermionic parity, entries
// bounded by 1 (projection (A - (-1)^F A (-1)^F)/2 of a random sparse A).
SparseOperator random_fermionic(int n_modes, std::uint64_t seed);

// Random Hermitian exact deformation E = {Q, Q† f(H)} = H f(H) with a
// seeded low-degree polynomial f. Useful where the trace identities need a
// Hermitian representative of the trivial cohomology class.
DeformationResult random_hermitian_exact(const SusyModel& model, std::uint64_t seed);

// [Q, op] = 0 for bosonic op, {Q, op} = 0 for fermionic op.
struct ClosureResult {
    bool closed = false;
    double residual = 0.0;
};
ClosureResult is_closed(const SparseOperator& op, const SusyModel& model, double tol = 1e-10);

// ---------------------------------------------------------------------------
// Nilpotent conjugacy classes: partitions of M = 2^N with parts of size at
// most 2, written as (n_two, n_one) with 2*n_two + n_one = M.
// ---------------------------------------------------------------------------
struct NilpotentPartition {
    Index n_two = 0;
    Index n_one = 0;

    Index dim() const { return 2 * n_two + n_one; }
    bool operator==(const NilpotentPartition&) const = default;
};

// All nontrivial classes (n_two >= 1), ordered by decreasing n_two; M/2 of them.
std::vector<NilpotentPartition> enumerate_partitions(Index m);

// Jordan normal form Q~ for the partition: n_two blocks [[0,1],[0,0]] followed
// by n_one zero blocks; if a conjugator S is given, returns S^-1 Q~ S.
// S must be well conditioned (condition estimate <= 1e12).
SparseOperator nilpotent_from_partition(const NilpotentPartition& partition,
                                        const SparseOperator* conjugator = nullptr);

// Residual of {(-1)^F, Q}; the Jordan-form pipeline imposes this at the end.
std::pair<bool, double> check_parity_anticommutation(const SparseOperator& q_candidate,
                                                     double tol = 1e-10);

// SusyModel with Q from the partition (optionally conjugated) and P = I.
SusyModel jordan_model(const NilpotentPartition& partition, const SparseOperator* conjugator = nullptr);

// Partition type of a nilpotent degree-2 operator: n_two = rank(Q).
NilpotentPartition partition_type(const SparseOperator& q, double rank_tol = 1e-9);

}  // namespace susyq
