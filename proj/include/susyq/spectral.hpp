#pragma once

#include <string>
#include <vector>

#include "susyq/susycore.hpp"

namespace susyq {

// ---------------------------------------------------------------------------
// Exact diagonalization restricted to the projected space, with parity labels
// and the Witten index computed both from the zero-energy kernel and from
// Tr P (-1)^F (the two must agree).
// ---------------------------------------------------------------------------
struct SpectralReport {
    std::vector<double> eigenvalues;  // ascending
    std::vector<int> parities;        // +1 bosonic / -1 fermionic, same order
    int n_bosonic_ground = 0;
    int n_fermionic_ground = 0;
    long long witten_index = 0;       // n_B - n_F
    double tolerance = 1e-10;         // zero-energy threshold actually used
    double ground_annihilation_residual = 0.0;  // max |Q w|, |Q† w| over ground basis
    DenseMat ground_basis;            // full-space column vectors, definite parity
    std::vector<int> ground_parities;

    Index projected_dim() const { return static_cast<Index>(eigenvalues.size()); }
};

SpectralReport diagonalize(const SusyModel& model, double tolerance = 1e-10,
                           Index dense_cap = Index(1) << 12);

// Witten index from Tr[P (-1)^F]; throws NumericalIntegrityError if the trace
// is further than 1e-9 from an integer.
long long witten_index(const SusyModel& model);

struct Insertion {
    SparseOperator op;
    double time = 0.0;  // Euclidean tau for traces, Lorentzian t for correlators
};

// Tr[P (-1)^F O_1(tau_1) ... O_n(tau_n)] with O(tau) = e^{tau H} O e^{-tau H}.
// Operators are evaluated in the listed order; taus must be ascending and
// nonnegative. Insertions that are not Q-closed within closure_warn_tol add a
// note to `warnings` but do not fail.
Complex generalized_witten(const SusyModel& model, const std::vector<Insertion>& insertions,
                           std::vector<std::string>* warnings = nullptr,
                           double closure_warn_tol = 1e-8);

// |Z[O_k] - Z[O_k + {Q, Psi_k}]| per insertion.
struct DeformationInvarianceReport {
    std::vector<double> deviations;
    double scale = 1.0;
    double tolerance = 1e-8;
    bool passed = false;
};
DeformationInvarianceReport deformation_invariance_check(const SusyModel& model,
                                                         const std::vector<Insertion>& insertions,
                                                         const std::vector<SparseOperator>& psi_list,
                                                         double tolerance = 1e-8);

// <Omega| O_1(t_1) ... O_n(t_n) |Omega> per orthonormal ground state, with
// O(t) = e^{iHt} O e^{-iHt}. Throws if the ground space is empty.
struct CorrelatorResult {
    std::vector<Complex> per_ground_state;
    Complex average{0.0, 0.0};
};
CorrelatorResult ground_correlator(const SusyModel& model, const std::vector<Insertion>& insertions);

// True iff every eigenvalue cluster above `level_tol` carries equal bosonic
// and fermionic multiplicities.
bool spectral_pairing_ok(const SpectralReport& report, double level_tol = 1e-8);

}  // namespace susyq
