#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "susyq/errors.hpp"

namespace susyq {

using Complex = std::complex<double>;
using SparseMat = Eigen::SparseMatrix<Complex>;
using DenseMat = Eigen::MatrixXcd;
using DenseVec = Eigen::VectorXcd;
using Index = Eigen::Index;

// Relative threshold below which sparse entries are dropped after arithmetic.
inline constexpr double kPruneRel = 1e-14;
// Dense eigendecomposition fallback cap for matrix functions.
inline constexpr Index kDenseCap = Index(1) << 14;

// ---------------------------------------------------------------------------
// Fock/qubit basis states.
//
// Convention (used everywhere): mode 1 is the least significant bit, so the
// occupation string |n_1 ... n_N> maps to index sum_i n_i 2^(i-1). The
// Jordan-Wigner string of mode i runs over modes j < i.
// ---------------------------------------------------------------------------
struct BasisState {
    std::uint64_t index = 0;
    int n_modes = 0;

    static BasisState from_index(std::uint64_t index, int n_modes);
    static BasisState from_bits(const std::vector<int>& bits);

    // Occupation of mode i (1-based).
    int bit(int mode) const { return static_cast<int>((index >> (mode - 1)) & 1u); }
    std::vector<int> bits() const;
    int occupation() const;          // number of 1-bits
    int parity() const;              // (-1)^occupation
};

enum class OpParity { Bosonic, Fermionic, Mixed, Unknown };

const char* to_string(OpParity p);

// ---------------------------------------------------------------------------
// Sparse complex operator on the 2^N bit-string basis. Immutable after
// construction; arithmetic returns new values. Entries below
// kPruneRel * max|entry| are dropped so algebraic cancellations (nilpotency,
// anticommutators) come out as genuinely empty matrices.
// ---------------------------------------------------------------------------
class SparseOperator {
public:
    SparseOperator() = default;
    explicit SparseOperator(SparseMat mat, OpParity tag = OpParity::Unknown);

    static SparseOperator zero(Index dim, OpParity tag = OpParity::Bosonic);
    static SparseOperator identity(Index dim);
    static SparseOperator from_triplets(Index dim, const std::vector<Eigen::Triplet<Complex>>& entries,
                                        OpParity tag = OpParity::Unknown);
    static SparseOperator from_dense(const DenseMat& dense, OpParity tag = OpParity::Unknown,
                                     double prune_rel = kPruneRel);
    static SparseOperator diagonal(const Eigen::VectorXcd& diag, OpParity tag = OpParity::Unknown);

    Index dim() const { return mat_.rows(); }
    Index nonzeros() const { return mat_.nonZeros(); }
    const SparseMat& matrix() const { return mat_; }
    DenseMat dense() const { return DenseMat(mat_); }

    OpParity parity_tag() const { return tag_; }
    SparseOperator with_tag(OpParity tag) const;

    SparseOperator adjoint() const;
    Complex trace() const;
    Eigen::VectorXcd diagonal_vector() const;
    bool is_diagonal() const;
    bool is_zero() const { return mat_.nonZeros() == 0; }

    double max_abs() const;                 // max |entry|
    double hermiticity_residual() const;    // max |A - A†|
    // Upper bound on the spectral norm: sqrt(max abs row sum * max abs col sum).
    double norm_bound() const;

    Complex entry(Index row, Index col) const;
    std::vector<Eigen::Triplet<Complex>> triplets() const;

    SparseOperator pruned(double rel = kPruneRel) const;

private:
    SparseMat mat_;
    OpParity tag_ = OpParity::Unknown;
};

// Sparse arithmetic. Dimension mismatch throws std::invalid_argument.
SparseOperator add(const SparseOperator& a, const SparseOperator& b);
SparseOperator sub(const SparseOperator& a, const SparseOperator& b);
SparseOperator scale(Complex c, const SparseOperator& a);
SparseOperator mul(const SparseOperator& a, const SparseOperator& b);
SparseOperator commutator(const SparseOperator& a, const SparseOperator& b);
SparseOperator anticommutator(const SparseOperator& a, const SparseOperator& b);
double operator_norm_bound(const SparseOperator& a);

inline SparseOperator operator+(const SparseOperator& a, const SparseOperator& b) { return add(a, b); }
inline SparseOperator operator-(const SparseOperator& a, const SparseOperator& b) { return sub(a, b); }
inline SparseOperator operator*(const SparseOperator& a, const SparseOperator& b) { return mul(a, b); }
inline SparseOperator operator*(Complex c, const SparseOperator& a) { return scale(c, a); }
inline SparseOperator operator*(double c, const SparseOperator& a) { return scale(Complex(c, 0.0), a); }

// Residual of the parity relation (-1)^F A (-1)^F = ±A; 0 means exact.
double parity_relation_residual(const SparseOperator& a, OpParity which);
// Numerically classify an operator as bosonic/fermionic/mixed.
OpParity measured_parity(const SparseOperator& a, double tol = 1e-10);
// Tag if definite, else measure; throws std::invalid_argument on Mixed.
OpParity effective_parity(const SparseOperator& a, double tol = 1e-10);

// ---------------------------------------------------------------------------
// Jordan-Wigner operator builders (mode 1 = least significant bit; string
// over modes j < i).
// ---------------------------------------------------------------------------
SparseOperator jw_annihilation(int mode, int n_modes);
SparseOperator jw_creation(int mode, int n_modes);
SparseOperator parity_operator(int n_modes);
SparseOperator number_operator(int mode, int n_modes);

// ---------------------------------------------------------------------------
// exp(c*A) for Hermitian A, via dense eigendecomposition (diagonal matrices
// are exponentiated entrywise). Throws ValidationError if A is not Hermitian
// within herm_tol, NumericalIntegrityError above the dense cap.
// ---------------------------------------------------------------------------
SparseOperator hermitian_exp(const SparseOperator& a, Complex c, double herm_tol = 1e-10,
                             Index dense_cap = kDenseCap);

// Eigenvalues of a Hermitian operator, ascending (dense path, same cap).
Eigen::VectorXd hermitian_eigenvalues(const SparseOperator& a, double herm_tol = 1e-10,
                                      Index dense_cap = kDenseCap);

bool is_power_of_two(std::uint64_t x);
int log2_exact(std::uint64_t x);  // throws std::invalid_argument unless power of two

}  // namespace susyq
