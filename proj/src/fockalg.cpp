#include "susyq/fockalg.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace susyq {

namespace {

void require_same_dim(const SparseOperator& a, const SparseOperator& b, const char* what) {
    if (a.dim() != b.dim()) {
        std::ostringstream os;
        os << what << ": dimension mismatch (" << a.dim() << " vs " << b.dim() << ")";
        throw std::invalid_argument(os.str());
    }
}

OpParity combine_add(OpParity a, OpParity b) {
    if (a == OpParity::Unknown || b == OpParity::Unknown) return OpParity::Unknown;
    if (a == b) return a;
    return OpParity::Mixed;
}

OpParity combine_mul(OpParity a, OpParity b) {
    if (a == OpParity::Unknown || b == OpParity::Unknown) return OpParity::Unknown;
    if (a == OpParity::Mixed || b == OpParity::Mixed) return OpParity::Mixed;
    if (a == b) return OpParity::Bosonic;
    return OpParity::Fermionic;
}

}  // namespace

const char* to_string(OpParity p) {
    switch (p) {
        case OpParity::Bosonic: return "bosonic";
        case OpParity::Fermionic: return "fermionic";
        case OpParity::Mixed: return "mixed";
        case OpParity::Unknown: return "unknown";
    }
    return "unknown";
}

// --------------------------------------------------------------------------
// BasisState
// --------------------------------------------------------------------------

BasisState BasisState::from_index(std::uint64_t index, int n_modes) {
    if (n_modes < 0 || n_modes > 62) throw std::invalid_argument("BasisState: mode count out of range");
    if (index >= (std::uint64_t(1) << n_modes)) throw std::invalid_argument("BasisState: index out of range");
    return BasisState{index, n_modes};
}

BasisState BasisState::from_bits(const std::vector<int>& bits) {
    std::uint64_t index = 0;
    for (std::size_t i = 0; i < bits.size(); ++i) {
        if (bits[i] != 0 && bits[i] != 1) throw std::invalid_argument("BasisState: bits must be 0/1");
        index |= std::uint64_t(bits[i]) << i;
    }
    return BasisState{index, static_cast<int>(bits.size())};
}

std::vector<int> BasisState::bits() const {
    std::vector<int> out(static_cast<std::size_t>(n_modes));
    for (int i = 1; i <= n_modes; ++i) out[static_cast<std::size_t>(i - 1)] = bit(i);
    return out;
}

int BasisState::occupation() const { return std::popcount(index); }

int BasisState::parity() const { return (occupation() % 2 == 0) ? 1 : -1; }

// --------------------------------------------------------------------------
// SparseOperator
// --------------------------------------------------------------------------

// Eigen 3.4 sparse matrices have no real move constructor; swap instead.
SparseOperator::SparseOperator(SparseMat mat, OpParity tag) : tag_(tag) {
    if (mat.rows() != mat.cols()) throw std::invalid_argument("SparseOperator: matrix must be square");
    mat_.swap(mat);
    mat_.makeCompressed();
}

SparseOperator SparseOperator::zero(Index dim, OpParity tag) {
    return SparseOperator(SparseMat(dim, dim), tag);
}

SparseOperator SparseOperator::identity(Index dim) {
    SparseMat m(dim, dim);
    m.setIdentity();
    return SparseOperator(std::move(m), OpParity::Bosonic);
}

SparseOperator SparseOperator::from_triplets(Index dim, const std::vector<Eigen::Triplet<Complex>>& entries,
                                             OpParity tag) {
    SparseMat m(dim, dim);
    m.setFromTriplets(entries.begin(), entries.end());
    return SparseOperator(std::move(m), tag).pruned(0.0);
}

SparseOperator SparseOperator::from_dense(const DenseMat& dense, OpParity tag, double prune_rel) {
    const double cutoff = prune_rel * dense.cwiseAbs().maxCoeff();
    SparseMat m = dense.sparseView(1.0, cutoff);  // keeps |x| > cutoff
    return SparseOperator(std::move(m), tag);
}

SparseOperator SparseOperator::diagonal(const Eigen::VectorXcd& diag, OpParity tag) {
    std::vector<Eigen::Triplet<Complex>> t;
    t.reserve(static_cast<std::size_t>(diag.size()));
    for (Index i = 0; i < diag.size(); ++i) {
        if (diag[i] != Complex(0.0, 0.0)) t.emplace_back(i, i, diag[i]);
    }
    return from_triplets(diag.size(), t, tag);
}

SparseOperator SparseOperator::with_tag(OpParity tag) const {
    SparseOperator out = *this;
    out.tag_ = tag;
    return out;
}

SparseOperator SparseOperator::adjoint() const {
    SparseMat m = mat_.adjoint();
    return SparseOperator(std::move(m), tag_);
}

Complex SparseOperator::trace() const {
    Complex t(0.0, 0.0);
    for (Index k = 0; k < mat_.outerSize(); ++k) {
        for (SparseMat::InnerIterator it(mat_, k); it; ++it) {
            if (it.row() == it.col()) t += it.value();
        }
    }
    return t;
}

Eigen::VectorXcd SparseOperator::diagonal_vector() const {
    Eigen::VectorXcd d = Eigen::VectorXcd::Zero(dim());
    for (Index k = 0; k < mat_.outerSize(); ++k) {
        for (SparseMat::InnerIterator it(mat_, k); it; ++it) {
            if (it.row() == it.col()) d[it.row()] = it.value();
        }
    }
    return d;
}

bool SparseOperator::is_diagonal() const {
    for (Index k = 0; k < mat_.outerSize(); ++k) {
        for (SparseMat::InnerIterator it(mat_, k); it; ++it) {
            if (it.row() != it.col()) return false;
        }
    }
    return true;
}

double SparseOperator::max_abs() const {
    double m = 0.0;
    for (Index k = 0; k < mat_.outerSize(); ++k) {
        for (SparseMat::InnerIterator it(mat_, k); it; ++it) {
            m = std::max(m, std::abs(it.value()));
        }
    }
    return m;
}

double SparseOperator::hermiticity_residual() const {
    return sub(*this, adjoint()).max_abs();
}

double SparseOperator::norm_bound() const {
    Eigen::VectorXd row_sums = Eigen::VectorXd::Zero(dim());
    Eigen::VectorXd col_sums = Eigen::VectorXd::Zero(dim());
    for (Index k = 0; k < mat_.outerSize(); ++k) {
        for (SparseMat::InnerIterator it(mat_, k); it; ++it) {
            const double a = std::abs(it.value());
            row_sums[it.row()] += a;
            col_sums[it.col()] += a;
        }
    }
    if (dim() == 0) return 0.0;
    return std::sqrt(row_sums.maxCoeff() * col_sums.maxCoeff());
}

Complex SparseOperator::entry(Index row, Index col) const { return mat_.coeff(row, col); }

std::vector<Eigen::Triplet<Complex>> SparseOperator::triplets() const {
    std::vector<Eigen::Triplet<Complex>> out;
    out.reserve(static_cast<std::size_t>(mat_.nonZeros()));
    for (Index k = 0; k < mat_.outerSize(); ++k) {
        for (SparseMat::InnerIterator it(mat_, k); it; ++it) {
            out.emplace_back(it.row(), it.col(), it.value());
        }
    }
    return out;
}

SparseOperator SparseOperator::pruned(double rel) const {
    const double cutoff = rel * max_abs();
    SparseMat m = mat_;
    m.prune([cutoff](Index, Index, const Complex& v) { return std::abs(v) > cutoff; });
    m.makeCompressed();
    return SparseOperator(std::move(m), tag_);
}

// --------------------------------------------------------------------------
// Arithmetic
// --------------------------------------------------------------------------

SparseOperator add(const SparseOperator& a, const SparseOperator& b) {
    require_same_dim(a, b, "add");
    SparseMat m = a.matrix() + b.matrix();
    return SparseOperator(std::move(m), combine_add(a.parity_tag(), b.parity_tag())).pruned();
}

SparseOperator sub(const SparseOperator& a, const SparseOperator& b) {
    require_same_dim(a, b, "sub");
    SparseMat m = a.matrix() - b.matrix();
    return SparseOperator(std::move(m), combine_add(a.parity_tag(), b.parity_tag())).pruned();
}

SparseOperator scale(Complex c, const SparseOperator& a) {
    SparseMat m = a.matrix() * c;
    return SparseOperator(std::move(m), a.parity_tag()).pruned();
}

SparseOperator mul(const SparseOperator& a, const SparseOperator& b) {
    require_same_dim(a, b, "mul");
    SparseMat m = a.matrix() * b.matrix();
    return SparseOperator(std::move(m), combine_mul(a.parity_tag(), b.parity_tag())).pruned();
}

SparseOperator commutator(const SparseOperator& a, const SparseOperator& b) {
    require_same_dim(a, b, "commutator");
    SparseMat m = a.matrix() * b.matrix() - b.matrix() * a.matrix();
    return SparseOperator(std::move(m), combine_mul(a.parity_tag(), b.parity_tag())).pruned();
}

SparseOperator anticommutator(const SparseOperator& a, const SparseOperator& b) {
    require_same_dim(a, b, "anticommutator");
    SparseMat m = a.matrix() * b.matrix() + b.matrix() * a.matrix();
    return SparseOperator(std::move(m), combine_mul(a.parity_tag(), b.parity_tag())).pruned();
}

double operator_norm_bound(const SparseOperator& a) { return a.norm_bound(); }

// --------------------------------------------------------------------------
// Parity classification
// --------------------------------------------------------------------------

double parity_relation_residual(const SparseOperator& a, OpParity which) {
    if (which != OpParity::Bosonic && which != OpParity::Fermionic) {
        throw std::invalid_argument("parity_relation_residual: which must be bosonic or fermionic");
    }
    const int n = log2_exact(static_cast<std::uint64_t>(a.dim()));
    const SparseOperator f = parity_operator(n);
    const SparseOperator conj = mul(f, mul(a, f));
    return (which == OpParity::Bosonic) ? sub(conj, a).max_abs() : add(conj, a).max_abs();
}

OpParity measured_parity(const SparseOperator& a, double tol) {
    const double scale = std::max(1.0, a.max_abs());
    const double b = parity_relation_residual(a, OpParity::Bosonic);
    if (b <= tol * scale) return OpParity::Bosonic;
    const double f = parity_relation_residual(a, OpParity::Fermionic);
    if (f <= tol * scale) return OpParity::Fermionic;
    return OpParity::Mixed;
}

OpParity effective_parity(const SparseOperator& a, double tol) {
    OpParity p = a.parity_tag();
    if (p == OpParity::Unknown || p == OpParity::Mixed) p = measured_parity(a, tol);
    if (p == OpParity::Mixed) {
        throw std::invalid_argument("operator has no definite parity (mixed under (-1)^F conjugation)");
    }
    return p;
}

// --------------------------------------------------------------------------
// Jordan-Wigner builders
// --------------------------------------------------------------------------

namespace {
void check_mode(int mode, int n_modes) {
    if (n_modes < 1 || n_modes > 24) throw std::invalid_argument("mode count must be in [1, 24]");
    if (mode < 1 || mode > n_modes) {
        std::ostringstream os;
        os << "mode index " << mode << " out of range [1, " << n_modes << "]";
        throw std::invalid_argument(os.str());
    }
}
}  // namespace

SparseOperator jw_annihilation(int mode, int n_modes) {
    check_mode(mode, n_modes);
    const std::uint64_t dim = std::uint64_t(1) << n_modes;
    const std::uint64_t bit = std::uint64_t(1) << (mode - 1);
    const std::uint64_t string_mask = bit - 1;
    std::vector<Eigen::Triplet<Complex>> t;
    t.reserve(dim / 2);
    for (std::uint64_t s = 0; s < dim; ++s) {
        if (!(s & bit)) continue;
        const double sign = (std::popcount(s & string_mask) % 2 == 0) ? 1.0 : -1.0;
        t.emplace_back(static_cast<Index>(s & ~bit), static_cast<Index>(s), Complex(sign, 0.0));
    }
    return SparseOperator::from_triplets(static_cast<Index>(dim), t, OpParity::Fermionic);
}

SparseOperator jw_creation(int mode, int n_modes) { return jw_annihilation(mode, n_modes).adjoint(); }

SparseOperator parity_operator(int n_modes) {
    if (n_modes < 1 || n_modes > 24) throw std::invalid_argument("mode count must be in [1, 24]");
    const std::uint64_t dim = std::uint64_t(1) << n_modes;
    Eigen::VectorXcd d(static_cast<Index>(dim));
    for (std::uint64_t s = 0; s < dim; ++s) {
        d[static_cast<Index>(s)] = Complex((std::popcount(s) % 2 == 0) ? 1.0 : -1.0, 0.0);
    }
    return SparseOperator::diagonal(d, OpParity::Bosonic);
}

SparseOperator number_operator(int mode, int n_modes) {
    check_mode(mode, n_modes);
    const std::uint64_t dim = std::uint64_t(1) << n_modes;
    const std::uint64_t bit = std::uint64_t(1) << (mode - 1);
    Eigen::VectorXcd d = Eigen::VectorXcd::Zero(static_cast<Index>(dim));
    for (std::uint64_t s = 0; s < dim; ++s) {
        if (s & bit) d[static_cast<Index>(s)] = Complex(1.0, 0.0);
    }
    return SparseOperator::diagonal(d, OpParity::Bosonic);
}

// --------------------------------------------------------------------------
// Hermitian matrix functions
// --------------------------------------------------------------------------

namespace {
void check_hermitian(const SparseOperator& a, double herm_tol, const char* what) {
    const double res = a.hermiticity_residual();
    if (res > herm_tol) {
        std::ostringstream os;
        os << what << ": operator is not Hermitian (max |A - A†| = " << res << ", tolerance " << herm_tol << ")";
        throw ValidationError(os.str());
    }
}
}  // namespace

SparseOperator hermitian_exp(const SparseOperator& a, Complex c, double herm_tol, Index dense_cap) {
    check_hermitian(a, herm_tol, "hermitian_exp");
    if (a.is_diagonal()) {
        Eigen::VectorXcd d = a.diagonal_vector();
        Eigen::VectorXcd out(d.size());
        for (Index i = 0; i < d.size(); ++i) out[i] = std::exp(c * d[i].real());
        return SparseOperator::diagonal(out, OpParity::Bosonic);
    }
    if (a.dim() > dense_cap) {
        std::ostringstream os;
        os << "hermitian_exp: dimension " << a.dim() << " exceeds dense cap " << dense_cap;
        throw NumericalIntegrityError(os.str());
    }
    Eigen::SelfAdjointEigenSolver<DenseMat> es(a.dense());
    if (es.info() != Eigen::Success) throw NumericalIntegrityError("hermitian_exp: eigendecomposition failed");
    const Eigen::VectorXd& ev = es.eigenvalues();
    Eigen::VectorXcd phase(ev.size());
    for (Index i = 0; i < ev.size(); ++i) phase[i] = std::exp(c * ev[i]);
    DenseMat out = es.eigenvectors() * phase.asDiagonal() * es.eigenvectors().adjoint();
    return SparseOperator::from_dense(out, OpParity::Unknown);
}

Eigen::VectorXd hermitian_eigenvalues(const SparseOperator& a, double herm_tol, Index dense_cap) {
    check_hermitian(a, herm_tol, "hermitian_eigenvalues");
    if (a.is_diagonal()) {
        Eigen::VectorXcd d = a.diagonal_vector();
        Eigen::VectorXd out(d.size());
        for (Index i = 0; i < d.size(); ++i) out[i] = d[i].real();
        std::sort(out.begin(), out.end());
        return out;
    }
    if (a.dim() > dense_cap) {
        std::ostringstream os;
        os << "hermitian_eigenvalues: dimension " << a.dim() << " exceeds dense cap " << dense_cap;
        throw NumericalIntegrityError(os.str());
    }
    Eigen::SelfAdjointEigenSolver<DenseMat> es(a.dense(), Eigen::EigenvaluesOnly);
    if (es.info() != Eigen::Success) {
        throw NumericalIntegrityError("hermitian_eigenvalues: eigendecomposition failed");
    }
    return es.eigenvalues();
}

bool is_power_of_two(std::uint64_t x) { return x != 0 && (x & (x - 1)) == 0; }

int log2_exact(std::uint64_t x) {
    if (!is_power_of_two(x)) throw std::invalid_argument("dimension is not a power of two");
    return std::countr_zero(x);
}

}  // namespace susyq
