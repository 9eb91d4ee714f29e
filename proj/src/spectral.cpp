#include "susyq/spectral.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <sstream>

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>

namespace susyq {

namespace {

// Orthonormal basis of range(P), split by fermion parity. Columns are
// full-space vectors of definite parity. The fast path covers diagonal
// projectors (every built-in model); general Hermitian projectors go through
// an eigendecomposition of P.
struct ProjectedBasis {
    DenseMat bosonic;
    DenseMat fermionic;

    Index dim() const { return bosonic.cols() + fermionic.cols(); }
};

ProjectedBasis projected_basis(const SusyModel& model, double tol = 1e-10) {
    const Index dim = model.dim();
    const SparseOperator& p = model.projector;
    Eigen::VectorXd parity(dim);
    for (Index s = 0; s < dim; ++s) {
        parity[s] = (std::popcount(static_cast<std::uint64_t>(s)) % 2 == 0) ? 1.0 : -1.0;
    }

    std::vector<Index> bos, fer;
    if (p.is_diagonal()) {
        const Eigen::VectorXcd d = p.diagonal_vector();
        for (Index s = 0; s < dim; ++s) {
            const double v = d[s].real();
            if (std::abs(v - 1.0) <= tol) {
                (parity[s] > 0 ? bos : fer).push_back(s);
            } else if (std::abs(v) > tol) {
                throw ValidationError("projector diagonal entries must be 0/1");
            }
        }
        ProjectedBasis basis;
        basis.bosonic = DenseMat::Zero(dim, static_cast<Index>(bos.size()));
        basis.fermionic = DenseMat::Zero(dim, static_cast<Index>(fer.size()));
        for (std::size_t k = 0; k < bos.size(); ++k) basis.bosonic(bos[k], static_cast<Index>(k)) = 1.0;
        for (std::size_t k = 0; k < fer.size(); ++k) basis.fermionic(fer[k], static_cast<Index>(k)) = 1.0;
        return basis;
    }

    // General projector: need [P, (-1)^F] = 0 so that range(P) splits by parity.
    const SparseOperator f_op = parity_operator(model.n_modes);
    const double mix = commutator(p, f_op).max_abs();
    if (mix > tol) {
        throw ValidationError("projector does not commute with (-1)^F; projected space has no parity split");
    }
    Eigen::SelfAdjointEigenSolver<DenseMat> es(p.dense());
    if (es.info() != Eigen::Success) throw NumericalIntegrityError("projector eigendecomposition failed");
    std::vector<Index> range_cols;
    for (Index k = 0; k < dim; ++k) {
        const double ev = es.eigenvalues()[k];
        if (std::abs(ev - 1.0) <= 1e-8) {
            range_cols.push_back(k);
        } else if (std::abs(ev) > 1e-8) {
            throw ValidationError("projector eigenvalues must be 0/1");
        }
    }
    DenseMat range(dim, static_cast<Index>(range_cols.size()));
    for (std::size_t k = 0; k < range_cols.size(); ++k) range.col(static_cast<Index>(k)) = es.eigenvectors().col(range_cols[k]);
    // Split the range by diagonalizing (-1)^F restricted to it.
    DenseMat f_res = range.adjoint() * parity.asDiagonal().toDenseMatrix().cast<Complex>() * range;
    Eigen::SelfAdjointEigenSolver<DenseMat> fs(f_res);
    ProjectedBasis basis;
    std::vector<Index> bcols, fcols;
    for (Index k = 0; k < fs.eigenvalues().size(); ++k) {
        (fs.eigenvalues()[k] > 0 ? bcols : fcols).push_back(k);
    }
    basis.bosonic = DenseMat(dim, static_cast<Index>(bcols.size()));
    basis.fermionic = DenseMat(dim, static_cast<Index>(fcols.size()));
    for (std::size_t k = 0; k < bcols.size(); ++k) {
        basis.bosonic.col(static_cast<Index>(k)) = range * fs.eigenvectors().col(bcols[k]);
    }
    for (std::size_t k = 0; k < fcols.size(); ++k) {
        basis.fermionic.col(static_cast<Index>(k)) = range * fs.eigenvectors().col(fcols[k]);
    }
    return basis;
}

}  // namespace

SpectralReport diagonalize(const SusyModel& model, double tolerance, Index dense_cap) {
    require_valid(model);
    const SparseOperator h = hamiltonian(model);
    const ProjectedBasis basis = projected_basis(model);
    if (basis.dim() > dense_cap) {
        std::ostringstream os;
        os << "diagonalize: projected dimension " << basis.dim() << " exceeds dense cap " << dense_cap
           << "; reduce N";
        throw NumericalIntegrityError(os.str());
    }

    const double h_scale = std::max(1.0, h.norm_bound());
    const double zero_threshold = tolerance * h_scale;

    struct Level {
        double value;
        int parity;
        Index column;  // column in the per-parity eigenvector matrix
    };
    std::vector<Level> levels;
    DenseMat evecs_b, evecs_f;

    for (int which = 0; which < 2; ++which) {
        const DenseMat& b = (which == 0) ? basis.bosonic : basis.fermionic;
        if (b.cols() == 0) continue;
        DenseMat h_res = b.adjoint() * (h.matrix() * b);
        Eigen::SelfAdjointEigenSolver<DenseMat> es(h_res);
        if (es.info() != Eigen::Success) throw NumericalIntegrityError("diagonalize: eigensolver failed");
        for (Index k = 0; k < es.eigenvalues().size(); ++k) {
            levels.push_back({es.eigenvalues()[k], which == 0 ? 1 : -1, k});
        }
        ((which == 0) ? evecs_b : evecs_f) = es.eigenvectors();
    }

    std::stable_sort(levels.begin(), levels.end(),
                     [](const Level& a, const Level& b) { return a.value < b.value; });

    SpectralReport report;
    report.tolerance = zero_threshold;
    std::vector<Index> ground_cols_b, ground_cols_f;
    for (const Level& lv : levels) {
        if (lv.value < -zero_threshold) {
            std::ostringstream os;
            os << "diagonalize: negative eigenvalue " << lv.value << " below -" << zero_threshold;
            throw NumericalIntegrityError(os.str());
        }
        report.eigenvalues.push_back(lv.value);
        report.parities.push_back(lv.parity);
        if (lv.value < zero_threshold) {
            if (lv.parity > 0) {
                ++report.n_bosonic_ground;
                ground_cols_b.push_back(lv.column);
            } else {
                ++report.n_fermionic_ground;
                ground_cols_f.push_back(lv.column);
            }
        }
    }

    report.ground_basis = DenseMat(model.dim(), static_cast<Index>(ground_cols_b.size() + ground_cols_f.size()));
    Index col = 0;
    for (Index k : ground_cols_b) {
        report.ground_basis.col(col++) = basis.bosonic * evecs_b.col(k);
        report.ground_parities.push_back(1);
    }
    for (Index k : ground_cols_f) {
        report.ground_basis.col(col++) = basis.fermionic * evecs_f.col(k);
        report.ground_parities.push_back(-1);
    }

    double ann = 0.0;
    for (Index k = 0; k < report.ground_basis.cols(); ++k) {
        const DenseVec w = report.ground_basis.col(k);
        ann = std::max(ann, (model.supercharge.matrix() * w).norm());
        ann = std::max(ann, (model.supercharge.matrix().adjoint() * w).norm());
    }
    report.ground_annihilation_residual = ann;

    report.witten_index = report.n_bosonic_ground - report.n_fermionic_ground;
    const long long via_trace = witten_index(model);
    if (via_trace != report.witten_index) {
        std::ostringstream os;
        os << "Witten index mismatch: kernel count gives " << report.witten_index << ", Tr[P(-1)^F] gives "
           << via_trace;
        throw NumericalIntegrityError(os.str());
    }
    return report;
}

long long witten_index(const SusyModel& model) {
    const SparseOperator f = parity_operator(model.n_modes);
    const Complex tr = mul(model.projector, f).trace();
    const double rounded = std::round(tr.real());
    if (std::abs(tr.real() - rounded) > 1e-9 || std::abs(tr.imag()) > 1e-9) {
        std::ostringstream os;
        os << "witten_index: Tr[P(-1)^F] = (" << tr.real() << ", " << tr.imag()
           << ") is not an integer within 1e-9";
        throw NumericalIntegrityError(os.str());
    }
    return static_cast<long long>(rounded);
}

Complex generalized_witten(const SusyModel& model, const std::vector<Insertion>& insertions,
                           std::vector<std::string>* warnings, double closure_warn_tol) {
    require_valid(model);
    const SparseOperator h = hamiltonian(model);
    const double h_bound = h.norm_bound();

    double prev_tau = 0.0;
    for (std::size_t k = 0; k < insertions.size(); ++k) {
        const auto& ins = insertions[k];
        if (ins.op.dim() != model.dim()) throw std::invalid_argument("generalized_witten: dimension mismatch");
        if (ins.time < 0.0) throw std::invalid_argument("generalized_witten: Euclidean times must be >= 0");
        if (k > 0 && ins.time < prev_tau) {
            throw std::invalid_argument("generalized_witten: Euclidean times must be ascending");
        }
        prev_tau = ins.time;
        if (ins.time * h_bound > 700.0) {
            throw NumericalIntegrityError("generalized_witten: tau * ||H|| too large for e^{tau H}");
        }
        if (warnings != nullptr) {
            const ClosureResult c = is_closed(ins.op, model, closure_warn_tol);
            if (!c.closed) {
                std::ostringstream os;
                os << "insertion " << k << " is not Q-closed (residual " << c.residual << ")";
                warnings->push_back(os.str());
            }
        }
    }

    const SparseOperator f = parity_operator(model.n_modes);
    DenseMat acc = (model.projector.matrix() * f.matrix()).toDense();
    for (const auto& ins : insertions) {
        DenseMat evolved;
        if (ins.time == 0.0) {
            evolved = ins.op.dense();
        } else {
            const SparseOperator fwd = hermitian_exp(h, Complex(ins.time, 0.0));
            const SparseOperator bwd = hermitian_exp(h, Complex(-ins.time, 0.0));
            evolved = fwd.matrix() * ins.op.matrix() * bwd.matrix();
        }
        acc = acc * evolved;
    }
    return acc.trace();
}

DeformationInvarianceReport deformation_invariance_check(const SusyModel& model,
                                                         const std::vector<Insertion>& insertions,
                                                         const std::vector<SparseOperator>& psi_list,
                                                         double tolerance) {
    if (psi_list.size() != insertions.size()) {
        throw std::invalid_argument("deformation_invariance_check: need one psi per insertion");
    }
    const Complex base = generalized_witten(model, insertions);
    DeformationInvarianceReport report;
    report.tolerance = tolerance;
    report.scale = std::max(1.0, std::abs(base));
    for (std::size_t k = 0; k < insertions.size(); ++k) {
        std::vector<Insertion> deformed = insertions;
        const DeformationResult e = exact_deformation(model, psi_list[k]);
        deformed[k].op = add(deformed[k].op, e.op);
        const Complex z = generalized_witten(model, deformed);
        report.deviations.push_back(std::abs(z - base));
    }
    report.passed = std::all_of(report.deviations.begin(), report.deviations.end(),
                                [&](double d) { return d <= tolerance * report.scale; });
    return report;
}

CorrelatorResult ground_correlator(const SusyModel& model, const std::vector<Insertion>& insertions) {
    const SpectralReport spec = diagonalize(model);
    if (spec.ground_basis.cols() == 0) {
        throw std::domain_error("ground_correlator: no supersymmetric ground states");
    }
    const SparseOperator h = hamiltonian(model);

    DenseMat acc = DenseMat::Identity(model.dim(), model.dim());
    for (const auto& ins : insertions) {
        if (ins.op.dim() != model.dim()) throw std::invalid_argument("ground_correlator: dimension mismatch");
        DenseMat evolved;
        if (ins.time == 0.0) {
            evolved = ins.op.dense();
        } else {
            const SparseOperator fwd = hermitian_exp(h, Complex(0.0, ins.time));
            const SparseOperator bwd = hermitian_exp(h, Complex(0.0, -ins.time));
            evolved = fwd.matrix() * ins.op.matrix() * bwd.matrix();
        }
        acc = acc * evolved;
    }

    CorrelatorResult out;
    for (Index k = 0; k < spec.ground_basis.cols(); ++k) {
        const DenseVec w = spec.ground_basis.col(k);
        out.per_ground_state.push_back(w.dot(acc * w));
    }
    out.average = std::accumulate(out.per_ground_state.begin(), out.per_ground_state.end(), Complex(0.0, 0.0)) /
                  static_cast<double>(out.per_ground_state.size());
    return out;
}

bool spectral_pairing_ok(const SpectralReport& report, double level_tol) {
    const std::size_t n = report.eigenvalues.size();
    std::size_t i = 0;
    while (i < n) {
        std::size_t j = i;
        int bosonic = 0, fermionic = 0;
        while (j < n && report.eigenvalues[j] - report.eigenvalues[i] <= level_tol) {
            (report.parities[j] > 0 ? bosonic : fermionic)++;
            ++j;
        }
        const bool ground_cluster = report.eigenvalues[i] < std::max(level_tol, report.tolerance);
        if (!ground_cluster && bosonic != fermionic) return false;
        i = j;
    }
    return true;
}

}  // namespace susyq
