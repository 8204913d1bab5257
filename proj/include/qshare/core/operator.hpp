// Operators on composite systems: embedding, application, matrix exponential.
#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "qshare/core/layout.hpp"
#include "qshare/core/state.hpp"

namespace qshare {

// Dense square operator over a HilbertLayout. The flags are set by builders
// and trusted by apply(); tests verify them against the entries.
class OperatorMatrix {
public:
    OperatorMatrix(HilbertLayout layout, Matrix entries,
                   bool hermitian_flag = false, bool unitary_flag = false)
        : layout_(std::move(layout)),
          entries_(std::move(entries)),
          hermitian_(hermitian_flag),
          unitary_(unitary_flag) {
        if (entries_.rows() != layout_.total_dim() || entries_.cols() != layout_.total_dim())
            throw std::invalid_argument("OperatorMatrix: shape does not match layout");
    }

    static OperatorMatrix identity(const HilbertLayout& layout) {
        return OperatorMatrix(layout, Matrix::Identity(layout.total_dim(), layout.total_dim()),
                              /*hermitian=*/true, /*unitary=*/true);
    }

    const HilbertLayout& layout() const { return layout_; }
    const Matrix& entries() const { return entries_; }
    bool hermitian_flag() const { return hermitian_; }
    bool unitary_flag() const { return unitary_; }

    double hermiticity_error() const {
        return (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
    }

    double unitarity_error() const {
        Matrix d = entries_ * entries_.adjoint();
        d -= Matrix::Identity(d.rows(), d.cols());
        return d.cwiseAbs().maxCoeff();
    }

    OperatorMatrix adjoint() const {
        return OperatorMatrix(layout_, entries_.adjoint(), hermitian_, unitary_);
    }

    friend OperatorMatrix operator*(const OperatorMatrix& a, const OperatorMatrix& b) {
        if (a.layout() != b.layout())
            throw std::invalid_argument("OperatorMatrix: layout mismatch in product");
        // Flags are not derivable in general; product of unitaries stays unitary.
        return OperatorMatrix(a.layout(), a.entries() * b.entries(),
                              false, a.unitary_ && b.unitary_);
    }

private:
    HilbertLayout layout_;
    Matrix entries_;
    bool hermitian_;
    bool unitary_;
};

// op (given on k subsystems) tensored with identity elsewhere, with index
// permutation so op's j-th factor lands on subsystem targets[j].
inline OperatorMatrix embed(const OperatorMatrix& op, const std::vector<int>& targets,
                            const HilbertLayout& layout) {
    if (static_cast<int>(targets.size()) != op.layout().num_subsystems())
        throw std::invalid_argument("embed: target count does not match operator layout");
    std::vector<bool> seen(layout.num_subsystems(), false);
    for (size_t j = 0; j < targets.size(); ++j) {
        layout.check_subsystem(targets[j]);
        if (seen[targets[j]])
            throw std::invalid_argument("embed: repeated target index");
        seen[targets[j]] = true;
        if (layout.dim(targets[j]) != op.layout().dim(static_cast<int>(j)))
            throw std::invalid_argument("embed: subsystem dimension mismatch");
    }

    long n = layout.total_dim();
    Matrix out = Matrix::Zero(n, n);
    const HilbertLayout& ol = op.layout();
    for (long r = 0; r < n; ++r) {
        for (long c = 0; c < n; ++c) {
            bool off_target_equal = true;
            for (int k = 0; k < layout.num_subsystems() && off_target_equal; ++k) {
                if (!seen[k] && layout.digit(r, k) != layout.digit(c, k))
                    off_target_equal = false;
            }
            if (!off_target_equal) continue;
            long orow = 0, ocol = 0;
            for (size_t j = 0; j < targets.size(); ++j) {
                orow += static_cast<long>(layout.digit(r, targets[j])) * ol.stride(static_cast<int>(j));
                ocol += static_cast<long>(layout.digit(c, targets[j])) * ol.stride(static_cast<int>(j));
            }
            out(r, c) = op.entries()(orow, ocol);
        }
    }
    return OperatorMatrix(layout, std::move(out), op.hermitian_flag(), op.unitary_flag());
}

// Matrix-vector application. Unitary operators must preserve the norm within
// 1e-10, and only then is the residual drift snapped away; non-unitary
// operators (projectors) return the unnormalized result untouched.
inline StateVector apply(const OperatorMatrix& op, const StateVector& psi) {
    if (op.layout() != psi.layout())
        throw std::invalid_argument("apply: layout mismatch");
    Vector y = op.entries() * psi.amps();
    if (op.unitary_flag()) {
        double before = psi.amps().norm();
        double after = y.norm();
        if (std::abs(after - before) > 1e-10)
            throw std::runtime_error("apply: unitary-flagged operator changed the norm by " +
                                     std::to_string(std::abs(after - before)));
        if (after > 0.0) y *= before / after;
    }
    return StateVector(psi.layout(), std::move(y));
}

// exp(-i h t) for Hermitian h, via eigendecomposition.
inline OperatorMatrix hermitian_expm(const OperatorMatrix& h, double t) {
    if (!h.hermitian_flag())
        throw std::invalid_argument("hermitian_expm: operator not flagged Hermitian");
    double herm_err = h.hermiticity_error();
    if (herm_err > 1e-12)
        throw std::invalid_argument("hermitian_expm: entries not Hermitian (max dev " +
                                    std::to_string(herm_err) + ")");
    Eigen::SelfAdjointEigenSolver<Matrix> es(h.entries());
    if (es.info() != Eigen::Success)
        throw std::runtime_error("hermitian_expm: eigendecomposition failed");
    Vector phases(es.eigenvalues().size());
    for (long k = 0; k < phases.size(); ++k)
        phases(k) = std::polar(1.0, -es.eigenvalues()(k) * t);
    Matrix u = es.eigenvectors() * phases.asDiagonal() * es.eigenvectors().adjoint();
    return OperatorMatrix(h.layout(), std::move(u), /*hermitian=*/false, /*unitary=*/true);
}

}  // namespace qshare
