// State vectors, density matrices, tensor products and fidelities.
#pragma once

#include <Eigen/Dense>
#include <complex>
#include <span>
#include <stdexcept>
#include <vector>

#include "qshare/core/layout.hpp"

namespace qshare {

using Complex = std::complex<double>;
using Vector = Eigen::VectorXcd;
using Matrix = Eigen::MatrixXcd;

// Amplitude vector over a HilbertLayout, row-major basis order.
class StateVector {
public:
    StateVector(HilbertLayout layout, Vector amps)
        : layout_(std::move(layout)), amps_(std::move(amps)) {
        if (amps_.size() != layout_.total_dim())
            throw std::invalid_argument("StateVector: amplitude count does not match layout");
    }

    static StateVector basis(const HilbertLayout& layout, const std::vector<int>& digits) {
        Vector v = Vector::Zero(layout.total_dim());
        v(layout.index_of(digits)) = 1.0;
        return StateVector(layout, std::move(v));
    }

    static StateVector basis(const HilbertLayout& layout, long flat_index) {
        if (flat_index < 0 || flat_index >= layout.total_dim())
            throw std::out_of_range("StateVector: basis index out of range");
        Vector v = Vector::Zero(layout.total_dim());
        v(flat_index) = 1.0;
        return StateVector(layout, std::move(v));
    }

    const HilbertLayout& layout() const { return layout_; }
    const Vector& amps() const { return amps_; }
    Vector& amps() { return amps_; }
    long dim() const { return amps_.size(); }

    double norm() const { return amps_.norm(); }

    void normalize() {
        double n = amps_.norm();
        if (n <= 0.0)
            throw std::runtime_error("StateVector: cannot normalize zero vector");
        amps_ /= n;
    }

    StateVector normalized() const {
        StateVector s = *this;
        s.normalize();
        return s;
    }

private:
    HilbertLayout layout_;
    Vector amps_;
};

// Kronecker product of states; layout is the concatenation of part layouts.
inline StateVector tensor(std::span<const StateVector> parts) {
    if (parts.empty())
        throw std::invalid_argument("tensor: no parts");
    Vector acc = parts[0].amps();
    std::vector<int> dims = parts[0].layout().dims();
    for (size_t p = 1; p < parts.size(); ++p) {
        const Vector& b = parts[p].amps();
        Vector next(acc.size() * b.size());
        for (long i = 0; i < acc.size(); ++i)
            next.segment(i * b.size(), b.size()) = acc(i) * b;
        acc = std::move(next);
        const auto& bd = parts[p].layout().dims();
        dims.insert(dims.end(), bd.begin(), bd.end());
    }
    return StateVector(HilbertLayout(std::move(dims)), std::move(acc));
}

inline StateVector tensor(const StateVector& a, const StateVector& b) {
    const StateVector parts[] = {a, b};
    return tensor(std::span<const StateVector>(parts, 2));
}

inline StateVector tensor(std::initializer_list<StateVector> parts) {
    std::vector<StateVector> v(parts);
    return tensor(std::span<const StateVector>(v.data(), v.size()));
}

// Density matrix over a HilbertLayout.
class DensityMatrix {
public:
    DensityMatrix(HilbertLayout layout, Matrix entries)
        : layout_(std::move(layout)), entries_(std::move(entries)) {
        if (entries_.rows() != layout_.total_dim() || entries_.cols() != layout_.total_dim())
            throw std::invalid_argument("DensityMatrix: shape does not match layout");
    }

    static DensityMatrix from_pure(const StateVector& psi) {
        return DensityMatrix(psi.layout(), psi.amps() * psi.amps().adjoint());
    }

    const HilbertLayout& layout() const { return layout_; }
    const Matrix& entries() const { return entries_; }

    double trace() const { return entries_.trace().real(); }

    double hermiticity_error() const {
        return (entries_ - entries_.adjoint()).cwiseAbs().maxCoeff();
    }

    // Smallest eigenvalue; used by tests to confirm positivity within -1e-10.
    double min_eigenvalue() const {
        Eigen::SelfAdjointEigenSolver<Matrix> es(entries_, Eigen::EigenvaluesOnly);
        return es.eigenvalues().minCoeff();
    }

private:
    HilbertLayout layout_;
    Matrix entries_;
};

namespace detail {

inline HilbertLayout sublayout(const HilbertLayout& layout, const std::vector<int>& keep) {
    if (keep.empty())
        throw std::invalid_argument("sublayout: empty subsystem list");
    std::vector<int> dims;
    std::vector<bool> seen(layout.num_subsystems(), false);
    for (int k : keep) {
        layout.check_subsystem(k);
        if (seen[k])
            throw std::invalid_argument("sublayout: repeated subsystem index");
        seen[k] = true;
        dims.push_back(layout.dim(k));
    }
    return HilbertLayout(std::move(dims));
}

// Flat index of the kept digits of i, in keep-list order.
inline long project_index(const HilbertLayout& layout, const HilbertLayout& kept,
                          const std::vector<int>& keep, long i) {
    long out = 0;
    for (size_t j = 0; j < keep.size(); ++j)
        out += static_cast<long>(layout.digit(i, keep[j])) * kept.stride(static_cast<int>(j));
    return out;
}

}  // namespace detail

// Reduced density matrix over the kept subsystems (output ordered as in keep).
inline DensityMatrix partial_trace(const StateVector& psi, const std::vector<int>& keep) {
    const HilbertLayout& L = psi.layout();
    HilbertLayout kept = detail::sublayout(L, keep);
    long kd = kept.total_dim();

    // Group amplitudes by the traced-out digits, then sum outer products.
    std::vector<bool> is_kept(L.num_subsystems(), false);
    for (int k : keep) is_kept[k] = true;
    long rest_dim = L.total_dim() / kd;
    std::vector<int> rest;
    for (int k = 0; k < L.num_subsystems(); ++k)
        if (!is_kept[k]) rest.push_back(k);

    Matrix rho = Matrix::Zero(kd, kd);
    std::vector<Vector> blocks(rest_dim, Vector::Zero(kd));
    HilbertLayout rest_layout = rest.empty() ? HilbertLayout({2}) : detail::sublayout(L, rest);
    for (long i = 0; i < L.total_dim(); ++i) {
        long kidx = detail::project_index(L, kept, keep, i);
        long ridx = rest.empty() ? 0 : detail::project_index(L, rest_layout, rest, i);
        blocks[static_cast<size_t>(ridx)](kidx) = psi.amps()(i);
    }
    for (const Vector& b : blocks)
        rho.noalias() += b * b.adjoint();
    return DensityMatrix(std::move(kept), std::move(rho));
}

inline DensityMatrix partial_trace(const DensityMatrix& rho, const std::vector<int>& keep) {
    const HilbertLayout& L = rho.layout();
    HilbertLayout kept = detail::sublayout(L, keep);
    long kd = kept.total_dim();
    Matrix out = Matrix::Zero(kd, kd);
    for (long i = 0; i < L.total_dim(); ++i) {
        long ki = detail::project_index(L, kept, keep, i);
        for (long j = 0; j < L.total_dim(); ++j) {
            // Off-diagonal in any traced subsystem contributes nothing.
            bool same_rest = true;
            for (int k = 0; k < L.num_subsystems() && same_rest; ++k) {
                bool is_kept = false;
                for (int kk : keep)
                    if (kk == k) { is_kept = true; break; }
                if (!is_kept && L.digit(i, k) != L.digit(j, k)) same_rest = false;
            }
            if (!same_rest) continue;
            long kj = detail::project_index(L, kept, keep, j);
            out(ki, kj) += rho.entries()(i, j);
        }
    }
    return DensityMatrix(std::move(kept), std::move(out));
}

// |<a|b>|^2. Invariant under a global phase of either argument.
inline double fidelity(const StateVector& a, const StateVector& b) {
    if (a.layout() != b.layout())
        throw std::invalid_argument("fidelity: layout mismatch");
    return std::norm(a.amps().dot(b.amps()));
}

// <a|rho|a> for pure a against mixed rho.
inline double fidelity(const StateVector& a, const DensityMatrix& rho) {
    if (a.layout() != rho.layout())
        throw std::invalid_argument("fidelity: layout mismatch");
    Complex v = a.amps().dot(rho.entries() * a.amps());
    return v.real();
}

// Uhlmann fidelity (tr sqrt(sqrt(rho) sigma sqrt(rho)))^2 for two mixed states.
inline double fidelity(const DensityMatrix& rho, const DensityMatrix& sigma) {
    if (rho.layout() != sigma.layout())
        throw std::invalid_argument("fidelity: layout mismatch");
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho.entries());
    Vector sq = es.eigenvalues().cwiseMax(0.0).cwiseSqrt().cast<Complex>();
    Matrix sqrt_rho = es.eigenvectors() * sq.asDiagonal() * es.eigenvectors().adjoint();
    Matrix m = sqrt_rho * sigma.entries() * sqrt_rho;
    Eigen::SelfAdjointEigenSolver<Matrix> es2(m, Eigen::EigenvaluesOnly);
    double tr = es2.eigenvalues().cwiseMax(0.0).cwiseSqrt().sum();
    return tr * tr;
}

}  // namespace qshare
