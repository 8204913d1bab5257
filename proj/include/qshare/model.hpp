// Builders for the driven two-atom/cavity model: atomic and cavity operators,
// the driven interaction Hamiltonian, its strong-driving/large-detuning
// effective form, the resonant Jaynes-Cummings coupling, and the
// reconstruction interaction times.
#pragma once

#include <cmath>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "qshare/core/operator.hpp"
#include "qshare/core/propagate.hpp"
#include "qshare/core/state.hpp"
#include "qshare/protocols/types.hpp"

namespace qshare::model {

// Coupling/detuning/driving constants, in consistent angular-frequency units.
// Only products (g t, lambda t, Omega t) ever matter downstream, so runs are
// normally set up with g = 1.
struct PhysicalParams {
    double g = 1.0;           // atom-cavity coupling
    double delta = 10.0;      // detuning omega_0 - omega_a
    double omega_rabi = 100.0;  // classical Rabi frequency
    double omega0 = 0.0;      // atomic transition frequency, optional
    double regime_factor = 10.0;  // ">>" threshold; tool default, configurable

    void validate() const {
        if (g <= 0.0) throw std::invalid_argument("PhysicalParams: g must be > 0");
        if (delta <= 0.0) throw std::invalid_argument("PhysicalParams: delta must be > 0");
    }

    bool strong_driving() const {
        return 2.0 * omega_rabi >= regime_factor * std::max(delta, g);
    }
    bool large_detuning() const { return 2.0 * delta >= regime_factor * g; }

    std::vector<std::string> regime_warnings() const {
        std::vector<std::string> w;
        if (!strong_driving())
            w.push_back("outside strong-driving regime: 2*Omega = " +
                        std::to_string(2.0 * omega_rabi) + " < " +
                        std::to_string(regime_factor) + "*max(delta, g)");
        if (!large_detuning())
            w.push_back("outside large-detuning regime: 2*delta = " +
                        std::to_string(2.0 * delta) + " < " +
                        std::to_string(regime_factor) + "*g");
        return w;
    }
};

// lambda = g^2 / (2 delta)
struct EffectiveCoupling {
    double lambda;

    static EffectiveCoupling from(const PhysicalParams& p) {
        p.validate();
        return {p.g * p.g / (2.0 * p.delta)};
    }
};

// Dimensionless interaction products; the canonical protocol uses
// (lambda t, Omega t) = (pi/4, pi).
struct InteractionSchedule {
    double lambda_t;
    double omega_t;

    InteractionSchedule(double lt, double ot) : lambda_t(lt), omega_t(ot) {
        if (lambda_t < 0.0 || omega_t < 0.0)
            throw std::invalid_argument("InteractionSchedule: negative interaction product");
    }

    static InteractionSchedule canonical() { return {M_PI / 4.0, M_PI}; }
};

// Cavity truncation: Fock levels 0..n_max.
struct FockCutoff {
    int n_max;

    explicit FockCutoff(int n) : n_max(n) {
        if (n_max < 0) throw std::invalid_argument("FockCutoff: n_max must be >= 0");
    }

    int dim() const { return n_max + 1; }

    void require_exchange_capable() const {
        if (n_max < 1)
            throw std::invalid_argument("FockCutoff: n_max >= 1 required when excitation "
                                        "exchange with the cavity is simulated");
    }
};

inline const HilbertLayout& atom_layout() {
    static const HilbertLayout L({2});
    return L;
}

inline const HilbertLayout& two_atom_layout() {
    static const HilbertLayout L({2, 2});
    return L;
}

// Single-atom operators in the basis |e> -> 0, |g> -> 1. Raising/lowering
// follow the standard convention S+ = |e><g|, S- = |g><e|; reproducing the
// protocol's four-branch post-interaction state fixes this choice.
struct AtomicOps {
    OperatorMatrix s_plus;
    OperatorMatrix s_minus;
    OperatorMatrix s_z;           // (|e><e| - |g><g|)/2
    OperatorMatrix sigma_x;       // S+ + S-
    OperatorMatrix sigma_z_phase; // |e><e| - |g><g|
};

inline AtomicOps atomic_operators() {
    Matrix sp(2, 2), sm(2, 2), sz(2, 2), sx(2, 2), szp(2, 2);
    sp << 0, 1, 0, 0;
    sm << 0, 0, 1, 0;
    sz << 0.5, 0, 0, -0.5;
    sx << 0, 1, 1, 0;
    szp << 1, 0, 0, -1;
    const HilbertLayout& L = atom_layout();
    return AtomicOps{
        OperatorMatrix(L, sp),
        OperatorMatrix(L, sm),
        OperatorMatrix(L, sz, true),
        OperatorMatrix(L, sx, true, true),
        OperatorMatrix(L, szp, true, true),
    };
}

// a|n> = sqrt(n)|n-1> on levels 0..n_max; by truncation a_dag|n_max> = 0.
struct CavityOps {
    OperatorMatrix a;
    OperatorMatrix a_dag;
    OperatorMatrix number;
};

inline CavityOps cavity_operators(const FockCutoff& cutoff) {
    int d = cutoff.dim();
    HilbertLayout L({d});
    Matrix a = Matrix::Zero(d, d);
    for (int n = 1; n < d; ++n) a(n - 1, n) = std::sqrt(static_cast<double>(n));
    Matrix num = Matrix::Zero(d, d);
    for (int n = 0; n < d; ++n) num(n, n) = static_cast<double>(n);
    return CavityOps{
        OperatorMatrix(L, a),
        OperatorMatrix(L, a.adjoint()),
        OperatorMatrix(L, num, true),
    };
}

// Omega * sum_j (S_j+ + S_j-) on the two driven atoms.
inline OperatorMatrix build_H0(double omega_rabi) {
    AtomicOps ops = atomic_operators();
    const HilbertLayout& L = two_atom_layout();
    Matrix h = omega_rabi * (embed(ops.sigma_x, {0}, L).entries() +
                             embed(ops.sigma_x, {1}, L).entries());
    return OperatorMatrix(L, std::move(h), true);
}

inline OperatorMatrix build_H0(const PhysicalParams& p) { return build_H0(p.omega_rabi); }

// (lambda/2) [ sum_j (|e>_jj<e| + |g>_jj<g|)
//            + sum_{j != k} (S_j+ S_k+ + S_j+ S_k- + H.c.) ]
// Acts on the atoms only; the cavity never enters, which is the
// photon-number independence in operator form.
inline OperatorMatrix build_He(const EffectiveCoupling& coupling) {
    AtomicOps ops = atomic_operators();
    const HilbertLayout& L = two_atom_layout();
    long n = L.total_dim();
    Matrix h = Matrix::Zero(n, n);
    // sum_j (|e><e| + |g><g|) on atom j embeds to the identity, twice
    h += 2.0 * Matrix::Identity(n, n);
    for (int j = 0; j < 2; ++j) {
        for (int k = 0; k < 2; ++k) {
            if (j == k) continue;
            Matrix sjp = embed(ops.s_plus, {j}, L).entries();
            Matrix skp = embed(ops.s_plus, {k}, L).entries();
            Matrix skm = embed(ops.s_minus, {k}, L).entries();
            Matrix term = sjp * skp + sjp * skm;
            h += term + term.adjoint();
        }
    }
    h *= coupling.lambda / 2.0;
    return OperatorMatrix(L, std::move(h), true);
}

// U = exp(-i H0 t) exp(-i He t), assembled from the dimensionless products
// Omega*t and lambda*t so no absolute timescale is needed.
inline OperatorMatrix evolution_U(const InteractionSchedule& schedule) {
    OperatorMatrix u0 = hermitian_expm(build_H0(1.0), schedule.omega_t);
    OperatorMatrix ue = hermitian_expm(build_He({1.0}), schedule.lambda_t);
    return u0 * ue;
}

// Resonant Jaynes-Cummings coupling g (a S+ + a_dag S-) on (atom, cavity).
// At resonance the frame term omega (a_dag a + S_z) commutes with the
// coupling and contributes only a relative phase absorbed downstream by the
// correction search, so it is dropped unless explicitly requested.
inline OperatorMatrix build_JC(double g, const FockCutoff& cutoff,
                               double omega_frame_term = 0.0) {
    cutoff.require_exchange_capable();
    AtomicOps atom = atomic_operators();
    CavityOps cav = cavity_operators(cutoff);
    HilbertLayout L({2, cutoff.dim()});
    Matrix h = g * (embed(cav.a, {1}, L).entries() * embed(atom.s_plus, {0}, L).entries() +
                    embed(cav.a_dag, {1}, L).entries() * embed(atom.s_minus, {0}, L).entries());
    if (omega_frame_term != 0.0)
        h += omega_frame_term * (embed(cav.number, {1}, L).entries() +
                                 embed(atom.s_z, {0}, L).entries());
    return OperatorMatrix(L, std::move(h), true);
}

inline OperatorMatrix build_JC(const PhysicalParams& p, const FockCutoff& cutoff,
                               bool include_frame_term = false) {
    return build_JC(p.g, cutoff, include_frame_term ? p.omega0 : 0.0);
}

// Interaction product g*t for the designee's resonant-cavity step:
// arccos(|c|/|a|) when Charlie reconstructs, arccos(|c|/|b|) when Bob does.
inline double reconstruction_time(const WCoefficients& coeffs, Party designee) {
    double num = std::abs(coeffs.c);
    double den = designee == Party::charlie ? std::abs(coeffs.a) : std::abs(coeffs.b);
    if (num > den + 1e-12)
        throw std::domain_error("reconstruction_time: arccos domain (|c| exceeds |" +
                                std::string(designee == Party::charlie ? "a" : "b") + "|)");
    return std::acos(std::min(1.0, num / den));
}

// The driven interaction Hamiltonian
//   H_I(t) = Omega sum_j (S_j+ + S_j-)
//          + g sum_j (e^{-i delta t} a_dag S_j- + e^{i delta t} a S_j+)
// on (atom, atom, cavity). The drive sum runs over active_atoms, which the
// stagger study narrows to a single atom.
//
// H_I(t) = V(t) H_I(0) V(t)^dag with V(t) = diag(e^{-i delta t n}), so the
// midpoint step exp(-i H_I(t_mid) dt) is evaluated as V E V^dag with one
// eigendecomposition per step size instead of one per step. The same frame
// change integrates the dynamics in closed form, which evolve_exact exposes
// for cross-checks and for the stagger study.
class DrivenCavityHamiltonian : public TimeDependentHamiltonian {
public:
    DrivenCavityHamiltonian(const PhysicalParams& params, const FockCutoff& cutoff,
                            std::vector<int> active_atoms = {0, 1})
        : params_(params),
          layout_({2, 2, cutoff.dim()}),
          active_(std::move(active_atoms)) {
        params_.validate();
        cutoff.require_exchange_capable();
        if (active_.empty())
            throw std::invalid_argument("DrivenCavityHamiltonian: no active atoms");
        warnings_ = params_.regime_warnings();

        AtomicOps atom = atomic_operators();
        CavityOps cav = cavity_operators(cutoff);
        Matrix a_dag = embed(cav.a_dag, {2}, layout_).entries();
        long n = layout_.total_dim();
        drive_ = Matrix::Zero(n, n);
        lower_ = Matrix::Zero(n, n);
        for (int j : active_) {
            layout_.check_subsystem(j);
            if (j > 1)
                throw std::invalid_argument("DrivenCavityHamiltonian: active atom index > 1");
            drive_ += params_.omega_rabi * embed(atom.sigma_x, {j}, layout_).entries();
            lower_ += a_dag * embed(atom.s_minus, {j}, layout_).entries();
        }
        photon_.resize(n);
        for (long i = 0; i < n; ++i) photon_[i] = layout_.digit(i, 2);

        Matrix h0 = drive_ + params_.g * (lower_ + lower_.adjoint());
        h_at_zero_ = std::make_unique<OperatorMatrix>(layout_, h0, true);

        // static frame Hamiltonian H_I(0) - delta * N for the exact route
        Matrix hs = h0;
        for (long i = 0; i < n; ++i) hs(i, i) -= params_.delta * photon_[i];
        Eigen::SelfAdjointEigenSolver<Matrix> es(hs);
        if (es.info() != Eigen::Success)
            throw std::runtime_error("DrivenCavityHamiltonian: eigendecomposition failed");
        static_evecs_ = es.eigenvectors();
        static_evals_ = es.eigenvalues();
    }

    const HilbertLayout& layout() const override { return layout_; }
    const PhysicalParams& params() const { return params_; }
    const std::vector<std::string>& warnings() const { return warnings_; }

    OperatorMatrix at(double t) const override {
        Complex rot = std::polar(1.0, -params_.delta * t);
        Matrix h = drive_ + params_.g * (rot * lower_ + std::conj(rot) * lower_.adjoint());
        return OperatorMatrix(layout_, std::move(h), true);
    }

    std::function<void(Vector&, double)> make_stepper(double dt) const override {
        Matrix e = hermitian_expm(*h_at_zero_, dt).entries();
        return [this, e = std::move(e)](Vector& psi, double t_mid) {
            apply_frame(psi, -t_mid);            // V(t_mid)^dag
            psi = e * psi;
            apply_frame(psi, t_mid);             // V(t_mid)
        };
    }

    // Closed-form evolution from t0 to t1 (used as the propagate_td oracle
    // and by the stagger study): psi -> V(t1) exp(-i H_s (t1-t0)) V(t0)^dag psi.
    Vector evolve_exact(const Vector& psi0, double t0, double t1) const {
        Vector psi = psi0;
        apply_frame(psi, -t0);
        Vector coeff = static_evecs_.adjoint() * psi;
        for (long k = 0; k < coeff.size(); ++k)
            coeff(k) *= std::polar(1.0, -static_evals_(k) * (t1 - t0));
        psi = static_evecs_ * coeff;
        apply_frame(psi, t1);
        return psi;
    }

    // Population of the top Fock level; stays below 1e-6 when the cutoff is
    // adequate.
    double top_level_population(const Vector& psi) const {
        int top = layout_.dim(2) - 1;
        double p = 0.0;
        for (long i = 0; i < psi.size(); ++i)
            if (photon_[i] == top) p += std::norm(psi(i));
        return p;
    }

private:
    // psi <- diag(e^{-i delta t n}) psi
    void apply_frame(Vector& psi, double t) const {
        Complex base = std::polar(1.0, -params_.delta * t);
        int d = layout_.dim(2);
        std::vector<Complex> ph(static_cast<size_t>(d));
        ph[0] = 1.0;
        for (int n = 1; n < d; ++n) ph[n] = ph[n - 1] * base;
        for (long i = 0; i < psi.size(); ++i) psi(i) *= ph[photon_[i]];
    }

    PhysicalParams params_;
    HilbertLayout layout_;
    std::vector<int> active_;
    std::vector<std::string> warnings_;
    Matrix drive_;
    Matrix lower_;
    std::unique_ptr<OperatorMatrix> h_at_zero_;
    Matrix static_evecs_;
    Eigen::VectorXd static_evals_;
    std::vector<int> photon_;
};

inline std::unique_ptr<DrivenCavityHamiltonian> build_HI(const PhysicalParams& params,
                                                         const FockCutoff& cutoff,
                                                         std::vector<int> active_atoms = {0, 1}) {
    return std::make_unique<DrivenCavityHamiltonian>(params, cutoff, std::move(active_atoms));
}

}  // namespace qshare::model
