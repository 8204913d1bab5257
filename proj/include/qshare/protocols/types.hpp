// Domain types shared by the sharing protocols.
#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <map>
#include <stdexcept>
#include <string>

#include "qshare/core/operator.hpp"
#include "qshare/core/state.hpp"

namespace qshare {

enum class Party { bob, charlie };

inline std::string to_string(Party p) { return p == Party::bob ? "bob" : "charlie"; }

// The single-qubit secret alpha|e> + beta|g>.
struct SecretState {
    Complex alpha;
    Complex beta;

    SecretState(Complex a, Complex b) : alpha(a), beta(b) {
        double n = std::norm(alpha) + std::norm(beta);
        if (std::abs(n - 1.0) > 1e-12)
            throw std::invalid_argument("SecretState: |alpha|^2 + |beta|^2 != 1");
    }

    StateVector to_state() const {
        Vector v(2);
        v << alpha, beta;
        return StateVector(HilbertLayout({2}), std::move(v));
    }
};

// Weights of the W-class channel state. Ordering |a| >= |b| >= |c| is the
// paper's without-loss-of-generality assumption, relaxed to non-strict.
struct WCoefficients {
    Complex a;
    Complex b;
    Complex c;

    WCoefficients(Complex a_, Complex b_, Complex c_) : a(a_), b(b_), c(c_) {
        double n = std::norm(a) + std::norm(b) + std::norm(c);
        if (std::abs(n - 1.0) > 1e-12)
            throw std::invalid_argument("WCoefficients: |a|^2+|b|^2+|c|^2 != 1");
        if (std::abs(a) + 1e-12 < std::abs(b) || std::abs(b) + 1e-12 < std::abs(c))
            throw std::invalid_argument("WCoefficients: ordering |a| >= |b| >= |c| violated");
    }
};

enum class PauliLabel { I, X, Z, XZ };

inline std::string to_string(PauliLabel p) {
    switch (p) {
        case PauliLabel::I: return "I";
        case PauliLabel::X: return "X";
        case PauliLabel::Z: return "Z";
        case PauliLabel::XZ: return "XZ";
    }
    return "?";
}

inline Matrix pauli_matrix(PauliLabel p) {
    Matrix m(2, 2);
    switch (p) {
        case PauliLabel::I: m << 1, 0, 0, 1; break;
        case PauliLabel::X: m << 0, 1, 1, 0; break;
        case PauliLabel::Z: m << 1, 0, 0, -1; break;
        case PauliLabel::XZ: m << 0, -1, 1, 0; break;  // X*Z, Z applied first
    }
    return m;
}

// Branch correction: diag(1, e^{i phase}) * Pauli. The phase is needed only
// for complex W-channel weights; protocol tables with real weights come out
// with phase 0.
struct Correction {
    PauliLabel label = PauliLabel::I;
    double phase = 0.0;

    OperatorMatrix to_operator() const {
        Matrix m = pauli_matrix(label);
        m.row(1) *= std::polar(1.0, phase);
        return OperatorMatrix(HilbertLayout({2}), std::move(m),
                              /*hermitian=*/false, /*unitary=*/true);
    }

    std::string to_string() const {
        std::string s = qshare::to_string(label);
        if (phase != 0.0) s += "*phase(" + std::to_string(phase) + ")";
        return s;
    }
};

// (Alice's two-atom outcome, helper's bit) -> correction. Entries exist only
// for branches from which the designee can recover the secret.
struct CorrectionKey {
    std::array<int, 2> alice;
    int helper;

    friend bool operator<(const CorrectionKey& l, const CorrectionKey& r) {
        if (l.alice != r.alice) return l.alice < r.alice;
        return l.helper < r.helper;
    }
};

struct CorrectionTable {
    std::string protocol;  // "ghz" | "w"
    Party designee = Party::charlie;
    std::map<CorrectionKey, Correction> entries;

    const Correction& at(const std::array<int, 2>& alice, int helper) const {
        auto it = entries.find(CorrectionKey{alice, helper});
        if (it == entries.end())
            throw std::out_of_range("CorrectionTable: no entry for branch");
        return it->second;
    }
};

// One enumerated (or sampled) end-to-end branch record.
struct ProtocolResult {
    std::array<int, 2> alice_outcome{};
    int helper_outcome = -1;
    int photon = -1;  // cavity count for the W protocol, -1 where not applicable
    double probability = 0.0;
    bool corrected = false;
    Correction correction{};
    bool success = false;
    double fidelity = 0.0;
};

// Branch success threshold used throughout.
inline constexpr double kFidelityThreshold = 1.0 - 1e-10;

}  // namespace qshare
