// Branch-correction search. The protocol only asserts that a correction
// exists per branch; the table is found by exhaustive search over
// {I, X, Z, XZ}, first bare, then with a free relative phase on |g>.
#pragma once

#include <cmath>
#include <optional>
#include <vector>

#include "qshare/core/operator.hpp"
#include "qshare/core/state.hpp"
#include "qshare/protocols/types.hpp"

namespace qshare::protocols {

// Generic, non-symmetric probe secret used to derive correction tables.
inline SecretState probe_secret() {
    return SecretState(Complex(0.6, 0.0), std::polar(0.8, M_PI / 7.0));
}

inline const std::vector<PauliLabel>& pauli_search_order() {
    static const std::vector<PauliLabel> order{PauliLabel::I, PauliLabel::X,
                                               PauliLabel::Z, PauliLabel::XZ};
    return order;
}

// Find a correction mapping v onto the secret with unit fidelity, or nullopt.
// The free phase is solved in closed form: for candidate P with w = P v, the
// overlap |conj(alpha) w_e + e^{i phi} conj(beta) w_g| is maximized at
// phi = arg(conj(alpha) w_e) - arg(conj(beta) w_g).
inline std::optional<Correction> search_correction(const SecretState& secret,
                                                   const StateVector& v) {
    if (v.layout() != HilbertLayout({2}))
        throw std::invalid_argument("search_correction: expected a single qubit");
    const StateVector target = secret.to_state();

    for (PauliLabel p : pauli_search_order()) {
        Correction c{p, 0.0};
        if (fidelity(target, apply(c.to_operator(), v)) >= kFidelityThreshold)
            return c;
    }
    for (PauliLabel p : pauli_search_order()) {
        Vector w = pauli_matrix(p) * v.amps();
        Complex te = std::conj(secret.alpha) * w(0);
        Complex tg = std::conj(secret.beta) * w(1);
        if (std::abs(te) < 1e-15 || std::abs(tg) < 1e-15) continue;  // phase irrelevant
        double phi = std::arg(te) - std::arg(tg);
        Correction c{p, phi};
        if (fidelity(target, apply(c.to_operator(), v)) >= kFidelityThreshold)
            return c;
    }
    return std::nullopt;
}

}  // namespace qshare::protocols
