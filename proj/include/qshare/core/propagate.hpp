// Piecewise-constant midpoint propagation of time-dependent Hamiltonians.
#pragma once

#include <functional>
#include <memory>
#include <stdexcept>

#include "qshare/core/operator.hpp"
#include "qshare/core/state.hpp"

namespace qshare {

// A Hamiltonian indexed by time. Subclasses may override make_stepper with a
// structure-aware route that evaluates the same midpoint exponential faster;
// the result must match the generic route to roundoff.
class TimeDependentHamiltonian {
public:
    virtual ~TimeDependentHamiltonian() = default;

    virtual const HilbertLayout& layout() const = 0;
    virtual OperatorMatrix at(double t) const = 0;

    // Returns a function advancing psi by exp(-i H(t_mid) dt).
    virtual std::function<void(Vector&, double)> make_stepper(double dt) const {
        return [this, dt](Vector& psi, double t_mid) {
            OperatorMatrix u = hermitian_expm(at(t_mid), dt);
            psi = u.entries() * psi;
        };
    }
};

struct PropagationOptions {
    long initial_steps = 256;
    double tolerance = 1e-8;   // convergence: ||psi_2N - psi_N|| below this
    int max_doublings = 20;
};

struct PropagationResult {
    StateVector state;
    bool converged = false;
    long steps = 0;           // step count of the accepted run
    int doublings = 0;
    double last_diff = 0.0;   // ||psi_2N - psi_N|| at acceptance (or last attempt)
    double norm_drift = 0.0;
};

namespace detail {

inline Vector run_midpoint(const TimeDependentHamiltonian& h, const Vector& psi0,
                           double t_begin, double t_end, long steps) {
    Vector psi = psi0;
    double dt = (t_end - t_begin) / static_cast<double>(steps);
    auto step = h.make_stepper(dt);
    for (long k = 0; k < steps; ++k) {
        double t_mid = t_begin + (static_cast<double>(k) + 0.5) * dt;
        step(psi, t_mid);
    }
    return psi;
}

}  // namespace detail

// Midpoint stepping with step-doubling until the final state moves by less
// than opts.tolerance. Non-convergence is reported, never silently accepted.
inline PropagationResult propagate_td(const TimeDependentHamiltonian& h,
                                      const StateVector& psi0, double total_time,
                                      const PropagationOptions& opts = {}) {
    if (h.layout() != psi0.layout())
        throw std::invalid_argument("propagate_td: layout mismatch");
    if (std::abs(psi0.norm() - 1.0) > 1e-9)
        throw std::invalid_argument("propagate_td: initial state not normalized");
    if (opts.initial_steps < 1)
        throw std::invalid_argument("propagate_td: steps must be >= 1");

    long n = opts.initial_steps;
    Vector prev = detail::run_midpoint(h, psi0.amps(), 0.0, total_time, n);
    PropagationResult res{StateVector(psi0.layout(), prev), false, n, 0, 0.0, 0.0};
    for (int d = 1; d <= opts.max_doublings; ++d) {
        long n2 = n * 2;
        Vector cur = detail::run_midpoint(h, psi0.amps(), 0.0, total_time, n2);
        double diff = (cur - prev).norm();
        res.state = StateVector(psi0.layout(), cur);
        res.steps = n2;
        res.doublings = d;
        res.last_diff = diff;
        if (diff < opts.tolerance) {
            res.converged = true;
            break;
        }
        prev = std::move(cur);
        n = n2;
    }
    res.norm_drift = std::abs(res.state.norm() - 1.0);
    if (res.norm_drift > 1e-8)
        throw std::runtime_error("propagate_td: norm drifted by " +
                                 std::to_string(res.norm_drift));
    return res;
}

}  // namespace qshare
