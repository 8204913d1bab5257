// Projective computational-basis measurement: exhaustive branch enumeration
// and seeded sampling.
#pragma once

#include <algorithm>
#include <stdexcept>
#include <vector>

#include "qshare/core/layout.hpp"
#include "qshare/core/random.hpp"
#include "qshare/core/state.hpp"

namespace qshare {

// Branches with probability below this are dropped as roundoff artifacts.
inline constexpr double kBranchCutoff = 1e-14;

struct Branch {
    std::vector<int> outcomes;   // one local basis index per measured subsystem
    double probability = 0.0;
    StateVector collapsed;       // full layout, measured subsystems pinned
};

struct BranchSet {
    std::vector<int> targets;
    std::vector<Branch> branches;

    double total_probability() const {
        double s = 0.0;
        for (const Branch& b : branches) s += b.probability;
        return s;
    }
};

// All joint outcomes of measuring `targets` in the computational basis.
// Probabilities are squared norms of the projected components; collapsed
// states keep the full layout with the measured subsystems pinned.
inline BranchSet enumerate_branches(const StateVector& psi, const std::vector<int>& targets,
                                    double cutoff = kBranchCutoff) {
    const HilbertLayout& L = psi.layout();
    if (targets.empty())
        throw std::invalid_argument("enumerate_branches: no targets");
    std::vector<bool> seen(L.num_subsystems(), false);
    long outcome_count = 1;
    for (int k : targets) {
        L.check_subsystem(k);
        if (seen[k])
            throw std::invalid_argument("enumerate_branches: repeated target index");
        seen[k] = true;
        outcome_count *= L.dim(k);
    }
    if (std::abs(psi.norm() - 1.0) > 1e-9)
        throw std::invalid_argument("enumerate_branches: state not normalized");

    // outcome code = digits of targets, row-major in target-list order
    std::vector<long> code_stride(targets.size(), 1);
    for (int j = static_cast<int>(targets.size()) - 2; j >= 0; --j)
        code_stride[j] = code_stride[j + 1] * L.dim(targets[j + 1]);

    std::vector<double> prob(outcome_count, 0.0);
    std::vector<Vector> proj(outcome_count);
    for (long code = 0; code < outcome_count; ++code)
        proj[code] = Vector::Zero(L.total_dim());
    for (long i = 0; i < L.total_dim(); ++i) {
        long code = 0;
        for (size_t j = 0; j < targets.size(); ++j)
            code += static_cast<long>(L.digit(i, targets[j])) * code_stride[j];
        prob[code] += std::norm(psi.amps()(i));
        proj[code](i) = psi.amps()(i);
    }

    BranchSet out;
    out.targets = targets;
    for (long code = 0; code < outcome_count; ++code) {
        if (prob[code] <= cutoff) continue;
        std::vector<int> outcome(targets.size());
        for (size_t j = 0; j < targets.size(); ++j)
            outcome[j] = static_cast<int>((code / code_stride[j]) % L.dim(targets[j]));
        StateVector collapsed(L, std::move(proj[code]));
        collapsed.normalize();
        out.branches.push_back({std::move(outcome), prob[code], std::move(collapsed)});
    }

    double total = out.total_probability();
    if (std::abs(total - 1.0) > 1e-10)
        throw std::runtime_error("enumerate_branches: probabilities sum to " +
                                 std::to_string(total));
    return out;
}

// Sample one branch with its probability. Deterministic given the seed.
inline Branch measure(const StateVector& psi, const std::vector<int>& targets,
                      RandomSource& rng) {
    BranchSet set = enumerate_branches(psi, targets);
    double u = rng.next_double() * set.total_probability();
    double acc = 0.0;
    for (Branch& b : set.branches) {
        acc += b.probability;
        if (u < acc) return std::move(b);
    }
    return std::move(set.branches.back());
}

// Extract the pure state of `keep` from a state whose other subsystems are
// pinned to basis states (e.g. after measurement collapse).
inline StateVector extract_subsystem(const StateVector& psi, const std::vector<int>& keep) {
    const HilbertLayout& L = psi.layout();
    HilbertLayout kept = detail::sublayout(L, keep);
    std::vector<bool> is_kept(L.num_subsystems(), false);
    for (int k : keep) is_kept[k] = true;

    // Locate the pinned digits from the dominant amplitude.
    long imax = 0;
    psi.amps().cwiseAbs().maxCoeff(&imax);
    std::vector<int> pinned = L.decode(imax);

    Vector out = Vector::Zero(kept.total_dim());
    for (long i = 0; i < L.total_dim(); ++i) {
        bool matches = true;
        for (int k = 0; k < L.num_subsystems() && matches; ++k)
            if (!is_kept[k] && L.digit(i, k) != pinned[k]) matches = false;
        if (matches) {
            out(detail::project_index(L, kept, keep, i)) = psi.amps()(i);
        } else if (std::abs(psi.amps()(i)) > 1e-10) {
            throw std::runtime_error(
                "extract_subsystem: state is not a basis product over the other subsystems");
        }
    }
    return StateVector(std::move(kept), std::move(out));
}

}  // namespace qshare
