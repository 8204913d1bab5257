// Tensor-product bookkeeping for composite finite-dimensional systems.
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace qshare {

// Ordered subsystem dimensions of a composite Hilbert space.
//
// Flat basis indices are row-major over the dims: subsystem 0 varies
// slowest. Local basis order is |e> -> 0, |g> -> 1 for a two-level atom
// and Fock |n> -> n for a cavity mode.
class HilbertLayout {
public:
    explicit HilbertLayout(std::vector<int> dims) : dims_(std::move(dims)) {
        if (dims_.empty())
            throw std::invalid_argument("HilbertLayout: empty dimension list");
        total_ = 1;
        for (int d : dims_) {
            if (d < 2)
                throw std::invalid_argument("HilbertLayout: subsystem dimension " +
                                            std::to_string(d) + " < 2");
            total_ *= static_cast<long>(d);
        }
        strides_.assign(dims_.size(), 1);
        for (int k = static_cast<int>(dims_.size()) - 2; k >= 0; --k)
            strides_[k] = strides_[k + 1] * dims_[k + 1];
    }

    int num_subsystems() const { return static_cast<int>(dims_.size()); }
    long total_dim() const { return total_; }
    const std::vector<int>& dims() const { return dims_; }

    int dim(int k) const {
        check_subsystem(k);
        return dims_[k];
    }

    long stride(int k) const {
        check_subsystem(k);
        return strides_[k];
    }

    // Local basis index of subsystem k inside flat index i.
    int digit(long i, int k) const {
        check_subsystem(k);
        return static_cast<int>((i / strides_[k]) % dims_[k]);
    }

    long index_of(const std::vector<int>& digits) const {
        if (static_cast<int>(digits.size()) != num_subsystems())
            throw std::invalid_argument("HilbertLayout: digit count mismatch");
        long i = 0;
        for (int k = 0; k < num_subsystems(); ++k) {
            if (digits[k] < 0 || digits[k] >= dims_[k])
                throw std::out_of_range("HilbertLayout: digit out of range");
            i += digits[k] * strides_[k];
        }
        return i;
    }

    std::vector<int> decode(long i) const {
        std::vector<int> digits(dims_.size());
        for (int k = 0; k < num_subsystems(); ++k)
            digits[k] = digit(i, k);
        return digits;
    }

    void check_subsystem(int k) const {
        if (k < 0 || k >= num_subsystems())
            throw std::out_of_range("HilbertLayout: subsystem index " +
                                    std::to_string(k) + " out of range");
    }

    friend bool operator==(const HilbertLayout& a, const HilbertLayout& b) {
        return a.dims_ == b.dims_;
    }
    friend bool operator!=(const HilbertLayout& a, const HilbertLayout& b) {
        return !(a == b);
    }

private:
    std::vector<int> dims_;
    std::vector<long> strides_;
    long total_ = 1;
};

inline HilbertLayout concat(const HilbertLayout& a, const HilbertLayout& b) {
    std::vector<int> dims = a.dims();
    dims.insert(dims.end(), b.dims().begin(), b.dims().end());
    return HilbertLayout(std::move(dims));
}

}  // namespace qshare
