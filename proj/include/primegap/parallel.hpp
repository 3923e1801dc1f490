#pragma once

#include <complex>
#include <cstddef>
#include <cstdint>
#include <exception>
#include <limits>
#include <mutex>

namespace primegap {

// Worker-count control for the OpenMP kernels. Results never depend on the
// worker count: every floating reduction is split into fixed-size chunks
// whose partials are merged in chunk order.
void set_worker_count(int workers);
int worker_count();

inline constexpr std::size_t kReductionChunk = std::size_t{1} << 14;

inline std::size_t chunk_count(std::size_t n, std::size_t chunk = kReductionChunk) {
    return (n + chunk - 1) / chunk;
}

// Neumaier variant of Kahan summation.
struct CompensatedSum {
    double sum = 0.0;
    double carry = 0.0;

    void add(double x) noexcept {
        const double t = sum + x;
        if ((sum >= 0 ? sum : -sum) >= (x >= 0 ? x : -x))
            carry += (sum - t) + x;
        else
            carry += (x - t) + sum;
        sum = t;
    }
    void add(const CompensatedSum& other) noexcept {
        add(other.sum);
        add(other.carry);
    }
    double value() const noexcept { return sum + carry; }
};

struct CompensatedComplexSum {
    CompensatedSum re;
    CompensatedSum im;

    void add(std::complex<double> z) noexcept {
        re.add(z.real());
        im.add(z.imag());
    }
    void add(const CompensatedComplexSum& other) noexcept {
        re.add(other.re);
        im.add(other.im);
    }
    std::complex<double> value() const noexcept { return {re.value(), im.value()}; }
};

// Carries exceptions out of an OpenMP region. When several iterations fail
// the one with the smallest index wins, so the error is reproducible.
class ParallelErrors {
public:
    template <class F>
    void guard(std::size_t index, F&& fn) noexcept {
        try {
            fn();
        } catch (...) {
            std::lock_guard lock(mu_);
            if (index < index_) {
                index_ = index;
                first_ = std::current_exception();
            }
        }
    }
    void rethrow() const {
        if (first_) std::rethrow_exception(first_);
    }

private:
    std::mutex mu_;
    std::size_t index_ = std::numeric_limits<std::size_t>::max();
    std::exception_ptr first_;
};

}  // namespace primegap
