#pragma once

#include <compare>
#include <cstdint>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace primegap {

// Small exact rational p/q with q > 0 and gcd(p, q) = 1. Used for the
// user-facing offsets and cutoffs (beta, c); anything that can overflow is
// lifted to mpq_class first.
class Rational {
public:
    constexpr Rational() = default;
    Rational(std::int64_t num, std::int64_t den = 1);

    static Rational parse(std::string_view text);

    std::int64_t num() const noexcept { return num_; }
    std::int64_t den() const noexcept { return den_; }

    bool is_zero() const noexcept { return num_ == 0; }
    bool is_integer() const noexcept { return den_ == 1; }
    double to_double() const noexcept { return static_cast<double>(num_) / static_cast<double>(den_); }
    long double to_long_double() const noexcept {
        return static_cast<long double>(num_) / static_cast<long double>(den_);
    }
    mpq_class to_mpq() const;

    // floor and ceiling of the represented value
    std::int64_t floor() const noexcept;
    std::int64_t ceil() const noexcept;

    std::string str() const;

    friend bool operator==(const Rational&, const Rational&) = default;
    friend std::strong_ordering operator<=>(const Rational& a, const Rational& b) noexcept;

private:
    std::int64_t num_ = 0;
    std::int64_t den_ = 1;
};

}  // namespace primegap
