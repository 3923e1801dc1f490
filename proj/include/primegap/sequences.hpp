#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "primegap/irrational.hpp"
#include "primegap/jet.hpp"
#include "primegap/rational.hpp"

namespace primegap {

// One materialized term with the index that produced it and a double
// approximation of the fractional part left over by the floor.
struct WindowEntry {
    std::int64_t n = 0;
    std::int64_t term = 0;
    double frac = 0.0;
};

// Terms of a sequence falling in [lo, hi), strictly increasing. When several
// indices give the same term the smallest index is kept as witness.
struct SequenceWindow {
    std::int64_t lo = 0;
    std::int64_t hi = 0;
    std::vector<WindowEntry> entries;

    std::size_t size() const noexcept { return entries.size(); }
    std::vector<std::int64_t> terms() const;
};

// ---------------------------------------------------------------------------
// Beatty sets  A = { floor(alpha*n + beta) : n >= 1, {alpha*n + beta} < c }

class BeattySpec {
public:
    // requires alpha > 0 and 0 < c <= 1
    explicit BeattySpec(IrrationalSpec alpha, Rational beta = Rational(0), Rational c = Rational(1));

    const IrrationalSpec& alpha() const noexcept { return alpha_; }
    const IrrationalSpec& alpha_inverse() const noexcept { return inverse_; }
    const Rational& beta() const noexcept { return beta_; }
    const Rational& c() const noexcept { return c_; }
    // c / alpha as a double, the asymptotic density of the set
    double density() const;
    std::string str() const;

private:
    IrrationalSpec alpha_;
    IrrationalSpec inverse_;
    Rational beta_;
    Rational c_;
};

std::int64_t beatty_term(const BeattySpec& spec, std::int64_t n);

// Members of A in [lo, hi) with witnesses. lo >= 1.
SequenceWindow beatty_window(const BeattySpec& spec, std::int64_t lo, std::int64_t hi);
// Members only; same order as beatty_window but without witnesses.
std::vector<std::int64_t> beatty_terms(const BeattySpec& spec, std::int64_t lo, std::int64_t hi);

struct Membership {
    bool member = false;
    std::optional<std::int64_t> witness;
};

// Decides m in A from the fractional part of (m - beta + c)/alpha alone and
// re-verifies the reconstructed witness by direct evaluation.
Membership beatty_membership(const BeattySpec& spec, std::int64_t m);

// #{ m in A : 1 <= m <= x, m = a mod q }
std::uint64_t beatty_count_ap(const BeattySpec& spec, std::int64_t x, std::int64_t q, std::int64_t a);
// #{ m in A : x <= m < 2x, m = a mod q }
std::uint64_t beatty_window_count_ap(const BeattySpec& spec, std::int64_t x, std::int64_t q,
                                     std::int64_t a);

// ---------------------------------------------------------------------------
// Leitmann functions

enum class LeitmannKind { Power, LogPower, ExpLog, IterLog, Custom };

// limits of x f^(i)(x) / f^(i-1)(x) for i = 1, 2, 3
struct LeitmannExponents {
    double a1 = 1.0;
    double a2 = 0.0;
    double a3 = -1.0;
};

class LeitmannFunction {
public:
    using JetFn = std::function<Jet(const Jet&)>;
    // rigorous lower and upper bounds on f(n); needed for certified floors
    using Enclosure = std::function<std::pair<long double, long double>(std::uint64_t n)>;

    // n^gamma, 1 < gamma < 12/11
    static LeitmannFunction power(double gamma);
    // x (log x)^C, C > 0
    static LeitmannFunction log_power(double C);
    // x exp(C (log x)^B), C > 0, 0 < B < 1
    static LeitmannFunction exp_log(double C, double B);
    // x log log ... log x with m logs, m >= 1
    static LeitmannFunction iter_log(int m);
    static LeitmannFunction custom(std::string label, JetFn f, std::uint64_t c0, LeitmannExponents declared,
                                   Enclosure enclose = {});
    // power:G | logpow:C | explog:C,B | iterlog:m
    static LeitmannFunction parse(std::string_view text);

    LeitmannKind kind() const noexcept { return kind_; }
    std::string str() const;
    std::uint64_t c0() const noexcept { return c0_; }
    const LeitmannExponents& exponents() const noexcept { return declared_; }

    double operator()(double x) const { return jet(x).v; }
    Jet jet(double x) const;
    double derivative(double x, int order) const;
    // g = f^{-1}; returns c0 for y <= f(c0)
    double inverse(double y) const;
    // g'(y) = 1 / f'(g(y))
    double inverse_derivative(double y) const;

    // Exact floor(f(n) + shift). A long double evaluation settles values far
    // from an integer; the rest go through directed-rounding enclosures
    // refined up to max_bits.
    std::int64_t floor_at(std::uint64_t n, std::int64_t shift = 0, unsigned max_bits = 4096) const;
    // {(f(n) + shift) / q} reduced at 192-bit precision, then rounded to double.
    double frac_scaled(std::uint64_t n, std::uint64_t q, std::int64_t shift = 0) const;

private:
    LeitmannFunction() = default;
    long double eval_long_double(std::uint64_t n) const;
    bool enclose_bits(std::uint64_t n, unsigned bits, std::int64_t shift, std::int64_t& floor_out) const;

    LeitmannKind kind_ = LeitmannKind::Custom;
    std::string label_;
    double p1_ = 0.0;  // gamma or C
    double p2_ = 0.0;  // B
    int m_ = 0;
    std::uint64_t c0_ = 1;
    LeitmannExponents declared_;
    JetFn custom_;
    Enclosure enclose_;
};

std::int64_t leitmann_term(const LeitmannFunction& f, std::uint64_t n);
// Terms t = floor(f(n)) with lo <= t < hi, n >= c0. Requires lo >= floor(f(c0)).
SequenceWindow leitmann_window(const LeitmannFunction& f, std::int64_t lo, std::int64_t hi);

struct RatioSample {
    double x = 0.0;
    double ratio[3] = {0.0, 0.0, 0.0};  // x f^(i) / f^(i-1)
    double st_product = 0.0;             // x f'' / f', the s(x) t(x) factor when a2 = 0
    double inverse_error = 0.0;          // |g(f(x)) - x| / x
};

struct LeitmannValidation {
    std::vector<RatioSample> samples;
    double final_deviation[3] = {0.0, 0.0, 0.0};  // |observed - declared| at the largest x
    bool st_non_increasing = true;
    std::vector<std::string> violations;
    bool ok() const noexcept { return violations.empty(); }
};

// Checks the declared exponent constraints and samples the growth, convexity
// and ratio conditions on the grid. Throws ValidationFailed listing every
// violated clause unless report_only is set.
LeitmannValidation leitmann_validate(const LeitmannFunction& f, const std::vector<double>& grid,
                                     bool report_only = false);

// integral from c to x of g'(t)/log t dt, relative tolerance 1e-9. With a
// shift l the function is f + l, whose inverse derivative is g'(t - l).
double leitmann_li(const LeitmannFunction& f, double c, double x, std::int64_t shift = 0);
// lower limit c = f(c0)
double leitmann_li(const LeitmannFunction& f, double x);

}  // namespace primegap
