#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <gmpxx.h>

#include "primegap/rational.hpp"

namespace primegap {

inline constexpr unsigned kDefaultPrecisionBudget = 16384;

struct Convergent {
    std::size_t index = 0;
    mpz_class p;  // numerator p_k
    mpz_class q;  // denominator q_k
    mpz_class a;  // partial quotient a_k
};

enum class IrrationalKind { QuadraticSurd, NamedConstant, Generator };
enum class NamedConstant { Pi, E };

// Produces a_k given the convergents 0..k-1 already generated. Must describe
// an infinite expansion: a_k >= 1 for every k >= 1.
using QuotientGenerator =
    std::function<mpz_class(std::size_t k, std::span<const Convergent> prefix)>;

// An irrational real number that answers floor and comparison queries
// exactly. Quadratic surds are decided by exact integer arithmetic; named
// constants and generators go through rational enclosures refined until the
// answer is certified or the precision budget runs out.
//
// Values are immutable and cheap to copy; enclosure caches are internally
// synchronized so a spec can be shared across threads.
class IrrationalSpec {
public:
    class Impl;

    // (a + b*sqrt(d)) / e with d > 0 non-square, b != 0, e != 0
    static IrrationalSpec surd(const mpz_class& a, const mpz_class& b, const mpz_class& d,
                               const mpz_class& e, unsigned budget = kDefaultPrecisionBudget);
    static IrrationalSpec named(NamedConstant constant, unsigned budget = kDefaultPrecisionBudget);
    static IrrationalSpec generator(std::string label, QuotientGenerator gen,
                                    unsigned budget = kDefaultPrecisionBudget);
    // [prefix; (period)] repeated forever; period must be non-empty
    static IrrationalSpec periodic(std::vector<mpz_class> prefix, std::vector<mpz_class> period,
                                   unsigned budget = kDefaultPrecisionBudget);

    // surd:(a+b*sqrt(d))/e | pi | e | cf:[a0;a1,...,(p1,...,pm)]
    static IrrationalSpec parse(std::string_view text, unsigned budget = kDefaultPrecisionBudget);

    static IrrationalSpec sqrt2() { return surd(0, 1, 2, 1); }
    static IrrationalSpec golden_ratio() { return surd(1, 1, 5, 2); }

    IrrationalKind kind() const noexcept;
    std::string str() const;
    unsigned precision_budget() const noexcept;

    // Nearest long double to the value, with a rigorous bound on the error.
    long double approx() const noexcept;
    long double approx_error() const noexcept;

    // Exact sign of alpha*u + v. u == 0 reduces to sign(v).
    int sign_affine(const mpq_class& u, const mpq_class& v) const;
    // Exact floor of alpha*u + v.
    mpz_class floor_affine(const mpq_class& u, const mpq_class& v) const;
    // Exact test {alpha*u + v} < c.
    bool frac_less_affine(const mpq_class& u, const mpq_class& v, const mpq_class& c) const;

    // floor(alpha*n + beta); fast certified long-double path with exact fallback.
    std::int64_t floor_linear(std::int64_t n, const Rational& beta) const;
    // {alpha*n + beta} < c, decided exactly.
    bool frac_compare(std::int64_t n, const Rational& beta, const Rational& c) const;
    // floor and fractional-part test in one call; frac is a double approximation
    // of {alpha*n + beta} for reporting only.
    struct LinearEval {
        std::int64_t floor;
        bool below_cutoff;
        double frac;
    };
    LinearEval eval_linear(std::int64_t n, const Rational& beta, const Rational& c) const;

    // 1/alpha as a spec of the same kind family.
    IrrationalSpec reciprocal() const;

    // Exact partial quotients a_0..a_{count-1}.
    std::vector<mpz_class> partial_quotients(std::size_t count) const;

    const Impl& impl() const noexcept { return *impl_; }

private:
    explicit IrrationalSpec(std::shared_ptr<const Impl> impl) : impl_(std::move(impl)) {}
    std::shared_ptr<const Impl> impl_;
};

std::vector<mpz_class> cf_expand(const IrrationalSpec& spec, std::size_t count);
std::vector<Convergent> convergents(const IrrationalSpec& spec, std::size_t count);
std::vector<Convergent> convergents_from_quotients(std::span<const mpz_class> quotients);

std::int64_t floor_linear(const IrrationalSpec& spec, std::int64_t n, const Rational& beta);
bool frac_compare(const IrrationalSpec& spec, std::int64_t n, const Rational& beta,
                  const Rational& c);

struct TypeLevel {
    std::size_t k;
    mpz_class next_quotient;  // a_{k+1}
    mpz_class denominator;    // q_k
    double correction;        // log a_{k+1} / log q_k
};

// Prefix-based type estimate. tau_hat = 1 + max correction over the tail
// half of the observed levels (a finite stand-in for the limsup);
// prefix_max uses every level with q_k > 1.
struct TypeEstimate {
    double tau_hat = 1.0;
    double prefix_max = 1.0;
    std::size_t tail_start = 1;
    std::vector<TypeLevel> levels;
};

TypeEstimate estimate_type(const IrrationalSpec& spec, std::size_t depth);

// natural log of a positive big integer
double log_mpz(const mpz_class& x);

}  // namespace primegap
