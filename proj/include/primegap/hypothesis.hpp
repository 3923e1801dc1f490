#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "primegap/irrational.hpp"
#include "primegap/sequences.hpp"
#include "primegap/sieve.hpp"
#include "primegap/tuples.hpp"

namespace primegap {

// Window end 2x is capped like the sieve so no scan outruns 64-bit indices.
inline constexpr std::int64_t kMaxWindowEnd = 4'000'000'000LL;

struct ResidueRow {
    std::uint64_t q = 1;
    std::uint64_t phi_q = 1;
    double max_error = 0.0;
    std::uint64_t argmax_a = 0;
};

// Error sums over moduli q <= x^theta for counts of A(x) = A in [x, 2x).
struct HypothesisReport {
    std::string statistic;  // "part1" or "part2"
    std::int64_t x = 0;
    double theta = 0.0;
    std::uint64_t q_max = 1;
    std::int64_t shift = 0;  // l in L(n) = n + l, part 2 only
    std::vector<ResidueRow> rows;
    double total = 0.0;
    std::uint64_t count_a = 0;  // #A(x)
    std::uint64_t count_p = 0;  // #{n in A(x) : n + l prime}, part 2 only
    double normalized = 0.0;    // total / #A(x) for part 1, total / count_p for part 2
};

// min(1/(2 tau_hat) - 0.01, 0.45)
double default_theta(const BeattySpec& spec);
// largest integer <= x^theta, at least 1
std::uint64_t q_limit(std::int64_t x, double theta);

// sum_{q <= x^theta} max_a |#A(x; q, a) - #A(x)/q|
HypothesisReport hyp1_part1(const BeattySpec& spec, std::int64_t x, double theta);
// sum_{q <= x^theta} max_{(l + a, q) = 1} |#P(x; q, a) - #P(x)/phi(q)| with
// P(x; q, a) the n in A(x), n = a mod q, with n + l prime
HypothesisReport hyp1_part2(const BeattySpec& spec, const PrimeTable& table, std::int64_t shift, std::int64_t x,
                            double theta);

struct Concentration {
    std::int64_t x = 0;
    double theta = 0.0;
    std::uint64_t q_max = 1;
    std::uint64_t count_a = 0;
    double ratio = 1.0;  // max over q <= x^theta and a of q #A(x; q, a) / #A(x)
    std::uint64_t q = 1;
    std::uint64_t a = 0;
};

Concentration hyp1_part3(const BeattySpec& spec, std::int64_t x, double theta);

// ---------------------------------------------------------------------------

struct LambdaSumOptions {
    bool decompose = false;
    std::optional<double> delta;     // default N^(-1/4), clamped to the admissible range
    std::optional<std::int64_t> K;   // default max(64, ceil(8/delta))
    double epsilon = 0.1;            // split between small and large k at M^epsilon
};

// Smoothed-indicator expansion of the sum. With x_m = (m - beta + c)/alpha,
// gamma = c/alpha and psi the indicator of (0, gamma]:
//   S = sum Lambda(m) psi(x_m)
//     = gamma psi(M; q, a) + sum_{k <= K} 2 Re(g_k U_k) + boundary + tail
// where U_k = sum Lambda(m) e(k x_m) and boundary = sum Lambda(m)(psi - psi_Delta)(x_m).
struct LambdaDecomposition {
    double delta = 0.0;
    std::int64_t K = 0;
    std::int64_t k_split = 0;
    double gamma_term = 0.0;
    double small_k = 0.0;
    double large_k = 0.0;
    double large_k_trivial = 0.0;  // sum over k_split < k <= K of 2|g_k| psi(M; q, a)
    double boundary = 0.0;
    double boundary_weight = 0.0;  // sum of Lambda(m) over m with x_m near a jump
    std::uint64_t exceptional_count = 0;  // V: m <= M with {x_m} within delta of 0 or gamma
    double tail_bound = 0.0;              // 4 psi(M; q, a) / (pi^2 K delta)
    double residual = 0.0;                // S - (gamma_term + small_k + large_k + boundary)
    bool within_tail() const noexcept;
};

struct LambdaSumReport {
    std::int64_t N = 0;
    std::uint64_t q = 1;
    std::uint64_t a = 0;
    std::int64_t M = 0;  // floor(alpha N + beta)
    double S = 0.0;
    double chebyshev = 0.0;  // psi(M; q, a)
    double main_term = 0.0;  // (c/alpha) psi(M; q, a)
    double error = 0.0;      // S - main_term
    double relative_error = 0.0;
    std::optional<LambdaDecomposition> decomposition;
};

// S = sum over n <= N with floor(alpha n + beta) = a mod q and
// {alpha n + beta} < c of Lambda(floor(alpha n + beta)).
LambdaSumReport lambda_beatty_sum(const BeattySpec& spec, const PrimeTable& table, std::int64_t N, std::uint64_t q,
                                  std::uint64_t a, const LambdaSumOptions& options = {});

struct TwistedSum {
    std::uint64_t M = 0;
    double magnitude = 0.0;  // |sum_{m <= M, m = a (q)} Lambda(m) e(gamma k m)|
    double trivial = 0.0;    // psi(M; q, a)
    double eta_hat = 0.0;    // 1 - log(magnitude)/log(M)
};

TwistedSum twisted_lambda_sum(const PrimeTable& table, std::uint64_t M, std::uint64_t q, std::uint64_t a,
                              const IrrationalSpec& gamma, std::int64_t k);

// (m, Lambda(m)) for prime powers m <= M with m = a mod q, ascending
std::vector<std::pair<std::uint64_t, double>> lambda_support(const PrimeTable& table, std::uint64_t M, std::uint64_t q,
                                                             std::uint64_t a);

// ---------------------------------------------------------------------------

struct ClusterExemplar {
    std::int64_t anchor = 0;  // n for tuples, the term t for Leitmann windows
    std::int64_t index = 0;   // witness index of the anchor
    std::vector<std::int64_t> primes;
};

struct ClusterReport {
    std::string kind;  // "beatty" or "leitmann"
    std::vector<std::int64_t> shifts;
    std::int64_t lo = 0;
    std::int64_t hi = 0;
    std::size_t m = 0;
    std::uint64_t scanned = 0;
    std::uint64_t count = 0;
    std::int64_t diameter = 0;
    std::size_t tuple_size = 0;
    std::vector<ClusterExemplar> exemplars;  // at most exemplar_cap, in scan order
};

inline constexpr std::size_t kExemplarCap = 100;

// n in A with lo <= n < hi having at least m primes among n + l_i. Exemplar
// primes are rechecked by Miller-Rabin and, for constructed tuples, by
// membership in the Beatty sequence.
ClusterReport cluster_search_range(const BeattySpec& spec, const PrimeTable& table, const LinearFormTuple& tuple,
                                   std::int64_t lo, std::int64_t hi, std::size_t m,
                                   std::size_t exemplar_cap = kExemplarCap);
// range [x, 2x)
ClusterReport cluster_search(const BeattySpec& spec, const PrimeTable& table, const LinearFormTuple& tuple,
                             std::int64_t x, std::size_t m, std::size_t exemplar_cap = kExemplarCap);

// Leitmann terms t in [lo, hi) with at least m primes in [t, t + window].
ClusterReport leitmann_interval_search(const LeitmannFunction& f, const PrimeTable& table, std::int64_t lo,
                                       std::int64_t hi, std::size_t m, std::int64_t window,
                                       std::size_t exemplar_cap = kExemplarCap);

struct LeitmannPntReport {
    std::int64_t x = 0;
    std::uint64_t q_max = 1;
    std::int64_t shift = 0;
    std::uint64_t pi_f = 0;  // primes p <= x of the form floor(f(n)) + shift
    double li = 0.0;         // integral from f(c0) + shift to x of g'(t - shift)/log t
    double relative_error = 0.0;
    std::vector<ResidueRow> rows;  // max over (a, q) = 1 of |pi_f(x; q, a) - li/phi(q)|
    double total = 0.0;
    double g_x = 0.0;
    double normalized = 0.0;  // total / g(x)
};

LeitmannPntReport leitmann_pnt_check(const LeitmannFunction& f, const PrimeTable& table, std::int64_t x,
                                     std::uint64_t q_max, std::int64_t shift = 0);

// ---------------------------------------------------------------------------

struct LogLogFit {
    double slope = 0.0;
    double intercept = 0.0;
    std::vector<double> residuals;
};

// least-squares line through (log x_i, log y_i); at least 3 points, y_i > 0
LogLogFit fit_loglog(const std::vector<double>& xs, const std::vector<double>& ys);

}  // namespace primegap
