#include "primegap/hypothesis.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

#include "primegap/errors.hpp"
#include "primegap/parallel.hpp"
#include "primegap/smoothing.hpp"

namespace primegap {

namespace {

std::uint64_t residue(std::int64_t v, std::uint64_t q) {
    const auto r = v % static_cast<std::int64_t>(q);
    return static_cast<std::uint64_t>(r < 0 ? r + static_cast<std::int64_t>(q) : r);
}

void check_window(std::int64_t x) {
    if (x < 2) throw InvalidArgument("x must be at least 2");
    if (x > kMaxWindowEnd / 2) throw CapacityExceeded("window [x, 2x) exceeds " + std::to_string(kMaxWindowEnd));
}

void check_theta(double theta) {
    if (!(theta > 0.0) || theta >= 1.0) throw InvalidArgument("theta must lie in (0, 1)");
}

// counts[a] of values = a mod q
std::vector<std::uint64_t> residue_counts(const std::vector<std::int64_t>& values, std::uint64_t q) {
    std::vector<std::uint64_t> counts(q, 0);
    for (const auto v : values) ++counts[residue(v, q)];
    return counts;
}

}  // namespace

double default_theta(const BeattySpec& spec) {
    const double tau = estimate_type(spec.alpha(), 30).tau_hat;
    return std::min(1.0 / (2.0 * tau) - 0.01, 0.45);
}

std::uint64_t q_limit(std::int64_t x, double theta) {
    auto q = static_cast<std::uint64_t>(std::floor(std::pow(static_cast<double>(x), theta)));
    // pow can land a hair on either side of an exact integer power
    const auto fits = [&](std::uint64_t v) {
        return std::log(static_cast<double>(v)) <= theta * std::log(static_cast<double>(x)) + 1e-12;
    };
    while (q > 1 && !fits(q)) --q;
    while (fits(q + 1)) ++q;
    return std::max<std::uint64_t>(q, 1);
}

HypothesisReport hyp1_part1(const BeattySpec& spec, std::int64_t x, double theta) {
    check_window(x);
    check_theta(theta);
    HypothesisReport r;
    r.statistic = "part1";
    r.x = x;
    r.theta = theta;
    r.q_max = q_limit(x, theta);
    const auto terms = beatty_terms(spec, x, 2 * x);
    r.count_a = terms.size();
    r.rows.resize(r.q_max);
    const double total_a = static_cast<double>(terms.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t qi = 1; qi <= static_cast<std::int64_t>(r.q_max); ++qi) {
        const auto q = static_cast<std::uint64_t>(qi);
        const auto counts = residue_counts(terms, q);
        ResidueRow row;
        row.q = q;
        row.phi_q = euler_phi(q);
        const double expected = total_a / static_cast<double>(q);
        for (std::uint64_t a = 0; a < q; ++a) {
            const double e = std::fabs(static_cast<double>(counts[a]) - expected);
            if (e > row.max_error) {
                row.max_error = e;
                row.argmax_a = a;
            }
        }
        r.rows[q - 1] = row;
    }
    CompensatedSum total;
    for (const auto& row : r.rows) total.add(row.max_error);
    r.total = total.value();
    r.normalized = r.count_a ? r.total / total_a : 0.0;
    return r;
}

HypothesisReport hyp1_part2(const BeattySpec& spec, const PrimeTable& table, std::int64_t shift, std::int64_t x,
                            double theta) {
    check_window(x);
    check_theta(theta);
    if (2 * x + shift > static_cast<std::int64_t>(table.limit()))
        throw CapacityExceeded("2x + l = " + std::to_string(2 * x + shift) + " exceeds the prime table limit " +
                               std::to_string(table.limit()));
    HypothesisReport r;
    r.statistic = "part2";
    r.x = x;
    r.theta = theta;
    r.shift = shift;
    r.q_max = q_limit(x, theta);
    const auto terms = beatty_terms(spec, x, 2 * x);
    r.count_a = terms.size();
    std::vector<std::int64_t> hits;
    for (const auto n : terms) {
        const std::int64_t v = n + shift;
        if (v >= 2 && table.is_prime(static_cast<std::uint64_t>(v))) hits.push_back(n);
    }
    r.count_p = hits.size();
    r.rows.resize(r.q_max);
    const double total_p = static_cast<double>(hits.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t qi = 1; qi <= static_cast<std::int64_t>(r.q_max); ++qi) {
        const auto q = static_cast<std::uint64_t>(qi);
        const auto counts = residue_counts(hits, q);
        ResidueRow row;
        row.q = q;
        row.phi_q = euler_phi(q);
        const double expected = total_p / static_cast<double>(row.phi_q);
        const std::uint64_t l_mod = residue(shift, q);
        for (std::uint64_t a = 0; a < q; ++a) {
            if (gcd_u64((l_mod + a) % q, q) != 1) continue;
            const double e = std::fabs(static_cast<double>(counts[a]) - expected);
            if (e > row.max_error) {
                row.max_error = e;
                row.argmax_a = a;
            }
        }
        r.rows[q - 1] = row;
    }
    CompensatedSum total;
    for (const auto& row : r.rows) total.add(row.max_error);
    r.total = total.value();
    r.normalized = r.count_p ? r.total / total_p : 0.0;
    return r;
}

Concentration hyp1_part3(const BeattySpec& spec, std::int64_t x, double theta) {
    check_window(x);
    check_theta(theta);
    Concentration c;
    c.x = x;
    c.theta = theta;
    c.q_max = q_limit(x, theta);
    const auto terms = beatty_terms(spec, x, 2 * x);
    c.count_a = terms.size();
    if (terms.empty()) throw InsufficientElements("A(x) is empty");
    std::vector<std::pair<std::uint64_t, std::uint64_t>> best(c.q_max);  // (max count, a) per q
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t qi = 1; qi <= static_cast<std::int64_t>(c.q_max); ++qi) {
        const auto q = static_cast<std::uint64_t>(qi);
        const auto counts = residue_counts(terms, q);
        const auto it = std::max_element(counts.begin(), counts.end());
        best[q - 1] = {*it, static_cast<std::uint64_t>(it - counts.begin())};
    }
    c.ratio = 0.0;
    for (std::uint64_t q = 1; q <= c.q_max; ++q) {
        const double ratio = static_cast<double>(q) * static_cast<double>(best[q - 1].first) /
                             static_cast<double>(c.count_a);
        if (ratio > c.ratio) {
            c.ratio = ratio;
            c.q = q;
            c.a = best[q - 1].second;
        }
    }
    return c;
}

// ---------------------------------------------------------------------------

bool LambdaDecomposition::within_tail() const noexcept {
    return std::fabs(residual) <= tail_bound + 1e-9 * std::max(1.0, std::fabs(gamma_term));
}

std::vector<std::pair<std::uint64_t, double>> lambda_support(const PrimeTable& table, std::uint64_t M,
                                                             std::uint64_t q, std::uint64_t a) {
    if (q == 0 || a >= q) throw InvalidArgument("residue class requires 0 <= a < q");
    if (M > table.limit())
        throw CapacityExceeded("M = " + std::to_string(M) + " exceeds the prime table limit " +
                               std::to_string(table.limit()));
    std::vector<std::pair<std::uint64_t, double>> out;
    if (M < 2) return out;
    table.for_each_prime(2, M, [&](std::uint64_t p) {
        if (p % q == a) out.emplace_back(p, std::log(static_cast<double>(p)));
    });
    const auto n_primes = out.size();
    for (const auto& [v, lp] : table.higher_prime_powers()) {
        if (v > M) break;
        if (v % q == a) out.emplace_back(v, lp);
    }
    std::inplace_merge(out.begin(), out.begin() + static_cast<std::ptrdiff_t>(n_primes), out.end());
    return out;
}

namespace {

// U_k = sum Lambda(m) e(k x_m) for k = 1..K given the fractional parts of x_m
std::vector<std::complex<double>> twisted_sums(const std::vector<std::pair<std::uint64_t, double>>& support,
                                               const std::vector<double>& phases, std::int64_t K) {
    const std::size_t chunks = chunk_count(support.size());
    const auto kk = static_cast<std::size_t>(K);
    std::vector<std::vector<std::complex<double>>> parts(chunks, std::vector<std::complex<double>>(kk));
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t ci = 0; ci < static_cast<std::int64_t>(chunks); ++ci) {
        auto& acc = parts[static_cast<std::size_t>(ci)];
        const std::size_t first = static_cast<std::size_t>(ci) * kReductionChunk;
        const std::size_t last = std::min(support.size(), first + kReductionChunk);
        for (std::size_t i = first; i < last; ++i) {
            const double t = 2.0 * std::numbers::pi * phases[i];
            const std::complex<double> z(std::cos(t), std::sin(t));
            std::complex<double> w = z;
            const double lam = support[i].second;
            for (std::size_t k = 0; k < kk; ++k) {
                // resync every 64 steps so the recurrence error stays small
                if (k % 64 == 63) {
                    const double tk = 2.0 * std::numbers::pi * std::fmod(phases[i] * static_cast<double>(k + 1), 1.0);
                    w = {std::cos(tk), std::sin(tk)};
                }
                acc[k] += lam * w;
                w *= z;
            }
        }
    }
    std::vector<std::complex<double>> out(kk);
    for (std::size_t k = 0; k < kk; ++k) {
        CompensatedComplexSum s;
        for (const auto& p : parts) s.add(p[k]);
        out[k] = s.value();
    }
    return out;
}

}  // namespace

LambdaSumReport lambda_beatty_sum(const BeattySpec& spec, const PrimeTable& table, std::int64_t N, std::uint64_t q,
                                  std::uint64_t a, const LambdaSumOptions& options) {
    if (N < 1) throw InvalidArgument("N must be positive");
    if (q == 0 || a >= q) throw InvalidArgument("residue class requires 0 <= a < q");
    if (gcd_u64(a, q) != 1) throw NotCoprime("gcd(a, q) = " + std::to_string(gcd_u64(a, q)));
    LambdaSumReport r;
    r.N = N;
    r.q = q;
    r.a = a;
    r.M = beatty_term(spec, N);
    if (r.M > static_cast<std::int64_t>(table.limit()))
        throw CapacityExceeded("floor(alpha N + beta) = " + std::to_string(r.M) + " exceeds the prime table limit " +
                               std::to_string(table.limit()));

    const auto count = static_cast<std::size_t>(N);
    const std::size_t chunks = chunk_count(count);
    std::vector<CompensatedSum> partial(chunks);
    ParallelErrors errors;
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t ci = 0; ci < static_cast<std::int64_t>(chunks); ++ci) {
        errors.guard(static_cast<std::size_t>(ci), [&] {
            const std::int64_t first = 1 + ci * static_cast<std::int64_t>(kReductionChunk);
            const std::int64_t last = std::min(N, first + static_cast<std::int64_t>(kReductionChunk) - 1);
            CompensatedSum s;
            for (std::int64_t n = first; n <= last; ++n) {
                const auto ev = spec.alpha().eval_linear(n, spec.beta(), spec.c());
                if (!ev.below_cutoff || ev.floor < 2 || residue(ev.floor, q) != a) continue;
                s.add(table.von_mangoldt(static_cast<std::uint64_t>(ev.floor)));
            }
            partial[static_cast<std::size_t>(ci)] = s;
        });
    }
    errors.rethrow();
    CompensatedSum S;
    for (const auto& s : partial) S.add(s);
    r.S = S.value();
    r.chebyshev = r.M >= 2 ? table.chebyshev_sum(static_cast<std::uint64_t>(r.M), q, a) : 0.0;
    r.main_term = spec.density() * r.chebyshev;
    r.error = r.S - r.main_term;
    r.relative_error = r.main_term != 0.0 ? r.error / r.main_term : 0.0;
    if (!options.decompose) return r;

    // m in A iff 0 < {x_m} <= gamma needs every witness n = floor(x_m) >= 1,
    // which holds for alpha > 1 and 0 <= beta < 1.
    if (spec.alpha().sign_affine(1, -1) <= 0) throw InvalidArgument("decomposition needs alpha > 1");
    if (spec.beta() < Rational(0) || spec.beta() >= Rational(1))
        throw InvalidArgument("decomposition needs 0 <= beta < 1");
    const double gamma = spec.density();
    LambdaDecomposition d;
    PsiDelta pd;
    if (options.delta) {
        pd = PsiDelta::make(gamma, *options.delta);
    } else {
        pd = PsiDelta::make(gamma, PsiDelta::clamp_delta(gamma, std::pow(static_cast<double>(N), -0.25)));
    }
    d.delta = pd.delta;
    d.K = options.K ? *options.K : std::max<std::int64_t>(64, static_cast<std::int64_t>(std::ceil(8.0 / d.delta)));
    if (d.K < 1) throw InvalidArgument("K must be positive");
    if (!(options.epsilon >= 0.0) || options.epsilon >= 1.0) throw InvalidArgument("epsilon must lie in [0, 1)");
    d.k_split = std::min<std::int64_t>(
        d.K, static_cast<std::int64_t>(std::floor(std::pow(static_cast<double>(r.M), options.epsilon))));

    const auto M = static_cast<std::uint64_t>(std::max<std::int64_t>(r.M, 0));
    const auto support = lambda_support(table, M, q, a);
    const long double inv = spec.alpha_inverse().approx();
    const long double shift = spec.c().to_long_double() - spec.beta().to_long_double();
    const auto frac_x = [&](std::uint64_t m) {
        const long double v = (static_cast<long double>(m) + shift) * inv;
        return static_cast<double>(v - std::floor(v));
    };
    // inside a ramp of psi_Delta, with a little slack for the long double phase
    const double slack = 1e-9;
    const auto near_jump = [&](double f) {
        return f < d.delta + slack || f > 1.0 - d.delta - slack || std::fabs(f - gamma) < d.delta + slack;
    };

    std::vector<double> phases(support.size());
    CompensatedSum psi_sum, boundary, boundary_weight;
    for (std::size_t i = 0; i < support.size(); ++i) {
        phases[i] = frac_x(support[i].first);
        psi_sum.add(support[i].second);
        if (!near_jump(phases[i])) continue;
        const bool member = beatty_membership(spec, static_cast<std::int64_t>(support[i].first)).member;
        boundary.add(support[i].second * ((member ? 1.0 : 0.0) - psi_delta_eval(pd, phases[i])));
        boundary_weight.add(support[i].second);
    }
    std::uint64_t exceptional = 0;
#pragma omp parallel for reduction(+ : exceptional)
    for (std::int64_t m = 1; m <= static_cast<std::int64_t>(M); ++m) {
        const double f = frac_x(static_cast<std::uint64_t>(m));
        if (f < d.delta || f > 1.0 - d.delta || std::fabs(f - gamma) < d.delta) ++exceptional;
    }
    d.exceptional_count = exceptional;
    d.boundary = boundary.value();
    d.boundary_weight = boundary_weight.value();

    const double psi_total = psi_sum.value();
    d.gamma_term = gamma * psi_total;
    const auto U = twisted_sums(support, phases, d.K);
    CompensatedSum small, large, large_trivial;
    for (std::int64_t k = 1; k <= d.K; ++k) {
        const auto g = psi_delta_fourier(pd, k).g;
        const double term = 2.0 * (g * U[static_cast<std::size_t>(k - 1)]).real();
        if (k <= d.k_split) {
            small.add(term);
        } else {
            large.add(term);
            large_trivial.add(2.0 * std::abs(g) * psi_total);
        }
    }
    d.small_k = small.value();
    d.large_k = large.value();
    d.large_k_trivial = large_trivial.value();
    d.tail_bound = 4.0 * psi_total / (std::numbers::pi * std::numbers::pi * static_cast<double>(d.K) * d.delta);
    d.residual = r.S - (d.gamma_term + d.small_k + d.large_k + d.boundary);
    r.decomposition = d;
    return r;
}

TwistedSum twisted_lambda_sum(const PrimeTable& table, std::uint64_t M, std::uint64_t q, std::uint64_t a,
                              const IrrationalSpec& gamma, std::int64_t k) {
    if (M < 2) throw InvalidArgument("M must be at least 2");
    if (k == 0) throw InvalidArgument("k must be non-zero");
    const auto support = lambda_support(table, M, q, a);
    long double t = gamma.approx() * static_cast<long double>(k);
    t -= std::floor(t);
    const std::size_t chunks = chunk_count(support.size());
    std::vector<CompensatedComplexSum> partial(chunks);
    std::vector<CompensatedSum> trivial(chunks);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t ci = 0; ci < static_cast<std::int64_t>(chunks); ++ci) {
        const std::size_t first = static_cast<std::size_t>(ci) * kReductionChunk;
        const std::size_t last = std::min(support.size(), first + kReductionChunk);
        CompensatedComplexSum s;
        CompensatedSum w;
        for (std::size_t i = first; i < last; ++i) {
            long double ph = t * static_cast<long double>(support[i].first);
            ph -= std::floor(ph);
            const double ang = 2.0 * std::numbers::pi * static_cast<double>(ph);
            s.add(support[i].second * std::complex<double>(std::cos(ang), std::sin(ang)));
            w.add(support[i].second);
        }
        partial[static_cast<std::size_t>(ci)] = s;
        trivial[static_cast<std::size_t>(ci)] = w;
    }
    CompensatedComplexSum s;
    CompensatedSum w;
    for (std::size_t i = 0; i < chunks; ++i) {
        s.add(partial[i]);
        w.add(trivial[i]);
    }
    TwistedSum out;
    out.M = M;
    out.magnitude = std::abs(s.value());
    out.trivial = w.value();
    out.eta_hat = 1.0 - std::log(std::max(out.magnitude, 1e-300)) / std::log(static_cast<double>(M));
    return out;
}

// ---------------------------------------------------------------------------

namespace {

// Per-chunk hits merged in chunk order, so exemplars follow scan order
// whatever the worker count.
template <class Entry, class Test>
void scan_clusters(const std::vector<Entry>& entries, std::size_t cap, ClusterReport& report, Test test) {
    const std::size_t chunks = chunk_count(entries.size());
    std::vector<std::uint64_t> counts(chunks, 0);
    std::vector<std::vector<ClusterExemplar>> found(chunks);
    ParallelErrors errors;
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t ci = 0; ci < static_cast<std::int64_t>(chunks); ++ci) {
        errors.guard(static_cast<std::size_t>(ci), [&] {
            const std::size_t first = static_cast<std::size_t>(ci) * kReductionChunk;
            const std::size_t last = std::min(entries.size(), first + kReductionChunk);
            auto& mine = found[static_cast<std::size_t>(ci)];
            for (std::size_t i = first; i < last; ++i) {
                ClusterExemplar ex;
                if (!test(entries[i], ex)) continue;
                ++counts[static_cast<std::size_t>(ci)];
                if (mine.size() < cap) mine.push_back(std::move(ex));
            }
        });
    }
    errors.rethrow();
    report.scanned = entries.size();
    for (std::size_t ci = 0; ci < chunks; ++ci) {
        report.count += counts[ci];
        for (auto& ex : found[ci]) {
            if (report.exemplars.size() >= cap) break;
            report.exemplars.push_back(std::move(ex));
        }
    }
}

void verify_primes(const ClusterExemplar& ex) {
    for (const auto p : ex.primes)
        if (p < 2 || !miller_rabin_is_prime(static_cast<std::uint64_t>(p)))
            throw ValidationFailed("sieve and Miller-Rabin disagree on " + std::to_string(p));
}

}  // namespace

ClusterReport cluster_search_range(const BeattySpec& spec, const PrimeTable& table, const LinearFormTuple& tuple,
                                   std::int64_t lo, std::int64_t hi, std::size_t m, std::size_t exemplar_cap) {
    if (lo < 1) throw InvalidArgument("range must start at 1 or above");
    const std::int64_t top = hi - 1 + tuple.shifts().back();
    if (hi > lo && top > static_cast<std::int64_t>(table.limit()))
        throw CapacityExceeded("n + l up to " + std::to_string(top) + " exceeds the prime table limit " +
                               std::to_string(table.limit()));
    ClusterReport r;
    r.kind = "beatty";
    r.shifts = tuple.shifts();
    r.lo = lo;
    r.hi = hi;
    r.m = m;
    r.diameter = diameter(tuple);
    r.tuple_size = tuple.size();
    const auto window = beatty_window(spec, lo, std::max(lo, hi));
    scan_clusters(window.entries, exemplar_cap, r, [&](const WindowEntry& e, ClusterExemplar& ex) {
        std::size_t hits = 0;
        for (const auto l : tuple.shifts()) {
            if (table.is_prime(static_cast<std::uint64_t>(e.term + l))) {
                ++hits;
                ex.primes.push_back(e.term + l);
            }
        }
        if (hits < m) return false;
        ex.anchor = e.term;
        ex.index = e.n;
        return true;
    });
    for (const auto& ex : r.exemplars) {
        verify_primes(ex);
        if (tuple.origin() && !closure_check(spec, tuple, ex.anchor))
            throw ValidationFailed("n + l_i left the Beatty sequence at n = " + std::to_string(ex.anchor));
    }
    return r;
}

ClusterReport cluster_search(const BeattySpec& spec, const PrimeTable& table, const LinearFormTuple& tuple,
                             std::int64_t x, std::size_t m, std::size_t exemplar_cap) {
    check_window(x);
    return cluster_search_range(spec, table, tuple, x, 2 * x, m, exemplar_cap);
}

ClusterReport leitmann_interval_search(const LeitmannFunction& f, const PrimeTable& table, std::int64_t lo,
                                       std::int64_t hi, std::size_t m, std::int64_t window, std::size_t exemplar_cap) {
    if (window < 0) throw InvalidArgument("window must be non-negative");
    if (hi > lo && hi - 1 + window > static_cast<std::int64_t>(table.limit()))
        throw CapacityExceeded("t + window up to " + std::to_string(hi - 1 + window) +
                               " exceeds the prime table limit " + std::to_string(table.limit()));
    ClusterReport r;
    r.kind = "leitmann";
    r.lo = lo;
    r.hi = hi;
    r.m = m;
    r.diameter = window;
    const auto terms = leitmann_window(f, lo, std::max(lo, hi));
    scan_clusters(terms.entries, exemplar_cap, r, [&](const WindowEntry& e, ClusterExemplar& ex) {
        for (std::int64_t v = std::max<std::int64_t>(e.term, 2); v <= e.term + window; ++v)
            if (table.is_prime(static_cast<std::uint64_t>(v))) ex.primes.push_back(v);
        if (ex.primes.size() < m) return false;
        ex.anchor = e.term;
        ex.index = e.n;
        return true;
    });
    for (const auto& ex : r.exemplars) verify_primes(ex);
    return r;
}

LeitmannPntReport leitmann_pnt_check(const LeitmannFunction& f, const PrimeTable& table, std::int64_t x,
                                     std::uint64_t q_max, std::int64_t shift) {
    if (q_max < 1) throw InvalidArgument("q_max must be positive");
    if (x > static_cast<std::int64_t>(table.limit()))
        throw CapacityExceeded("x exceeds the prime table limit " + std::to_string(table.limit()));
    const double c = f(static_cast<double>(f.c0())) + static_cast<double>(shift);
    if (static_cast<double>(x) <= c) throw InvalidArgument("x must exceed f(c0) + shift");
    LeitmannPntReport r;
    r.x = x;
    r.q_max = q_max;
    r.shift = shift;
    const auto lo = leitmann_term(f, f.c0());
    std::vector<std::int64_t> primes;
    if (x - shift + 1 > lo) {
        const auto w = leitmann_window(f, lo, x - shift + 1);
        for (const auto& e : w.entries) {
            const std::int64_t p = e.term + shift;
            if (p >= 2 && p <= x && table.is_prime(static_cast<std::uint64_t>(p))) primes.push_back(p);
        }
    }
    r.pi_f = primes.size();
    r.li = leitmann_li(f, c, static_cast<double>(x), shift);
    r.relative_error = (static_cast<double>(r.pi_f) - r.li) / r.li;
    r.rows.resize(q_max);
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t qi = 1; qi <= static_cast<std::int64_t>(q_max); ++qi) {
        const auto q = static_cast<std::uint64_t>(qi);
        const auto counts = residue_counts(primes, q);
        ResidueRow row;
        row.q = q;
        row.phi_q = euler_phi(q);
        const double expected = r.li / static_cast<double>(row.phi_q);
        for (std::uint64_t a = 0; a < q; ++a) {
            if (gcd_u64(a, q) != 1) continue;
            const double e = std::fabs(static_cast<double>(counts[a]) - expected);
            if (e > row.max_error) {
                row.max_error = e;
                row.argmax_a = a;
            }
        }
        r.rows[q - 1] = row;
    }
    CompensatedSum total;
    for (const auto& row : r.rows) total.add(row.max_error);
    r.total = total.value();
    r.g_x = f.inverse(static_cast<double>(x - shift));
    r.normalized = r.total / r.g_x;
    return r;
}

// ---------------------------------------------------------------------------

LogLogFit fit_loglog(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size()) throw InvalidArgument("fit needs matching x and y lists");
    if (xs.size() < 3) throw InvalidArgument("fit needs at least 3 points");
    const auto n = static_cast<double>(xs.size());
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (!(xs[i] > 0.0) || !(ys[i] > 0.0)) throw InvalidArgument("log-log fit needs positive values");
        lx.push_back(std::log(xs[i]));
        ly.push_back(std::log(ys[i]));
    }
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        mx += lx[i];
        my += ly[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sxx += (lx[i] - mx) * (lx[i] - mx);
        sxy += (lx[i] - mx) * (ly[i] - my);
    }
    if (sxx == 0.0) throw InvalidArgument("fit needs at least two distinct x values");
    LogLogFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = my - fit.slope * mx;
    for (std::size_t i = 0; i < lx.size(); ++i) fit.residuals.push_back(ly[i] - (fit.intercept + fit.slope * lx[i]));
    return fit;
}

}  // namespace primegap
