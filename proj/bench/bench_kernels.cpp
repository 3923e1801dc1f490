// Times the OpenMP kernels against the serial reference versions and checks
// that both give the same answer. Usage: primegap_bench [--threads N] [--scale S]

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "primegap/equidistribution.hpp"
#include "primegap/hypothesis.hpp"
#include "primegap/parallel.hpp"
#include "primegap/reference.hpp"
#include "primegap/sequences.hpp"
#include "primegap/sieve.hpp"

using namespace primegap;

namespace {

double seconds(const std::function<void()>& fn, int reps = 3) {
    double best = 1e300;
    for (int i = 0; i < reps; ++i) {
        const auto t0 = std::chrono::steady_clock::now();
        fn();
        best = std::min(best, std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    }
    return best;
}

void row(const std::string& name, const std::string& size, double par, double ref, bool agree) {
    std::printf("%-22s %-14s %10.4f %10.4f %8.2fx  %s\n", name.c_str(), size.c_str(), par, ref, ref / par,
                agree ? "agree" : "MISMATCH");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app("primegap kernel benchmark");
    int threads = 0;
    double scale = 1.0;
    app.add_option("--threads", threads, "worker count (0 keeps the OpenMP default)");
    app.add_option("--scale", scale, "multiplies every problem size")->capture_default_str();
    CLI11_PARSE(app, argc, argv);
    if (threads > 0) set_worker_count(threads);
    auto sz = [&](double base) { return static_cast<std::uint64_t>(std::max(16.0, base * scale)); };

    std::printf("workers: %d\n", worker_count());
    std::printf("%-22s %-14s %10s %10s %9s\n", "kernel", "size", "parallel", "serial", "speedup");

    {
        const auto n = sz(2e7);
        std::uint64_t pa = 0, pr = 0;
        const double tp = seconds([&] { pa = PrimeTable::build(n).pi(n); });
        const double tr = seconds([&] {
            const auto f = reference::sieve(n);
            pr = reference::prime_count(f, n);
        });
        row("sieve", std::to_string(n), tp, tr, pa == pr);
    }
    {
        const auto n = sz(5e6);
        const auto table = PrimeTable::build(n);
        const auto flags = reference::sieve(n);
        double a = 0, b = 0;
        const double tp = seconds([&] { a = table.chebyshev_sum(n, 7, 3); });
        const double tr = seconds([&] { b = reference::chebyshev_sum(flags, n, 7, 3); });
        row("chebyshev_sum", std::to_string(n), tp, tr, std::fabs(a - b) <= 1e-9 * b);
    }
    {
        const auto n = sz(2e6);
        const auto seq = UnitSequence::scaled_beatty(IrrationalSpec::sqrt2(), 3, n);
        std::complex<double> a, b;
        const double tp = seconds([&] { a = exp_sum(seq.values, 17); });
        const double tr = seconds([&] { b = reference::exp_sum(seq.values, 17); });
        row("exp_sum", std::to_string(n), tp, tr, std::abs(a - b) <= 1e-9 * static_cast<double>(n));
    }
    {
        const auto n = sz(300);
        const auto seq = UnitSequence::scaled_beatty(IrrationalSpec::parse("pi"), 1, n);
        double a = 0, b = 0;
        const double tp = seconds([&] { a = discrepancy_extreme(seq.values); });
        const double tr = seconds([&] { b = reference::discrepancy_extreme(seq.values); }, 1);
        row("discrepancy_extreme", std::to_string(n), tp, tr, std::fabs(a - b) <= 1e-12);
    }
    {
        const BeattySpec spec(IrrationalSpec::sqrt2(), Rational(0), Rational(1, 2));
        const auto n = static_cast<std::int64_t>(sz(2e6));
        bool same = false;
        const double tp = seconds([&] { same = beatty_terms(spec, 1, n).size() > 0; });
        std::vector<std::int64_t> r;
        const double tr = seconds([&] { r = reference::beatty_terms(spec, 1, n); });
        same = same && beatty_terms(spec, 1, n) == r;
        row("beatty_terms", std::to_string(n), tp, tr, same);
    }
    {
        const BeattySpec spec(IrrationalSpec::sqrt2(), Rational(0), Rational(1, 2));
        const auto x = static_cast<std::int64_t>(sz(1e6));
        HypothesisReport h;
        double ref = 0;
        const double tp = seconds([&] { h = hyp1_part1(spec, x, 0.3); });
        const double tr = seconds([&] { ref = reference::hyp1_part1_total(spec, x, h.q_max); }, 1);
        row("hyp1_part1", std::to_string(x), tp, tr, std::fabs(h.total - ref) <= 1e-9 * std::max(1.0, ref));
    }
    return 0;
}
