#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "mpfr_util.hpp"
#include "primegap/errors.hpp"
#include "primegap/parallel.hpp"
#include "primegap/sequences.hpp"

namespace primegap {

namespace {

using detail::Mpfr;

double parse_double(std::string_view s, std::string_view what) {
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v))
        throw InvalidArgument("cannot parse " + std::string(what) + " from '" + std::string(s) + "'");
    return v;
}

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

bool same(double a, double b) { return std::fabs(a - b) <= 1e-12 * std::max(1.0, std::fabs(a)); }

// f(n) for a built-in kind with every operation rounded in direction rnd.
void eval_builtin(LeitmannKind kind, double p1, double p2, int m, std::uint64_t n, unsigned bits,
                  mpfr_rnd_t rnd, mpfr_ptr out) {
    Mpfr x(bits), t(bits), e(bits);
    mpfr_set_ui(x.get(), n, MPFR_RNDN);  // exact: bits >= 64
    switch (kind) {
    case LeitmannKind::Power:
        mpfr_set_d(e.get(), p1, MPFR_RNDN);
        mpfr_pow(out, x.get(), e.get(), rnd);
        return;
    case LeitmannKind::LogPower:
        mpfr_set_d(e.get(), p1, MPFR_RNDN);
        mpfr_log(t.get(), x.get(), rnd);
        mpfr_pow(t.get(), t.get(), e.get(), rnd);
        mpfr_mul(out, t.get(), x.get(), rnd);
        return;
    case LeitmannKind::ExpLog:
        mpfr_set_d(e.get(), p2, MPFR_RNDN);
        mpfr_log(t.get(), x.get(), rnd);
        mpfr_pow(t.get(), t.get(), e.get(), rnd);
        mpfr_mul_d(t.get(), t.get(), p1, rnd);
        mpfr_exp(t.get(), t.get(), rnd);
        mpfr_mul(out, t.get(), x.get(), rnd);
        return;
    case LeitmannKind::IterLog:
        mpfr_set(t.get(), x.get(), rnd);
        for (int i = 0; i < m; ++i) mpfr_log(t.get(), t.get(), rnd);
        mpfr_mul(out, t.get(), x.get(), rnd);
        return;
    case LeitmannKind::Custom: break;
    }
    throw InvalidArgument("custom functions have no built-in evaluator");
}

}  // namespace

LeitmannFunction LeitmannFunction::power(double gamma) {
    if (!(gamma > 1.0 && gamma < 12.0 / 11.0))
        throw InvalidArgument("power exponent must satisfy 1 < gamma < 12/11, got " + fmt(gamma));
    LeitmannFunction f;
    f.kind_ = LeitmannKind::Power;
    f.label_ = "power:" + fmt(gamma);
    f.p1_ = gamma;
    f.c0_ = 2;  // 2^gamma >= 2 > 1^gamma
    f.declared_ = {gamma, gamma - 1.0, gamma - 2.0};
    return f;
}

LeitmannFunction LeitmannFunction::log_power(double C) {
    if (!(C > 0.0)) throw InvalidArgument("log-power exponent C must be positive");
    LeitmannFunction f;
    f.kind_ = LeitmannKind::LogPower;
    f.label_ = "logpow:" + fmt(C);
    f.p1_ = C;
    f.c0_ = 3;  // log x >= 1
    while (f(static_cast<double>(f.c0_)) < 2.0) ++f.c0_;
    f.declared_ = {1.0, 0.0, -1.0};
    return f;
}

LeitmannFunction LeitmannFunction::exp_log(double C, double B) {
    if (!(C > 0.0)) throw InvalidArgument("exp-log coefficient C must be positive");
    if (!(B > 0.0 && B < 1.0)) throw InvalidArgument("exp-log exponent B must lie in (0, 1)");
    LeitmannFunction f;
    f.kind_ = LeitmannKind::ExpLog;
    f.label_ = "explog:" + fmt(C) + "," + fmt(B);
    f.p1_ = C;
    f.p2_ = B;
    f.c0_ = 3;
    while (f(static_cast<double>(f.c0_)) < 2.0) ++f.c0_;
    f.declared_ = {1.0, 0.0, -1.0};
    return f;
}

LeitmannFunction LeitmannFunction::iter_log(int m) {
    // the fourth tower exp(exp(exp(e))) is far beyond 64-bit indices
    if (m < 1 || m > 3) throw InvalidArgument("iterated-log depth must be 1, 2 or 3");
    LeitmannFunction f;
    f.kind_ = LeitmannKind::IterLog;
    f.label_ = "iterlog:" + std::to_string(m);
    f.m_ = m;
    // smallest integer with l_m(x) >= 1: a tower of m e's
    long double t = 1.0L;
    for (int i = 0; i < m; ++i) t = std::exp(t);
    f.c0_ = static_cast<std::uint64_t>(std::ceil(t));
    f.declared_ = {1.0, 0.0, -1.0};
    return f;
}

LeitmannFunction LeitmannFunction::custom(std::string label, JetFn fn, std::uint64_t c0,
                                          LeitmannExponents declared, Enclosure enclose) {
    if (!fn) throw InvalidArgument("custom Leitmann function needs an evaluator");
    if (c0 < 1) throw InvalidArgument("c0 must be at least 1");
    LeitmannFunction f;
    f.kind_ = LeitmannKind::Custom;
    f.label_ = "custom:" + label;
    f.custom_ = std::move(fn);
    f.enclose_ = std::move(enclose);
    f.c0_ = c0;
    f.declared_ = declared;
    return f;
}

LeitmannFunction LeitmannFunction::parse(std::string_view text) {
    const auto colon = text.find(':');
    if (colon == std::string_view::npos) throw InvalidArgument("expected kind:params, got '" + std::string(text) + "'");
    const auto kind = text.substr(0, colon);
    const auto args = text.substr(colon + 1);
    if (kind == "power") return power(parse_double(args, "power exponent"));
    if (kind == "logpow") return log_power(parse_double(args, "log-power exponent"));
    if (kind == "explog") {
        const auto comma = args.find(',');
        if (comma == std::string_view::npos) throw InvalidArgument("explog expects C,B");
        return exp_log(parse_double(args.substr(0, comma), "C"), parse_double(args.substr(comma + 1), "B"));
    }
    if (kind == "iterlog") {
        int m = 0;
        const auto [ptr, ec] = std::from_chars(args.data(), args.data() + args.size(), m);
        if (ec != std::errc() || ptr != args.data() + args.size()) throw InvalidArgument("iterlog expects an integer depth");
        return iter_log(m);
    }
    throw InvalidArgument("unknown function kind '" + std::string(kind) + "'");
}

std::string LeitmannFunction::str() const { return label_; }

Jet LeitmannFunction::jet(double x) const {
    const Jet X = Jet::variable(x);
    switch (kind_) {
    case LeitmannKind::Power: return pow(X, p1_);
    case LeitmannKind::LogPower: return X * pow(log(X), p1_);
    case LeitmannKind::ExpLog: return X * exp(p1_ * pow(log(X), p2_));
    case LeitmannKind::IterLog: {
        Jet l = X;
        for (int i = 0; i < m_; ++i) l = log(l);
        return X * l;
    }
    case LeitmannKind::Custom: return custom_(X);
    }
    return {};
}

double LeitmannFunction::derivative(double x, int order) const {
    const Jet j = jet(x);
    switch (order) {
    case 0: return j.v;
    case 1: return j.d1;
    case 2: return j.d2;
    case 3: return j.d3;
    default: throw InvalidArgument("derivative order must be 0..3");
    }
}

double LeitmannFunction::inverse(double y) const {
    const double lo0 = static_cast<double>(c0_);
    if (y <= (*this)(lo0)) return lo0;
    if (kind_ == LeitmannKind::Power) return std::pow(y, 1.0 / p1_);
    double lo = lo0, hi = std::max(lo0 + 1.0, y);
    while ((*this)(hi) < y) hi *= 2.0;
    for (int it = 0; it < 200 && hi - lo > 1e-12 * hi; ++it) {
        const double mid = 0.5 * (lo + hi);
        ((*this)(mid) < y ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

double LeitmannFunction::inverse_derivative(double y) const { return 1.0 / jet(inverse(y)).d1; }

// Every built-in kind is a composition of increasing maps of positive
// arguments on [c0, inf), so rounding every step down (up) gives a lower
// (upper) bound.
bool LeitmannFunction::enclose_bits(std::uint64_t n, unsigned bits, std::int64_t shift,
                                    std::int64_t& floor_out) const {
    if (kind_ == LeitmannKind::Custom) {
        if (!enclose_) throw FloorUncertified("custom function " + label_ + " has no enclosure");
        const auto [lo, hi] = enclose_(n);
        const long double fl = std::floor(lo), fh = std::floor(hi);
        if (fl != fh) return false;
        floor_out = static_cast<std::int64_t>(fl) + shift;
        return true;
    }
    Mpfr lo(bits), hi(bits);
    eval_builtin(kind_, p1_, p2_, m_, n, bits, MPFR_RNDD, lo.get());
    eval_builtin(kind_, p1_, p2_, m_, n, bits, MPFR_RNDU, hi.get());
    mpz_class zl, zh;
    mpfr_get_z(zl.get_mpz_t(), lo.get(), MPFR_RNDD);
    mpfr_get_z(zh.get_mpz_t(), hi.get(), MPFR_RNDD);
    if (zl != zh) return false;
    if (!zl.fits_slong_p()) throw CapacityExceeded("floor of f(n) overflows 64 bits");
    floor_out = zl.get_si() + shift;
    return true;
}

long double LeitmannFunction::eval_long_double(std::uint64_t n) const {
    const auto x = static_cast<long double>(n);
    switch (kind_) {
    case LeitmannKind::Power: return std::pow(x, static_cast<long double>(p1_));
    case LeitmannKind::LogPower: return x * std::pow(std::log(x), static_cast<long double>(p1_));
    case LeitmannKind::ExpLog:
        return x * std::exp(static_cast<long double>(p1_) * std::pow(std::log(x), static_cast<long double>(p2_)));
    case LeitmannKind::IterLog: {
        long double l = x;
        for (int i = 0; i < m_; ++i) l = std::log(l);
        return x * l;
    }
    case LeitmannKind::Custom: break;
    }
    return static_cast<long double>(jet(static_cast<double>(n)).v);
}

std::int64_t LeitmannFunction::floor_at(std::uint64_t n, std::int64_t shift, unsigned max_bits) const {
    if (n < c0_) throw InvalidArgument("f is only defined for n >= c0 = " + std::to_string(c0_));
    std::int64_t out = 0;
    if (kind_ != LeitmannKind::Custom) {
        // libm's long double functions are within a few ulps (~1e-19 relative);
        // anything this far from an integer needs no enclosure
        const long double v = eval_long_double(n);
        const long double fl = std::floor(v);
        const long double margin = 1e-13L * std::max(1.0L, v);
        if (v - fl > margin && fl + 1 - v > margin && v < 9e18L) return static_cast<std::int64_t>(fl) + shift;
    }
    for (unsigned bits = 64; bits <= std::max(64u, max_bits); bits *= 2)
        if (enclose_bits(n, bits, shift, out)) return out;
    throw FloorUncertified("floor of " + label_ + " at n=" + std::to_string(n) + " not separated from an integer");
}

double LeitmannFunction::frac_scaled(std::uint64_t n, std::uint64_t q, std::int64_t shift) const {
    if (q == 0) throw InvalidArgument("modulus must be positive");
    if (n < c0_) throw InvalidArgument("f is only defined for n >= c0");
    if (kind_ == LeitmannKind::Custom) {
        const long double v = (static_cast<long double>(jet(static_cast<double>(n)).v) + shift) / q;
        return static_cast<double>(v - std::floor(v));
    }
    constexpr unsigned kBits = 192;
    Mpfr t(kBits);
    eval_builtin(kind_, p1_, p2_, m_, n, kBits, MPFR_RNDN, t.get());
    mpfr_add_si(t.get(), t.get(), shift, MPFR_RNDN);
    mpfr_div_ui(t.get(), t.get(), q, MPFR_RNDN);
    mpfr_frac(t.get(), t.get(), MPFR_RNDN);
    if (mpfr_sgn(t.get()) < 0) mpfr_add_ui(t.get(), t.get(), 1, MPFR_RNDN);
    const double d = mpfr_get_d(t.get(), MPFR_RNDN);
    return d >= 1.0 ? std::nextafter(1.0, 0.0) : d;
}

// ---------------------------------------------------------------------------

std::int64_t leitmann_term(const LeitmannFunction& f, std::uint64_t n) { return f.floor_at(n); }

SequenceWindow leitmann_window(const LeitmannFunction& f, std::int64_t lo, std::int64_t hi) {
    const std::int64_t first_term = f.floor_at(f.c0());
    if (lo < first_term)
        throw InvalidArgument("window must start at or above floor(f(c0)) = " + std::to_string(first_term));
    SequenceWindow w;
    w.lo = lo;
    w.hi = hi;
    if (hi <= lo) return w;
    const auto n_lo = std::max<std::int64_t>(static_cast<std::int64_t>(f.c0()),
                                             static_cast<std::int64_t>(std::floor(f.inverse(static_cast<double>(lo)))) - 1);
    const auto n_hi = static_cast<std::int64_t>(std::ceil(f.inverse(static_cast<double>(hi)))) + 1;
    const auto count = static_cast<std::size_t>(n_hi - n_lo + 1);
    const std::size_t chunks = chunk_count(count);
    std::vector<std::vector<WindowEntry>> parts(chunks);
    ParallelErrors errors;
#pragma omp parallel for schedule(dynamic, 1)
    for (std::int64_t ci = 0; ci < static_cast<std::int64_t>(chunks); ++ci) {
        errors.guard(static_cast<std::size_t>(ci), [&] {
            const std::int64_t first = n_lo + ci * static_cast<std::int64_t>(kReductionChunk);
            const std::int64_t last = std::min(n_hi, first + static_cast<std::int64_t>(kReductionChunk) - 1);
            for (std::int64_t n = first; n <= last; ++n) {
                const std::int64_t t = f.floor_at(static_cast<std::uint64_t>(n));
                if (t < lo || t >= hi) continue;
                const double frac = f(static_cast<double>(n)) - static_cast<double>(t);
                parts[static_cast<std::size_t>(ci)].push_back({n, t, std::clamp(frac, 0.0, 1.0)});
            }
        });
    }
    errors.rethrow();
    for (auto& p : parts) w.entries.insert(w.entries.end(), p.begin(), p.end());
    auto last = std::unique(w.entries.begin(), w.entries.end(),
                            [](const WindowEntry& x, const WindowEntry& y) { return x.term == y.term; });
    w.entries.erase(last, w.entries.end());
    return w;
}

LeitmannValidation leitmann_validate(const LeitmannFunction& f, const std::vector<double>& grid, bool report_only) {
    if (grid.empty()) throw InvalidArgument("validation grid is empty");
    LeitmannValidation out;
    const auto& a = f.exponents();
    if (!(a.a1 > 0)) out.violations.push_back("alpha1 > 0");
    if (!(a.a2 >= 0)) out.violations.push_back("alpha2 >= 0");
    if (same(a.a1, a.a2)) out.violations.push_back("alpha1 != alpha2");
    if (same(a.a3, 3 * a.a1)) out.violations.push_back("alpha3 != 3 alpha1");
    if (std::fabs(2 * a.a1 - 3 * a.a2 + a.a3) <= 1e-12) out.violations.push_back("2 alpha1 - 3 alpha2 + alpha3 != 0");
    if (!(a.a1 >= 1.0 && a.a1 < 12.0 / 11.0)) out.violations.push_back("x = o(f(x)) and f(x) << x^(12/11 - eps)");

    std::vector<double> xs = grid;
    std::sort(xs.begin(), xs.end());
    const double declared[3] = {a.a1, a.a2, a.a3};
    double first_dev[3] = {0, 0, 0};
    double prev_growth = 0.0, prev_st = std::numeric_limits<double>::infinity();
    bool grows = true, convex = true, increasing = true, st_positive = true, inverse_ok = true;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double x = xs[i];
        if (x < static_cast<double>(f.c0())) throw InvalidArgument("grid point below c0");
        const Jet j = f.jet(x);
        RatioSample s;
        s.x = x;
        s.ratio[0] = x * j.d1 / j.v;
        s.ratio[1] = x * j.d2 / j.d1;
        s.ratio[2] = x * j.d3 / j.d2;
        s.st_product = s.ratio[1];
        s.inverse_error = std::fabs(f.inverse(j.v) - x) / x;
        if (!(j.d1 > 0)) increasing = false;
        if (!(j.d2 > 0)) convex = false;
        if (s.inverse_error > 1e-9) inverse_ok = false;
        const double growth = j.v / x;
        if (i > 0 && growth < prev_growth) grows = false;
        prev_growth = growth;
        if (a.a2 == 0.0) {
            if (!(s.st_product > 0)) st_positive = false;
            if (s.st_product > prev_st) out.st_non_increasing = false;
            prev_st = s.st_product;
        }
        for (int k = 0; k < 3; ++k) {
            const double dev = std::fabs(s.ratio[k] - declared[k]);
            if (i == 0) first_dev[k] = dev;
            out.final_deviation[k] = dev;
        }
        out.samples.push_back(s);
    }
    if (!increasing) out.violations.push_back("f' > 0");
    if (!convex) out.violations.push_back("f'' > 0");
    if (!grows) out.violations.push_back("f(x)/x non-decreasing on the grid");
    if (!inverse_ok) out.violations.push_back("g(f(x)) = x");
    if (!st_positive) out.violations.push_back("x f'' = f' s(x) t(x) with s t > 0");
    for (int k = 0; k < 3; ++k) {
        const bool converging = xs.size() > 1 && out.final_deviation[k] < first_dev[k];
        if (out.final_deviation[k] > 1e-6 && !converging)
            out.violations.push_back("x f^(" + std::to_string(k + 1) + ")/f^(" + std::to_string(k) +
                                     ") -> alpha" + std::to_string(k + 1));
    }
    if (!report_only && !out.ok()) {
        std::string msg = f.str() + " violates:";
        for (const auto& v : out.violations) msg += " [" + v + "]";
        throw ValidationFailed(msg);
    }
    return out;
}

double leitmann_li(const LeitmannFunction& f, double c, double x, std::int64_t shift) {
    const auto l = static_cast<double>(shift);
    const double c_min = f(static_cast<double>(f.c0())) + l;
    if (c < c_min - 1e-12 * std::fabs(c_min)) throw InvalidArgument("lower limit below f(c0) + shift");
    if (c <= 1.0) throw InvalidArgument("lower limit must exceed 1");
    if (x < c) throw InvalidArgument("upper limit below lower limit");
    if (x == c) return 0.0;
    auto integrand = [&](double t) { return f.inverse_derivative(t - l) / std::log(t); };
    double err = 0.0, l1 = 0.0;
    const double v = boost::math::quadrature::gauss_kronrod<double, 31>::integrate(integrand, c, x, 30, 1e-11, &err, &l1);
    if (!std::isfinite(v) || err > 1e-9 * std::fabs(v))
        throw QuadratureFailure("integral of g'(t)/log t did not reach 1e-9 relative tolerance (estimate " +
                                std::to_string(err / std::fabs(v)) + ")");
    return v;
}

double leitmann_li(const LeitmannFunction& f, double x) {
    return leitmann_li(f, f(static_cast<double>(f.c0())), x);
}

}  // namespace primegap
