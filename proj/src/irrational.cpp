#include "primegap/irrational.hpp"

#include <algorithm>
#include <cfloat>
#include <cmath>
#include <map>
#include <mutex>
#include <regex>
#include <utility>

#include <mpfr.h>

#include "primegap/errors.hpp"
#include "mpfr_util.hpp"

namespace primegap {

namespace {

constexpr unsigned kStartBits = 128;
constexpr long double kLdEps = LDBL_EPSILON;  // 2^-63 on x87

using detail::Mpfr;
using detail::mpfr_to_mpq;

long double mpq_to_ld(const mpq_class& q) {
    Mpfr tmp(80);
    mpfr_set_q(tmp.get(), q.get_mpq_t(), MPFR_RNDN);
    return mpfr_get_ld(tmp.get(), MPFR_RNDN);
}

int qsign(const mpq_class& q) { return mpq_sgn(q.get_mpq_t()); }

mpz_class floor_q(const mpq_class& q) {
    mpz_class r;
    mpz_fdiv_q(r.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    return r;
}

std::string mpz_str(const mpz_class& z) { return z.get_str(); }

bool is_perfect_square(const mpz_class& d) { return mpz_perfect_square_p(d.get_mpz_t()) != 0; }

}  // namespace

// ---------------------------------------------------------------------------

class IrrationalSpec::Impl : public std::enable_shared_from_this<IrrationalSpec::Impl> {
public:
    explicit Impl(unsigned budget) : budget_(budget) {}
    virtual ~Impl() = default;

    virtual IrrationalKind kind() const = 0;
    virtual std::string str() const = 0;
    virtual int sign_affine(const mpq_class& u, const mpq_class& v) const = 0;
    virtual std::vector<mpz_class> quotients(std::size_t count) const = 0;
    virtual std::shared_ptr<const Impl> reciprocal() const = 0;

    unsigned budget() const noexcept { return budget_; }
    long double approx() const noexcept { return approx_; }
    long double approx_error() const noexcept { return approx_err_; }

protected:
    unsigned budget_;
    long double approx_ = 0;
    long double approx_err_ = 0;
};

namespace {

using Impl = IrrationalSpec::Impl;

// ---------------------------------------------------------------------------
// (a + b sqrt d) / e, decided by exact integer arithmetic.

class SurdImpl final : public Impl {
public:
    SurdImpl(mpz_class a, mpz_class b, mpz_class d, mpz_class e, unsigned budget)
        : Impl(budget), a_(std::move(a)), b_(std::move(b)), d_(std::move(d)), e_(std::move(e)) {
        if (e_ == 0) throw InvalidArgument("surd denominator e must be non-zero");
        if (b_ == 0) throw InvalidArgument("surd coefficient b must be non-zero");
        if (d_ <= 0 || is_perfect_square(d_))
            throw InvalidArgument("surd radicand d must be a positive non-square");
        if (e_ < 0) {
            a_ = -a_;
            b_ = -b_;
            e_ = -e_;
        }
        mpz_class g;
        mpz_gcd(g.get_mpz_t(), a_.get_mpz_t(), b_.get_mpz_t());
        mpz_gcd(g.get_mpz_t(), g.get_mpz_t(), e_.get_mpz_t());
        a_ /= g;
        b_ /= g;
        e_ /= g;
        Mpfr x(192), t(192);
        mpfr_set_z(x.get(), d_.get_mpz_t(), MPFR_RNDN);
        mpfr_sqrt(x.get(), x.get(), MPFR_RNDN);
        mpfr_mul_z(x.get(), x.get(), b_.get_mpz_t(), MPFR_RNDN);
        mpfr_add_z(x.get(), x.get(), a_.get_mpz_t(), MPFR_RNDN);
        mpfr_div_z(x.get(), x.get(), e_.get_mpz_t(), MPFR_RNDN);
        approx_ = mpfr_get_ld(x.get(), MPFR_RNDN);
        // magnitude of the uncancelled terms bounds the 192-bit working error
        mpfr_set_z(t.get(), d_.get_mpz_t(), MPFR_RNDU);
        mpfr_sqrt(t.get(), t.get(), MPFR_RNDU);
        mpz_class babs = abs(b_), aabs = abs(a_), eabs = abs(e_);
        mpfr_mul_z(t.get(), t.get(), babs.get_mpz_t(), MPFR_RNDU);
        mpfr_add_z(t.get(), t.get(), aabs.get_mpz_t(), MPFR_RNDU);
        mpfr_div_z(t.get(), t.get(), eabs.get_mpz_t(), MPFR_RNDU);
        const long double scale = mpfr_get_ld(t.get(), MPFR_RNDU) + 1.0L;
        approx_err_ = std::fabs(approx_) * kLdEps + std::ldexp(scale, -180);
    }

    IrrationalKind kind() const override { return IrrationalKind::QuadraticSurd; }

    std::string str() const override {
        std::string out = "surd:(" + mpz_str(a_);
        out += (b_ < 0 ? "-" : "+");
        out += mpz_str(abs(b_)) + "*sqrt(" + mpz_str(d_) + "))/" + mpz_str(e_);
        return out;
    }

    int sign_affine(const mpq_class& u, const mpq_class& v) const override {
        // alpha*u + v = (a*u + v*e + b*u*sqrt(d)) / e
        const mpq_class x = mpq_class(a_) * u + v * mpq_class(e_);
        const mpq_class y = mpq_class(b_) * u;
        return sign_surd(x, y) * mpz_sgn(e_.get_mpz_t());
    }

    std::vector<mpz_class> quotients(std::size_t count) const override {
        // rewrite as (P + sqrt(D)) / Q with Q | D - P^2
        mpz_class big_d = b_ * b_ * d_;
        mpz_class p = b_ > 0 ? a_ : mpz_class(-a_);
        mpz_class q = b_ > 0 ? e_ : mpz_class(-e_);
        mpz_class rem = big_d - p * p;
        if (!mpz_divisible_p(rem.get_mpz_t(), q.get_mpz_t())) {
            const mpz_class qa = abs(q);
            p *= qa;
            big_d *= q * q;
            q *= qa;
        }
        mpz_class root;
        mpz_sqrt(root.get_mpz_t(), big_d.get_mpz_t());
        std::vector<mpz_class> out;
        out.reserve(count);
        for (std::size_t k = 0; k < count; ++k) {
            mpz_class a;
            const mpz_class top = p + root;
            if (q > 0) {
                mpz_fdiv_q(a.get_mpz_t(), top.get_mpz_t(), q.get_mpz_t());
            } else {
                const mpz_class qa = -q;
                mpz_fdiv_q(a.get_mpz_t(), top.get_mpz_t(), qa.get_mpz_t());
                a = -(a + 1);
            }
            out.push_back(a);
            p = a * q - p;
            mpz_class next = big_d - p * p;
            mpz_divexact(next.get_mpz_t(), next.get_mpz_t(), q.get_mpz_t());
            q = next;
        }
        return out;
    }

    std::shared_ptr<const Impl> reciprocal() const override {
        // e / (a + b sqrt d) = (e a - e b sqrt d) / (a^2 - b^2 d)
        return std::make_shared<SurdImpl>(e_ * a_, -(e_ * b_), d_, a_ * a_ - b_ * b_ * d_,
                                          budget_);
    }

private:
    int sign_surd(const mpq_class& x, const mpq_class& y) const {
        const int sx = qsign(x), sy = qsign(y);
        if (sy == 0) return sx;
        if (sx == 0) return sy;
        if (sx == sy) return sx;
        const mpq_class lhs = x * x;
        const mpq_class rhs = y * y * mpq_class(d_);
        return lhs > rhs ? sx : sy;
    }

    mpz_class a_, b_, d_, e_;
};

// ---------------------------------------------------------------------------
// Values known only through shrinking rational enclosures.

class EnclosureImpl : public Impl {
public:
    using Impl::Impl;

    // closed rational interval strictly containing the value, width about 2^-bits
    virtual std::pair<mpq_class, mpq_class> enclosure(unsigned bits) const = 0;

    int sign_affine(const mpq_class& u, const mpq_class& v) const override {
        if (qsign(u) == 0) return qsign(v);
        for (unsigned bits = kStartBits; bits <= budget_; bits *= 2) {
            const auto [lo, hi] = enclosure(bits);
            mpq_class a = lo * u + v, b = hi * u + v;
            if (a > b) std::swap(a, b);
            if (qsign(a) > 0) return 1;
            if (qsign(b) < 0) return -1;
        }
        throw PrecisionExhausted("cannot separate " + str() + "*u+v from zero within " +
                                 std::to_string(budget_) + " bits");
    }

    std::vector<mpz_class> quotients(std::size_t count) const override {
        for (unsigned bits = kStartBits; bits <= budget_; bits *= 2) {
            auto [lo, hi] = enclosure(bits);
            std::vector<mpz_class> out;
            out.reserve(count);
            bool ok = true;
            while (out.size() < count) {
                const mpz_class fl = floor_q(lo), fh = floor_q(hi);
                if (fl != fh) {
                    ok = false;
                    break;
                }
                out.push_back(fl);
                if (out.size() == count) break;
                mpq_class l2 = lo - mpq_class(fl), h2 = hi - mpq_class(fl);
                if (qsign(l2) == 0) {
                    ok = false;
                    break;
                }
                lo = 1 / h2;
                hi = 1 / l2;
            }
            if (ok) return out;
        }
        throw PrecisionExhausted("cannot certify " + std::to_string(count) +
                                 " partial quotients of " + str() + " within " +
                                 std::to_string(budget_) + " bits");
    }

    std::shared_ptr<const Impl> reciprocal() const override;
};

class ReciprocalImpl final : public EnclosureImpl {
public:
    explicit ReciprocalImpl(std::shared_ptr<const EnclosureImpl> parent)
        : EnclosureImpl(parent->budget()), parent_(std::move(parent)) {
        const long double x = parent_->approx(), err = parent_->approx_error();
        if (std::fabs(x) <= 2 * err) throw InvalidArgument("reciprocal of a value too close to 0");
        approx_ = 1.0L / x;
        approx_err_ = err / (std::fabs(x) * (std::fabs(x) - err)) + 2 * kLdEps * std::fabs(approx_);
    }

    IrrationalKind kind() const override { return parent_->kind(); }
    std::string str() const override { return "1/(" + parent_->str() + ")"; }

    std::pair<mpq_class, mpq_class> enclosure(unsigned bits) const override {
        auto [lo, hi] = parent_->enclosure(bits + 64);
        if (qsign(lo) != qsign(hi) || qsign(lo) == 0)
            throw PrecisionExhausted("enclosure of " + parent_->str() + " contains zero");
        return {1 / hi, 1 / lo};
    }

private:
    std::shared_ptr<const EnclosureImpl> parent_;
};

std::shared_ptr<const Impl> EnclosureImpl::reciprocal() const {
    auto self = std::static_pointer_cast<const EnclosureImpl>(shared_from_this());
    return std::make_shared<ReciprocalImpl>(std::move(self));
}

class NamedImpl final : public EnclosureImpl {
public:
    NamedImpl(NamedConstant which, unsigned budget) : EnclosureImpl(budget), which_(which) {
        const auto [lo, hi] = enclosure(kStartBits);
        approx_ = mpq_to_ld((lo + hi) / 2);
        approx_err_ = std::fabs(approx_) * 2 * kLdEps;
    }

    IrrationalKind kind() const override { return IrrationalKind::NamedConstant; }
    std::string str() const override { return which_ == NamedConstant::Pi ? "pi" : "e"; }

    std::pair<mpq_class, mpq_class> enclosure(unsigned bits) const override {
        std::lock_guard lock(mutex_);
        auto it = cache_.find(bits);
        if (it != cache_.end()) return it->second;
        Mpfr lo(bits), hi(bits);
        if (which_ == NamedConstant::Pi) {
            mpfr_const_pi(lo.get(), MPFR_RNDD);
            mpfr_const_pi(hi.get(), MPFR_RNDU);
        } else {
            mpfr_set_ui(lo.get(), 1, MPFR_RNDN);
            mpfr_set_ui(hi.get(), 1, MPFR_RNDN);
            mpfr_exp(lo.get(), lo.get(), MPFR_RNDD);
            mpfr_exp(hi.get(), hi.get(), MPFR_RNDU);
        }
        auto entry = std::make_pair(mpfr_to_mpq(lo.get()), mpfr_to_mpq(hi.get()));
        cache_.emplace(bits, entry);
        return entry;
    }

private:
    NamedConstant which_;
    mutable std::mutex mutex_;
    mutable std::map<unsigned, std::pair<mpq_class, mpq_class>> cache_;
};

class GeneratorImpl final : public EnclosureImpl {
public:
    GeneratorImpl(std::string label, QuotientGenerator gen, unsigned budget)
        : EnclosureImpl(budget), label_(std::move(label)), gen_(std::move(gen)) {
        if (!gen_) throw InvalidArgument("empty quotient generator");
        // approximation from a convergent with q_k q_{k+1} > 2^96
        std::lock_guard lock(mutex_);
        mpz_class target = 1;
        target <<= 96;
        std::size_t k = 0;
        for (;; ++k) {
            extend_locked(k + 2);
            if (convs_[k].q * convs_[k + 1].q > target) break;
        }
        const mpq_class value(convs_[k].p, convs_[k].q);
        approx_ = mpq_to_ld(value);
        approx_err_ = std::fabs(approx_) * 2 * kLdEps + std::ldexp(1.0L, -90);
    }

    IrrationalKind kind() const override { return IrrationalKind::Generator; }
    std::string str() const override { return label_; }

    std::vector<mpz_class> quotients(std::size_t count) const override {
        std::lock_guard lock(mutex_);
        extend_locked(count);
        std::vector<mpz_class> out;
        out.reserve(count);
        for (std::size_t i = 0; i < count; ++i) out.push_back(convs_[i].a);
        return out;
    }

    std::pair<mpq_class, mpq_class> enclosure(unsigned bits) const override {
        if (bits > budget_)
            throw PrecisionExhausted("enclosure of " + label_ + " beyond budget");
        std::lock_guard lock(mutex_);
        mpz_class target = 1;
        target <<= bits;
        for (std::size_t k = 0;; ++k) {
            extend_locked(k + 2);
            if (convs_[k].q * convs_[k + 1].q >= target) {
                mpq_class x(convs_[k].p, convs_[k].q), y(convs_[k + 1].p, convs_[k + 1].q);
                x.canonicalize();
                y.canonicalize();
                if (x > y) std::swap(x, y);
                return {x, y};
            }
        }
    }

private:
    void extend_locked(std::size_t count) const {
        while (convs_.size() < count) {
            const std::size_t k = convs_.size();
            mpz_class a = gen_(k, std::span<const Convergent>(convs_.data(), convs_.size()));
            if (k >= 1 && a < 1)
                throw InvalidArgument(label_ + ": generator produced a_" + std::to_string(k) +
                                      " < 1 (expansion must be infinite)");
            Convergent c;
            c.index = k;
            c.a = a;
            const mpz_class p1 = k >= 1 ? convs_[k - 1].p : mpz_class(1);
            const mpz_class q1 = k >= 1 ? convs_[k - 1].q : mpz_class(0);
            const mpz_class p2 = k >= 2 ? convs_[k - 2].p : mpz_class(k == 1 ? 1 : 0);
            const mpz_class q2 = k >= 2 ? convs_[k - 2].q : mpz_class(k == 1 ? 0 : 1);
            c.p = a * p1 + p2;
            c.q = a * q1 + q2;
            convs_.push_back(std::move(c));
        }
    }

    std::string label_;
    QuotientGenerator gen_;
    mutable std::mutex mutex_;
    mutable std::vector<Convergent> convs_;
};

}  // namespace


// ---------------------------------------------------------------------------

IrrationalSpec IrrationalSpec::surd(const mpz_class& a, const mpz_class& b, const mpz_class& d,
                                    const mpz_class& e, unsigned budget) {
    return IrrationalSpec(std::make_shared<SurdImpl>(a, b, d, e, budget));
}

IrrationalSpec IrrationalSpec::named(NamedConstant constant, unsigned budget) {
    return IrrationalSpec(std::make_shared<NamedImpl>(constant, budget));
}

IrrationalSpec IrrationalSpec::generator(std::string label, QuotientGenerator gen,
                                         unsigned budget) {
    return IrrationalSpec(std::make_shared<GeneratorImpl>(std::move(label), std::move(gen), budget));
}

IrrationalSpec IrrationalSpec::periodic(std::vector<mpz_class> prefix, std::vector<mpz_class> period,
                                        unsigned budget) {
    if (period.empty()) throw InvalidArgument("periodic expansion needs a non-empty period");
    for (std::size_t i = 1; i < prefix.size(); ++i)
        if (prefix[i] < 1) throw InvalidArgument("partial quotients after a_0 must be >= 1");
    for (const auto& p : period)
        if (p < 1) throw InvalidArgument("periodic partial quotients must be >= 1");
    if (prefix.empty()) throw InvalidArgument("periodic expansion needs a_0");
    std::string label = "cf:[" + prefix.front().get_str() + ";";
    for (std::size_t i = 1; i < prefix.size(); ++i) label += prefix[i].get_str() + ",";
    label += "(";
    for (std::size_t i = 0; i < period.size(); ++i)
        label += (i ? "," : "") + period[i].get_str();
    label += ")]";
    auto gen = [prefix = std::move(prefix), period = std::move(period)](
                   std::size_t k, std::span<const Convergent>) -> mpz_class {
        if (k < prefix.size()) return prefix[k];
        return period[(k - prefix.size()) % period.size()];
    };
    return generator(std::move(label), std::move(gen), budget);
}

namespace {

std::vector<mpz_class> parse_int_list(const std::string& text, const std::string& whole) {
    std::vector<mpz_class> out;
    if (text.find_first_not_of(" \t") == std::string::npos) return out;
    std::size_t pos = 0;
    while (true) {
        const std::size_t comma = text.find(',', pos);
        std::string item = text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
        item.erase(std::remove_if(item.begin(), item.end(), ::isspace), item.end());
        if (item.empty()) throw InvalidArgument("empty partial quotient in '" + whole + "'");
        mpz_class v;
        if (v.set_str(item, 10) != 0) throw InvalidArgument("bad integer '" + item + "' in '" + whole + "'");
        out.push_back(v);
        if (comma == std::string::npos) break;
        pos = comma + 1;
    }
    return out;
}

}  // namespace

IrrationalSpec IrrationalSpec::parse(std::string_view text_view, unsigned budget) {
    const std::string text(text_view);
    if (text == "pi") return named(NamedConstant::Pi, budget);
    if (text == "e") return named(NamedConstant::E, budget);
    static const std::regex surd_re(
        R"(^surd:\(\s*([+-]?\d+)\s*([+-])\s*(\d+)\s*\*\s*sqrt\(\s*(\d+)\s*\)\s*\)\s*/\s*([+-]?\d+)$)");
    std::smatch m;
    if (std::regex_match(text, m, surd_re)) {
        mpz_class a(m[1].str()[0] == '+' ? m[1].str().substr(1) : m[1].str());
        mpz_class b(m[3].str());
        if (m[2].str() == "-") b = -b;
        mpz_class d(m[4].str());
        mpz_class e(m[5].str()[0] == '+' ? m[5].str().substr(1) : m[5].str());
        return surd(a, b, d, e, budget);
    }
    static const std::regex cf_re(R"(^cf:\[\s*([+-]?\d+)\s*;([^()\]]*)\(([^()]*)\)\s*\]$)");
    if (std::regex_match(text, m, cf_re)) {
        std::vector<mpz_class> prefix{mpz_class(m[1].str()[0] == '+' ? m[1].str().substr(1) : m[1].str())};
        std::string middle = m[2].str();
        middle.erase(std::remove_if(middle.begin(), middle.end(), ::isspace), middle.end());
        if (!middle.empty()) {
            if (middle.back() != ',') throw InvalidArgument("expected ',' before the period in '" + text + "'");
            middle.pop_back();
            for (auto& v : parse_int_list(middle, text)) prefix.push_back(std::move(v));
        }
        auto period = parse_int_list(m[3].str(), text);
        return periodic(std::move(prefix), std::move(period), budget);
    }
    throw InvalidArgument("unrecognized irrational '" + text +
                          "' (expected surd:(a+b*sqrt(d))/e, pi, e or cf:[a0;a1,...,(p1,...)])");
}

IrrationalKind IrrationalSpec::kind() const noexcept { return impl_->kind(); }
std::string IrrationalSpec::str() const { return impl_->str(); }
unsigned IrrationalSpec::precision_budget() const noexcept { return impl_->budget(); }
long double IrrationalSpec::approx() const noexcept { return impl_->approx(); }
long double IrrationalSpec::approx_error() const noexcept { return impl_->approx_error(); }

int IrrationalSpec::sign_affine(const mpq_class& u, const mpq_class& v) const {
    return impl_->sign_affine(u, v);
}

mpz_class IrrationalSpec::floor_affine(const mpq_class& u, const mpq_class& v) const {
    if (qsign(u) == 0) return floor_q(v);
    const long double est = impl_->approx() * mpq_to_ld(u) + mpq_to_ld(v);
    mpz_class lo;
    if (std::isfinite(est)) {
        Mpfr tmp(80);
        mpfr_set_ld(tmp.get(), floorl(est), MPFR_RNDN);
        mpfr_get_z(lo.get_mpz_t(), tmp.get(), MPFR_RNDD);
    }
    // alpha*u + v >= k  <=>  sign(alpha*u + (v - k)) >= 0
    auto at_least = [&](const mpz_class& k) { return impl_->sign_affine(u, v - mpq_class(k)) >= 0; };
    mpz_class step = 1;
    while (!at_least(lo)) {
        lo -= step;
        step *= 2;
    }
    mpz_class hi = lo + 1;
    step = 1;
    while (at_least(hi)) {
        lo = hi;
        hi += step;
        step *= 2;
    }
    while (hi - lo > 1) {
        mpz_class mid = lo + hi;
        mpz_fdiv_q_2exp(mid.get_mpz_t(), mid.get_mpz_t(), 1);
        if (at_least(mid))
            lo = mid;
        else
            hi = mid;
    }
    return lo;
}

bool IrrationalSpec::frac_less_affine(const mpq_class& u, const mpq_class& v,
                                      const mpq_class& c) const {
    const mpz_class k = floor_affine(u, v);
    return impl_->sign_affine(u, v - mpq_class(k) - c) < 0;
}

namespace {

struct FastLinear {
    long double x;
    long double err;
    bool certified;
    std::int64_t floor;
};

FastLinear fast_linear(const IrrationalSpec& spec, std::int64_t n, const Rational& beta) {
    const long double an = spec.approx() * static_cast<long double>(n);
    const long double b = beta.to_long_double();
    const long double x = an + b;
    const long double err = spec.approx_error() * std::fabs(static_cast<long double>(n)) +
                            4 * kLdEps * (std::fabs(an) + std::fabs(b) + 1);
    FastLinear out{x, err, false, 0};
    if (!(std::fabs(x) < 4.0e18L)) return out;
    const long double lo = floorl(x - err), hi = floorl(x + err);
    if (lo == hi) {
        out.certified = true;
        out.floor = static_cast<std::int64_t>(lo);
    }
    return out;
}

std::int64_t to_int64(const mpz_class& z) {
    if (!z.fits_slong_p()) throw RangeError("floor value exceeds 64-bit range");
    return z.get_si();
}

}  // namespace

std::int64_t IrrationalSpec::floor_linear(std::int64_t n, const Rational& beta) const {
    if (n < 1) throw InvalidArgument("floor_linear requires n >= 1");
    const FastLinear f = fast_linear(*this, n, beta);
    if (f.certified) return f.floor;
    return to_int64(floor_affine(mpq_class(static_cast<long>(n)), beta.to_mpq()));
}

IrrationalSpec::LinearEval IrrationalSpec::eval_linear(std::int64_t n, const Rational& beta,
                                                       const Rational& c) const {
    if (n < 1) throw InvalidArgument("eval_linear requires n >= 1");
    const FastLinear f = fast_linear(*this, n, beta);
    if (f.certified) {
        const long double frac = f.x - static_cast<long double>(f.floor);
        const long double cl = c.to_long_double();
        const long double cerr = 2 * kLdEps * (std::fabs(cl) + 1);
        if (frac + f.err < cl - cerr) return {f.floor, true, static_cast<double>(frac)};
        if (frac - f.err > cl + cerr) return {f.floor, false, static_cast<double>(frac)};
    }
    const mpq_class u(static_cast<long>(n));
    const mpq_class v = beta.to_mpq();
    const mpz_class k = floor_affine(u, v);
    const bool below = impl_->sign_affine(u, v - mpq_class(k) - c.to_mpq()) < 0;
    const long double frac = f.x - static_cast<long double>(k.get_d());
    return {to_int64(k), below, static_cast<double>(frac - floorl(frac))};
}

bool IrrationalSpec::frac_compare(std::int64_t n, const Rational& beta, const Rational& c) const {
    return eval_linear(n, beta, c).below_cutoff;
}

IrrationalSpec IrrationalSpec::reciprocal() const { return IrrationalSpec(impl_->reciprocal()); }

std::vector<mpz_class> IrrationalSpec::partial_quotients(std::size_t count) const {
    if (count < 1) throw InvalidArgument("count must be at least 1");
    return impl_->quotients(count);
}

// ---------------------------------------------------------------------------

std::vector<mpz_class> cf_expand(const IrrationalSpec& spec, std::size_t count) {
    return spec.partial_quotients(count);
}

std::vector<Convergent> convergents_from_quotients(std::span<const mpz_class> quotients) {
    std::vector<Convergent> out;
    out.reserve(quotients.size());
    mpz_class p2 = 0, q2 = 1, p1 = 1, q1 = 0;
    for (std::size_t k = 0; k < quotients.size(); ++k) {
        Convergent c;
        c.index = k;
        c.a = quotients[k];
        c.p = c.a * p1 + p2;
        c.q = c.a * q1 + q2;
        p2 = p1;
        q2 = q1;
        p1 = c.p;
        q1 = c.q;
        out.push_back(std::move(c));
    }
    return out;
}

std::vector<Convergent> convergents(const IrrationalSpec& spec, std::size_t count) {
    const auto quotients = cf_expand(spec, count);
    return convergents_from_quotients(quotients);
}

std::int64_t floor_linear(const IrrationalSpec& spec, std::int64_t n, const Rational& beta) {
    return spec.floor_linear(n, beta);
}

bool frac_compare(const IrrationalSpec& spec, std::int64_t n, const Rational& beta,
                  const Rational& c) {
    return spec.frac_compare(n, beta, c);
}

double log_mpz(const mpz_class& x) {
    if (x <= 0) throw InvalidArgument("log of a non-positive integer");
    long exp = 0;
    const double mant = mpz_get_d_2exp(&exp, x.get_mpz_t());
    return std::log(mant) + static_cast<double>(exp) * std::log(2.0);
}

TypeEstimate estimate_type(const IrrationalSpec& spec, std::size_t depth) {
    if (depth < 2) throw InvalidArgument("estimate_type requires depth >= 2");
    const auto quotients = cf_expand(spec, depth + 1);
    const auto convs = convergents_from_quotients(quotients);
    TypeEstimate est;
    est.tail_start = std::max<std::size_t>(1, depth / 2);
    double tail_max = 0.0, all_max = 0.0;
    for (std::size_t k = 1; k < depth; ++k) {
        const mpz_class q = abs(convs[k].q);
        const mpz_class a = quotients[k + 1];
        if (q <= 1) continue;
        const double corr = log_mpz(a) / log_mpz(q);
        est.levels.push_back({k, a, convs[k].q, corr});
        all_max = std::max(all_max, corr);
        if (k >= est.tail_start) tail_max = std::max(tail_max, corr);
    }
    est.tau_hat = 1.0 + tail_max;
    est.prefix_max = 1.0 + all_max;
    return est;
}

}  // namespace primegap
