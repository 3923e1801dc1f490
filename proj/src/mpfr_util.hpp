#pragma once

#include <gmpxx.h>
#include <mpfr.h>

namespace primegap::detail {

class Mpfr {
public:
    explicit Mpfr(mpfr_prec_t prec) { mpfr_init2(v_, prec); }
    ~Mpfr() { mpfr_clear(v_); }
    Mpfr(const Mpfr&) = delete;
    Mpfr& operator=(const Mpfr&) = delete;
    mpfr_ptr get() noexcept { return v_; }
    mpfr_srcptr get() const noexcept { return v_; }

private:
    mpfr_t v_;
};

// Exact value of a finite MPFR number.
inline mpq_class mpfr_to_mpq(mpfr_srcptr x) {
    mpz_class mant;
    const mpfr_exp_t e = mpfr_get_z_2exp(mant.get_mpz_t(), x);
    mpq_class out;
    if (e >= 0) {
        mpz_class shifted;
        mpz_mul_2exp(shifted.get_mpz_t(), mant.get_mpz_t(), static_cast<mp_bitcnt_t>(e));
        out = mpq_class(shifted);
    } else {
        mpz_class den;
        mpz_ui_pow_ui(den.get_mpz_t(), 2, static_cast<unsigned long>(-e));
        out = mpq_class(mant, den);
        out.canonicalize();
    }
    return out;
}

}  // namespace primegap::detail
