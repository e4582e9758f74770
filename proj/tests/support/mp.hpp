#pragma once
// Thin RAII wrapper over MPFR, used as a high-precision oracle in tests.

#include <mpfr.h>

#include <string>

#include "sqgcert/interval.hpp"

namespace testing_mp {

constexpr mpfr_prec_t kPrec = 256;

class Real {
  public:
    Real() { mpfr_init2(v_, kPrec); mpfr_set_zero(v_, 1); }
    Real(double d) { mpfr_init2(v_, kPrec); mpfr_set_d(v_, d, MPFR_RNDN); }  // NOLINT
    explicit Real(const std::string& s) { mpfr_init2(v_, kPrec); mpfr_set_str(v_, s.c_str(), 10, MPFR_RNDN); }
    Real(const Real& o) { mpfr_init2(v_, kPrec); mpfr_set(v_, o.v_, MPFR_RNDN); }
    Real& operator=(const Real& o) { mpfr_set(v_, o.v_, MPFR_RNDN); return *this; }
    ~Real() { mpfr_clear(v_); }

    mpfr_ptr get() { return v_; }
    mpfr_srcptr get() const { return v_; }
    double to_double() const { return mpfr_get_d(v_, MPFR_RNDN); }

    friend Real operator+(const Real& x, const Real& y) { Real r; mpfr_add(r.v_, x.v_, y.v_, MPFR_RNDN); return r; }
    friend Real operator-(const Real& x, const Real& y) { Real r; mpfr_sub(r.v_, x.v_, y.v_, MPFR_RNDN); return r; }
    friend Real operator*(const Real& x, const Real& y) { Real r; mpfr_mul(r.v_, x.v_, y.v_, MPFR_RNDN); return r; }
    friend Real operator/(const Real& x, const Real& y) { Real r; mpfr_div(r.v_, x.v_, y.v_, MPFR_RNDN); return r; }

  private:
    mpfr_t v_;
};

inline Real sqrt(const Real& x) { Real r; mpfr_sqrt(r.get(), x.get(), MPFR_RNDN); return r; }
inline Real log(const Real& x) { Real r; mpfr_log(r.get(), x.get(), MPFR_RNDN); return r; }
inline Real exp(const Real& x) { Real r; mpfr_exp(r.get(), x.get(), MPFR_RNDN); return r; }
inline Real asinh(const Real& x) { Real r; mpfr_asinh(r.get(), x.get(), MPFR_RNDN); return r; }
inline Real abs(const Real& x) { Real r; mpfr_abs(r.get(), x.get(), MPFR_RNDN); return r; }

inline bool inside(const Real& x, const sqgcert::Interval& i) {
    return mpfr_cmp_d(x.get(), i.lo()) >= 0 && mpfr_cmp_d(x.get(), i.hi()) <= 0;
}

}  // namespace testing_mp
