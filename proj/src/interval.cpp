#include "sqgcert/interval.hpp"

#include <cctype>
#include <cstdio>
#include <cstdlib>

namespace sqgcert {

namespace {

// libm transcendental functions are within one ulp but not correctly rounded,
// so they get two outward steps instead of one.
double down2(double x) { return rounding::down(rounding::down(x)); }
double up2(double x) { return rounding::up(rounding::up(x)); }

Interval asinh_nonneg_point(double v) {
    if (v == 0.0) return Interval(0.0);
    if (std::isinf(v)) return Interval::raw(std::numeric_limits<double>::max(), v);
    if (v > 1e150) {
        // asinh(v) = log(2v) + O(1/v^2)
        Interval l = log(Interval(2.0) * Interval(v));
        return Interval::raw(l.lo(), rounding::up(l.hi() + 1e-300));
    }
    const Interval x(v);
    Interval r = log(x + sqrt(sqr(x) + Interval(1.0)));
    // asinh(v) <= v and asinh(v) >= 0 for v >= 0
    return Interval::raw(std::fmax(r.lo(), 0.0), std::fmin(r.hi(), v));
}

Interval asinh_point(double v) {
    if (v >= 0) return asinh_nonneg_point(v);
    return -asinh_nonneg_point(-v);
}

Interval xlogabsx_point(double v) {
    if (v == 0.0) return Interval(0.0);
    return Interval(v) * log(Interval(std::fabs(v)));
}

bool is_plain_integer(const std::string& s) {
    std::size_t i = 0;
    if (i < s.size() && (s[i] == '-' || s[i] == '+')) ++i;
    if (i == s.size() || s.size() - i > 15) return false;
    for (; i < s.size(); ++i)
        if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    return true;
}

}  // namespace

Interval sqrt(const Interval& x) {
    if (x.lo() < 0) throw DomainError("sqrt of an interval with negative part");
    const double lo = x.lo() == 0 ? 0.0 : std::fmax(0.0, rounding::down(std::sqrt(x.lo())));
    return Interval::raw(lo, rounding::up(std::sqrt(x.hi())));
}

Interval log(const Interval& x) {
    if (x.lo() <= 0) throw DomainError("log of an interval with non-positive part");
    const double lo = x.lo() == 1.0 ? 0.0 : down2(std::log(x.lo()));
    const double hi = x.hi() == 1.0 ? 0.0 : up2(std::log(x.hi()));
    return Interval::raw(lo, hi);
}

Interval exp(const Interval& x) {
    const double lo = x.lo() == 0 ? 1.0 : std::fmax(0.0, down2(std::exp(x.lo())));
    const double hi = x.hi() == 0 ? 1.0 : up2(std::exp(x.hi()));
    return Interval::raw(lo, hi);
}

Interval asinh(const Interval& x) {
    if (x.is_point()) return asinh_point(x.lo());
    return Interval::raw(asinh_point(x.lo()).lo(), asinh_point(x.hi()).hi());
}

Interval pow_int(const Interval& x, int n) {
    if (n < 0) return Interval(1.0) / pow_int(x, -n);
    if (n == 0) return Interval(1.0);
    if (n == 1) return x;
    Interval half = pow_int(x, n / 2);
    Interval r = sqr(half);
    return n % 2 ? r * x : r;
}

Interval xlogabsx(const Interval& x) {
    // t*log|t| is decreasing on [-1/e, 1/e] and increasing outside, so its
    // range over x is spanned by the endpoints and any enclosed critical point.
    Interval r = hull(xlogabsx_point(x.lo()), xlogabsx_point(x.hi()));
    const double inv_e_lo = 0.36787944117144228, inv_e_hi = 0.36787944117144239;
    if (x.lo() <= inv_e_hi && x.hi() >= inv_e_lo) r = hull(r, Interval::raw(-inv_e_hi, r.hi()));
    if (x.lo() <= -inv_e_lo && x.hi() >= -inv_e_hi) r = hull(r, Interval::raw(r.lo(), inv_e_hi));
    return r;
}

Interval from_decimal(const std::string& text) {
    char* end = nullptr;
    const double v = std::strtod(text.c_str(), &end);
    if (end == text.c_str() || *end != '\0') throw std::invalid_argument("not a decimal number: '" + text + "'");
    if (std::isnan(v) || std::isinf(v)) throw std::invalid_argument("decimal out of range: '" + text + "'");
    if (v == 0.0 || is_plain_integer(text)) return Interval(v);
    // strtod rounds correctly, so one ulp either way covers the decimal
    return Interval::raw(std::nextafter(v, -HUGE_VAL), std::nextafter(v, HUGE_VAL));
}

namespace constants {

const Interval& pi() {
    static const Interval v = Interval::raw(0x1.921fb54442d18p+1, 0x1.921fb54442d19p+1);
    return v;
}
const Interval& sqrt2() {
    static const Interval v = sqrt(Interval(2.0));
    return v;
}
const Interval& log2() {
    static const Interval v = log(Interval(2.0));
    return v;
}
const Interval& asinh1() {
    static const Interval v = asinh(Interval(1.0));
    return v;
}

}  // namespace constants

std::string to_string(const Interval& x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "[%.17g, %.17g]", x.lo(), x.hi());
    return buf;
}

}  // namespace sqgcert
