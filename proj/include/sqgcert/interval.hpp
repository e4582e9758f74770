#pragma once

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <utility>

namespace sqgcert {

// Raised whenever an interval operation leaves its domain (division by an
// interval containing zero, log of a non-positive interval, ...). Callers
// upstream turn it into a failure flag.
class DomainError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

namespace rounding {

// One step outward is enough for +,-,*,/ and sqrt (correctly rounded); the
// offset |x|*2^-52 is at least one ulp, so the subtraction cannot round back.
inline double down(double x) {
    if (!std::isfinite(x)) return x == std::numeric_limits<double>::infinity()
                                      ? std::numeric_limits<double>::max()
                                      : x;
    return x - (std::fabs(x) * 0x1p-52 + 0x1p-1074);
}

inline double up(double x) {
    if (!std::isfinite(x)) return x == -std::numeric_limits<double>::infinity()
                                      ? std::numeric_limits<double>::lowest()
                                      : x;
    return x + (std::fabs(x) * 0x1p-52 + 0x1p-1074);
}

// A floating-point sum that rounds to zero is exact (subnormal sums never
// lose bits), so it needs no widening.
inline double down_sum(double s) { return s == 0.0 ? 0.0 : down(s); }
inline double up_sum(double s) { return s == 0.0 ? 0.0 : up(s); }

}  // namespace rounding

class Interval {
  public:
    constexpr Interval() = default;
    Interval(double v) : lo_(v), hi_(v) {  // NOLINT: points convert implicitly
        if (std::isnan(v)) throw DomainError("interval endpoint is NaN");
    }
    Interval(double lo, double hi) : lo_(lo), hi_(hi) {
        if (std::isnan(lo) || std::isnan(hi)) throw DomainError("interval endpoint is NaN");
        if (lo > hi) throw DomainError("interval with lo > hi");
    }

    double lo() const { return lo_; }
    double hi() const { return hi_; }
    double width() const { return hi_ - lo_; }
    double mid() const { return 0.5 * lo_ + 0.5 * hi_; }
    double mag() const { return std::fmax(std::fabs(lo_), std::fabs(hi_)); }
    bool is_point() const { return lo_ == hi_; }
    bool contains(double x) const { return lo_ <= x && x <= hi_; }
    bool contains(const Interval& o) const { return lo_ <= o.lo_ && o.hi_ <= hi_; }
    bool contains_zero() const { return lo_ <= 0.0 && 0.0 <= hi_; }

    // Unchecked construction for results whose endpoints are known ordered.
    static Interval raw(double lo, double hi) {
        Interval r;
        r.lo_ = lo;
        r.hi_ = hi;
        return r;
    }
    static Interval entire() {
        return raw(-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity());
    }

    Interval& operator+=(const Interval& o);
    Interval& operator-=(const Interval& o);
    Interval& operator*=(const Interval& o);
    Interval& operator/=(const Interval& o);

  private:
    double lo_ = 0.0;
    double hi_ = 0.0;
};

inline Interval operator+(const Interval& x, const Interval& y) {
    if (y.is_point() && y.lo() == 0.0) return x;
    if (x.is_point() && x.lo() == 0.0) return y;
    return Interval::raw(rounding::down_sum(x.lo() + y.lo()), rounding::up_sum(x.hi() + y.hi()));
}

inline Interval operator-(const Interval& x, const Interval& y) {
    return Interval::raw(rounding::down_sum(x.lo() - y.hi()), rounding::up_sum(x.hi() - y.lo()));
}

inline Interval operator-(const Interval& x) { return Interval::raw(-x.hi(), -x.lo()); }

inline Interval operator*(const Interval& x, const Interval& y) {
    // products with an exact zero factor are exact
    if ((x.is_point() && x.lo() == 0.0) || (y.is_point() && y.lo() == 0.0)) return Interval(0.0);
    if (y.is_point() && y.lo() == 1.0) return x;
    if (x.is_point() && x.lo() == 1.0) return y;
    const double p1 = x.lo() * y.lo(), p2 = x.lo() * y.hi();
    const double p3 = x.hi() * y.lo(), p4 = x.hi() * y.hi();
    double lo = std::fmin(std::fmin(p1, p2), std::fmin(p3, p4));
    double hi = std::fmax(std::fmax(p1, p2), std::fmax(p3, p4));
    // 0 * inf shows up as NaN, which fmin/fmax silently drop
    if (std::isnan(p1) || std::isnan(p2) || std::isnan(p3) || std::isnan(p4))
        return Interval::entire();
    if (lo == 0.0 || hi == 0.0) {
        // a zero product is exact when one of its factors is zero, and an
        // underflow otherwise
        auto exact = [](double p, double u, double v) { return p != 0.0 || u == 0.0 || v == 0.0; };
        const bool all_exact = exact(p1, x.lo(), y.lo()) && exact(p2, x.lo(), y.hi()) &&
                               exact(p3, x.hi(), y.lo()) && exact(p4, x.hi(), y.hi());
        if (all_exact)
            return Interval::raw(lo == 0.0 ? 0.0 : rounding::down(lo), hi == 0.0 ? 0.0 : rounding::up(hi));
    }
    return Interval::raw(rounding::down(lo), rounding::up(hi));
}

inline Interval operator/(const Interval& x, const Interval& y) {
    if (y.contains_zero()) throw DomainError("division by an interval containing zero");
    if (x.is_point() && x.lo() == 0.0) return Interval(0.0);
    const double q1 = x.lo() / y.lo(), q2 = x.lo() / y.hi();
    const double q3 = x.hi() / y.lo(), q4 = x.hi() / y.hi();
    double lo = std::fmin(std::fmin(q1, q2), std::fmin(q3, q4));
    double hi = std::fmax(std::fmax(q1, q2), std::fmax(q3, q4));
    return Interval::raw(rounding::down(lo), rounding::up(hi));
}

inline Interval& Interval::operator+=(const Interval& o) { return *this = *this + o; }
inline Interval& Interval::operator-=(const Interval& o) { return *this = *this - o; }
inline Interval& Interval::operator*=(const Interval& o) { return *this = *this * o; }
inline Interval& Interval::operator/=(const Interval& o) { return *this = *this / o; }

inline Interval hull(const Interval& x, const Interval& y) {
    return Interval::raw(std::fmin(x.lo(), y.lo()), std::fmax(x.hi(), y.hi()));
}

inline double width(const Interval& x) { return x.width(); }

// Pieces share the rounded midpoint, so together they cover x exactly.
inline std::pair<Interval, Interval> midpoint_split(const Interval& x) {
    const double m = x.mid();
    return {Interval::raw(x.lo(), m), Interval::raw(m, x.hi())};
}

inline bool overlaps(const Interval& x, const Interval& y) { return x.lo() <= y.hi() && y.lo() <= x.hi(); }

// Certainly-true comparisons: every pair of members satisfies the relation.
inline bool certainly_lt(const Interval& x, const Interval& y) { return x.hi() < y.lo(); }
inline bool certainly_gt(const Interval& x, const Interval& y) { return x.lo() > y.hi(); }

inline Interval sqr(const Interval& x) {
    const double l = std::fabs(x.lo()), h = std::fabs(x.hi());
    if (x.contains_zero()) return Interval::raw(0.0, rounding::up(std::fmax(l, h) * std::fmax(l, h)));
    const double a = std::fmin(l, h), b = std::fmax(l, h);
    return Interval::raw(std::fmax(0.0, rounding::down(a * a)), rounding::up(b * b));
}

inline Interval abs(const Interval& x) {
    if (x.lo() >= 0) return x;
    if (x.hi() <= 0) return -x;
    return Interval::raw(0.0, x.mag());
}

Interval sqrt(const Interval& x);
Interval log(const Interval& x);
Interval exp(const Interval& x);
Interval asinh(const Interval& x);
Interval pow_int(const Interval& x, int n);
// Range of t*log|t| (continuous extension by 0 at t = 0).
Interval xlogabsx(const Interval& x);

// Symmetric interval [-r, r] from a magnitude bound.
inline Interval symmetric(const Interval& radius) { return Interval::raw(-radius.mag(), radius.mag()); }

// One ulp outward of the correctly rounded value of a decimal literal, e.g. "0.05" or "-4.4e-8".
Interval from_decimal(const std::string& text);
// Enclosure of the rational p/q.
inline Interval frac(double p, double q) { return Interval(p) / Interval(q); }

namespace constants {
const Interval& pi();
const Interval& sqrt2();
const Interval& log2();
const Interval& asinh1();
}  // namespace constants

std::string to_string(const Interval& x);

}  // namespace sqgcert
