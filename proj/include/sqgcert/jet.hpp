#pragma once

#include <array>

#include "sqgcert/interval.hpp"

namespace sqgcert {

// abs() of a jet whose value may change sign has no Taylor expansion; the
// quadrature engine catches this and drops to the order-0 rule.
class JetDomainError : public DomainError {
  public:
    using DomainError::DomainError;
};

// Truncated Taylor expansion of order 4 with interval coefficients: c[k]
// encloses f^(k)(x)/k! for every x of the base interval.
class Jet4 {
  public:
    static constexpr int kOrder = 4;

    Jet4() = default;
    Jet4(const Interval& constant) { c_[0] = constant; }  // NOLINT
    Jet4(double constant) { c_[0] = Interval(constant); }  // NOLINT

    static Jet4 variable(const Interval& x) {
        Jet4 j(x);
        j.c_[1] = Interval(1.0);
        return j;
    }

    const Interval& operator[](int k) const { return c_[k]; }
    Interval& operator[](int k) { return c_[k]; }
    const Interval& value() const { return c_[0]; }
    // Enclosure of f'''' over the base interval.
    Interval fourth_derivative() const { return c_[4] * Interval(24.0); }

  private:
    std::array<Interval, 5> c_{};
};

Jet4 operator+(const Jet4& x, const Jet4& y);
Jet4 operator-(const Jet4& x, const Jet4& y);
Jet4 operator-(const Jet4& x);
Jet4 operator*(const Jet4& x, const Jet4& y);
Jet4 operator/(const Jet4& x, const Jet4& y);
Jet4 operator*(const Jet4& x, const Interval& s);
Jet4 operator*(const Interval& s, const Jet4& x);
Jet4 operator+(const Jet4& x, const Interval& s);
Jet4 operator+(const Interval& s, const Jet4& x);
Jet4 operator-(const Jet4& x, const Interval& s);
Jet4 operator-(const Interval& s, const Jet4& x);
Jet4 operator/(const Jet4& x, const Interval& s);
Jet4 operator/(const Interval& s, const Jet4& x);

Jet4 sqr(const Jet4& x);
Jet4 sqrt(const Jet4& x);
Jet4 log(const Jet4& x);
Jet4 exp(const Jet4& x);
Jet4 abs(const Jet4& x);
Jet4 asinh(const Jet4& x);
Jet4 pow_int(const Jet4& x, int n);

}  // namespace sqgcert
