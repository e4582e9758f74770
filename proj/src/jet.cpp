#include "sqgcert/jet.hpp"

namespace sqgcert {

namespace {
constexpr int N = Jet4::kOrder;
}

Jet4 operator+(const Jet4& x, const Jet4& y) {
    Jet4 r;
    for (int k = 0; k <= N; ++k) r[k] = x[k] + y[k];
    return r;
}

Jet4 operator-(const Jet4& x, const Jet4& y) {
    Jet4 r;
    for (int k = 0; k <= N; ++k) r[k] = x[k] - y[k];
    return r;
}

Jet4 operator-(const Jet4& x) {
    Jet4 r;
    for (int k = 0; k <= N; ++k) r[k] = -x[k];
    return r;
}

Jet4 operator*(const Jet4& x, const Jet4& y) {
    Jet4 r;
    for (int k = 0; k <= N; ++k) {
        Interval s = x[0] * y[k];
        for (int i = 1; i <= k; ++i) s += x[i] * y[k - i];
        r[k] = s;
    }
    return r;
}

Jet4 operator/(const Jet4& x, const Jet4& y) {
    if (y[0].contains_zero()) throw DomainError("jet division by a value containing zero");
    Jet4 q;
    for (int k = 0; k <= N; ++k) {
        Interval s = x[k];
        for (int i = 1; i <= k; ++i) s -= y[i] * q[k - i];
        q[k] = s / y[0];
    }
    return q;
}

Jet4 operator*(const Jet4& x, const Interval& s) {
    Jet4 r;
    for (int k = 0; k <= N; ++k) r[k] = x[k] * s;
    return r;
}
Jet4 operator*(const Interval& s, const Jet4& x) { return x * s; }

Jet4 operator+(const Jet4& x, const Interval& s) {
    Jet4 r = x;
    r[0] += s;
    return r;
}
Jet4 operator+(const Interval& s, const Jet4& x) { return x + s; }
Jet4 operator-(const Jet4& x, const Interval& s) {
    Jet4 r = x;
    r[0] -= s;
    return r;
}
Jet4 operator-(const Interval& s, const Jet4& x) { return -x + s; }

Jet4 operator/(const Jet4& x, const Interval& s) {
    Jet4 r;
    for (int k = 0; k <= N; ++k) r[k] = x[k] / s;
    return r;
}
Jet4 operator/(const Interval& s, const Jet4& x) { return Jet4(s) / x; }

Jet4 sqr(const Jet4& x) {
    Jet4 r;
    for (int k = 0; k <= N; ++k) {
        Interval s(0.0);
        for (int i = 0; 2 * i < k; ++i) s += x[i] * x[k - i];
        s = s * Interval(2.0);
        if (k % 2 == 0) s += sqr(x[k / 2]);
        r[k] = s;
    }
    return r;
}

Jet4 sqrt(const Jet4& x) {
    Jet4 r;
    r[0] = sqrt(x[0]);
    if (r[0].contains_zero()) throw DomainError("jet sqrt at a value touching zero");
    const Interval two_r0 = Interval(2.0) * r[0];
    for (int k = 1; k <= N; ++k) {
        Interval s = x[k];
        for (int i = 1; i < k; ++i) s -= r[i] * r[k - i];
        r[k] = s / two_r0;
    }
    return r;
}

Jet4 log(const Jet4& x) {
    Jet4 r;
    r[0] = log(x[0]);
    for (int k = 1; k <= N; ++k) {
        Interval s(0.0);
        for (int i = 1; i < k; ++i) s += Interval(i) * r[i] * x[k - i];
        r[k] = (x[k] - s / Interval(k)) / x[0];
    }
    return r;
}

Jet4 exp(const Jet4& x) {
    Jet4 r;
    r[0] = exp(x[0]);
    for (int k = 1; k <= N; ++k) {
        Interval s(0.0);
        for (int i = 1; i <= k; ++i) s += Interval(i) * x[i] * r[k - i];
        r[k] = s / Interval(k);
    }
    return r;
}

Jet4 abs(const Jet4& x) {
    if (x[0].lo() >= 0) return x;
    if (x[0].hi() <= 0) return -x;
    throw JetDomainError("jet abs of a value with undetermined sign");
}

Jet4 asinh(const Jet4& x) {
    if (x[0].lo() >= 0) return log(x + sqrt(sqr(x) + Interval(1.0)));
    if (x[0].hi() <= 0) return -asinh(-x);
    return log(x + sqrt(sqr(x) + Interval(1.0)));
}

Jet4 pow_int(const Jet4& x, int n) {
    if (n < 0) return Interval(1.0) / pow_int(x, -n);
    if (n == 0) return Jet4(1.0);
    if (n == 1) return x;
    Jet4 r = sqr(pow_int(x, n / 2));
    return n % 2 ? r * x : r;
}

}  // namespace sqgcert
