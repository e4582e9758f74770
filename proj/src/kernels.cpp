#include "sqgcert/kernels.hpp"

namespace sqgcert {

namespace {

const Interval& value_of(const Interval& x) { return x; }
const Interval& value_of(const Jet4& x) { return x.value(); }

struct KernelConstants {
    Interval one{1.0}, two{2.0};
    Interval s2 = constants::sqrt2();
    Interval a1 = constants::asinh1();
    Interval l2 = constants::log2();
    Interval u2_limit = frac(1, 66);

    // I
    Interval i_5_2 = frac(5, 2), i_3_16 = frac(3, 16), i_9_4 = frac(9, 4), i_5_8 = frac(5, 8), i_5_4 = frac(5, 4);
    // J
    Interval j_46_15 = frac(46, 15), j_1_48 = frac(1, 48), j_15_4 = frac(15, 4), j_45_8 = frac(45, 8), j_1_6 = frac(1, 6);
    Interval j_7_2 = frac(7, 2), j_3_2 = frac(3, 2), j_1_240 = frac(1, 240), j_3_16 = frac(3, 16), j_37_8 = frac(37, 8);
    Interval j_73_30 = frac(73, 30), j_2_3 = frac(2, 3), j_2_5 = frac(2, 5), j_37_4 = frac(37, 4);
    // L
    Interval l_495_8 = frac(495, 8), l_77_4 = frac(77, 4), l_165_128 = frac(165, 128), l_33_640 = frac(33, 640);
    Interval l_7_15360 = frac(7, 15360), l_8_3465 = frac(8, 3465), l_13_2 = frac(13, 2), l_1_443520 = frac(1, 443520);
    Interval l_1_2240 = frac(1, 2240), l_5_896 = frac(5, 896), l_7_96 = frac(7, 96), l_45_128 = frac(45, 128);
    Interval l_143_8 = frac(143, 8), l_137969_55440 = frac(137969, 55440), l_2_11 = frac(2, 11), l_2_9 = frac(2, 9);
    Interval l_2_7 = frac(2, 7), l_2_5 = frac(2, 5), l_2_3 = frac(2, 3), l_143_4 = frac(143, 4);
};

const KernelConstants& kc() {
    static const KernelConstants c;
    return c;
}

template <class T>
KernelParts<T> parts_I(const T& u2, const T& q) {
    const auto& k = kc();
    const T w = u2 + k.one;
    const T sw = sqrt(w);
    const T u4 = sqr(u2);
    KernelParts<T> p;
    p.ho_ns = q * ((k.one / k.s2) * log((k.one + sw) / k.two) + (k.one / sw) * (-k.two + (sw - k.one) * k.a1 + k.l2)) +
              q * (u2 * (-k.two * k.s2 + k.i_5_2 * k.a1) - k.i_3_16 * u4 * (k.s2 - Interval(3.0) * k.a1));
    p.ho_s_coeff = q;
    p.e_ns_radius = q * k.i_9_4 * u4 + q * k.i_5_8 * u2 * abs(k.s2 - k.two / sw - k.two * k.a1);
    p.e_s_coeff = q * k.i_5_4 * u2;
    return p;
}

template <class T>
KernelParts<T> parts_J(const T& u2, const T& q) {
    const auto& k = kc();
    const T w = u2 + k.one;
    const T sw = sqrt(w);
    const T w32 = w * sw;
    const T w52 = sqr(w) * sw;
    const T u4 = sqr(u2);
    const T u6 = u4 * u2;
    KernelParts<T> p;
    p.ho_ns = q * (-k.j_46_15 / w52 - k.j_1_48 * u6 * (Interval(13.0) * k.s2 - Interval(15.0) * k.a1) + k.a1) +
              q * (-k.a1 / w52 + u4 * (-k.j_15_4 / k.s2 - k.two / w52 + k.j_45_8 * k.a1)) +
              q * (k.j_1_6 * u2 * (Interval(-45.0) * k.s2 + Interval(8.0) / w52 + Interval(45.0) * k.a1)) +
              q * (k.l2 / w52 + log((k.one + sw) / k.two) / (Interval(4.0) * k.s2));
    p.ho_s_coeff = q;
    p.e_ns_radius = q * (k.j_7_2 + k.j_3_2) * u2 +
                    q * k.j_1_240 * u2 * abs(Interval(-7.0) * k.s2 - Interval(24.0) / w52 + Interval(40.0) / w32) +
                    q * k.j_3_16 * u2 * abs(-k.s2 + Interval(8.0) / w52) +
                    q * k.j_37_8 * u2 *
                        abs(k.j_73_30 / k.s2 - k.two / sw - k.j_2_3 / w32 - k.j_2_5 / w52 - k.two * k.a1);
    p.e_s_coeff = q * k.j_37_4 * u2;
    return p;
}

template <class T>
KernelParts<T> parts_L(const T& u2, const T& q) {
    const auto& k = kc();
    const T w = u2 + k.one;
    const T sw = sqrt(w);
    const T w2 = sqr(w);
    const T w32 = w * sw;
    const T w52 = w2 * sw;
    const T w72 = w2 * w32;
    const T w92 = sqr(w2) * sw;
    const T w112 = w92 * w;
    const T u4 = sqr(u2);
    const T u6 = u4 * u2;
    const T u8 = sqr(u4);
    const T u10 = u8 * u2;
    const T u12 = sqr(u6);
    const Interval& s2 = k.s2;
    const Interval& a1 = k.a1;
    KernelParts<T> p;
    p.ho_ns = q * (a1 + Interval(33.0) * u2 * (a1 - s2) - k.l_495_8 * u4 * (s2 - Interval(3.0) * a1) -
                   k.l_77_4 * u6 * (Interval(13.0) * s2 - Interval(15.0) * a1)) +
              q * (-k.l_165_128 * u8 * (Interval(43.0) * s2 - Interval(105.0) * a1) -
                   k.l_33_640 * u10 * (Interval(257.0) * s2 - Interval(315.0) * a1) -
                   k.l_7_15360 * u12 * (Interval(221.0) * s2 - Interval(495.0) * a1)) +
              q * (-k.l_8_3465 / w112 *
                   (Interval(1627.0) +
                    Interval(11.0) * u2 *
                        (Interval(-604.0) + Interval(3366.0) * u2 - Interval(2268.0) * u4 + Interval(945.0) * u6))) +
              q * ((k.l2 - a1) / w112 + log((k.one + sw) / k.two) / (Interval(32.0) * s2));
    const T s2w = s2 * w112;
    const T P1 = Interval(8192.0) + Interval(45056.0) * u2 + Interval(101376.0) * u4 + Interval(118272.0) * u6 +
                 Interval(73920.0) * u8 - Interval(5419.0) * s2w;
    const T P2 = Interval(1024.0) + Interval(5632.0) * u2 + Interval(12672.0) * u4 + Interval(14784.0) * u6 -
                 Interval(533.0) * s2w;
    const T P3 = Interval(512.0) + Interval(2816.0) * u2 + Interval(6336.0) * u4 - Interval(151.0) * s2w;
    p.ho_s_coeff = q;
    p.e_ns_radius =
        q * (k.l_13_2 + Interval(32.0)) * u2 + q * abs(k.l_1_443520 * u2 * P1 / w112) +
        q * abs(k.l_1_2240 * u2 * P2 / w112) + q * abs(k.l_5_896 * u2 * P3 / w112) +
        q * abs(k.l_7_96 * u2 * (Interval(-13.0) * s2 - Interval(576.0) / w112 + Interval(704.0) / w92)) +
        q * abs(k.l_45_128 * u2 * (-s2 + Interval(64.0) / w112)) +
        q * abs(k.l_143_8 * u2 *
                (k.l_137969_55440 / s2 - k.l_2_11 / w112 - k.l_2_9 / w92 - k.l_2_7 / w72 - k.l_2_5 / w52 -
                 k.l_2_3 / w32 - k.two / sw - k.two * a1));
    p.e_s_coeff = q * k.l_143_4 * u2;
    return p;
}

}  // namespace

template <class T>
KernelParts<T> kernel_parts(int m, const T& u2, const T& q) {
    if (!(value_of(u2).hi() < kc().u2_limit.lo()))
        throw DomainError("kernel expansion used with u^2 >= 1/66: " + to_string(value_of(u2)));
    switch (m) {
        case 1: return parts_I(u2, q);
        case 3: return parts_J(u2, q);
        case 6: return parts_L(u2, q);
        default: break;
    }
    throw std::invalid_argument("kernel order must be 1, 3 or 6");
}

template KernelParts<Interval> kernel_parts(int, const Interval&, const Interval&);
template KernelParts<Jet4> kernel_parts(int, const Jet4&, const Jet4&);

Interval u_of(const Interval& r) {
    if (r.lo() <= 0) throw DomainError("kernel radius must be positive: " + to_string(r));
    // single occurrence of r keeps the enclosure tight
    return Interval(2.0) / (Interval(1.0) + r) - Interval(1.0);
}

KernelEnclosure kernel_m(const Interval& r, int m) {
    const Interval u = u_of(r);
    const Interval q = Interval(4.0) / (Interval(1.0) + r);
    return kernel_parts(m, sqr(u), q);
}

KernelEnclosure kernel_I(const Interval& r) { return kernel_m(r, 1); }
KernelEnclosure kernel_J(const Interval& r) { return kernel_m(r, 3); }
KernelEnclosure kernel_L(const Interval& r) { return kernel_m(r, 6); }

KernelEnclosure K_m(const Interval& r, int m) {
    KernelEnclosure k = kernel_m(r, m);
    const Interval scale = Interval(1.0) / (Interval(2.0) * constants::pi() * r);
    k.ho_ns *= scale;
    k.ho_s_coeff *= scale;
    k.e_ns_radius *= scale;
    k.e_s_coeff *= scale;
    return k;
}

Interval reconstruct(const KernelEnclosure& k, const Interval& S) {
    return k.ho_ns + k.ho_s_coeff * S + symmetric(k.e_ns_radius) + symmetric(k.e_s_coeff) * S;
}

namespace {

struct SingularTerms {
    const Interval& a;
    Interval four_over_a = Interval(4.0) / a;

    Interval L(const Interval& x, const Interval& t) const {
        const Interval s = four_over_a + (Interval(-2.0) + x + t);
        return s + sqrt(sqr(x - t) + sqr(s));
    }
    Interval rad(const Interval& x, const Interval& t) const {
        return Interval(8.0) + Interval(4.0) * a * (Interval(-2.0) + x + t) +
               sqr(a) * (Interval(2.0) + (Interval(-2.0) + x) * x + (Interval(-2.0) + t) * t);
    }
    Interval N(const Interval& x, const Interval& t) const {
        return Interval(2.0) + a * (Interval(-1.0) + x) + sqrt(rad(x, t));
    }
    Interval M(const Interval& x, const Interval& t) const {
        return Interval(4.0) + a * (Interval(-2.0) + x + t) + constants::sqrt2() * sqrt(rad(x, t));
    }
    // all terms of the log form except the two (x - t) log|x - t| ones
    Interval smooth(const Interval& c, const Interval& d, const Interval& t) const {
        return -c * log(L(c, t)) + d * log(L(d, t)) +
               constants::sqrt2() / a * (Interval(-2.0) + a - a * t) * log(N(c, t) / N(d, t)) +
               t * log(M(c, t) / M(d, t));
    }
    static Interval xlog_part(const Interval& c, const Interval& d, const Interval& t) {
        return xlogabsx(c - t) - xlogabsx(d - t);
    }
};

}  // namespace

Interval arcsinh_exact_integral(const Interval& c, const Interval& d, const Interval& rho_t, const Interval& a) {
    if (c.is_point() && d.is_point() && c.lo() == d.lo()) return Interval(0.0);
    if (c.lo() < -1.0 || d.hi() > 1.0 || c.lo() > d.hi())
        throw DomainError("arcsinh integral needs -1 <= c <= d <= 1");
    const SingularTerms st{a};
    Interval smooth, xl;
    if (rho_t.is_point()) {
        smooth = st.smooth(c, d, rho_t);
        xl = SingularTerms::xlog_part(c, d, rho_t);
    } else {
        // The log form depends on rho_t through two pieces: the smooth terms,
        // which vary like (d-c)/W with W ~ 4/a and are bounded by a mean-value
        // form, and (c-t)log|c-t| - (d-t)log|d-t|, which is unimodal in t with
        // its maximum at (c+d)/2 and is bounded from endpoint values.
        const Interval m(rho_t.mid());
        const Interval x = hull(c, d);
        const Interval W = rho_t + x - Interval(2.0) + st.four_over_a;
        const Interval tau = rho_t - x;
        const Interval root = sqrt(sqr(W) + sqr(tau));
        const Interval D = (Interval(1.0) + (W + tau) / root) / (W + root);
        smooth = st.smooth(c, d, m) + (d - c) * D * (rho_t - m);

        xl = hull(SingularTerms::xlog_part(c, d, Interval(rho_t.lo())),
                  SingularTerms::xlog_part(c, d, Interval(rho_t.hi())));
        const Interval crit = (c + d) / Interval(2.0);
        if (overlaps(crit, rho_t)) {
            const Interval piece(std::fmax(crit.lo(), rho_t.lo()), std::fmin(crit.hi(), rho_t.hi()));
            xl = hull(xl, SingularTerms::xlog_part(c, d, piece));
        }
    }
    Interval r = smooth + xl;
    // the integrand is positive
    return Interval::raw(std::fmax(r.lo(), 0.0), std::fmax(r.hi(), 0.0));
}

}  // namespace sqgcert
