#pragma once

#include "sqgcert/interval.hpp"
#include "sqgcert/jet.hpp"

namespace sqgcert {

// P_m(r) = int_{-pi}^{pi} cos(m x) / sqrt(1 + r^2 - 2 r cos x) dx lies in
//   ho_ns + ho_s_coeff*S + [-e_ns_radius, e_ns_radius] + [-e_s_coeff, e_s_coeff]*S
// with S = asinh(1/|u|), u = (1-r)/(1+r).
template <class T>
struct KernelParts {
    T ho_ns;
    T ho_s_coeff;
    T e_ns_radius;
    T e_s_coeff;
};

using KernelEnclosure = KernelParts<Interval>;

// Kernel parts as functions of u^2 and q = 4/(1+r); m is 1, 3 or 6. Throws
// DomainError when u^2 >= 1/66, outside the range the expansions were derived for.
template <class T>
KernelParts<T> kernel_parts(int m, const T& u2, const T& q);

extern template KernelParts<Interval> kernel_parts(int, const Interval&, const Interval&);
extern template KernelParts<Jet4> kernel_parts(int, const Jet4&, const Jet4&);

Interval u_of(const Interval& r);
KernelEnclosure kernel_I(const Interval& r);
KernelEnclosure kernel_J(const Interval& r);
KernelEnclosure kernel_L(const Interval& r);
KernelEnclosure kernel_m(const Interval& r, int m);
// K^m(r) = P_m(r)/(2 pi r), every part scaled.
KernelEnclosure K_m(const Interval& r, int m);

// asinh(1/|u|); u must not contain 0.
template <class T>
T singular_factor(const T& u) {
    return asinh(Interval(1.0) / abs(u));
}

// Full enclosure of the kernel value, given S = asinh(1/|u|).
Interval reconstruct(const KernelEnclosure& k, const Interval& S);

// int_c^d asinh(|rho_t + x - 2 + 4/a| / |rho_t - x|) dx over x, for every
// rho_t in the given interval.
Interval arcsinh_exact_integral(const Interval& c, const Interval& d, const Interval& rho_t, const Interval& a);

}  // namespace sqgcert
