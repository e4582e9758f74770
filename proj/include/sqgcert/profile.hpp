#pragma once

#include <vector>

#include "sqgcert/interval.hpp"
#include "sqgcert/jet.hpp"

namespace sqgcert {

enum class Region { LeftRamp, Middle, RightRamp };

const char* region_name(Region r);

// a and beta; beta must be a power of two so the region joints -1+beta and
// 1-beta are exact doubles.
struct Geometry {
    Interval a;
    double beta;

    Geometry();
    Geometry(const Interval& a_, double beta_);

    double left_joint() const { return -1.0 + beta; }
    double right_joint() const { return 1.0 - beta; }
    Interval region_bounds(Region r) const;
};

std::vector<Region> classify(const Interval& rho_t, const Geometry& geo = Geometry());

// -(1/2) * (126 - 420 s + 540 s^2 - 315 s^3 + 70 s^4) s^5, the ramp written in
// the unit variable s = (1 + rho_t)/beta (left) or (1 - rho_t)/beta (right).
template <class T>
T ramp_shape(const T& s) {
    T p = Interval(70.0);
    p = p * s + Interval(-315.0);
    p = p * s + Interval(540.0);
    p = p * s + Interval(-420.0);
    p = p * s + Interval(126.0);
    return p * pow_int(s, 5) * Interval(-0.5);
}

// (a/2) f_rho on a fixed region, as a formula (usable with jets).
template <class T>
T f_rho_scaled_formula(const T& rho_t, Region region, double beta) {
    switch (region) {
        case Region::LeftRamp: return ramp_shape((rho_t + Interval(1.0)) / Interval(beta));
        case Region::RightRamp: return ramp_shape((Interval(1.0) - rho_t) / Interval(beta));
        case Region::Middle: break;
    }
    return T(Interval(-0.5));
}

// Enclosure over rho_t (which must lie in the region) from the endpoint hull;
// valid because every branch is monotone (see verify_ramp_monotonicity).
Interval f_rho_scaled(const Interval& rho_t, Region region, const Geometry& geo = Geometry());
// Region-agnostic version: hull over every region rho_t touches.
Interval f_rho_scaled(const Interval& rho_t, const Geometry& geo = Geometry());

// Checks (in exact integer arithmetic) that the derivative of the ramp shape
// factors as -315 s^4 (1-s)^4, so each branch is monotone on [0,1].
bool verify_ramp_monotonicity();

Interval to_rho(const Interval& rho_t, const Geometry& geo = Geometry());
Interval to_rho_t(const Interval& rho, const Geometry& geo = Geometry());

template <class T>
T to_rho_formula(const T& rho_t, const Interval& a) {
    return Interval(1.0) + (a / Interval(2.0)) * (rho_t - Interval(1.0));
}

struct BsjProfile {
    Interval height;  // 1/sqrt(a - a beta)
    Interval support;

    explicit BsjProfile(const Geometry& geo = Geometry());
    // Range of B_sj over a cell.
    Interval on_cell(const Interval& rho_t) const;
    // L2(rho) norm squared, (a/2) * height^2 * |support|.
    Interval norm_squared(const Geometry& geo = Geometry()) const;
};

}  // namespace sqgcert
