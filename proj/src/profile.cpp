#include "sqgcert/profile.hpp"

#include <array>
#include <cmath>

namespace sqgcert {

const char* region_name(Region r) {
    switch (r) {
        case Region::LeftRamp: return "LeftRamp";
        case Region::Middle: return "Middle";
        case Region::RightRamp: return "RightRamp";
    }
    return "?";
}

Geometry::Geometry() : Geometry(from_decimal("0.05"), 0x1p-8) {}

Geometry::Geometry(const Interval& a_, double beta_) : a(a_), beta(beta_) {
    int e = 0;
    if (!(beta > 0 && beta < 1) || std::frexp(beta, &e) != 0.5)
        throw std::invalid_argument("beta must be a power of two in (0,1)");
    if (!(a.lo() > 0 && a.hi() < 1)) throw std::invalid_argument("a must lie in (0,1)");
}

Interval Geometry::region_bounds(Region r) const {
    switch (r) {
        case Region::LeftRamp: return Interval(-1.0, left_joint());
        case Region::Middle: return Interval(left_joint(), right_joint());
        case Region::RightRamp: return Interval(right_joint(), 1.0);
    }
    throw std::logic_error("bad region");
}

std::vector<Region> classify(const Interval& rho_t, const Geometry& geo) {
    if (rho_t.lo() < -1.0 || rho_t.hi() > 1.0) throw DomainError("rho_t outside [-1,1]: " + to_string(rho_t));
    std::vector<Region> out;
    for (Region r : {Region::LeftRamp, Region::Middle, Region::RightRamp})
        if (overlaps(rho_t, geo.region_bounds(r))) out.push_back(r);
    return out;
}

Interval f_rho_scaled(const Interval& rho_t, Region region, const Geometry& geo) {
    if (!geo.region_bounds(region).contains(rho_t))
        throw DomainError(std::string("rho_t ") + to_string(rho_t) + " not inside region " + region_name(region));
    static const bool monotone = verify_ramp_monotonicity();
    if (!monotone) throw std::logic_error("ramp polynomial failed its monotonicity check");
    const Interval lo = f_rho_scaled_formula(Interval(rho_t.lo()), region, geo.beta);
    const Interval hi = f_rho_scaled_formula(Interval(rho_t.hi()), region, geo.beta);
    return hull(lo, hi);
}

Interval f_rho_scaled(const Interval& rho_t, const Geometry& geo) {
    bool first = true;
    Interval out;
    for (Region r : classify(rho_t, geo)) {
        const Interval b = geo.region_bounds(r);
        const Interval piece = Interval(std::fmax(b.lo(), rho_t.lo()), std::fmin(b.hi(), rho_t.hi()));
        const Interval v = f_rho_scaled(piece, r, geo);
        out = first ? v : hull(out, v);
        first = false;
    }
    return out;
}

bool verify_ramp_monotonicity() {
    // numerator polynomial of the ramp shape, times -2
    const std::array<long, 10> c = {0, 0, 0, 0, 0, 126, -420, 540, -315, 70};
    // 630 s^4 (1-s)^4
    const std::array<long, 9> target = {0, 0, 0, 0, 630, -2520, 3780, -2520, 630};
    for (int k = 1; k < 10; ++k)
        if (k * c[k] != target[k - 1]) return false;
    return true;
}

Interval to_rho(const Interval& rho_t, const Geometry& geo) { return to_rho_formula(rho_t, geo.a); }

Interval to_rho_t(const Interval& rho, const Geometry& geo) {
    return (Interval(2.0) / geo.a) * (rho - Interval(1.0)) + Interval(1.0);
}

BsjProfile::BsjProfile(const Geometry& geo)
    : height(Interval(1.0) / sqrt(geo.a - geo.a * Interval(geo.beta))),
      support(geo.region_bounds(Region::Middle)) {}

Interval BsjProfile::on_cell(const Interval& rho_t) const {
    if (support.contains(rho_t)) return height;
    // values are meant almost everywhere: a cell meeting the support in a
    // single point sees B_sj = 0
    if (rho_t.hi() <= support.lo() || rho_t.lo() >= support.hi()) return Interval(0.0);
    return hull(Interval(0.0), height);
}

Interval BsjProfile::norm_squared(const Geometry& geo) const {
    return geo.a / Interval(2.0) * sqr(height) * (Interval(support.hi()) - Interval(support.lo()));
}

}  // namespace sqgcert
