#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "sqgcert/interval.hpp"
#include "sqgcert/jet.hpp"
#include "sqgcert/profile.hpp"

namespace sqgcert {

enum class Rule { gl2, order0 };
enum class Flag { ok, failed };

struct ParameterSet {
    double abs_tol = 1e-5;
    double rel_tol = 1e-5;
    long max_elements = 100000;  // pops per adaptive integral
    bool strict = false;         // budget exhaustion counts as failure
    Rule rule = Rule::gl2;
    Geometry geo;
    Interval left{-1.0};
    Interval right{1.0};
    Region region_rho = Region::Middle;
    Region region_rhop = Region::Middle;
    Interval rho_normalized{0.0};
};

struct IntegrationResult {
    ParameterSet params;
    Interval result;
    std::vector<Interval> error_by_coordinate;  // one entry: result minus its midpoint
    Flag flag = Flag::ok;
    long pops = 0;
    bool budget_exhausted = false;
    std::string failure;
};

// An integrand evaluable both on intervals (nodes, order-0 hulls) and on
// Taylor jets (the fourth derivative for the GL2 remainder).
struct Integrand {
    std::function<Interval(const Interval&)> value;
    std::function<Jet4(const Jet4&)> jet;

    template <class F>
    static Integrand from(F f) {
        return Integrand{[f](const Interval& x) { return f(x); }, [f](const Jet4& x) { return f(x); }};
    }
};

Interval gl2_enclosure(const Integrand& f, const Interval& seg);
Interval order0_enclosure(const Integrand& f, const Interval& seg);

IntegrationResult adapt_integrate(const Integrand& f, const Interval& domain, const ParameterSet& ctx, Rule rule);
inline IntegrationResult adapt_integrate(const Integrand& f, const Interval& domain, const ParameterSet& ctx) {
    return adapt_integrate(f, domain, ctx, ctx.rule);
}

// bounds_of_A times the exact integral of asinh(1/|u|) over the cell.
Interval integrate_singular(const Interval& bounds_of_A, const Interval& cell, const Interval& rho_t,
                            const ParameterSet& ctx);

struct Staircase {
    std::vector<int> singular;
    std::vector<int> regular;
};

Staircase staircase_partition(int j, int N);

}  // namespace sqgcert
