#include "sqgcert/quadrature.hpp"

#include <algorithm>

#include "sqgcert/kernels.hpp"

namespace sqgcert {

namespace {

Interval seg_length(const Interval& seg) { return Interval(seg.hi()) - Interval(seg.lo()); }

struct Entry {
    double lo, hi;
    Interval value;
    double width;
    std::uint64_t seq;
};

// max-heap on width; among equal widths the older entry comes first
struct Lower {
    bool operator()(const Entry& a, const Entry& b) const {
        if (a.width != b.width) return a.width < b.width;
        return a.seq > b.seq;
    }
};

Interval enclose(const Integrand& f, const Interval& seg, Rule rule) {
    if (rule == Rule::gl2) {
        try {
            return gl2_enclosure(f, seg);
        } catch (const JetDomainError&) {
            // no Taylor expansion here (e.g. |.| of a sign-changing factor)
        }
    }
    return order0_enclosure(f, seg);
}

}  // namespace

Interval gl2_enclosure(const Integrand& f, const Interval& seg) {
    static const Interval node_scale = sqrt(Interval(3.0)) / Interval(3.0);
    static const Interval inv_4320 = Interval(1.0) / Interval(4320.0);
    const Interval h = seg_length(seg);
    const Interval half = h / Interval(2.0);
    const Interval mid = (Interval(seg.lo()) + Interval(seg.hi())) / Interval(2.0);
    const Interval off = half * node_scale;
    const Interval nodes = f.value(mid + off) + f.value(mid - off);
    const Interval f4 = f.jet(Jet4::variable(seg)).fourth_derivative();
    return half * nodes + pow_int(h, 5) * inv_4320 * f4;
}

Interval order0_enclosure(const Integrand& f, const Interval& seg) { return seg_length(seg) * f.value(seg); }

IntegrationResult adapt_integrate(const Integrand& f, const Interval& domain, const ParameterSet& ctx, Rule rule) {
    IntegrationResult out;
    out.params = ctx;
    out.params.left = Interval(domain.lo());
    out.params.right = Interval(domain.hi());
    if (domain.width() == 0.0) {
        out.result = Interval(0.0);
        out.error_by_coordinate = {Interval(0.0)};
        return out;
    }

    std::vector<Entry> heap;
    std::uint64_t seq = 0;
    Interval accepted(0.0);
    try {
        const Interval root = enclose(f, domain, rule);
        heap.push_back({domain.lo(), domain.hi(), root, root.width(), seq++});
        while (!heap.empty()) {
            if (out.pops >= ctx.max_elements) {
                out.budget_exhausted = true;
                break;
            }
            std::pop_heap(heap.begin(), heap.end(), Lower{});
            const Entry e = heap.back();
            heap.pop_back();
            ++out.pops;
            const double len = e.hi - e.lo;
            if (e.width <= ctx.abs_tol && e.width <= ctx.rel_tol * len) {
                accepted += e.value;
                continue;
            }
            const double m = 0.5 * e.lo + 0.5 * e.hi;
            if (!(e.lo < m && m < e.hi)) {  // cannot split further
                accepted += e.value;
                continue;
            }
            const Interval a = enclose(f, Interval(e.lo, m), rule);
            const Interval b = enclose(f, Interval(m, e.hi), rule);
            heap.push_back({e.lo, m, a, a.width(), seq++});
            std::push_heap(heap.begin(), heap.end(), Lower{});
            heap.push_back({m, e.hi, b, b.width(), seq++});
            std::push_heap(heap.begin(), heap.end(), Lower{});
        }
    } catch (const DomainError& err) {
        out.flag = Flag::failed;
        out.failure = err.what();
        out.result = Interval::entire();
        out.error_by_coordinate = {Interval::entire()};
        return out;
    }
    // residual segments are summed by position for a thread-count independent order
    std::sort(heap.begin(), heap.end(), [](const Entry& a, const Entry& b) { return a.lo < b.lo; });
    Interval residual(0.0);
    for (const Entry& e : heap) residual += e.value;
    out.result = accepted + residual;
    const Interval centre(out.result.mid());
    out.error_by_coordinate = {out.result - centre};
    if (out.budget_exhausted && ctx.strict) {
        out.flag = Flag::failed;
        out.failure = "budget exhausted with tolerances unmet";
    }
    return out;
}

Interval integrate_singular(const Interval& bounds_of_A, const Interval& cell, const Interval& rho_t,
                            const ParameterSet& ctx) {
    if (bounds_of_A.is_point() && bounds_of_A.lo() == 0.0) return Interval(0.0);
    return bounds_of_A * arcsinh_exact_integral(Interval(cell.lo()), Interval(cell.hi()), rho_t, ctx.geo.a);
}

Staircase staircase_partition(int j, int N) {
    Staircase s;
    for (int k = 0; k < N; ++k) (std::abs(j - k) <= 1 ? s.singular : s.regular).push_back(k);
    return s;
}

}  // namespace sqgcert
