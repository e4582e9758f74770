#pragma once

#include <functional>
#include <string>
#include <type_traits>
#include <vector>

#include "sqgcert/interval.hpp"
#include "sqgcert/kernels.hpp"
#include "sqgcert/profile.hpp"
#include "sqgcert/quadrature.hpp"

namespace sqgcert {

// Partition of [-1,1] into cells [edges[k], edges[k+1]].
struct Mesh {
    std::vector<double> edges;

    static Mesh uniform(int N);
    // uniform pieces on the left ramp, the middle and the right ramp
    static Mesh three_region(int n1, int n2, int n3, const Geometry& geo = Geometry());

    int size() const { return static_cast<int>(edges.size()) - 1; }
    Interval cell(int k) const { return Interval(edges[k], edges[k + 1]); }
    Interval cell_width(int k) const { return Interval(edges[k + 1]) - Interval(edges[k]); }
};

struct GridEnclosures {
    int N = 0;
    std::vector<Interval> values;
    std::vector<Flag> flags;
    std::string label;
    long pops = 0;
    int budget_hits = 0;  // sub-integrals that ran out of budget

    bool any_flagged() const;
};

enum class Quantity { ItildeMin, E3, ThetaA3, E6 };

const char* quantity_name(Quantity q);
Quantity parse_quantity(const std::string& s);

struct OperatorQuantity {
    Quantity which;
    Interval lambda_ref;

    static OperatorQuantity make(Quantity q);
    int m() const;
};

// Pieces multiplying the kernels in the rho_t' integrand, with g = (a/2) f_rho,
// t the outer variable and x the inner one:
//   multiplier:  -g(x) / (2 pi rho)                     (against P_1, I tilde)
//   symmetric:   h/2 [g(x) rho'/(2 pi rho^2) + g(t) rho^2/(2 pi rho'^3)]
//   antisym.:    h/2 [g(x) rho'/(2 pi rho^2) - g(t) rho^2/(2 pi rho'^3)]
// Residual (e + lambda B_sj) is h * multiplier * P_1 plus symmetric * P_m on
// the support of B_sj.
//
// When t and x both sit in the middle region g = -1/2 on both sides and, with
// delta = (rho'-rho)/rho,
//   h * multiplier + symmetric = -h/(8 pi rho) delta (2 delta^2 + delta^3 - 2) / (1+delta)^3
//   antisymmetric              = -h/(8 pi rho) delta (4 + 6 delta + 4 delta^2 + delta^3) / (1+delta)^3
// which keeps the cancellation between the halves.
struct Cofactor {
    enum class Kind { Multiplier, Symmetric, Antisymmetric, Residual };

    Kind kind;
    Interval t;
    Interval rho;      // outer rho
    Interval g_out;    // g over the outer cell
    Interval scale;    // h for the B_sj products, 1 for I tilde
    Geometry geo;
    bool flat_out;     // t inside the middle region

    Cofactor(Kind k, const Interval& rho_t, const Interval& scale_, const Geometry& geo);

    // on intervals the endpoint hull is much tighter than the polynomial
    template <class T>
    T g_in(const T& x, Region region) const {
        if constexpr (std::is_same_v<T, Interval>) return f_rho_scaled(x, region, geo);
        else return f_rho_scaled_formula(x, region, geo.beta);
    }

    // >= 0
    template <class T>
    T multiplier(const T& x, Region region) const {
        return g_in(x, region) * (Interval(-1.0) / (two_pi() * rho));
    }

    // both halves are <= 0
    template <class T>
    void halves(const T& x, Region region, T& first, T& second) const {
        const T rp = to_rho_formula(x, geo.a);
        first = g_in(x, region) * rp * (scale / (Interval(2.0) * two_pi() * sqr(rho)));
        second = g_out * sqr(rho) * (scale / Interval(2.0)) / (two_pi() * pow_int(rp, 3));
    }

    template <class T>
    T reduced(const T& x, bool antisymmetric) const {
        static const Interval eight_pi = Interval(8.0) * constants::pi();
        const T delta = (geo.a / Interval(2.0)) * (x - t) / rho;
        const T poly = antisymmetric ? Interval(4.0) + delta * (Interval(6.0) + delta * (Interval(4.0) + delta))
                                     : sqr(delta) * (Interval(2.0) + delta) - Interval(2.0);
        return delta * poly / pow_int(Interval(1.0) + delta, 3) * (-scale / (eight_pi * rho));
    }

  private:
    static const Interval& two_pi() {
        static const Interval v = Interval(2.0) * constants::pi();
        return v;
    }
};

// Integrand sum_k c_k (ns_k + s_k S) +- mag_k (ens_k + es_k S) with
// S = asinh(1/|u|) and mag_k >= |c_k|. Keeping each product grouped matters
// when c_k is a wide interval.
template <class T>
struct KernelTerms {
    struct Product {
        T c, mag, ns, s, ens, es;
    };
    int n = 0;
    Product p[2];

    template <class S_>
    T value(const S_& S) const {
        static const Interval pm1(-1.0, 1.0);
        T out = p[0].c * (p[0].ns + p[0].s * S) + pm1 * (p[0].mag * (p[0].ens + p[0].es * S));
        if (n > 1) out = out + p[1].c * (p[1].ns + p[1].s * S) + pm1 * (p[1].mag * (p[1].ens + p[1].es * S));
        return out;
    }
    // the S-free part
    T smooth() const {
        static const Interval pm1(-1.0, 1.0);
        T out = p[0].c * p[0].ns + pm1 * (p[0].mag * p[0].ens);
        if (n > 1) out = out + p[1].c * p[1].ns + pm1 * (p[1].mag * p[1].ens);
        return out;
    }
    // coefficient of S
    T singular() const {
        static const Interval pm1(-1.0, 1.0);
        T out = p[0].c * p[0].s + pm1 * (p[0].mag * p[0].es);
        if (n > 1) out = out + p[1].c * p[1].s + pm1 * (p[1].mag * p[1].es);
        return out;
    }
};

template <class T>
KernelTerms<T> kernel_terms(const Cofactor& cof, int m, const T& x, Region region, const T& u2, const T& q) {
    using K = Cofactor::Kind;
    KernelTerms<T> out;
    if (cof.kind == K::Multiplier || (cof.kind == K::Residual && region != Region::Middle)) {
        const auto k1 = kernel_parts<T>(1, u2, q);
        const T c = cof.kind == K::Residual ? cof.multiplier(x, region) * cof.scale : cof.multiplier(x, region);
        out.n = 1;
        out.p[0] = {c, c, k1.ho_ns, k1.ho_s_coeff, k1.e_ns_radius, k1.e_s_coeff};
        return out;
    }
    const auto km = kernel_parts<T>(m, u2, q);
    T first, second;
    cof.halves(x, region, first, second);
    const T mag = -(first + second);
    const bool reduce = cof.flat_out && region == Region::Middle;
    if (cof.kind == K::Residual) {
        // cI P_1 + cS P_m = cI (P_1 - P_m) + (cI + cS) P_m
        const auto k1 = kernel_parts<T>(1, u2, q);
        const T cI = cof.multiplier(x, region) * cof.scale;
        const T R = reduce ? cof.reduced(x, false) : cI + first + second;
        out.n = 2;
        out.p[0] = {cI,
                    cI,
                    k1.ho_ns - km.ho_ns,
                    k1.ho_s_coeff - km.ho_s_coeff,
                    k1.e_ns_radius + km.e_ns_radius,
                    k1.e_s_coeff + km.e_s_coeff};
        out.p[1] = {R, reduce ? abs(R) : cI + mag, km.ho_ns, km.ho_s_coeff, km.e_ns_radius, km.e_s_coeff};
        return out;
    }
    out.n = 1;
    if (cof.kind == K::Symmetric) {
        out.p[0] = {first + second, mag, km.ho_ns, km.ho_s_coeff, km.e_ns_radius, km.e_s_coeff};
    } else {
        const T c = reduce ? cof.reduced(x, true) : first - second;
        out.p[0] = {c, reduce ? abs(c) : mag, km.ho_ns, km.ho_s_coeff, km.e_ns_radius, km.e_s_coeff};
    }
    return out;
}

struct CellResult {
    Interval value;
    Flag flag = Flag::ok;
    long pops = 0;
    int budget_hits = 0;
    std::string failure;
};

// int over x in domain of cofactor(t, x) P_m(rho/rho') dx, t ranging over the
// outer cell mesh.cell(j). Cells k with |j-k| <= 1 get the closed-form
// treatment of the asinh factor.
CellResult integrate_against_kernel(const Cofactor& cof, int m, const Interval& domain, const Mesh& mesh, int j,
                                    const ParameterSet& ctx);

CellResult eval_I_tilde(const Mesh& mesh, int j, const ParameterSet& ctx);
CellResult eval_quantity_cell(const OperatorQuantity& q, const Mesh& mesh, int j, const ParameterSet& ctx);

struct SweepOptions {
    int threads = 1;
    // called after every finished cell with (done, total)
    std::function<void(int, int)> progress;
};

// Runs fn(k) for k in [0, n) on a pool of workers.
void parallel_for(int n, int threads, const std::function<void(int)>& fn);

GridEnclosures eval_error_vector(const OperatorQuantity& q, int N, const ParameterSet& ctx,
                                 const SweepOptions& opts = {});

// ((a/N) sum values^2)^(1/2) on a uniform grid.
Interval grid_l2_norm(const GridEnclosures& g, const Geometry& geo = Geometry());
// |(a/N) sum values_j B_sj(I_j)|; needs beta N / 2 integral.
Interval grid_inner_Bsj(const GridEnclosures& g, const Geometry& geo = Geometry());

// Lowest lower bound and the cell attaining it.
struct GridMinimum {
    Interval value;
    int cell = -1;
};
GridMinimum grid_min(const GridEnclosures& g);

void write_report(const std::string& path, const GridEnclosures& g);
GridEnclosures read_report(const std::string& path);

}  // namespace sqgcert
