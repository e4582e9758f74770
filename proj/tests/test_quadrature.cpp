#include <cmath>
#include <fstream>
#include <random>
#include <sstream>

#include "doctest.h"
#include "sqgcert/kernels.hpp"
#include "sqgcert/quadrature.hpp"

using namespace sqgcert;

namespace {

struct ClosedForm {
    const char* name;
    Integrand f;
    Interval domain;
    double exact;
};

// Ten integrals with known antiderivatives.
std::vector<ClosedForm> library() {
    return {
        {"x^3", Integrand::from([](const auto& x) { return x * x * x; }), Interval(0, 1), 0.25},
        {"x^4", Integrand::from([](const auto& x) { return pow_int(x, 4); }), Interval(0, 1), 0.2},
        {"exp", Integrand::from([](const auto& x) { return exp(x); }), Interval(0, 1), std::exp(1.0) - 1},
        {"1/x", Integrand::from([](const auto& x) { return Interval(1.0) / x; }), Interval(1, 2), std::log(2.0)},
        {"sqrt", Integrand::from([](const auto& x) { return sqrt(x); }), Interval(1, 4), 14.0 / 3},
        {"log", Integrand::from([](const auto& x) { return log(x); }), Interval(1, 2), 2 * std::log(2.0) - 1},
        {"gauss-like", Integrand::from([](const auto& x) { return exp(-(x * x)); }), Interval(0, 1),
         0.74682413281242702540},
        {"1/(1+x^2)", Integrand::from([](const auto& x) { return Interval(1.0) / (Interval(1.0) + x * x); }),
         Interval(0, 1), M_PI / 4},
        {"asinh", Integrand::from([](const auto& x) { return asinh(x); }), Interval(0, 1),
         std::asinh(1.0) - std::sqrt(2.0) + 1},
        {"x log x", Integrand::from([](const auto& x) { return x * log(x); }), Interval(1, 3),
         4.5 * std::log(3.0) - 2},
    };
}

ParameterSet quick_ctx(double tol = 1e-6, long budget = 20000) {
    ParameterSet p;
    p.abs_tol = tol;
    p.rel_tol = tol;
    p.max_elements = budget;
    return p;
}

// Reference for int_c^d A(x) asinh(W/|t-x|) dx by composite Gauss-Legendre
// graded geometrically towards the singular point (independent of the library).
double graded_side(double near, double far, double t, double a, double (*A)(double)) {
    static const double xg[5] = {-0.9061798459386640, -0.5384693101056831, 0.0, 0.5384693101056831,
                                 0.9061798459386640};
    static const double wg[5] = {0.2369268850561891, 0.4786286704993665, 0.5688888888888889, 0.4786286704993665,
                                 0.2369268850561891};
    auto f = [&](double x) { return A(x) * std::asinh(std::fabs(t + x - 2 + 4 / a) / std::fabs(t - x)); };
    double s = 0, edge = near;
    for (double frac = 1e-9; frac < 1; frac *= 2) {
        const double next = near + (far - near) * std::min(1.0, 2 * frac);
        double p = 0;
        for (int i = 0; i < 5; ++i) p += wg[i] * f(0.5 * (edge + next) + 0.5 * (next - edge) * xg[i]);
        s += 0.5 * std::fabs(next - edge) * p;
        edge = next;
    }
    return s;
}

double graded_reference(double c, double d, double t, double a, double (*A)(double)) {
    if (t <= c) return graded_side(c, d, t, a, A);
    if (t >= d) return graded_side(d, c, t, a, A);
    return graded_side(t, c, t, a, A) + graded_side(t, d, t, a, A);
}

}  // namespace

TEST_CASE("gl2 examples") {
    auto cube = Integrand::from([](const auto& x) { return x * x * x; });
    Interval r = gl2_enclosure(cube, Interval(0, 1));
    CHECK(r.contains(0.25));
    CHECK(r.width() < 1e-14);  // remainder vanishes for cubics
    CHECK(cube.jet(Jet4::variable(Interval(0, 1))).fourth_derivative().mag() < 1e-300);

    auto one = Integrand::from([](const auto&) { return Interval(1.0); });
    Interval o = gl2_enclosure(one, Interval(0, 1));
    CHECK(o.contains(1.0));
    CHECK(o.width() < 1e-14);

    auto quartic = Integrand::from([](const auto& x) { return pow_int(x, 4); });
    Interval q = gl2_enclosure(quartic, Interval(0, 1));
    CHECK(q.contains(0.2));
    CHECK(q.width() < 24.0 / 4320 + 1e-12);
}

TEST_CASE("order0 examples") {
    auto c = Integrand::from([](const auto&) { return Interval(3.5); });
    Interval r = order0_enclosure(c, Interval(0, 1));
    CHECK(r.contains(3.5));
    CHECK(r.width() < 1e-14);
    auto id = Integrand::from([](const auto& x) { return x; });
    Interval i = order0_enclosure(id, Interval(0, 1));
    CHECK(i.contains(0.5));
    CHECK(i.lo() >= -1e-15);
    CHECK(i.hi() <= 1 + 1e-15);
    auto e = Integrand::from([](const auto& x) { return exp(x); });
    Interval m = order0_enclosure(e, Interval(0, 1));
    CHECK(m.width() <= (std::exp(1.0) - 1) + 1e-12);
}

TEST_CASE("adapt_integrate contains the exact value for the test library under both rules") {
    for (const auto& cf : library()) {
        for (Rule rule : {Rule::gl2, Rule::order0}) {
            const IntegrationResult r = adapt_integrate(cf.f, cf.domain, quick_ctx(), rule);
            CHECK_MESSAGE(r.flag == Flag::ok, std::string(cf.name));
            CHECK_MESSAGE(r.result.contains(cf.exact), std::string(cf.name) << " " << to_string(r.result));
        }
        const IntegrationResult g = adapt_integrate(cf.f, cf.domain, quick_ctx(), Rule::gl2);
        CHECK_MESSAGE(g.result.width() < 1e-5, std::string(cf.name));
    }
}

TEST_CASE("adapt_integrate: smooth integrand meets the tolerance, constants take one pop") {
    auto gauss = Integrand::from([](const auto& x) { return exp(-(x * x) * Interval(10.0)); });
    IntegrationResult r = adapt_integrate(gauss, Interval(-1, 1), quick_ctx(1e-5, 100000));
    CHECK_FALSE(r.budget_exhausted);
    CHECK(r.result.contains(0.56049428464892408));  // sqrt(pi/10) erf(sqrt(10))
    CHECK(r.result.width() < 1e-5 * r.pops);

    auto c = Integrand::from([](const auto&) { return Interval(2.0); });
    IntegrationResult k = adapt_integrate(c, Interval(0, 1), quick_ctx());
    CHECK(k.pops == 1);
    CHECK(k.result.contains(2.0));
}

TEST_CASE("adapt_integrate: zero tolerance exhausts the budget") {
    auto e = Integrand::from([](const auto& x) { return exp(x); });
    ParameterSet p = quick_ctx(0.0, 500);
    IntegrationResult r = adapt_integrate(e, Interval(0, 1), p);
    CHECK(r.budget_exhausted);
    CHECK(r.pops == 500);
    CHECK(r.flag == Flag::ok);
    CHECK(r.result.contains(std::exp(1.0) - 1));
    p.strict = true;
    IntegrationResult s = adapt_integrate(e, Interval(0, 1), p);
    CHECK(s.flag == Flag::failed);
}

TEST_CASE("adapt_integrate: integrand failure flags the result") {
    auto bad = Integrand::from([](const auto& x) { return Interval(1.0) / x; });
    IntegrationResult r = adapt_integrate(bad, Interval(-1, 1), quick_ctx());
    CHECK(r.flag == Flag::failed);
}

TEST_CASE("refinement monotonicity on the library") {
    for (const auto& cf : library()) {
        const IntegrationResult coarse = adapt_integrate(cf.f, cf.domain, quick_ctx(1e-4, 5000), Rule::gl2);
        const IntegrationResult fine = adapt_integrate(cf.f, cf.domain, quick_ctx(5e-5, 5000), Rule::gl2);
        CHECK_MESSAGE(fine.result.width() <= coarse.result.width() * (1 + 1e-9) + 1e-15, std::string(cf.name));
    }
}

TEST_CASE("gl2 is inside order0 after three bisections") {
    for (const auto& cf : library()) {
        const double l = cf.domain.lo(), h = l + 0.25;
        Interval o(0.0);
        for (int i = 0; i < 8; ++i)
            o += order0_enclosure(cf.f, Interval(l + (h - l) * i / 8, l + (h - l) * (i + 1) / 8));
        const Interval g = gl2_enclosure(cf.f, Interval(l, h));
        CHECK_MESSAGE(o.contains(g), std::string(cf.name));
    }
}

TEST_CASE("staircase partition") {
    Staircase s = staircase_partition(0, 4);
    CHECK(s.singular == std::vector<int>{0, 1});
    CHECK(s.regular == std::vector<int>{2, 3});
    s = staircase_partition(2, 4);
    CHECK(s.singular == std::vector<int>{1, 2, 3});
    CHECK(s.regular == std::vector<int>{0});
    for (int j = 0; j < 512; ++j) {
        s = staircase_partition(j, 512);
        std::vector<int> all = s.singular;
        all.insert(all.end(), s.regular.begin(), s.regular.end());
        std::sort(all.begin(), all.end());
        REQUIRE(all.size() == 512);
        for (int k = 0; k < 512; ++k) REQUIRE(all[k] == k);
    }
}

TEST_CASE("integrate_singular") {
    ParameterSet p;
    const Interval cell(0.1, 0.11);
    CHECK(integrate_singular(Interval(0.0), cell, Interval(0.105), p).mag() == 0.0);
    const Interval unit = integrate_singular(Interval(1.0), cell, Interval(0.105), p);
    const Interval direct = arcsinh_exact_integral(Interval(0.1), Interval(0.11), Interval(0.105), p.geo.a);
    CHECK(unit.lo() == direct.lo());
    CHECK(unit.hi() == direct.hi());

    // random cells with a smooth cofactor: hull of A times the exact weight
    // integral contains the reference value of int A(x) asinh(...) dx
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> pos(-0.99, 0.98), frac(0, 1);
    for (int i = 0; i < 40; ++i) {
        const double c = pos(rng), d = c + 0.01;
        const double t = c + (d - c) * frac(rng) * 1.5 - 0.0025;
        const double s1 = std::sin(3 * c), s2 = std::sin(3 * d);
        const Interval Ahull = Interval(1.5) + Interval(std::min(s1, s2), std::max(s1, s2)) + Interval(-1e-9, 1e-9);
        const Interval enc = integrate_singular(Ahull, Interval(c, d), Interval(t), p);
        const double ref = graded_reference(c, d, t, 0.05, +[](double x) { return 1.5 + std::sin(3 * x); });
        CHECK_MESSAGE(enc.contains(ref), "c=" << c << " t=" << t << " " << to_string(enc) << " ref " << ref);
    }
}

TEST_CASE("arcsinh_exact_integral agrees with adaptive quadrature of its integrand") {
    std::ifstream in(std::string(SQGCERT_TEST_DATA_DIR) + "/arcsinh_oracle.txt");
    REQUIRE(in);
    ParameterSet p = quick_ctx(1e-8, 20000);
    const Interval a = p.geo.a;
    std::string line;
    int compared = 0;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        double c, d, t;
        ls >> c >> d >> t;
        const Interval exact = arcsinh_exact_integral(Interval(c), Interval(d), Interval(t), a);
        if (t > c && t < d) {
            // split at the singular point; each half has the singularity at an
            // endpoint, which the adaptive engine cannot enclose, so compare the
            // smooth remainder only through the exact formula above
            continue;
        }
        const Interval tt(t);
        auto f = Integrand::from([&](const auto& x) {
            return asinh(abs(tt + x - Interval(2.0) + Interval(4.0) / a) / abs(tt - x));
        });
        const double gap = std::min(std::fabs(t - c), std::fabs(t - d));
        if (gap < 1e-3) continue;
        const IntegrationResult r = adapt_integrate(f, Interval(c, d), p, Rule::gl2);
        REQUIRE(r.flag == Flag::ok);
        CHECK(overlaps(r.result, exact));
        ++compared;
    }
    MESSAGE("compared " << compared << " triples");
    CHECK(compared >= 20);
}
