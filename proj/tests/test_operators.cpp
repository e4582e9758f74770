#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "sqgcert/operators.hpp"

using namespace sqgcert;

namespace {

ParameterSet quick(long budget = 200) {
    ParameterSet p;
    p.max_elements = budget;
    return p;
}

// uniform 512-cell mesh with the degenerate cell [t, t] spliced in
Mesh point_mesh(double t, int* j) {
    Mesh m = Mesh::uniform(512);
    auto it = std::lower_bound(m.edges.begin(), m.edges.end(), t);
    if (it == m.edges.end() || *it != t) it = m.edges.insert(it, t);
    *j = static_cast<int>(it - m.edges.begin());
    m.edges.insert(it, t);
    if (*j == m.size()) --*j;
    return m;
}

struct OracleRow {
    std::string q;
    double t;
    double value;
};

std::vector<OracleRow> oracle() {
    std::ifstream f(SQGCERT_TEST_DATA_DIR "/operator_oracle.txt");
    REQUIRE(f.good());
    std::vector<OracleRow> rows;
    std::string line;
    while (std::getline(f, line)) {
        if (line.empty() || line[0] == '#') continue;
        std::istringstream is(line);
        OracleRow r;
        is >> r.q >> r.t >> r.value;
        rows.push_back(r);
    }
    return rows;
}

}  // namespace

TEST_CASE("meshes") {
    const Mesh u = Mesh::uniform(512);
    CHECK(u.size() == 512);
    CHECK(u.edges.front() == -1.0);
    CHECK(u.edges.back() == 1.0);
    // the joints are grid points
    const Geometry geo;
    CHECK(u.edges[1] == geo.left_joint());
    CHECK(u.edges[511] == geo.right_joint());

    const Mesh t = Mesh::three_region(512, 8160, 512);
    CHECK(t.size() == 9184);
    CHECK(t.edges[512] == geo.left_joint());
    CHECK(t.edges[512 + 8160] == geo.right_joint());
    for (int k = 0; k < t.size(); ++k) CHECK(t.edges[k] < t.edges[k + 1]);
}

TEST_CASE("point values against the quadrature oracle") {
    const ParameterSet ctx = quick(400);
    for (const OracleRow& r : oracle()) {
        int j = 0;
        const Mesh m = point_mesh(r.t, &j);
        REQUIRE(m.cell(j).is_point());
        const CellResult c = eval_quantity_cell(OperatorQuantity::make(parse_quantity(r.q)), m, j, ctx);
        REQUIRE(c.flag == Flag::ok);
        CHECK_MESSAGE(c.value.contains(r.value), r.q << " at " << r.t << ": " << to_string(c.value) << " vs "
                                                      << r.value);
        // usefully tight, not just correct
        CHECK_MESSAGE(c.value.width() < 0.1 * std::max(1.0, std::fabs(r.value)), r.q << " at " << r.t);
    }
}

TEST_CASE("coarse cells enclose their refinements") {
    const ParameterSet ctx = quick(100);
    const Mesh coarse = Mesh::uniform(64), fine = Mesh::uniform(256);
    for (Quantity q : {Quantity::ItildeMin, Quantity::E3, Quantity::ThetaA3}) {
        for (int j : {0, 20, 63}) {
            const CellResult c = eval_quantity_cell(OperatorQuantity::make(q), coarse, j, ctx);
            REQUIRE(c.flag == Flag::ok);
            for (int k = 4 * j; k < 4 * j + 4; ++k) {
                const CellResult f = eval_quantity_cell(OperatorQuantity::make(q), fine, k, ctx);
                REQUIRE(f.flag == Flag::ok);
                // both contain the exact values on the fine cell
                CHECK_MESSAGE(overlaps(c.value, f.value), quantity_name(q) << " cell " << j << "/" << k);
            }
        }
    }
}

TEST_CASE("symmetric and antisymmetric halves reconstruct the kernel cofactor") {
    const Geometry geo;
    const BsjProfile bsj(geo);
    for (double t : {-0.999, -0.3, 0.5, 0.9993}) {
        const Cofactor S(Cofactor::Kind::Symmetric, Interval(t), bsj.height, geo);
        const Cofactor A(Cofactor::Kind::Antisymmetric, Interval(t), bsj.height, geo);
        for (double x : {-0.9, 0.0, 0.7}) {
            Interval f1, s1, f2, s2;
            S.halves(Interval(x), Region::Middle, f1, s1);
            A.halves(Interval(x), Region::Middle, f2, s2);
            const Interval sym = f1 + s1, anti = f2 - s2;
            // S + A = 2 (first half), S - A = 2 (second half)
            CHECK(overlaps(sym + anti, Interval(2.0) * f1));
            CHECK(overlaps(sym - anti, Interval(2.0) * s1));
            CHECK(f1.hi() <= 0);
            CHECK(s1.hi() <= 0);
        }
    }
}

TEST_CASE("reduced middle-region cofactors match the generic ones") {
    const Geometry geo;
    const BsjProfile bsj(geo);
    for (double t : {-0.9, 0.1, 0.95}) {
        const Cofactor R(Cofactor::Kind::Residual, Interval(t), bsj.height, geo);
        REQUIRE(R.flat_out);
        for (double x : {-0.95, -0.2, 0.1 + 1e-9, 0.6}) {
            Interval f, s;
            R.halves(Interval(x), Region::Middle, f, s);
            const Interval generic_res = R.multiplier(Interval(x), Region::Middle) * bsj.height + f + s;
            const Interval generic_anti = f - s;
            const Interval red_res = R.reduced(Interval(x), false), red_anti = R.reduced(Interval(x), true);
            CHECK(red_res.mid() == doctest::Approx(generic_res.mid()).epsilon(1e-9));
            CHECK(red_anti.mid() == doctest::Approx(generic_anti.mid()).epsilon(1e-9));
            CHECK(overlaps(red_res, generic_res));
            CHECK(overlaps(red_anti, generic_anti));
        }
    }
}

TEST_CASE("tighter tolerances give compatible enclosures") {
    const Mesh mesh = Mesh::uniform(64);
    ParameterSet loose = quick(100), tight = quick(100);
    loose.abs_tol = loose.rel_tol = 1e-3;
    tight.abs_tol = tight.rel_tol = 1e-7;
    for (int j : {5, 32, 63}) {
        const CellResult a = eval_I_tilde(mesh, j, loose);
        const CellResult b = eval_I_tilde(mesh, j, tight);
        REQUIRE(a.flag == Flag::ok);
        REQUIRE(b.flag == Flag::ok);
        CHECK(overlaps(a.value, b.value));
        CHECK(b.pops >= a.pops);
    }
}

TEST_CASE("grid norms and inner products") {
    const Geometry geo;
    GridEnclosures g;
    g.N = 512;
    g.label = "const";
    g.values.assign(512, Interval(2.0));
    g.flags.assign(512, Flag::ok);
    // ||2|| = 2 sqrt(a)
    const Interval n = grid_l2_norm(g, geo);
    CHECK(n.contains(2 * std::sqrt(0.05)));
    CHECK(n.width() < 1e-13);
    // <2, B_sj> = 2 h (a - a beta) = 2 sqrt(a - a beta)
    const Interval ip = grid_inner_Bsj(g, geo);
    CHECK(ip.contains(2 * std::sqrt(0.05 - 0.05 / 256)));

    GridEnclosures zero = g;
    zero.values.assign(512, Interval(-0.5, 0.5));
    CHECK(grid_l2_norm(zero, geo).lo() == 0.0);

    GridEnclosures odd = g;
    odd.N = 64;
    odd.values.resize(64);
    odd.flags.resize(64);
    CHECK_THROWS_AS(grid_inner_Bsj(odd, geo), DomainError);

    g.flags[3] = Flag::failed;
    CHECK_THROWS_AS(grid_l2_norm(g, geo), DomainError);

    GridEnclosures m = odd;
    m.values[10] = Interval(-1.0, 5.0);
    const GridMinimum mn = grid_min(m);
    CHECK(mn.cell == 10);
    CHECK(mn.value.lo() == -1.0);
}

TEST_CASE("report round trip") {
    GridEnclosures g;
    g.N = 3;
    g.label = "E3";
    g.pops = 42;
    g.budget_hits = 1;
    g.values = {Interval(0.1, 0.2), Interval(-1.0 / 3, 1.0 / 7), Interval(5e-300, 1e300)};
    g.flags = {Flag::ok, Flag::failed, Flag::ok};
    const auto path = (std::filesystem::temp_directory_path() / "sqgcert_report_roundtrip.txt").string();
    write_report(path, g);
    const GridEnclosures r = read_report(path);
    CHECK(r.label == "E3");
    CHECK(r.N == 3);
    CHECK(r.pops == 42);
    CHECK(r.budget_hits == 1);
    for (int k = 0; k < 3; ++k) {
        CHECK(r.values[k].lo() == g.values[k].lo());
        CHECK(r.values[k].hi() == g.values[k].hi());
        CHECK(r.flags[k] == g.flags[k]);
    }
}

TEST_CASE("sweeps are identical across thread counts") {
    const ParameterSet ctx = quick(50);
    SweepOptions one{1, {}}, three{3, {}};
    const GridEnclosures a = eval_error_vector(OperatorQuantity::make(Quantity::ThetaA3), 16, ctx, one);
    const GridEnclosures b = eval_error_vector(OperatorQuantity::make(Quantity::ThetaA3), 16, ctx, three);
    for (int k = 0; k < 16; ++k) {
        CHECK(a.values[k].lo() == b.values[k].lo());
        CHECK(a.values[k].hi() == b.values[k].hi());
    }
    CHECK(a.pops == b.pops);
}
