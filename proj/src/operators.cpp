#include "sqgcert/operators.hpp"

#include <algorithm>
#include <atomic>
#include <cinttypes>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "sqgcert/kernels.hpp"

namespace sqgcert {

Mesh Mesh::uniform(int N) {
    if (N <= 0) throw std::invalid_argument("mesh needs at least one cell");
    Mesh mesh;
    mesh.edges.resize(N + 1);
    for (int k = 0; k <= N; ++k) mesh.edges[k] = static_cast<double>(2 * k - N) / N;
    return mesh;
}

Mesh Mesh::three_region(int n1, int n2, int n3, const Geometry& geo) {
    if (n1 <= 0 || n2 <= 0 || n3 <= 0) throw std::invalid_argument("mesh needs at least one cell per region");
    const double l = geo.left_joint(), r = geo.right_joint();
    Mesh mesh;
    auto fill = [&](double from, double to, int n) {
        for (int k = 0; k < n; ++k) mesh.edges.push_back(from + (to - from) * k / n);
    };
    fill(-1.0, l, n1);
    fill(l, r, n2);
    fill(r, 1.0, n3);
    mesh.edges.push_back(1.0);
    return mesh;
}

bool GridEnclosures::any_flagged() const {
    return std::any_of(flags.begin(), flags.end(), [](Flag f) { return f == Flag::failed; });
}

const char* quantity_name(Quantity q) {
    switch (q) {
        case Quantity::ItildeMin: return "Itilde";
        case Quantity::E3: return "E3";
        case Quantity::ThetaA3: return "ThetaA3";
        case Quantity::E6: return "E6";
    }
    return "?";
}

Quantity parse_quantity(const std::string& s) {
    for (Quantity q : {Quantity::ItildeMin, Quantity::E3, Quantity::ThetaA3, Quantity::E6})
        if (s == quantity_name(q)) return q;
    throw std::invalid_argument("unknown quantity " + s);
}

OperatorQuantity OperatorQuantity::make(Quantity q) {
    switch (q) {
        case Quantity::E3: return {q, from_decimal("0.3482")};
        case Quantity::E6: return {q, from_decimal("0.573")};
        default: return {q, Interval(0.0)};
    }
}

int OperatorQuantity::m() const {
    switch (which) {
        case Quantity::ItildeMin: return 1;
        case Quantity::E6: return 6;
        default: return 3;
    }
}

Cofactor::Cofactor(Kind k, const Interval& rho_t, const Interval& scale_, const Geometry& geo)
    : kind(k),
      t(rho_t),
      rho(to_rho(rho_t, geo)),
      g_out(f_rho_scaled(rho_t, geo)),
      scale(scale_),
      geo(geo),
      flat_out(geo.region_bounds(Region::Middle).contains(rho_t)) {}

namespace {

// u = (rho'-rho)/(rho'+rho) and q = 4 rho'/(rho+rho') written in the
// reference variables, which avoids cancelling 1 - a/2 + ... terms.
template <class T>
void u_and_q(const T& x, const Interval& t, const Interval& four_over_a, const Interval& two_over_a, T& u, T& q) {
    const T den = x + t - Interval(2.0) + four_over_a;
    u = (x - t) / den;
    q = Interval(4.0) * (x - Interval(1.0) + two_over_a) / den;
}

struct Piece {
    double lo, hi;
    Region region;
    bool singular;
};

std::vector<Piece> pieces_of(const Interval& domain, const Mesh& mesh, int j, const Geometry& geo) {
    std::vector<double> cuts{domain.lo(), domain.hi()};
    for (double c : {geo.left_joint(), geo.right_joint()})
        if (c > domain.lo() && c < domain.hi()) cuts.push_back(c);
    const int k0 = std::max(0, j - 1), k1 = std::min(mesh.size() - 1, j + 1);
    for (int k = k0; k <= k1 + 1; ++k) {
        const double c = mesh.edges[k];
        if (c > domain.lo() && c < domain.hi()) cuts.push_back(c);
    }
    std::sort(cuts.begin(), cuts.end());
    cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
    const double s_lo = mesh.edges[k0], s_hi = mesh.edges[k1 + 1];
    std::vector<Piece> out;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
        const double lo = cuts[i], hi = cuts[i + 1];
        const double mid = 0.5 * lo + 0.5 * hi;
        Region region = Region::Middle;
        if (hi <= geo.left_joint()) region = Region::LeftRamp;
        else if (lo >= geo.right_joint()) region = Region::RightRamp;
        out.push_back({lo, hi, region, mid > s_lo && mid < s_hi});
    }
    return out;
}

void absorb(CellResult& acc, const IntegrationResult& r) {
    acc.value += r.result;
    acc.pops += r.pops;
    if (r.budget_exhausted) ++acc.budget_hits;
    if (r.flag == Flag::failed && acc.flag == Flag::ok) {
        acc.flag = Flag::failed;
        acc.failure = r.failure;
    }
}

}  // namespace

CellResult integrate_against_kernel(const Cofactor& cof, int m, const Interval& domain, const Mesh& mesh, int j,
                                    const ParameterSet& ctx) {
    const Interval t = mesh.cell(j);
    const Interval two_over_a = Interval(2.0) / ctx.geo.a;
    const Interval four_over_a = Interval(4.0) / ctx.geo.a;
    CellResult out;
    out.value = Interval(0.0);

    for (const Piece& p : pieces_of(domain, mesh, j, ctx.geo)) {
        const Region region = p.region;
        ParameterSet local = ctx;
        local.region_rhop = region;
        local.rho_normalized = t;
        const Interval seg(p.lo, p.hi);
        auto terms = [&](const auto& x) {
            using T = std::decay_t<decltype(x)>;
            T u, q;
            u_and_q(x, t, four_over_a, two_over_a, u, q);
            return std::make_pair(kernel_terms<T>(cof, m, x, region, sqr(u), q), u);
        };
        try {
            if (!p.singular) {
                auto full = [&](const auto& x) {
                    const auto [k, u] = terms(x);
                    return k.value(singular_factor(u));
                };
                absorb(out, adapt_integrate(Integrand::from(full), seg, local));
                continue;
            }
            auto smooth = [&](const auto& x) {
                return terms(x).first.smooth();
            };
            absorb(out, adapt_integrate(Integrand::from(smooth), seg, local));
            // cofactor of asinh(1/|u|), bounded over the whole box
            out.value += integrate_singular(terms(seg).first.singular(), seg, t, local);
        } catch (const DomainError& err) {
            out.flag = Flag::failed;
            out.failure = err.what();
            out.value = Interval::entire();
            return out;
        }
    }
    return out;
}

CellResult eval_I_tilde(const Mesh& mesh, int j, const ParameterSet& ctx) {
    const Cofactor cof(Cofactor::Kind::Multiplier, mesh.cell(j), Interval(1.0), ctx.geo);
    return integrate_against_kernel(cof, 1, Interval(-1.0, 1.0), mesh, j, ctx);
}

CellResult eval_quantity_cell(const OperatorQuantity& q, const Mesh& mesh, int j, const ParameterSet& ctx) {
    if (q.which == Quantity::ItildeMin) return eval_I_tilde(mesh, j, ctx);
    const BsjProfile bsj(ctx.geo);
    const Interval t = mesh.cell(j);
    if (q.which == Quantity::ThetaA3) {
        const Cofactor cof(Cofactor::Kind::Antisymmetric, t, bsj.height, ctx.geo);
        return integrate_against_kernel(cof, q.m(), bsj.support, mesh, j, ctx);
    }
    const Interval b = bsj.on_cell(t);
    if (b.is_point() && b.lo() == 0.0) {
        // outside the support only T_S B_sj is left
        const Cofactor cof(Cofactor::Kind::Symmetric, t, bsj.height, ctx.geo);
        return integrate_against_kernel(cof, q.m(), bsj.support, mesh, j, ctx);
    }
    if (bsj.support.contains(t)) {
        // I tilde B_sj and T_S B_sj in one integrand, so their cancellation survives
        const Cofactor cof(Cofactor::Kind::Residual, t, bsj.height, ctx.geo);
        CellResult out = integrate_against_kernel(cof, q.m(), Interval(-1.0, 1.0), mesh, j, ctx);
        if (out.flag == Flag::ok) out.value = out.value - q.lambda_ref * b;
        return out;
    }
    // cell straddling the edge of the support (misaligned grid)
    const Cofactor cof(Cofactor::Kind::Symmetric, t, bsj.height, ctx.geo);
    CellResult out = integrate_against_kernel(cof, q.m(), bsj.support, mesh, j, ctx);
    if (out.flag == Flag::failed) return out;
    const CellResult it = eval_I_tilde(mesh, j, ctx);
    out.pops += it.pops;
    out.budget_hits += it.budget_hits;
    if (it.flag == Flag::failed) {
        out.flag = Flag::failed;
        out.failure = it.failure;
        out.value = Interval::entire();
        return out;
    }
    out.value = (it.value - q.lambda_ref) * b + out.value;
    return out;
}

void parallel_for(int n, int threads, const std::function<void(int)>& fn) {
    threads = std::max(1, std::min(threads, n));
    if (threads == 1) {
        for (int k = 0; k < n; ++k) fn(k);
        return;
    }
    std::atomic<int> next{0};
    std::exception_ptr first_error;
    std::mutex error_lock;
    std::vector<std::thread> pool;
    for (int w = 0; w < threads; ++w) {
        pool.emplace_back([&] {
            for (int k = next++; k < n; k = next++) {
                try {
                    fn(k);
                } catch (...) {
                    std::lock_guard<std::mutex> g(error_lock);
                    if (!first_error) first_error = std::current_exception();
                }
            }
        });
    }
    for (auto& th : pool) th.join();
    if (first_error) std::rethrow_exception(first_error);
}

GridEnclosures eval_error_vector(const OperatorQuantity& q, int N, const ParameterSet& ctx, const SweepOptions& opts) {
    const Mesh mesh = Mesh::uniform(N);
    std::vector<CellResult> cells(N);
    std::atomic<int> done{0};
    std::mutex progress_lock;
    parallel_for(N, opts.threads, [&](int j) {
        cells[j] = eval_quantity_cell(q, mesh, j, ctx);
        const int d = ++done;
        if (opts.progress) {
            std::lock_guard<std::mutex> g(progress_lock);
            opts.progress(d, N);
        }
    });
    GridEnclosures g;
    g.N = N;
    g.label = quantity_name(q.which);
    for (const CellResult& c : cells) {
        g.values.push_back(c.value);
        g.flags.push_back(c.flag);
        g.pops += c.pops;
        g.budget_hits += c.budget_hits;
    }
    return g;
}

Interval grid_l2_norm(const GridEnclosures& g, const Geometry& geo) {
    if (g.any_flagged()) throw DomainError(g.label + ": flagged cells cannot enter a norm");
    Interval sum(0.0);
    for (const Interval& v : g.values) sum += sqr(v);
    return sqrt(geo.a / Interval(static_cast<double>(g.N)) * sum);
}

Interval grid_inner_Bsj(const GridEnclosures& g, const Geometry& geo) {
    if (g.any_flagged()) throw DomainError(g.label + ": flagged cells cannot enter an inner product");
    const double cells_per_ramp = geo.beta * g.N / 2.0;
    if (cells_per_ramp != static_cast<double>(static_cast<long>(cells_per_ramp)) || cells_per_ramp < 1.0)
        throw DomainError("grid of " + std::to_string(g.N) + " cells is not aligned with the B_sj support");
    const Mesh mesh = Mesh::uniform(g.N);
    const BsjProfile bsj(geo);
    Interval sum(0.0);
    for (int j = 0; j < g.N; ++j) sum += g.values[j] * bsj.on_cell(mesh.cell(j));
    return abs(geo.a / Interval(static_cast<double>(g.N)) * sum);
}

GridMinimum grid_min(const GridEnclosures& g) {
    GridMinimum out;
    for (int j = 0; j < static_cast<int>(g.values.size()); ++j) {
        if (out.cell < 0 || g.values[j].lo() < out.value.lo()) {
            out.value = g.values[j];
            out.cell = j;
        }
    }
    return out;
}

void write_report(const std::string& path, const GridEnclosures& g) {
    std::FILE* f = std::fopen(path.c_str(), "w");
    if (!f) throw std::runtime_error("cannot write " + path);
    std::fprintf(f, "# %s N=%d pops=%ld budget_hits=%d\n", g.label.c_str(), g.N, g.pops, g.budget_hits);
    for (int j = 0; j < g.N; ++j)
        std::fprintf(f, "%d %.17g %.17g %s\n", j, g.values[j].lo(), g.values[j].hi(),
                     g.flags[j] == Flag::ok ? "ok" : "failed");
    std::fclose(f);
}

GridEnclosures read_report(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read " + path);
    GridEnclosures g;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        if (line[0] == '#') {
            std::istringstream h(line.substr(1));
            std::string tok;
            h >> g.label;
            while (h >> tok) {
                if (tok.rfind("pops=", 0) == 0) g.pops = std::stol(tok.substr(5));
                if (tok.rfind("budget_hits=", 0) == 0) g.budget_hits = std::stoi(tok.substr(12));
            }
            continue;
        }
        std::istringstream row(line);
        int j;
        std::string lo, hi, flag;
        if (!(row >> j >> lo >> hi >> flag) || j != static_cast<int>(g.values.size()))
            throw std::runtime_error(path + ": malformed line: " + line);
        g.values.push_back(Interval(std::strtod(lo.c_str(), nullptr), std::strtod(hi.c_str(), nullptr)));
        if (flag != "ok" && flag != "failed") throw std::runtime_error(path + ": bad flag " + flag);
        g.flags.push_back(flag == "ok" ? Flag::ok : Flag::failed);
    }
    g.N = static_cast<int>(g.values.size());
    return g;
}

}  // namespace sqgcert
