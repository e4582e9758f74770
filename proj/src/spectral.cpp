#include "sqgcert/spectral.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <mutex>
#include <sstream>

#include <boost/math/special_functions/ellint_rd.hpp>
#include <boost/math/special_functions/ellint_rf.hpp>

#include "sqgcert/kernels.hpp"

namespace sqgcert {

std::uint64_t ProjectionMatrix::checksum() const {
    std::uint64_t h = 1469598103934665603ULL;
    auto eat = [&h](char c) {
        h ^= static_cast<unsigned char>(c);
        h *= 1099511628211ULL;
    };
    for (std::size_t k = 0; k < digits.size(); ++k) {
        for (char c : digits[k]) eat(c);
        eat((k + 1) % kBasisSize == 0 ? '\n' : ' ');
    }
    return h;
}

std::string matrix_path(const std::string& dir, int m) { return dir + "/T" + std::to_string(m) + "_fin.txt"; }

ProjectionMatrix load_matrix(const std::string& path, int m) {
    std::ifstream in(path);
    if (!in) throw MatrixFormatError("cannot open matrix file " + path);
    ProjectionMatrix M;
    M.m = m;
    std::string line;
    int row = 0;
    while (std::getline(in, line)) {
        std::istringstream ss(line);
        std::vector<std::string> tokens;
        for (std::string tok; ss >> tok;) tokens.push_back(tok);
        if (tokens.empty()) continue;
        if (row >= kBasisSize) throw MatrixFormatError(path + ": more than 24 rows");
        if (static_cast<int>(tokens.size()) != kBasisSize)
            throw MatrixFormatError(path + ": row " + std::to_string(row) + " has " + std::to_string(tokens.size()) +
                                    " entries");
        for (int c = 0; c < kBasisSize; ++c) {
            try {
                M.entries[row][c] = from_decimal(tokens[c]);
            } catch (const std::exception&) {
                throw MatrixFormatError(path + ": bad entry '" + tokens[c] + "'");
            }
            M.digits.push_back(tokens[c]);
        }
        ++row;
    }
    if (row != kBasisSize) throw MatrixFormatError(path + ": expected 24 rows, found " + std::to_string(row));
    for (int i = 0; i < kBasisSize; ++i)
        for (int j = i + 1; j < kBasisSize; ++j)
            if (std::fabs(M.entries[i][j].mid() - M.entries[j][i].mid()) > 1e-10)
                throw MatrixFormatError(path + ": not symmetric at (" + std::to_string(i) + "," + std::to_string(j) +
                                        ")");
    return M;
}

Interval legendre(int n, const Interval& x) {
    if (n == 0) return Interval(1.0);
    Interval prev(1.0), cur = x;
    for (int k = 1; k < n; ++k) {
        const Interval next = (Interval(2.0 * k + 1) * x * cur - Interval(static_cast<double>(k)) * prev) /
                              Interval(static_cast<double>(k + 1));
        prev = cur;
        cur = next;
    }
    return cur;
}

Interval legendre_derivative(int n, const Interval& x) {
    if (n == 0) return Interval(0.0);
    Interval d_prev(0.0), d_cur(1.0);  // P'_0, P'_1
    for (int k = 1; k < n; ++k) {
        const Interval d_next = d_prev + Interval(2.0 * k + 1) * legendre(k, x);
        d_prev = d_cur;
        d_cur = d_next;
    }
    return d_cur;
}

namespace {

// recurrence on the whole interval, intersected with a mean-value form
Interval legendre_tight(int n, const Interval& y) {
    const Interval naive = legendre(n, y);
    if (y.is_point() || n == 0) return naive;
    const Interval c(y.mid());
    const Interval mv = legendre(n, c) + legendre_derivative(n, y) * (y - c);
    const double lo = std::fmax(naive.lo(), mv.lo()), hi = std::fmin(naive.hi(), mv.hi());
    return lo <= hi ? Interval(lo, hi) : naive;
}

struct BlockMap {
    Interval norm;
    Interval support;
};

BlockMap block_of(int i, const Geometry& geo) {
    const int deg = i / 3;
    const Interval k2(2.0 * deg + 1);
    const Interval beta(geo.beta);
    switch (i % 3) {
        case 0: return {sqrt(Interval(2.0) * k2 / (geo.a * beta)), geo.region_bounds(Region::LeftRamp)};
        case 1: return {sqrt(k2 / (geo.a - geo.a * beta)), geo.region_bounds(Region::Middle)};
        default: return {sqrt(Interval(2.0) * k2 / (geo.a * beta)), geo.region_bounds(Region::RightRamp)};
    }
}

// block variable in [-1,1]
Interval block_argument(int i, const Interval& t, const Geometry& geo) {
    const Interval beta(geo.beta);
    Interval y;
    switch (i % 3) {
        case 0: y = Interval(2.0) / beta * (t + Interval(1.0)) - Interval(1.0); break;
        case 1: y = t / (Interval(1.0) - beta); break;
        default: y = Interval(2.0) / beta * (t - Interval(1.0)) + Interval(1.0); break;
    }
    return Interval(std::fmax(y.lo(), -1.0), std::fmin(y.hi(), 1.0));
}

}  // namespace

Interval basis_support(int i, const Geometry& geo) { return block_of(i, geo).support; }

Interval basis_eval(int i, const Interval& rho_t, const Geometry& geo) {
    if (i < 0 || i >= kBasisSize) throw std::out_of_range("basis index");
    const BlockMap b = block_of(i, geo);
    // values are meant almost everywhere; touching the support in one point counts as outside
    if (rho_t.hi() <= b.support.lo() || rho_t.lo() >= b.support.hi()) {
        if (!(rho_t.is_point() && b.support.contains(rho_t))) return Interval(0.0);
    }
    const Interval inside(std::fmax(rho_t.lo(), b.support.lo()), std::fmin(rho_t.hi(), b.support.hi()));
    const Interval v = b.norm * legendre_tight(i / 3, block_argument(i, inside, geo));
    if (b.support.contains(rho_t)) return v;
    return hull(v, Interval(0.0));
}

double basis_eval_point(int i, double rho_t, const Geometry& geo) { return basis_eval(i, Interval(rho_t), geo).mid(); }

GershgorinBound gershgorin_min(const ProjectionMatrix& M, int drop) {
    GershgorinBound out;
    for (int i = 0; i < kBasisSize; ++i) {
        if (i == drop) continue;
        Interval radius(0.0);
        for (int j = 0; j < kBasisSize; ++j)
            if (j != i && j != drop) radius += abs(M.entries[i][j]);
        const Interval left = M.entries[i][i] - radius;
        if (out.disk < 0 || left.lo() < out.lower.lo()) {
            out.lower = left;
            out.disk = i;
        }
    }
    return out;
}

DefectResult op_norm_defect(const ProjectionMatrix& M, const DefectMesh& dm, const Geometry& geo,
                            const SweepOptions& opts) {
    const Mesh mesh = Mesh::three_region(dm.n1, dm.n2, dm.n3, geo);
    const int n = mesh.size();
    const Interval half_a = geo.a / Interval(2.0);
    const Interval two_over_a = Interval(2.0) / geo.a;
    const Interval four_over_a = Interval(4.0) / geo.a;
    const Interval two_pi = Interval(2.0) * constants::pi();
    const Interval pm1(-1.0, 1.0);

    // per inner cell data, shared by every outer cell
    struct Inner {
        Interval x, width, gx, rp, rp3, x_minus_1;
        int block;
        std::array<Interval, 8> u;
    };
    std::vector<Inner> inner(n);
    for (int k = 0; k < n; ++k) {
        Inner& c = inner[k];
        c.x = mesh.cell(k);
        c.width = mesh.cell_width(k);
        c.gx = f_rho_scaled(c.x, geo);
        c.rp = to_rho(c.x, geo);
        c.rp3 = pow_int(c.rp, 3);
        c.x_minus_1 = c.x - Interval(1.0) + two_over_a;
        const double mid = c.x.mid();
        c.block = mid < geo.left_joint() ? 0 : (mid > geo.right_joint() ? 2 : 1);
        for (int d = 0; d < 8; ++d) c.u[d] = basis_eval(3 * d + c.block, c.x, geo);
    }

    DefectResult out;
    out.row_sums.assign(n, Interval(0.0));
    std::vector<std::string> failures(n);
    std::atomic<int> done{0};
    std::mutex progress_lock;

    parallel_for(n, opts.threads, [&](int i) {
        const Interval t = mesh.cell(i);
        const Interval rho = to_rho(t, geo);
        const Interval g_out = f_rho_scaled(t, geo);
        const Interval c1 = Interval(0.5) / (two_pi * sqr(rho));
        const Interval c2 = Interval(0.5) * g_out * sqr(rho) / two_pi;
        const Interval t_shift = t - Interval(2.0) + four_over_a;
        // w_j = (a/2) sum_i T_ij u_i(t)
        std::array<Interval, kBasisSize> w;
        for (int j = 0; j < kBasisSize; ++j) {
            Interval s(0.0);
            for (int b = 0; b < kBasisSize; ++b) {
                const Interval ub = basis_eval(b, t, geo);
                if (ub.is_point() && ub.lo() == 0.0) continue;
                s += M.entries[b][j] * ub;
            }
            w[j] = half_a * s;
        }
        Interval sum(0.0);
        try {
            for (int k = 0; k < n; ++k) {
                const Inner& c = inner[k];
                Interval fin(0.0);
                for (int d = 0; d < 8; ++d) fin += w[3 * d + c.block] * c.u[d];
                const Interval den = c.x + t_shift;
                const Interval u = (c.x - t) / den;
                const Interval q = Interval(4.0) * c.x_minus_1 / den;
                const KernelEnclosure kp = kernel_parts<Interval>(M.m, sqr(u), q);
                const Interval cof = c.gx * c.rp * c1 + c2 / c.rp3;
                const Interval mag = abs(cof);
                const Interval ns = cof * kp.ho_ns - fin + pm1 * (mag * kp.e_ns_radius);
                if (std::abs(i - k) >= 2) {
                    const Interval S = singular_factor(u);
                    const Interval full = ns + cof * kp.ho_s_coeff * S + pm1 * (mag * kp.e_s_coeff * S);
                    sum += c.width * abs(full);
                } else {
                    const Interval A = cof * kp.ho_s_coeff + pm1 * (mag * kp.e_s_coeff);
                    const Interval phi =
                        arcsinh_exact_integral(Interval(c.x.lo()), Interval(c.x.hi()), t, geo.a);
                    sum += c.width * abs(ns) + abs(A) * phi;
                }
            }
        } catch (const DomainError& err) {
            failures[i] = err.what();
            sum = Interval::entire();
        }
        out.row_sums[i] = sum;
        const int dn = ++done;
        if (opts.progress) {
            std::lock_guard<std::mutex> g(progress_lock);
            opts.progress(dn, n);
        }
    });

    double lo = 0.0, hi = 0.0;
    for (int i = 0; i < n; ++i) {
        if (!failures[i].empty() && !out.flagged) {
            out.flagged = true;
            out.failure = failures[i];
        }
        lo = std::fmax(lo, out.row_sums[i].lo());
        if (out.worst_cell < 0 || out.row_sums[i].hi() > hi) {
            hi = out.row_sums[i].hi();
            out.worst_cell = i;
            out.worst_cell_rho_t = mesh.cell(i);
        }
    }
    out.bound = Interval(std::fmin(lo, hi), hi);
    return out;
}

double kernel_point_u(int m, double u) {
    // complete elliptic integrals with complementary modulus |u|, then the
    // recurrence of the Legendre functions Q_{m-1/2} in m
    const double u2 = u * u;
    const double r = (1.0 - u) / (1.0 + u);
    const double one_plus_r = 2.0 / (1.0 + u);
    const double K = boost::math::ellint_rf(0.0, u2, 1.0);
    const double E = K - (1.0 - u2) / 3.0 * boost::math::ellint_rd(0.0, u2, 1.0);
    const double z = (1.0 + r * r) / (2.0 * r);
    double prev = 4.0 * K / one_plus_r;                       // P_0
    double cur = (2.0 * z * prev - 4.0 * one_plus_r * E / r) / 2.0;  // P_1 = (A P_0 - J)/B
    if (m == 0) return prev;
    for (int k = 1; k < m; ++k) {
        const double next = (2.0 * k * z * cur - (k - 0.5) * prev) / (k + 0.5);
        prev = cur;
        cur = next;
    }
    return cur;
}

double kernel_point(int m, double r) { return kernel_point_u(m, (1.0 - r) / (1.0 + r)); }

namespace {

// P_m(rho/rho') from the reference coordinates, so close pairs keep u != 0
double kernel_between(int m, double x, double t, const Geometry& geo) {
    const double a = geo.a.mid();
    return kernel_point_u(m, (x - t) / (x + t - 2.0 + 4.0 / a));
}

struct Node {
    double x, w;
};

// Gauss-Legendre nodes on [-1,1] by Newton iteration on the recurrence
std::vector<Node> gauss_legendre(int p) {
    std::vector<Node> out(p);
    for (int i = 0; i < p; ++i) {
        double x = std::cos(M_PI * (i + 0.75) / (p + 0.5));
        double dp = 1.0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 1; k < p; ++k) {
                const double p2 = ((2.0 * k + 1) * x * p1 - k * p0) / (k + 1);
                p0 = p1;
                p1 = p2;
            }
            dp = p * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::fabs(dx) < 1e-16) break;
        }
        out[i] = {x, 2.0 / ((1.0 - x * x) * dp * dp)};
    }
    return out;
}

// Composite rule on [lo,hi], panels shrinking geometrically toward both ends.
std::vector<Node> graded_rule(double lo, double hi, const std::vector<Node>& gl, int levels, double ratio) {
    std::vector<double> cuts;
    const double mid = 0.5 * (lo + hi), half = 0.5 * (hi - lo);
    cuts.push_back(lo);
    for (int l = levels; l >= 1; --l) cuts.push_back(lo + half * std::pow(ratio, l));
    cuts.push_back(mid);
    for (int l = 1; l <= levels; ++l) cuts.push_back(hi - half * std::pow(ratio, l));
    cuts.push_back(hi);
    std::vector<Node> out;
    for (std::size_t c = 0; c + 1 < cuts.size(); ++c) {
        const double a = cuts[c], b = cuts[c + 1], hw = 0.5 * (b - a), cm = 0.5 * (a + b);
        for (const Node& n : gl) out.push_back({cm + hw * n.x, hw * n.w});
    }
    return out;
}

}  // namespace

ProjectionMatrix regen_projection(int m, int quadrature_points, const Geometry& geo) {
    const std::vector<Node> gl = gauss_legendre(quadrature_points);
    const int levels = 18;
    const double ratio = 0.35;
    const double a = geo.a.mid();
    const double two_pi = 2.0 * M_PI;
    const double blocks[4] = {-1.0, geo.left_joint(), geo.right_joint(), 1.0};
    auto g = [&](double x) { return f_rho_scaled(Interval(x), geo).mid(); };
    auto rho_of = [&](double x) { return 1.0 + 0.5 * a * (x - 1.0); };

    std::array<std::array<double, kBasisSize>, kBasisSize> T{};
    for (int bo = 0; bo < 3; ++bo) {
        for (const Node& outer : graded_rule(blocks[bo], blocks[bo + 1], gl, levels, ratio)) {
            const double t = outer.x, rho = rho_of(t), gt = g(t);
            std::array<double, kBasisSize> ut{};
            for (int d = 0; d < 8; ++d) ut[3 * d + bo] = basis_eval_point(3 * d + bo, t, geo);
            std::array<double, kBasisSize> v{};  // int K_S(t,x) u_j(x) dx
            for (int bi = 0; bi < 3; ++bi) {
                std::vector<double> parts{blocks[bi], blocks[bi + 1]};
                if (t > blocks[bi] && t < blocks[bi + 1]) parts.insert(parts.begin() + 1, t);
                for (std::size_t p = 0; p + 1 < parts.size(); ++p) {
                    for (const Node& in : graded_rule(parts[p], parts[p + 1], gl, levels, ratio)) {
                        const double x = in.x, rp = rho_of(x);
                        if (x == t) continue;  // panel below double resolution
                        const double P = kernel_between(m, x, t, geo);
                        const double ks =
                            0.5 * (g(x) * P * rp / (two_pi * rho * rho) + gt * P * rho * rho / (two_pi * rp * rp * rp));
                        for (int d = 0; d < 8; ++d)
                            v[3 * d + bi] += in.w * ks * basis_eval_point(3 * d + bi, x, geo);
                    }
                }
            }
            for (int d = 0; d < 8; ++d) {
                const int i = 3 * d + bo;
                for (int j = 0; j < kBasisSize; ++j) T[i][j] += 0.5 * a * outer.w * ut[i] * v[j];
            }
        }
    }
    ProjectionMatrix M;
    M.m = m;
    for (int i = 0; i < kBasisSize; ++i)
        for (int j = 0; j < kBasisSize; ++j) M.entries[i][j] = Interval(T[i][j]);
    return M;
}

}  // namespace sqgcert
