#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "sqgcert/interval.hpp"
#include "sqgcert/operators.hpp"
#include "sqgcert/profile.hpp"

namespace sqgcert {

constexpr int kBasisSize = 24;
constexpr int kBsjIndex = 1;  // u_1 is B_sj

struct ProjectionMatrix {
    int m = 3;
    std::array<std::array<Interval, kBasisSize>, kBasisSize> entries{};
    // decimal strings as read, row major; empty for regenerated matrices
    std::vector<std::string> digits;

    // FNV-1a over the digit strings (space separated, newline per row)
    std::uint64_t checksum() const;
};

class MatrixFormatError : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

// 24 rows of 24 whitespace separated decimals; every entry becomes a one-ulp
// outward enclosure of its decimal value. Rejects a wrong shape and
// asymmetry above 1e-10.
ProjectionMatrix load_matrix(const std::string& path, int m);
std::string matrix_path(const std::string& dir, int m);

Interval legendre(int n, const Interval& x);
// Leg(n, .)' by P'_{n+1} = P'_{n-1} + (2n+1) P_n
Interval legendre_derivative(int n, const Interval& x);

// Support of the block holding basis function i.
Interval basis_support(int i, const Geometry& geo = Geometry());
Interval basis_eval(int i, const Interval& rho_t, const Geometry& geo = Geometry());
double basis_eval_point(int i, double rho_t, const Geometry& geo = Geometry());

struct GershgorinBound {
    Interval lower;  // min over disks of M_ii - sum |M_ij|
    int disk = -1;   // row index (in the full matrix) of the leftmost disk
};

GershgorinBound gershgorin_min(const ProjectionMatrix& M, int drop);

struct DefectResult {
    Interval bound;  // [max of lower row sums, max of upper row sums]
    int worst_cell = -1;
    Interval worst_cell_rho_t;
    std::vector<Interval> row_sums;  // one per outer cell
    bool flagged = false;
    std::string failure;
};

struct DefectMesh {
    int n1 = 512, n2 = 510 * 16, n3 = 512;
};

// sup over outer cells of the order-0 sum over inner cells of |K_S - K_fin|.
DefectResult op_norm_defect(const ProjectionMatrix& M, const DefectMesh& mesh, const Geometry& geo = Geometry(),
                            const SweepOptions& opts = {});

// Floating point Galerkin coefficients (a/2) int int K_S u_i u_j with graded
// composite Gauss-Legendre rules; quadrature_points sets the nodes per panel.
// Nonrigorous, used only to cross-check the shipped data.
ProjectionMatrix regen_projection(int m, int quadrature_points, const Geometry& geo = Geometry());

// Nonrigorous double values of P_m, from r or from u = (1-r)/(1+r).
double kernel_point(int m, double r);
double kernel_point_u(int m, double u);

}  // namespace sqgcert
